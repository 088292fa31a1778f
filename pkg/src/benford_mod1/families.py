"""Named factor families and their text syntax.

A family resolves to a DensitySequence of log_B-mantissa laws. Accepted
forms (``name`` plus an optional parameter string):

    uniform
    box            m=4 (or i=4)       phi_m repeated
    box11                             phi_{11^m}, m = 1, 2, ...
    box            11^m               phi_{b^m} for any integer b
    boxmix         offset=3,mod=5     phi_{offset + (m mod mod)}
    raised-cosine  center=0.25,depth=1
    atoms          0:0.5,0.5:0.5      location:weight pairs
    atoms          {0,1/2}            equal weights
    pareto         alpha=2            modified Pareto, base-dependent

Sequence strings combine both with a colon, optionally followed by the
word ``repeated`` (fixed families always repeat), e.g. ``box:i=2 repeated``,
``box:11^m``, ``atoms:{0,1/2} repeated``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from . import density_core, distributions
from .density_core import CircleDensity, DensitySequence
from .errors import ConfigError

_POWER = re.compile(r"^\s*(\d+)\s*\^\s*m\s*$")


@dataclass(frozen=True)
class Family:
    name: str
    params: str
    sequence: DensitySequence
    atom_set: tuple = ()

    def first(self) -> CircleDensity:
        return self.sequence[1]


def parse_number(text):
    """Float, fraction ``p/q``, ``sqrt2-1``-style or ``e`` literal."""
    t = text.strip().lower().replace(" ", "")
    if t in ("e", "euler"):
        return math.e
    m = re.fullmatch(r"sqrt\(?(\d+(?:\.\d*)?)\)?([+-]\d+(?:\.\d*)?)?", t)
    if m:
        return math.sqrt(float(m.group(1))) + (float(m.group(2)) if m.group(2) else 0.0)
    try:
        if "/" in t:
            return Fraction(t)
        return float(t)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot parse number {text!r}") from exc


def parse_keyvalues(text):
    out = {}
    for part in filter(None, (p.strip() for p in (text or "").split(","))):
        if "=" not in part:
            raise ConfigError(f"expected key=value, got {part!r}")
        k, v = part.split("=", 1)
        out[k.strip().lower()] = v.strip()
    return out


def parse_atoms(text):
    """``{a,b,...}`` (equal weights) or ``loc:weight,...`` into (loc, weight) pairs."""
    t = (text or "").strip()
    if not t:
        raise ConfigError("atoms family needs a parameter string")
    if t.startswith("{") and t.endswith("}"):
        locs = [parse_number(p) for p in t[1:-1].split(",") if p.strip()]
        if not locs:
            raise ConfigError("empty atom set")
        if all(isinstance(a, Fraction) or float(a).is_integer() for a in locs):
            locs = [Fraction(a) if not isinstance(a, Fraction) else a for a in locs]
            return [(a, Fraction(1, len(locs))) for a in locs]
        return [(float(a), 1.0 / len(locs)) for a in locs]
    pairs = []
    for part in t.split(","):
        if ":" not in part:
            raise ConfigError(f"expected location:weight, got {part!r}")
        loc, w = part.split(":", 1)
        pairs.append((parse_number(loc), parse_number(w)))
    return pairs


def _box_m(value):
    m = parse_number(value)
    if isinstance(m, Fraction) and m.denominator == 1:
        m = int(m)
    elif float(m).is_integer():
        m = int(m)
    if m < 1:
        raise ConfigError("box parameter must be >= 1")
    return m


def make_family(name, params="", base=10) -> Family:
    """Resolve a family name and parameter string for digits in ``base``."""
    key = name.strip().lower().replace("_", "-")
    params = (params or "").strip()
    try:
        if key == "uniform":
            seq = DensitySequence.repeated(density_core.uniform())
        elif key == "box11":
            seq = distributions.box_power_sequence(11)
        elif key == "box" and _POWER.match(params):
            seq = distributions.box_power_sequence(int(_POWER.match(params).group(1)))
        elif key == "box":
            kv = parse_keyvalues(params) if "=" in params else {"m": params or "4"}
            m = _box_m(kv.get("m", kv.get("i", "4")))
            seq = DensitySequence.repeated(distributions.box_density(m))
        elif key == "boxmix":
            kv = parse_keyvalues(params)
            seq = distributions.box_cycle_sequence(int(kv.get("offset", 3)), int(kv.get("mod", 5)))
        elif key in ("raised-cosine", "cosine"):
            kv = parse_keyvalues(params)
            seq = DensitySequence.repeated(density_core.raised_cosine(
                float(parse_number(kv.get("center", "0"))), float(parse_number(kv.get("depth", "1")))))
        elif key == "atoms":
            pairs = parse_atoms(params)
            d = CircleDensity.atomic(pairs, label=f"atoms({params})")
            return Family(key, params, DensitySequence.repeated(d), tuple(a for a, _ in d.atoms))
        elif key == "pareto":
            kv = parse_keyvalues(params)
            alpha = float(parse_number(kv.get("alpha", "2")))
            seq = DensitySequence.repeated(distributions.pareto_log_mantissa_density(alpha, base))
        else:
            raise ConfigError(f"unknown family {name!r}")
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad parameters for family {name!r}: {exc}") from exc
    return Family(key, params, seq)


def parse_sequence(text, base=10) -> Family:
    """Parse ``name[:params][ repeated]``."""
    t = text.strip()
    if t.lower().endswith(" repeated"):
        t = t[: -len(" repeated")].strip()
    name, _, params = t.partition(":")
    return make_family(name, params, base)
