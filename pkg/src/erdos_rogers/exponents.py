"""Exact exponent arithmetic for the K_t-free overlay construction.

Every quantity here is a :class:`fractions.Fraction`; floats only appear in
:class:`ConstructionParams` (where ``gamma`` is a probability fed to an RNG)
and in the rounded comparison table.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import InvalidParams, OutOfRange

__all__ = [
    "Regularity",
    "PairClass",
    "ExponentSet",
    "LogConstants",
    "ConstraintCheck",
    "ConstructionParams",
    "classify_pair",
    "exponents",
    "exponent_table",
    "round_half_away",
    "validate_log_constants",
    "check_intro_system",
    "valid_pairs",
    "fraction_str",
    "parse_fraction",
]


class Regularity(enum.Enum):
    REGULAR = "regular"
    EXCEPTIONAL = "exceptional"


@dataclass(frozen=True)
class PairClass:
    s: int
    t: int
    regularity: Regularity

    @property
    def regular(self) -> bool:
        return self.regularity is Regularity.REGULAR


def _is_regular(s: int, t: int) -> bool:
    return (s >= 11 and s + 3 <= t <= 2 * s - 4) or (s, t) in {(10, 14), (10, 15)}


def classify_pair(s: int, t: int) -> PairClass:
    """Validate ``(s, t)`` and decide whether it is regular or exceptional.

    Raises OutOfRange unless ``s >= 3`` and ``s + 2 <= t <= 2s - 1``.
    """
    if s < 3 or t < s + 2 or t > 2 * s - 1:
        raise OutOfRange(f"(s, t) = ({s}, {t}) needs s >= 3 and s+2 <= t <= 2s-1")
    reg = Regularity.REGULAR if _is_regular(s, t) else Regularity.EXCEPTIONAL
    return PairClass(s, t, reg)


def valid_pairs(s_max: int, s_min: int = 3) -> Iterator[PairClass]:
    """All valid pairs with ``s_min <= s <= s_max``, ordered by (s, t)."""
    for s in range(s_min, s_max + 1):
        for t in range(s + 2, 2 * s):
            yield classify_pair(s, t)


@dataclass(frozen=True)
class ExponentSet:
    alpha: Fraction
    delta: Fraction
    eta: Fraction
    pair: PairClass

    @property
    def s(self) -> int:
        return self.pair.s

    @property
    def t(self) -> int:
        return self.pair.t

    @property
    def edge_exponent(self) -> Fraction:
        """delta + 2*alpha, the exponent of the expected number of G_1 edges."""
        return self.delta + 2 * self.alpha

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "t": self.t,
            "regular": self.pair.regular,
            "alpha": fraction_str(self.alpha),
            "delta": fraction_str(self.delta),
            "eta": fraction_str(self.eta),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def alpha_regular(s: int, t: int) -> Fraction:
    num = (s - 2) * (t - s) * (t + s - 1) + 2 * t - 2 * s
    den = (2 * s - 3) * (t - s) * (t + s - 1) - 2 * s + 4
    return Fraction(num, den)


def alpha_exceptional(s: int, t: int) -> Fraction:
    num = (s - 2) * (t - s) * (s - 1) + s - 1
    den = (2 * s - 3) * (t - s) * (s - 1) + 2 * s - t
    return Fraction(num, den)


def delta_closed_form(pair: PairClass) -> Fraction:
    """delta from its own closed form, independent of ``s - (2s-1) alpha``."""
    s, t = pair.s, pair.t
    if pair.regular:
        num = (2 * s - 2) * (t - s) * (t + s - 1) + 2 * s * s - 4 * s * t + 2 * t + 2 * s
        den = (2 * s - 3) * (t - s) * (t + s - 1) - 2 * s + 4
    else:
        num = (2 * s - 2) * (t - s) * (s - 1) - s * t + 3 * s - 1
        den = (2 * s - 3) * (t - s) * (s - 1) + 2 * s - t
    return Fraction(num, den)


def eta_closed_form(pair: PairClass) -> Fraction:
    s, t = pair.s, pair.t
    if pair.regular:
        num = -2 * s * s + 4 * s * t - 2 * s - 6 * t + 8
        den = (2 * s - 3) * (t - s) * (t + s - 1) - 2 * s + 4
    else:
        num = s * t - s - 2 * t + 3
        den = (2 * s - 3) * (t - s) * (s - 1) + 2 * s - t
    return Fraction(num, den)


def exponents(pair: PairClass | tuple[int, int]) -> ExponentSet:
    """alpha, delta and eta for a validated pair (a bare (s, t) tuple is classified first)."""
    if not isinstance(pair, PairClass):
        pair = classify_pair(*pair)
    s = pair.s
    alpha = alpha_regular(s, pair.t) if pair.regular else alpha_exceptional(s, pair.t)
    delta = s - (2 * s - 1) * alpha
    eta = 2 * (1 - alpha) - delta
    return ExponentSet(alpha, delta, eta, pair)


def round_half_away(x: Fraction, places: int = 3) -> Decimal:
    """Round an exact rational to ``places`` decimals, ties away from zero."""
    scale = 10**places
    scaled = abs(x) * scale
    k = math.floor(scaled + Fraction(1, 2))
    if x < 0:
        k = -k
    return Decimal(k).scaleb(-places)


def exponent_table(pairs: Iterable[tuple[int, int]], places: int = 3) -> list[tuple[int, int, Decimal]]:
    return [(s, t, round_half_away(exponents((s, t)).alpha, places)) for s, t in pairs]


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(text: str | int | Fraction) -> Fraction:
    return Fraction(text)


# -- logarithmic constants ---------------------------------------------------


@dataclass(frozen=True)
class LogConstants:
    c1: Fraction
    c2: Fraction
    c3: Fraction

    def __post_init__(self):
        for name in ("c1", "c2", "c3"):
            value = Fraction(getattr(self, name))
            if value <= 0:
                raise InvalidParams(f"{name} must be positive, got {value}")
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class ConstraintCheck:
    name: str
    passed: bool
    slack: Fraction
    description: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "slack": fraction_str(self.slack),
            "description": self.description,
        }


def validate_log_constants(pair: PairClass, c: LogConstants) -> list[ConstraintCheck]:
    """Check the three explicit constraints on (c1, c2, c3).

    Slack is ``lhs - rhs``; a strict constraint passes when slack > 0, the
    ``c2 >= 11 t^4`` one when slack >= 0.
    """
    s, t = pair.s, pair.t
    bound = 6 * s * t + 9 * t + 1
    first = (s - 1) * c.c3 - s * c.c2 - c.c1 - bound
    second = c.c2 - 11 * t**4
    third = c.c2 + c.c3 - 3
    return [
        ConstraintCheck("union_bound", first > 0, first, f"(s-1)c3 - s c2 - c1 > {bound}"),
        ConstraintCheck("c2_large", second >= 0, second, f"c2 >= 11 t^4 = {11 * t**4}"),
        ConstraintCheck("c2_plus_c3", third > 0, third, "c2 + c3 > 3"),
    ]


# -- the planning system for (3, 5) ------------------------------------------


def check_intro_system(delta, beta, alpha) -> list[ConstraintCheck]:
    """Evaluate the three planning inequalities for (s, t) = (3, 5).

    enough_triangles: delta + 3(alpha + beta - 1) >= alpha
    parts_triangle_free: alpha >= beta
    k5_below_edges: delta + 2 beta >= 5 + 6 delta + 14 (beta - 1)

    Each check's slack is lhs - rhs; zero slack means equality.
    """
    delta, beta, alpha = Fraction(delta), Fraction(beta), Fraction(alpha)
    rows = [
        ("enough_triangles", delta + 3 * (alpha + beta - 1) - alpha),
        ("parts_triangle_free", alpha - beta),
        ("k5_below_edges", delta + 2 * beta - (5 + 6 * delta + 14 * (beta - 1))),
    ]
    return [ConstraintCheck(name, slack >= 0, slack) for name, slack in rows]


# -- construction parameters -------------------------------------------------


class Derivation(enum.Enum):
    DIRECT = "direct"
    FROM_ASYMPTOTICS = "from_asymptotics"


@dataclass(frozen=True)
class ConstructionParams:
    n: int
    m: int
    gamma: float
    a: int
    s: int
    t: int
    derivation: Derivation = Derivation.DIRECT
    constants: LogConstants | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParams(f"n must be >= 1, got {self.n}")
        if self.m < 0:
            raise InvalidParams(f"m must be >= 0, got {self.m}")
        if not 0 <= self.gamma <= 1:
            raise InvalidParams(f"gamma must lie in [0, 1], got {self.gamma}")
        if not 1 <= self.a <= self.n:
            raise InvalidParams(f"a must satisfy 1 <= a <= n, got a={self.a}, n={self.n}")
        if self.s < 2 or self.t <= self.s:
            raise InvalidParams(f"need 2 <= s < t, got s={self.s}, t={self.t}")

    @classmethod
    def direct(cls, n: int, m: int, gamma: float, a: int, s: int, t: int) -> "ConstructionParams":
        return cls(n, m, float(gamma), a, s, t)

    @classmethod
    def from_asymptotics(cls, n: int, s: int, t: int, constants: LogConstants) -> "ConstructionParams":
        """m = n^delta (ln n)^-c1, gamma = n^(alpha-1) (ln n)^-c2, a = n^alpha (ln n)^c3.

        m and a are rounded to the nearest integer (halves up); a is clipped to [1, n].
        """
        if n < 3:
            raise InvalidParams("from_asymptotics needs n >= 3 so that ln n > 1")
        e = exponents((s, t))
        log_n = math.log(n)
        c1, c2, c3 = (float(x) for x in (constants.c1, constants.c2, constants.c3))
        m = math.floor(n ** float(e.delta) * log_n**-c1 + 0.5)
        gamma = n ** float(e.alpha - 1) * log_n**-c2
        # a can exceed n by far for large c3, so clip in log space first
        log_a = float(e.alpha) * log_n + c3 * math.log(log_n)
        a = n if log_a >= log_n else min(max(math.floor(math.exp(log_a) + 0.5), 1), n)
        return cls(n, m, min(gamma, 1.0), a, s, t, Derivation.FROM_ASYMPTOTICS, constants)

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "m": self.m,
            "gamma": self.gamma,
            "a": self.a,
            "s": self.s,
            "t": self.t,
            "derivation": self.derivation.value,
        }
        if self.constants is not None:
            out["constants"] = {k: fraction_str(getattr(self.constants, k)) for k in ("c1", "c2", "c3")}
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "ConstructionParams":
        constants = None
        if "constants" in d:
            constants = LogConstants(*(Fraction(d["constants"][k]) for k in ("c1", "c2", "c3")))
        return cls(
            int(d["n"]), int(d["m"]), float(d["gamma"]), int(d["a"]), int(d["s"]), int(d["t"]),
            Derivation(d.get("derivation", "direct")), constants,
        )
