from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from tsif.constants import Aggregator, Feature

_PREFIX = {Feature.one: "nb_", Feature.width: "sum_width_"}

# Short names used when rendering invariants.
SHORT_NAMES = {
    "nb_peak": "P",
    "nb_valley": "V",
}


@dataclass(frozen=True)
class RegexSpec:
    name: str
    pattern: str
    b_trim: int
    a_trim: int
    omega: int
    trims_chosen: bool = False

    def __post_init__(self):
        if self.b_trim < 0 or self.a_trim < 0:
            raise ValueError(f"Trim constants of {self.name} must be non-negative.")
        if self.b_trim + self.a_trim > self.omega + 1:
            raise ValueError(f"Trim constants of {self.name} exceed the shortest occurrence ({self.omega} letters).")


@dataclass(frozen=True)
class UpperBoundFormula:
    """``m * floor((n - c) / d) + k``, clipped at zero when guarded, and 0 below ``n_min``."""

    c: int
    d: int
    m: int
    k: int
    guarded: bool = True
    n_min: int = 1

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"Upper-bound period must be positive, got {self.d}.")

    def value(self, n: int) -> int:
        if n < 1:
            raise ValueError(f"Series length must be at least 1, got {n}.")
        if n < self.n_min:
            return 0
        raw = self.m * ((n - self.c) // self.d) + self.k
        return max(0, raw) if self.guarded else raw

    def affine_on_class(self, residue: int, modulus: int) -> tuple[Fraction, Fraction]:
        """Slope and intercept of the formula on ``n = residue (mod modulus)``, where ``d`` divides the modulus.

        Valid for the unclipped branch only; callers restrict themselves to ``n`` where the raw value is non-negative.
        """
        if modulus % self.d:
            raise ValueError(f"Modulus {modulus} is not a multiple of the period {self.d}.")
        offset = (residue - self.c) % self.d
        # (n - c) // d = (n - c - offset) / d on the class.
        slope = Fraction(self.m, self.d)
        intercept = Fraction(-self.m * (self.c + offset), self.d) + self.k
        return slope, intercept

    def to_json(self) -> dict:
        return {"c": self.c, "d": self.d, "m": self.m, "k": self.k, "guarded": self.guarded, "n_min": self.n_min}

    @classmethod
    def from_json(cls, data: dict) -> "UpperBoundFormula":
        return cls(data["c"], data["d"], data["m"], data["k"], data.get("guarded", True), data.get("n_min", 1))

    def describe(self) -> str:
        core = "n" if self.c == 0 else f"n - {self.c}" if self.c > 0 else f"n + {-self.c}"
        term = core if self.d == 1 else f"floor(({core}) / {self.d})"
        if self.m != 1:
            term = f"{self.m} * {term}"
        if self.k:
            term += f" + {self.k}" if self.k > 0 else f" - {-self.k}"
        if self.guarded:
            term = f"max(0, {term})"
        return term if self.n_min <= 1 else f"{term} for n >= {self.n_min}"


@dataclass(frozen=True)
class ConstraintSpec:
    regex: RegexSpec
    feature: Feature
    aggregator: Aggregator = Aggregator.sum
    bound: Optional[UpperBoundFormula] = None

    @property
    def name(self) -> str:
        return f"{_PREFIX[self.feature]}{self.regex.name}"

    @property
    def short_name(self) -> str:
        return SHORT_NAMES.get(self.name, self.name)

    def __repr__(self) -> str:
        return f"ConstraintSpec({self.name})"


def split_name(name: str) -> tuple[Feature, str]:
    """Feature and pattern name of a constraint name such as ``sum_width_zigzag``."""
    for feature, prefix in _PREFIX.items():
        if name.startswith(prefix):
            return feature, name[len(prefix):]
    raise ValueError(f"Unknown constraint family in {name!r}; expected nb_* or sum_width_*.")


def constraint(name: str) -> ConstraintSpec:
    """Constraint of the default catalog by name, e.g. ``sum_width_peak``; any pattern of the catalog may be used."""
    from tsif.catalog.loader import default_catalog

    return default_catalog().spec(name)
