"""Unit-tagged distance profiles and the Minkowski (Lp) metric family.

A profile is an ordered mapping from reference-point names to non-negative
distances, tagged with the unit the distances are expressed in.  All profile
comparisons align entries by reference name, never by position, so two
profiles listing the same references in different orders are equivalent.

Distances are computed in double precision; rounding happens only at display
time.  The per-reference absolute differences are put into a canonical
(descending) order before reduction, which makes every metric bit-exact under
permutation of the input entries.
"""

from __future__ import annotations

import math
import unicodedata
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Mapping, Sequence

from .errors import (
    InvalidValue,
    ReferenceMismatch,
    UnitMismatch,
    UnsupportedConversion,
)

__all__ = [
    "Unit",
    "ConversionRates",
    "DEFAULT_RATES",
    "Profile",
    "MetricSpec",
    "fold_name",
    "metric_distance",
    "convert",
    "magnitude",
]


class Unit(Enum):
    """Measurement unit of a distance profile."""

    JORNADAS = "jornadas"  # one day of travel, the native unit of the targets
    HOURS = "hours"
    KILOMETERS = "kilometers"

    @property
    def short(self) -> str:
        return "km" if self is Unit.KILOMETERS else self.value

    @classmethod
    def parse(cls, token: str) -> "Unit":
        key = token.strip().lower()
        for unit in cls:
            if key in (unit.value, unit.short):
                return unit
        raise InvalidValue(f"unknown unit {token!r}")


def fold_name(name: str) -> str:
    """Comparison key for reference and candidate names.

    Trims, collapses internal whitespace runs, case-folds and strips
    diacritics, so that e.g. ' venta  de cardenas' matches 'Venta de
    Cárdenas'.
    """
    collapsed = " ".join(name.split())
    decomposed = unicodedata.normalize("NFKD", collapsed.casefold())
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


@dataclass(frozen=True)
class ConversionRates:
    """Travel-speed constants used to leave the jornada unit."""

    km_per_jornada: float = 31.0
    hours_per_jornada: float = 10.0

    def __post_init__(self) -> None:
        for label, rate in (("km_per_jornada", self.km_per_jornada),
                            ("hours_per_jornada", self.hours_per_jornada)):
            if not math.isfinite(rate) or rate <= 0.0:
                raise InvalidValue(f"{label} must be finite and > 0, got {rate!r}")


DEFAULT_RATES = ConversionRates()


@dataclass(frozen=True)
class Profile:
    """An ordered, reference-keyed vector of non-negative distances."""

    names: tuple[str, ...]
    values: tuple[float, ...]
    unit: Unit

    def __post_init__(self) -> None:
        object.__setattr__(self, "names", tuple(str(n) for n in self.names))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if not isinstance(self.unit, Unit):
            raise InvalidValue(f"profile unit must be a Unit, got {self.unit!r}")
        if not self.names:
            raise InvalidValue("a profile needs at least one entry")
        if len(self.names) != len(self.values):
            raise InvalidValue("a profile needs exactly one value per reference name")
        for name, value in zip(self.names, self.values):
            if not name.strip():
                raise InvalidValue("blank reference name in profile")
            if not math.isfinite(value) or value < 0.0:
                raise InvalidValue(
                    f"distance for {name!r} must be finite and >= 0, got {value!r}"
                )
        keys = {fold_name(n) for n in self.names}
        if len(keys) != len(self.names):
            raise InvalidValue("reference names must be unique after normalization")

    @classmethod
    def from_mapping(cls, entries: Mapping[str, float], unit: Unit) -> "Profile":
        return cls(tuple(entries), tuple(entries.values()), unit)

    def items(self) -> Iterator[tuple[str, float]]:
        return zip(self.names, self.values)

    def as_dict(self) -> dict[str, float]:
        return dict(self.items())

    def select(self, names: Sequence[str]) -> "Profile":
        """Profile restricted to ``names`` (matched by folded key), in that order."""
        by_key = {fold_name(n): v for n, v in self.items()}
        values = []
        for name in names:
            key = fold_name(name)
            if key not in by_key:
                raise ReferenceMismatch(f"profile has no reference named {name!r}")
            values.append(by_key[key])
        return Profile(tuple(names), tuple(values), self.unit)

    def zeroed(self) -> "Profile":
        return Profile(self.names, (0.0,) * len(self.values), self.unit)


@dataclass(frozen=True)
class MetricSpec:
    """Selects a member of the Lp family.

    ``order=None`` selects the maximum (L-infinity) metric; an integer
    ``order=n >= 1`` selects Ln.  L-infinity is an exact variant, not an
    approximation by a large n.
    """

    order: int | None = None

    def __post_init__(self) -> None:
        if self.order is not None:
            order = int(self.order)
            if order != self.order or order < 1:
                raise InvalidValue(f"metric order must be an integer >= 1, got {self.order!r}")
            object.__setattr__(self, "order", order)

    @classmethod
    def infinity(cls) -> "MetricSpec":
        return cls(None)

    @classmethod
    def ln(cls, n: int) -> "MetricSpec":
        return cls(n)

    @classmethod
    def parse(cls, token: str) -> "MetricSpec":
        """Accepts 'linf' (or 'l∞') and 'l<n>' for integer n >= 1."""
        key = token.strip().lower()
        if key in ("linf", "l∞", "linfinity"):
            return cls.infinity()
        if key.startswith("l") and key[1:].isdigit() and int(key[1:]) >= 1:
            return cls.ln(int(key[1:]))
        raise InvalidValue(f"unknown metric {token!r}")

    @property
    def is_infinity(self) -> bool:
        return self.order is None

    @property
    def token(self) -> str:
        return "linf" if self.order is None else f"l{self.order}"

    @property
    def label(self) -> str:
        return "L_inf" if self.order is None else f"L_{self.order}"

    @property
    def column(self) -> str:
        """Header label for a distance column under this metric."""
        return "d_inf" if self.order is None else f"d_{self.order}"


def _aligned_differences(x: Profile, y: Profile) -> list[float]:
    """Per-reference absolute differences, canonically ordered (descending)."""
    theirs = {fold_name(n): v for n, v in y.items()}
    mine = {fold_name(n): v for n, v in x.items()}
    if set(mine) != set(theirs):
        odd = sorted(set(mine) ^ set(theirs))
        raise ReferenceMismatch(
            "profiles do not cover the same references (unmatched: " + ", ".join(odd) + ")"
        )
    diffs = [abs(mine[key] - theirs[key]) for key in mine]
    diffs.sort(reverse=True)
    return diffs


def metric_distance(spec: MetricSpec, x: Profile, y: Profile) -> float:
    """Lp (or L-infinity) distance between two profiles.

    Entries are aligned by folded reference name, so entry order never
    matters.  Ln for n >= 3 is evaluated as ``M * (sum((d/M)**n))**(1/n)``
    with M the largest difference, which cannot overflow for large n.
    """
    if x.unit is not y.unit:
        raise UnitMismatch(f"cannot compare a {x.unit.value} profile with a {y.unit.value} one")
    diffs = _aligned_differences(x, y)
    if spec.is_infinity:
        return diffs[0]
    n = spec.order
    if n == 1:
        return math.fsum(diffs)
    if n == 2:
        return math.hypot(*diffs)
    peak = diffs[0]
    if peak == 0.0:
        return 0.0
    return peak * math.fsum((d / peak) ** n for d in diffs) ** (1.0 / n)


def convert(p: Profile, target: Unit, rates: ConversionRates = DEFAULT_RATES) -> Profile:
    """Convert a jornada profile entrywise to kilometers or hours.

    Only conversion out of jornadas is supported: kilometers and hours are
    measurements of different quantities and are never converted into each
    other.  ``target=Unit.JORNADAS`` returns ``p`` unchanged.
    """
    if p.unit is not Unit.JORNADAS:
        raise UnsupportedConversion(
            f"profiles can only be converted out of jornadas, not from {p.unit.value}"
        )
    if target is Unit.JORNADAS:
        return p
    rate = rates.km_per_jornada if target is Unit.KILOMETERS else rates.hours_per_jornada
    return Profile(p.names, tuple(v * rate for v in p.values), target)


def magnitude(spec: MetricSpec, p: Profile) -> float:
    """Distance from ``p`` to the all-zero profile over the same references."""
    return metric_distance(spec, p, p.zeroed())
