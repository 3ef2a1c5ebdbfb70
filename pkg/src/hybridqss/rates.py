"""Share rates and the linear rate regions they are checked against."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .access import AccessStructure, equivalent, twin_parameters, T3_STRUCTURE, T4_STRUCTURES


@dataclass(frozen=True)
class RateTuple:
    classical: tuple[Fraction, ...]
    quantum: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "classical", tuple(Fraction(r) for r in self.classical))
        object.__setattr__(self, "quantum", tuple(Fraction(r) for r in self.quantum))
        if any(r < 0 for r in self.values):
            raise ValueError("rates must be nonnegative")

    @property
    def values(self) -> tuple[Fraction, ...]:
        return self.classical + self.quantum

    def names(self) -> list[str]:
        return coordinate_names(len(self.classical), len(self.quantum))

    def __str__(self) -> str:
        return " ".join(f"{n}={_fmt(v)}" for n, v in zip(self.names(), self.values))


def coordinate_names(n1: int, n2: int) -> list[str]:
    return [f"RY{i}" for i in range(1, n1 + 1)] + [f"RQ{j}" for j in range(1, n2 + 1)]


def _fmt(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


@dataclass(frozen=True)
class Inequality:
    """sum(coeffs[i] * R_i) >= constant."""

    coeffs: tuple[Fraction, ...]
    constant: Fraction

    def value(self, point: Sequence[Fraction]) -> Fraction:
        return sum((c * x for c, x in zip(self.coeffs, point)), Fraction(0))

    def render(self, names: Sequence[str]) -> str:
        terms = []
        for c, name in zip(self.coeffs, names):
            if c == 0:
                continue
            terms.append(name if c == 1 else f"{_fmt(c)}*{name}")
        return " + ".join(terms) + f" >= {_fmt(self.constant)}"


@dataclass(frozen=True)
class RateRegion:
    n1: int
    n2: int
    inequalities: tuple[Inequality, ...]

    @property
    def names(self) -> list[str]:
        return coordinate_names(self.n1, self.n2)

    def _point(self, rates: RateTuple | Sequence) -> tuple[Fraction, ...]:
        values = rates.values if isinstance(rates, RateTuple) else tuple(Fraction(r) for r in rates)
        if len(values) != self.n1 + self.n2:
            raise ValueError(f"expected {self.n1 + self.n2} rate coordinates, got {len(values)}")
        return values

    def tight(self, rates: RateTuple | Sequence) -> list[Inequality]:
        point = self._point(rates)
        return [ineq for ineq in self.inequalities if ineq.value(point) == ineq.constant]

    def contains(self, rates: RateTuple | Sequence) -> bool:
        point = self._point(rates)
        return all(ineq.value(point) >= ineq.constant for ineq in self.inequalities)

    def classify(self, rates: RateTuple | Sequence) -> str:
        if not self.contains(rates):
            return "out"
        return "in (boundary)" if self.tight(rates) else "in (interior)"

    def render(self) -> list[str]:
        return [ineq.render(self.names) for ineq in self.inequalities]


def in_region(region: RateRegion, rates: RateTuple | Sequence) -> bool:
    return region.contains(rates)


def _unit(n: int, i: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(int(k == i)) for k in range(n))


def _base_bounds(n1: int, n2: int) -> list[Inequality]:
    n = n1 + n2
    return ([Inequality(_unit(n, i), Fraction(2)) for i in range(n1)]
            + [Inequality(_unit(n, n1 + j), Fraction(1)) for j in range(n2)])


def twin_region(k1: int, n1: int, k2: int, n2: int) -> RateRegion:
    """Classical shares need 2 digits, quantum shares 1 qudit, per secret qudit."""
    if not 1 <= k1 <= n1:
        raise ValueError(f"need 1 <= K1 <= N1, got K1={k1}, N1={n1}")
    if not n2 / 2 < k2 <= n2:
        raise ValueError(f"need N2/2 < K2 <= N2 for feasibility, got K2={k2}, N2={n2}")
    return RateRegion(n1, n2, tuple(_base_bounds(n1, n2)))


def _with_quantum_sum(n1: int) -> RateRegion:
    n = n1 + 2
    quantum_sum = Inequality(tuple(Fraction(int(i >= n1)) for i in range(n)), Fraction(3))
    return RateRegion(n1, 2, tuple(_base_bounds(n1, 2)) + (quantum_sum,))


def t3_region() -> RateRegion:
    return _with_quantum_sum(1)


def t4_region() -> RateRegion:
    return _with_quantum_sum(2)


def region_of(family: str, **params: int) -> RateRegion:
    """Region for ``twin`` (k1, n1, k2, n2), ``otp``, ``t3`` or ``t4``."""
    if family == "twin":
        return twin_region(params["k1"], params["n1"], params["k2"], params["n2"])
    if family == "otp":
        return twin_region(1, 1, 1, 1)
    if family == "t3":
        return t3_region()
    if family == "t4":
        return t4_region()
    raise ValueError(f"no rate region known for family {family!r}")


def region_for_structure(structure: AccessStructure) -> RateRegion | None:
    """The known optimal region for a structure, up to share relabeling."""
    twin = twin_parameters(structure)
    if twin is not None and structure.n1 >= 1 and twin[1] > structure.n2 / 2:
        return twin_region(twin[0], structure.n1, twin[1], structure.n2)
    if equivalent(structure, T3_STRUCTURE):
        return t3_region()
    if any(equivalent(structure, s) for s in T4_STRUCTURES.values()):
        return t4_region()
    return None
