"""Prime-field arithmetic and classical secret sharing.

Randomness is always passed in explicitly so callers can enumerate every
branch of a scheme.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence, Union

if TYPE_CHECKING:
    from .access import AccessStructure, ShareLabel


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def require_prime(q: int) -> None:
    if not is_prime(q):
        raise ValueError(f"q={q} is not prime")


@dataclass(frozen=True)
class FieldElement:
    value: int
    modulus: int

    def __post_init__(self) -> None:
        require_prime(self.modulus)
        object.__setattr__(self, "value", self.value % self.modulus)

    def _coerce(self, other: "FieldElement | int") -> int:
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise ValueError(f"modulus mismatch: {self.modulus} vs {other.modulus}")
            return other.value
        return int(other)

    def __add__(self, other: "FieldElement | int") -> "FieldElement":
        return FieldElement(self.value + self._coerce(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other: "FieldElement | int") -> "FieldElement":
        return FieldElement(self.value - self._coerce(other), self.modulus)

    def __rsub__(self, other: int) -> "FieldElement":
        return FieldElement(int(other) - self.value, self.modulus)

    def __neg__(self) -> "FieldElement":
        return FieldElement(-self.value, self.modulus)

    def __mul__(self, other: "FieldElement | int") -> "FieldElement":
        return FieldElement(self.value * self._coerce(other), self.modulus)

    __rmul__ = __mul__

    def inv(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.modulus}")
        return FieldElement(pow(self.value, -1, self.modulus), self.modulus)

    def __truediv__(self, other: "FieldElement | int") -> "FieldElement":
        return self * FieldElement(self._coerce(other), self.modulus).inv()

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.modulus})"


Digit = Union[FieldElement, int]
ClassicalShareVector = dict["ShareLabel", tuple[FieldElement, ...]]


def _elements(values: Iterable[Digit], q: int) -> tuple[FieldElement, ...]:
    out = []
    for v in values:
        if isinstance(v, FieldElement) and v.modulus != q:
            raise ValueError(f"modulus mismatch: {v.modulus} vs {q}")
        out.append(FieldElement(int(v), q))
    return tuple(out)


def shamir_share(secret: Sequence[Digit], k: int, n: int, q: int,
                 randomness: Sequence[Digit]) -> list[tuple[FieldElement, ...]]:
    """K-of-N threshold sharing, one polynomial per secret digit.

    Digit ``d`` uses f_d(x) = secret[d] + sum_i randomness[d*(k-1) + i-1] x^i;
    share j (1-based) is (f_0(j), f_1(j), ...).
    """
    require_prime(q)
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= K <= N, got K={k}, N={n}")
    if q <= n:
        raise ValueError(f"need q > N for distinct evaluation points, got q={q}, N={n}")
    secret = _elements(secret, q)
    coeffs = _elements(randomness, q)
    if len(coeffs) != len(secret) * (k - 1):
        raise ValueError(f"expected {len(secret) * (k - 1)} random coefficients, got {len(coeffs)}")
    shares = []
    for x in range(1, n + 1):
        share = []
        for d, s in enumerate(secret):
            acc = s
            for i, c in enumerate(coeffs[d * (k - 1):(d + 1) * (k - 1)], start=1):
                acc = acc + c * pow(x, i, q)
            share.append(acc)
        shares.append(tuple(share))
    return shares


def shamir_reconstruct(shares: Sequence[tuple[int, Sequence[Digit]]], k: int, q: int
                       ) -> tuple[FieldElement, ...]:
    """Lagrange interpolation at 0 from (point, share digits) pairs."""
    require_prime(q)
    points = [int(x) % q for x, _ in shares]
    if len(set(points)) != len(points):
        raise ValueError("duplicate evaluation points")
    if len(shares) < k:
        raise ValueError(f"need at least {k} shares, got {len(shares)}")
    used = list(shares)[:k]
    xs = [FieldElement(int(x), q) for x, _ in used]
    width = len(used[0][1])
    secret = [FieldElement(0, q) for _ in range(width)]
    for j, (_, ys) in enumerate(used):
        basis = FieldElement(1, q)
        for m, xm in enumerate(xs):
            if m != j:
                basis = basis * xm / (xm - xs[j])
        for d, y in enumerate(_elements(ys, q)):
            secret[d] = secret[d] + basis * y
    return tuple(secret)


def replication_share(secret: Sequence[Digit], structure: "AccessStructure",
                      randomness: Sequence[Sequence[Digit]], q: int) -> ClassicalShareVector:
    """Share ``secret`` by additive pieces keyed to the maximal forbidden sets.

    With maximal forbidden sets F_1..F_m, pieces r_1..r_{m-1} come from
    ``randomness`` and r_m = secret - sum(r_j).  Every share outside F_j
    receives r_j; a share's digits are its pieces concatenated in j order.
    """
    require_prime(q)
    forbidden = structure.maximal_forbidden_sets()
    if not structure.minimal:
        raise ValueError("access structure has no minimal qualified sets")
    secret = _elements(secret, q)
    if len(randomness) != len(forbidden) - 1:
        raise ValueError(f"expected {len(forbidden) - 1} random pieces, got {len(randomness)}")
    pieces = [_elements(r, q) for r in randomness]
    if any(len(p) != len(secret) for p in pieces):
        raise ValueError("random pieces must have the secret's length")
    last = tuple(s - sum((int(p[d]) for p in pieces), 0) for d, s in enumerate(secret))
    pieces.append(last)
    out: ClassicalShareVector = {}
    for share in structure.shares:
        digits: tuple[FieldElement, ...] = ()
        for f, piece in zip(forbidden, pieces):
            if share not in f:
                digits += piece
        out[share] = digits
    return out


def replication_holdings(structure: "AccessStructure") -> dict["ShareLabel", list[int]]:
    """Which piece indices each share holds, in the order they are stored."""
    forbidden = structure.maximal_forbidden_sets()
    return {s: [j for j, f in enumerate(forbidden) if s not in f] for s in structure.shares}


def replication_reconstruct(held: Mapping["ShareLabel", Sequence[Digit]],
                            structure: "AccessStructure", q: int) -> tuple[FieldElement, ...]:
    """Recover the secret from the digits of a qualified set of shares."""
    if not structure.is_qualified(held.keys()):
        raise ValueError("share set is not qualified")
    holdings = replication_holdings(structure)
    m = len(structure.maximal_forbidden_sets())
    pieces: dict[int, tuple[FieldElement, ...]] = {}
    for share, digits in held.items():
        digits = _elements(digits, q)
        idx = holdings[share]
        width = len(digits) // len(idx)
        for pos, j in enumerate(idx):
            pieces.setdefault(j, digits[pos * width:(pos + 1) * width])
    if len(pieces) != m:
        raise ValueError("qualified set is missing a piece; structure is inconsistent")
    width = len(pieces[0])
    return tuple(FieldElement(sum(int(pieces[j][d]) for j in range(m)), q) for d in range(width))


def additive_2of3(secret: Sequence[Digit], randomness: Sequence[Digit], q: int = 3
                  ) -> tuple[tuple[FieldElement, ...], ...]:
    """Shares (g), (s + g), (s + 2g) of a digit pair: any two determine s."""
    if q != 3:
        raise ValueError("additive_2of3 is defined over F_3")
    s = _elements(secret, q)
    g = _elements(randomness, q)
    if len(s) != 2 or len(g) != 2:
        raise ValueError("secret and randomness must be pairs")
    first = tuple(g)
    return (first,) + tuple(tuple(s[d] + g[d] * c for d in range(2)) for c in (1, 2))
