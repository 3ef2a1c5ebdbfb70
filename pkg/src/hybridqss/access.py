"""Access structures over classical (Y) and quantum (Q) shares.

A structure is stored by its minimal qualified sets; qualified, forbidden
and maximal forbidden families are derived by power-set enumeration, which
is the intended algorithm at the sizes used here (a dozen shares at most).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator


class Kind(Enum):
    CLASSICAL = "Y"
    QUANTUM = "Q"


@dataclass(frozen=True)
class ShareLabel:
    kind: Kind
    index: int

    def __post_init__(self) -> None:
        if self.index < 1:
            raise ValueError(f"share index must be positive, got {self.index}")

    @property
    def sort_key(self) -> tuple[int, int]:
        return (0 if self.kind is Kind.CLASSICAL else 1, self.index)

    def __lt__(self, other: "ShareLabel") -> bool:
        return self.sort_key < other.sort_key

    @property
    def is_quantum(self) -> bool:
        return self.kind is Kind.QUANTUM

    def __str__(self) -> str:
        return f"{self.kind.value}{self.index}"

    @classmethod
    def parse(cls, token: str) -> "ShareLabel":
        m = re.fullmatch(r"([YQ])([1-9][0-9]*)", token)
        if not m:
            raise ValueError(f"bad share token {token!r}")
        return cls(Kind(m.group(1)), int(m.group(2)))


def Y(i: int) -> ShareLabel:
    return ShareLabel(Kind.CLASSICAL, i)


def Q(j: int) -> ShareLabel:
    return ShareLabel(Kind.QUANTUM, j)


ShareSet = frozenset[ShareLabel]


def sorted_shares(shares: Iterable[ShareLabel]) -> tuple[ShareLabel, ...]:
    return tuple(sorted(shares, key=lambda s: s.sort_key))


def subset_key(shares: Iterable[ShareLabel]) -> tuple:
    """Size-then-lexicographic ordering key for share sets."""
    ordered = sorted_shares(shares)
    return (len(ordered), tuple(s.sort_key for s in ordered))


def format_set(shares: Iterable[ShareLabel]) -> str:
    return "{" + ",".join(str(s) for s in sorted_shares(shares)) + "}"


@dataclass(frozen=True)
class AccessStructure:
    n1: int
    n2: int
    minimal: frozenset[ShareSet]

    def __post_init__(self) -> None:
        minimal = frozenset(frozenset(d) for d in self.minimal)
        object.__setattr__(self, "minimal", minimal)
        if self.n1 < 0 or self.n2 < 0 or self.n1 + self.n2 == 0:
            raise ValueError(f"invalid share counts N1={self.n1}, N2={self.n2}")
        if not minimal:
            raise ValueError("access structure needs at least one minimal qualified set")
        universe = set(self.shares)
        for d in minimal:
            if not d:
                raise ValueError("the empty set cannot be qualified")
            unknown = d - universe
            if unknown:
                raise ValueError(f"unknown shares {format_set(unknown)} for N1={self.n1}, N2={self.n2}")
        for a, b in itertools.permutations(minimal, 2):
            if a < b:
                raise ValueError(f"{format_set(a)} is contained in {format_set(b)}; not an antichain")
        used = set().union(*minimal)
        unused = universe - used
        if unused:
            raise ValueError(f"redundant shares {format_set(unused)} appear in no minimal set")

    @classmethod
    def of(cls, n1: int, n2: int, *sets: Iterable[str]) -> "AccessStructure":
        """Build from token lists, e.g. ``of(1, 2, ["Y1", "Q1"], ["Q1", "Q2"])``."""
        return cls(n1, n2, frozenset(frozenset(ShareLabel.parse(t) for t in s) for s in sets))

    @cached_property
    def shares(self) -> tuple[ShareLabel, ...]:
        return tuple(Y(i) for i in range(1, self.n1 + 1)) + tuple(Q(j) for j in range(1, self.n2 + 1))

    @property
    def classical(self) -> tuple[ShareLabel, ...]:
        return self.shares[:self.n1]

    @property
    def quantum(self) -> tuple[ShareLabel, ...]:
        return self.shares[self.n1:]

    def minimal_sorted(self) -> list[ShareSet]:
        return sorted(self.minimal, key=subset_key)

    def _check(self, subset: Iterable[ShareLabel]) -> ShareSet:
        subset = frozenset(subset)
        unknown = subset - set(self.shares)
        if unknown:
            raise ValueError(f"unknown shares {format_set(unknown)}")
        return subset

    def is_qualified(self, subset: Iterable[ShareLabel]) -> bool:
        subset = self._check(subset)
        return any(d <= subset for d in self.minimal)

    def all_subsets(self) -> Iterator[ShareSet]:
        """Every subset of the shares, size-then-lexicographic."""
        for r in range(len(self.shares) + 1):
            for combo in itertools.combinations(self.shares, r):
                yield frozenset(combo)

    def qualified_sets(self) -> list[ShareSet]:
        return [s for s in self.all_subsets() if self.is_qualified(s)]

    def forbidden_sets(self) -> list[ShareSet]:
        return [s for s in self.all_subsets() if not self.is_qualified(s)]

    @cached_property
    def _maximal_forbidden(self) -> tuple[ShareSet, ...]:
        everything = frozenset(self.shares)
        out = [f for f in self.forbidden_sets()
               if all(self.is_qualified(f | {s}) for s in everything - f)]
        # larger sets first; the piece order of replication sharing follows this
        out.sort(key=lambda f: (-len(f), subset_key(f)[1]))
        return tuple(out)

    def maximal_forbidden_sets(self) -> list[ShareSet]:
        return list(self._maximal_forbidden)

    def infeasibility_witness(self) -> tuple[ShareSet, ShareSet] | None:
        """A pair of minimal sets with no common quantum share, if any.

        Testing minimal sets suffices: qualified sets contain minimal ones,
        so their intersections can only be larger.
        """
        ordered = self.minimal_sorted()
        pairs = itertools.chain(itertools.combinations(ordered, 2), ((d, d) for d in ordered))
        for a, b in pairs:
            if not any(s.is_quantum for s in a & b):
                return a, b
        return None

    def check_feasible(self) -> bool:
        return self.infeasibility_witness() is None

    def quantum_projection(self) -> frozenset[ShareSet]:
        """Minimal elements of {D & quantum shares : D qualified}."""
        projected = {frozenset(s for s in d if s.is_quantum) for d in self.minimal}
        return frozenset(p for p in projected if not any(o < p for o in projected))

    def to_text(self) -> str:
        lines = [f"N1={self.n1} N2={self.n2}"]
        for d in self.minimal_sorted():
            lines.append("minimal: " + " ".join(str(s) for s in sorted_shares(d)))
        return "\n".join(lines) + "\n"

    def __str__(self) -> str:
        return "{" + ", ".join(format_set(d) for d in self.minimal_sorted()) + "}"


class AccessParseError(ValueError):
    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


_HEADER = re.compile(r"N1=(\d+)\s+N2=(\d+)")


def parse_structure(text: str) -> AccessStructure:
    """Parse the line-oriented access-structure format.

    The first meaningful line is ``N1=<int> N2=<int>``; each further line is
    ``minimal: <tok> ...`` with tokens ``Y<i>``/``Q<j>``.  Blank lines and
    ``#`` comments are skipped.
    """
    header: tuple[int, int] | None = None
    sets: list[ShareSet] = []
    last = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        last = lineno
        if header is None:
            m = _HEADER.fullmatch(line)
            if not m:
                raise AccessParseError(lineno, f"expected 'N1=<int> N2=<int>', got {line!r}")
            header = (int(m.group(1)), int(m.group(2)))
            continue
        if not line.startswith("minimal:"):
            raise AccessParseError(lineno, f"expected 'minimal: ...', got {line!r}")
        tokens = line[len("minimal:"):].split()
        if not tokens:
            raise AccessParseError(lineno, "empty minimal set")
        labels = []
        for tok in tokens:
            try:
                label = ShareLabel.parse(tok)
            except ValueError as exc:
                raise AccessParseError(lineno, str(exc)) from None
            limit = header[0] if label.kind is Kind.CLASSICAL else header[1]
            if label.index > limit:
                raise AccessParseError(lineno, f"share {tok} exceeds declared count {limit}")
            labels.append(label)
        if len(set(labels)) != len(labels):
            raise AccessParseError(lineno, "repeated share in minimal set")
        sets.append(frozenset(labels))
    if header is None:
        raise AccessParseError(max(last, 1), "missing 'N1=<int> N2=<int>' header")
    if len(set(sets)) != len(sets):
        raise AccessParseError(last, "duplicate minimal set")
    try:
        return AccessStructure(header[0], header[1], frozenset(sets))
    except ValueError as exc:
        raise AccessParseError(last, str(exc)) from None


def twin_structure(k1: int, n1: int, k2: int, n2: int) -> AccessStructure:
    """At least K1 of N1 classical shares together with at least K2 of N2 quantum shares."""
    if not (n1 == 0 and k1 == 0) and not 1 <= k1 <= n1:
        raise ValueError(f"need 1 <= K1 <= N1, got K1={k1}, N1={n1}")
    if not 1 <= k2 <= n2:
        raise ValueError(f"need 1 <= K2 <= N2, got K2={k2}, N2={n2}")
    ys = [Y(i) for i in range(1, n1 + 1)]
    qs = [Q(j) for j in range(1, n2 + 1)]
    minimal = frozenset(frozenset(a + b) for a in itertools.combinations(ys, k1)
                        for b in itertools.combinations(qs, k2))
    return AccessStructure(n1, n2, minimal)


def twin_parameters(structure: AccessStructure) -> tuple[int, int] | None:
    """(K1, K2) when the structure is twin threshold, else None."""
    k1_range = range(1, structure.n1 + 1) if structure.n1 else [0]
    for k1 in k1_range:
        for k2 in range(1, structure.n2 + 1):
            if twin_structure(k1, structure.n1, k2, structure.n2).minimal == structure.minimal:
                return k1, k2
    return None


def _relabelings(structure: AccessStructure) -> Iterator[frozenset[ShareSet]]:
    for py in itertools.permutations(range(1, structure.n1 + 1)):
        for pq in itertools.permutations(range(1, structure.n2 + 1)):
            def move(s: ShareLabel) -> ShareLabel:
                perm = py if s.kind is Kind.CLASSICAL else pq
                return ShareLabel(s.kind, perm[s.index - 1])
            yield frozenset(frozenset(move(s) for s in d) for d in structure.minimal)


def _family_key(family: Iterable[ShareSet]) -> tuple:
    return tuple(sorted(subset_key(d) for d in family))


def canonical(structure: AccessStructure) -> AccessStructure:
    """Representative under index permutations within each kind."""
    best = min(_relabelings(structure), key=_family_key)
    return AccessStructure(structure.n1, structure.n2, best)


def equivalent(a: AccessStructure, b: AccessStructure) -> bool:
    return (a.n1, a.n2) == (b.n1, b.n2) and canonical(a).minimal == canonical(b).minimal


@dataclass(frozen=True)
class EnumeratedStructure:
    structure: AccessStructure
    feasible: bool
    twin_threshold: bool


def _antichains(subsets: list[ShareSet]) -> Iterator[list[ShareSet]]:
    chosen: list[ShareSet] = []

    def walk(i: int) -> Iterator[list[ShareSet]]:
        if i == len(subsets):
            yield list(chosen)
            return
        s = subsets[i]
        if all(not (s <= c or c <= s) for c in chosen):
            chosen.append(s)
            yield from walk(i + 1)
            chosen.pop()
        yield from walk(i + 1)

    yield from walk(0)


def enumerate_all_structures(n1: int, n2: int, canonical_only: bool = True
                             ) -> list[EnumeratedStructure]:
    """All antichains on N1 + N2 shares in which every share is used.

    With ``canonical_only`` one representative per relabeling class is kept.
    """
    shares = [Y(i) for i in range(1, n1 + 1)] + [Q(j) for j in range(1, n2 + 1)]
    universe = frozenset(shares)
    subsets = [frozenset(c) for r in range(1, len(shares) + 1)
               for c in itertools.combinations(shares, r)]
    seen: set[frozenset[ShareSet]] = set()
    out = []
    for family in _antichains(subsets):
        if not family or frozenset().union(*family) != universe:
            continue
        structure = AccessStructure(n1, n2, frozenset(family))
        if canonical_only:
            structure = canonical(structure)
            if structure.minimal in seen:
                continue
            seen.add(structure.minimal)
        out.append(EnumeratedStructure(structure, structure.check_feasible(),
                                       twin_parameters(structure) is not None))
    out.sort(key=lambda e: _family_key(e.structure.minimal))
    return out


T3_STRUCTURE = AccessStructure.of(1, 2, ["Y1", "Q1"], ["Q1", "Q2"])

T4_STRUCTURES = {
    1: AccessStructure.of(2, 2, ["Y1", "Y2", "Q1"], ["Q1", "Q2"]),
    2: AccessStructure.of(2, 2, ["Y1", "Q1"], ["Y2", "Q1", "Q2"]),
    3: AccessStructure.of(2, 2, ["Y1", "Y2", "Q1"], ["Y2", "Q1", "Q2"]),
    4: AccessStructure.of(2, 2, ["Y1", "Q1"], ["Y2", "Q1"], ["Q1", "Q2"]),
    5: AccessStructure.of(2, 2, ["Y1", "Y2", "Q1"], ["Y1", "Q1", "Q2"], ["Y2", "Q1", "Q2"]),
}
