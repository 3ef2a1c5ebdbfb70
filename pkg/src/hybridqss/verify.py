"""Exact classical-quantum states of a scheme and their entropic audit.

A subset's entropy is split into the Shannon entropy of its classical
digits plus the average entropy of the quantum part conditioned on those
digits, so classical registers never enter a matrix.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .access import ShareLabel, format_set, sorted_shares, subset_key
from .qcore import (TOL_EIG, TOL_ENTROPY, DensityMatrix, Ket, LayoutError, SubsystemLayout,
                    ensemble_entropy, partial_trace, von_neumann_entropy)
from .schemes import ENVIRONMENT, REFERENCE, Scheme

Label = Union[ShareLabel, str]


@dataclass(frozen=True)
class CQBranch:
    probability: Fraction
    classical: Mapping[ShareLabel, tuple[int, ...]]
    kets: tuple[Ket, ...]
    weights: tuple[float, ...]


@dataclass(frozen=True, eq=False)
class CQState:
    q: int
    classical_labels: tuple[ShareLabel, ...]
    classical_sizes: Mapping[ShareLabel, int]
    layout: SubsystemLayout
    branches: tuple[CQBranch, ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        if sum(b.probability for b in self.branches) != 1:
            raise ValueError("branch probabilities do not sum to 1")

    def branch_density(self, i: int) -> DensityMatrix:
        b = self.branches[i]
        m = sum(w * np.outer(k.vector(), k.vector().conj()) for k, w in zip(b.kets, b.weights))
        return DensityMatrix(self.layout, m)

    def average_density(self) -> DensityMatrix:
        m = sum(float(b.probability) * self.branch_density(i).entries
                for i, b in enumerate(self.branches))
        return DensityMatrix(self.layout, m)


def _as_ensemble(state: Ket | DensityMatrix) -> tuple[tuple[Ket, ...], tuple[float, ...]]:
    if isinstance(state, Ket):
        return (state,), (1.0,)
    vals, vecs = np.linalg.eigh(state.entries)
    if vals.min() < -TOL_EIG:
        raise ValueError(f"branch state has negative eigenvalue {vals.min():.3g}")
    keep = vals > TOL_EIG
    kets = tuple(Ket(state.layout, vecs[:, i]) for i in np.flatnonzero(keep))
    weights = vals[keep] / vals[keep].sum()
    return kets, tuple(float(w) for w in weights)


def assemble(scheme: Scheme) -> CQState:
    """Enumerate every randomness branch (uniform) into an exact CQ state."""
    s = scheme.structure
    expected_labels = {REFERENCE} | {str(label) for label in s.quantum}
    layout = None
    branches = []
    total = 1
    for _, size in scheme.randomness:
        total *= size
    p = Fraction(1, total)
    for assignment, branch in scheme.branches():
        state_layout = branch.state.layout
        if layout is None:
            layout = state_layout
            labels = set(layout.labels) - {ENVIRONMENT}
            if labels != expected_labels:
                raise LayoutError(f"branch layout {layout.labels} does not match the shares")
            if layout.dim_of(REFERENCE) != scheme.q ** scheme.lambda0:
                raise LayoutError("reference system has the wrong dimension")
            for label in s.quantum:
                if layout.dim_of(str(label)) != scheme.q ** scheme.share_sizes[label]:
                    raise LayoutError(f"share {label} does not hold {scheme.share_sizes[label]} qudits")
        elif state_layout != layout:
            raise LayoutError(f"branch {assignment} has layout {state_layout.labels}, "
                              f"expected {layout.labels}")
        if set(branch.classical) != set(s.classical):
            raise LayoutError(f"branch {assignment} assigns digits to {sorted(map(str, branch.classical))}")
        for label, digits in branch.classical.items():
            if len(digits) != scheme.share_sizes[label]:
                raise LayoutError(f"share {label} holds {len(digits)} digits, "
                                  f"declared {scheme.share_sizes[label]}")
        kets, weights = _as_ensemble(branch.state)
        branches.append(CQBranch(p, dict(branch.classical), kets, weights))
    return CQState(scheme.q, s.classical, {y: scheme.share_sizes[y] for y in s.classical},
                   layout, tuple(branches))


def _split(state: CQState, subset: Iterable[Label]) -> tuple[tuple[ShareLabel, ...], frozenset[str]]:
    classical, quantum = [], set()
    for item in subset:
        if item == REFERENCE:
            quantum.add(REFERENCE)
        elif isinstance(item, ShareLabel):
            if item in state.classical_labels:
                classical.append(item)
            elif str(item) in state.layout.labels and item.is_quantum:
                quantum.add(str(item))
            else:
                raise LayoutError(f"unknown share {item}")
        else:
            raise LayoutError(f"unknown label {item!r}")
    return sorted_shares(classical), frozenset(quantum)


def _shannon(probabilities: Iterable[Fraction], q: int) -> float:
    return -sum(float(p) * math.log(float(p)) for p in probabilities if p > 0) / math.log(q)


def cq_entropy(state: CQState, subset: Iterable[Label]) -> float:
    """H(c t) = H(P_c) + sum_y P_c(y) H(rho_t | c = y)."""
    classical, quantum = _split(state, subset)
    key = (classical, quantum)
    if key in state._cache:
        return state._cache[key]
    groups: dict[tuple, list[CQBranch]] = defaultdict(list)
    for b in state.branches:
        groups[tuple(b.classical[c] for c in classical)].append(b)
    marginal = {y: sum((b.probability for b in bs), Fraction(0)) for y, bs in groups.items()}
    h = _shannon(marginal.values(), state.q)
    if quantum:
        for y, bs in groups.items():
            kets, weights = [], []
            for b in bs:
                share = b.probability / marginal[y]
                kets.extend(b.kets)
                weights.extend(float(share) * w for w in b.weights)
            h += float(marginal[y]) * ensemble_entropy(kets, weights, quantum)
    state._cache[key] = h
    return h


def embedded_entropy(state: CQState, subset: Iterable[Label]) -> float:
    """Same quantity with classical digits embedded as diagonal registers.

    Builds the full density matrix of the subset; only for small cases.
    """
    classical, quantum = _split(state, subset)
    q = state.q
    parts = [(str(c), q ** state.classical_sizes[c]) for c in classical]
    keep_layout = state.layout.restrict(quantum) if quantum else None
    if keep_layout is not None:
        parts += list(keep_layout.parts)
    if not parts:
        return 0.0
    layout = SubsystemLayout(tuple(parts), q)
    total = np.zeros((layout.dim, layout.dim), dtype=complex)
    for i, b in enumerate(state.branches):
        reg = np.ones((1, 1))
        for c in classical:
            d = q ** state.classical_sizes[c]
            index = 0
            for digit in b.classical[c]:
                index = index * q + digit
            e = np.zeros((d, d))
            e[index, index] = 1
            reg = np.kron(reg, e)
        if quantum:
            reduced = partial_trace(state.branch_density(i), quantum).entries
        else:
            reduced = np.ones((1, 1))
        total += float(b.probability) * np.kron(reg, reduced)
    return von_neumann_entropy(DensityMatrix(layout, total))


def cq_mutual_information(state: CQState, part_a: Iterable[Label], part_b: Iterable[Label]) -> float:
    part_a, part_b = list(part_a), list(part_b)
    if set(part_a) & set(part_b):
        raise LayoutError("overlapping parts")
    return (cq_entropy(state, part_a) + cq_entropy(state, part_b)
            - cq_entropy(state, part_a + part_b))


def _fixed(x: float) -> str:
    # round first so tiny negatives print as 0.000000, not -0.000000
    return f"{round(x, 6) + 0.0:.6f}"


@dataclass(frozen=True)
class SubsetRecord:
    subset: frozenset[ShareLabel]
    qualified: bool
    mutual_information: float
    target: float
    passed: bool

    def render(self) -> str:
        return (f"{format_set(self.subset)} qualified={str(self.qualified).lower()} "
                f"I={_fixed(self.mutual_information)} target={_fixed(self.target)} "
                f"pass={str(self.passed).lower()}")


@dataclass(frozen=True)
class AuditReport:
    scheme: str
    records: tuple[SubsetRecord, ...]
    tolerance: float
    reference_entropy: float

    @property
    def overall(self) -> bool:
        return all(r.passed for r in self.records)

    def failures(self) -> list[SubsetRecord]:
        return [r for r in self.records if not r.passed]

    def record(self, subset: Iterable[ShareLabel]) -> SubsetRecord:
        subset = frozenset(subset)
        for r in self.records:
            if r.subset == subset:
                return r
        raise KeyError(format_set(subset))

    def render(self) -> str:
        lines = [r.render() for r in self.records]
        lines.append(f"overall={'pass' if self.overall else 'fail'} tau={self.tolerance:g} "
                     f"subsets={len(self.records)}")
        return "\n".join(lines) + "\n"


def audit(scheme: Scheme, tol: float = TOL_ENTROPY, state: CQState | None = None) -> AuditReport:
    """Check I(R;T) = 2H(R) for qualified T and I(R;T) = 0 for forbidden T."""
    if state is None:
        state = assemble(scheme)
    h_r = cq_entropy(state, [REFERENCE])
    records = []
    subsets = [s for s in scheme.structure.all_subsets() if s]
    subsets.sort(key=subset_key)
    for subset in subsets:
        shares = sorted_shares(subset)
        info = h_r + cq_entropy(state, shares) - cq_entropy(state, (REFERENCE,) + shares)
        qualified = scheme.structure.is_qualified(subset)
        target = 2 * h_r if qualified else 0.0
        records.append(SubsetRecord(subset, qualified, info, target, abs(info - target) <= tol))
    return AuditReport(scheme.name, tuple(records), tol, h_r)


def subsets_with_reference(labels: Sequence[Label]) -> list[tuple[Label, ...]]:
    """All nonempty subsets of ``labels`` plus the reference, size-first."""
    pool = [REFERENCE] + list(labels)
    return [c for r in range(1, len(pool) + 1) for c in itertools.combinations(pool, r)]
