"""Dense complex linear algebra for small qudit systems.

States live on a :class:`SubsystemLayout`, an ordered list of labelled
subsystems sharing one logarithm base ``q``.  Entropies are reported in
q-ary units, so a maximally mixed qudit carries exactly one unit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

TOL_HERM = 1e-9
TOL_EIG = 1e-9
TOL_ENTROPY = 1e-7


class LayoutError(ValueError):
    """Raised for label collisions, unknown labels and dimension mismatches."""


@dataclass(frozen=True)
class SubsystemLayout:
    parts: tuple[tuple[str, int], ...]
    q: int

    def __post_init__(self) -> None:
        labels = [label for label, _ in self.parts]
        if len(set(labels)) != len(labels):
            raise LayoutError(f"duplicate subsystem labels in {labels}")
        for label, dim in self.parts:
            if dim < 2:
                raise LayoutError(f"subsystem {label!r} has dimension {dim} < 2")
        if self.q < 2:
            raise LayoutError(f"logarithm base q={self.q} must be >= 2")

    @classmethod
    def of(cls, q: int, *parts: tuple[str, int]) -> "SubsystemLayout":
        return cls(tuple(parts), q)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.parts)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(dim for _, dim in self.parts)

    @property
    def dim(self) -> int:
        return math.prod(self.dims)

    def dim_of(self, label: str) -> int:
        return self.dims[self.index(label)]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LayoutError(f"unknown subsystem label {label!r}") from None

    def restrict(self, keep: Iterable[str]) -> "SubsystemLayout":
        keep = set(keep)
        for label in keep:
            self.index(label)
        return SubsystemLayout(tuple(p for p in self.parts if p[0] in keep), self.q)

    def concat(self, other: "SubsystemLayout") -> "SubsystemLayout":
        if other.q != self.q:
            raise LayoutError(f"cannot combine layouts with bases {self.q} and {other.q}")
        clash = set(self.labels) & set(other.labels)
        if clash:
            raise LayoutError(f"label collision: {sorted(clash)}")
        return SubsystemLayout(self.parts + other.parts, self.q)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    layout: SubsystemLayout
    entries: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.entries, dtype=complex)
        n = self.layout.dim
        if m.shape != (n, n):
            raise LayoutError(f"matrix shape {m.shape} does not match layout dimension {n}")
        if not np.allclose(m, m.conj().T, atol=TOL_HERM, rtol=0):
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1) > TOL_HERM:
            raise ValueError(f"density matrix trace {np.trace(m).real:.12g} != 1")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @classmethod
    def maximally_mixed(cls, layout: SubsystemLayout) -> "DensityMatrix":
        return cls(layout, np.eye(layout.dim) / layout.dim)

    @classmethod
    def basis(cls, layout: SubsystemLayout, index: int = 0) -> "DensityMatrix":
        m = np.zeros((layout.dim, layout.dim), dtype=complex)
        m[index, index] = 1
        return cls(layout, m)

    def tensor(self) -> np.ndarray:
        """Entries reshaped to (d1, ..., dn, d1, ..., dn)."""
        return self.entries.reshape(self.layout.dims * 2)

    def conjugate_by(self, unitary: np.ndarray, label: str) -> "DensityMatrix":
        """Return U rho U^dagger with U acting on one subsystem."""
        full = embed_operator(self.layout, unitary, label)
        return DensityMatrix(self.layout, full @ self.entries @ full.conj().T)


@dataclass(frozen=True, eq=False)
class Ket:
    """Pure state, stored as a tensor with one axis per subsystem."""

    layout: SubsystemLayout
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.amplitudes, dtype=complex).reshape(self.layout.dims)
        norm = np.vdot(a, a).real
        if abs(norm - 1) > TOL_HERM:
            raise ValueError(f"state vector has squared norm {norm:.12g}")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @classmethod
    def basis(cls, layout: SubsystemLayout, digits: Sequence[int]) -> "Ket":
        a = np.zeros(layout.dims, dtype=complex)
        a[tuple(digits)] = 1
        return cls(layout, a)

    def vector(self) -> np.ndarray:
        return self.amplitudes.reshape(-1)

    def density(self) -> DensityMatrix:
        v = self.vector()
        return DensityMatrix(self.layout, np.outer(v, v.conj()))

    def apply(self, op: np.ndarray, label: str) -> "Ket":
        """Apply an operator acting on one subsystem."""
        axis = self.layout.index(label)
        if op.shape != (self.layout.dims[axis],) * 2:
            raise LayoutError(f"operator of shape {op.shape} does not fit {label!r}")
        out = np.tensordot(op, self.amplitudes, axes=([1], [axis]))
        return Ket(self.layout, np.moveaxis(out, 0, axis))

    def apply_isometry(self, iso: np.ndarray, label: str,
                       outputs: Sequence[tuple[str, int]]) -> "Ket":
        """Replace subsystem ``label`` by ``outputs`` through an isometry.

        ``iso`` has shape (prod(output dims), dim(label)); the new parts are
        inserted where ``label`` was.
        """
        axis = self.layout.index(label)
        out_dims = tuple(d for _, d in outputs)
        if iso.shape != (math.prod(out_dims), self.layout.dims[axis]):
            raise LayoutError(f"isometry of shape {iso.shape} does not fit {label!r}")
        parts = self.layout.parts[:axis] + tuple(outputs) + self.layout.parts[axis + 1:]
        layout = SubsystemLayout(parts, self.layout.q)
        out = np.tensordot(iso.reshape(out_dims + (-1,)), self.amplitudes,
                           axes=([len(out_dims)], [axis]))
        out = np.moveaxis(out, list(range(len(out_dims))),
                          list(range(axis, axis + len(out_dims))))
        return Ket(layout, out)

    def extend(self, other: "Ket") -> "Ket":
        layout = self.layout.concat(other.layout)
        return Ket(layout, np.multiply.outer(self.amplitudes, other.amplitudes))

    def rename(self, mapping: dict[str, str]) -> "Ket":
        parts = tuple((mapping.get(label, label), d) for label, d in self.layout.parts)
        return Ket(SubsystemLayout(parts, self.layout.q), self.amplitudes)

    def merge(self, labels: Sequence[str], new_label: str) -> "Ket":
        """Fuse several subsystems (in the given order) into one part.

        The fused part takes the position of the first listed label.
        """
        axes = [self.layout.index(label) for label in labels]
        rest = [i for i in range(len(self.layout.parts)) if i not in axes]
        pos = sum(1 for i in rest if i < axes[0])
        order = rest[:pos] + axes + rest[pos:]
        a = np.transpose(self.amplitudes, order)
        dims = [self.layout.dims[i] for i in order]
        fused = math.prod(self.layout.dims[i] for i in axes)
        a = a.reshape(dims[:pos] + [fused] + dims[pos + len(axes):])
        parts = ([self.layout.parts[i] for i in rest[:pos]] + [(new_label, fused)]
                 + [self.layout.parts[i] for i in rest[pos:]])
        return Ket(SubsystemLayout(tuple(parts), self.layout.q), a)

    def reorder(self, labels: Sequence[str]) -> "Ket":
        if sorted(labels) != sorted(self.layout.labels):
            raise LayoutError(f"reorder needs a permutation of {self.layout.labels}")
        axes = [self.layout.index(label) for label in labels]
        parts = tuple(self.layout.parts[i] for i in axes)
        return Ket(SubsystemLayout(parts, self.layout.q), np.transpose(self.amplitudes, axes))


def embed_operator(layout: SubsystemLayout, op: np.ndarray, label: str) -> np.ndarray:
    """Full-space matrix of ``op`` acting on one subsystem."""
    axis = layout.index(label)
    if op.shape != (layout.dims[axis],) * 2:
        raise LayoutError(f"operator of shape {op.shape} does not fit {label!r}")
    left = math.prod(layout.dims[:axis])
    right = math.prod(layout.dims[axis + 1:])
    return np.kron(np.kron(np.eye(left), op), np.eye(right))


def tensor(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    layout = a.layout.concat(b.layout)
    return DensityMatrix(layout, np.kron(a.entries, b.entries))


def partial_trace(rho: DensityMatrix, keep: Iterable[str]) -> DensityMatrix | np.ndarray:
    """Reduce ``rho`` to the subsystems in ``keep`` (layout order is kept).

    Keeping nothing returns the 1x1 matrix ``[[tr rho]]``; a DensityMatrix
    cannot describe an empty layout.
    """
    keep = set(keep)
    layout = rho.layout
    for label in keep:
        layout.index(label)
    n = len(layout.parts)
    kept = [i for i in range(n) if layout.labels[i] in keep]
    traced = [i for i in range(n) if i not in kept]
    t = rho.tensor()
    # einsum subscripts: traced axes share an index between ket and bra sides
    ket_idx = list(range(n))
    bra_idx = [n + i if i in kept else i for i in range(n)]
    out_idx = kept + [n + i for i in kept]
    reduced = np.einsum(t, ket_idx + bra_idx, out_idx)
    d = math.prod(layout.dims[i] for i in kept)
    reduced = reduced.reshape(d, d)
    if not kept:
        return reduced
    return DensityMatrix(layout.restrict(keep), reduced)


def jacobi_eigh(m: np.ndarray, tol: float = 1e-14, max_sweeps: int = 100
                ) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalisation of a complex Hermitian matrix.

    Each (p, r) pair is zeroed by a phase fix on column r followed by a
    real plane rotation.  Returns eigenvalues (descending) and the matching
    unitary of column eigenvectors.
    """
    a = np.array(m, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    if not np.allclose(a, a.conj().T, atol=TOL_HERM, rtol=0):
        raise ValueError("matrix is not Hermitian")
    a = (a + a.conj().T) / 2
    v = np.eye(n, dtype=complex)
    scale = max(np.linalg.norm(a), 1.0)
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for r in range(p + 1, n):
                apr = a[p, r]
                mag = abs(apr)
                if mag <= tol * scale * 1e-3:
                    continue
                phase = apr / mag
                a[:, r] *= phase.conjugate()
                a[r, :] *= phase
                v[:, r] *= phase.conjugate()
                theta = (a[r, r].real - a[p, p].real) / (2 * mag)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1 / math.hypot(t, 1.0)
                s = t * c
                col_p, col_r = a[:, p].copy(), a[:, r].copy()
                a[:, p] = c * col_p - s * col_r
                a[:, r] = s * col_p + c * col_r
                row_p, row_r = a[p, :].copy(), a[r, :].copy()
                a[p, :] = c * row_p - s * row_r
                a[r, :] = s * row_p + c * row_r
                a[p, r] = a[r, p] = 0
                vp, vr = v[:, p].copy(), v[:, r].copy()
                v[:, p] = c * vp - s * vr
                v[:, r] = s * vp + c * vr
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    vals = np.diag(a).real
    order = np.argsort(vals)[::-1]
    return vals[order], v[:, order]


def eig_hermitian(m: np.ndarray, method: str = "lapack") -> np.ndarray:
    """Eigenvalues of a Hermitian matrix in descending order.

    ``method="jacobi"`` uses :func:`jacobi_eigh`; the default goes through
    LAPACK, which is what the entropy routines use at audit scale.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    if not np.allclose(m, m.conj().T, atol=TOL_HERM, rtol=0):
        raise ValueError("matrix is not Hermitian")
    if method == "jacobi":
        return jacobi_eigh(m)[0]
    if method != "lapack":
        raise ValueError(f"unknown eigensolver {method!r}")
    return np.linalg.eigvalsh((m + m.conj().T) / 2)[::-1]


def spectrum_entropy(eigenvalues: np.ndarray, q: int) -> float:
    """-sum(l log_q l) with clamping of tiny negative eigenvalues."""
    lam = np.asarray(eigenvalues, dtype=float)
    if lam.size and lam.min() < -TOL_EIG:
        raise ValueError(f"negative eigenvalue {lam.min():.3g} in a density matrix")
    lam = lam[lam > TOL_EIG]
    return float(-np.sum(lam * np.log(lam)) / math.log(q))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    return spectrum_entropy(eig_hermitian(rho.entries), rho.layout.q)


def mutual_information(rho: DensityMatrix, part_a: Iterable[str], part_b: Iterable[str]) -> float:
    part_a, part_b = set(part_a), set(part_b)
    if part_a & part_b:
        raise LayoutError(f"overlapping parts: {sorted(part_a & part_b)}")

    def h(keep: set[str]) -> float:
        if not keep:
            return 0.0
        return von_neumann_entropy(partial_trace(rho, keep))

    return h(part_a) + h(part_b) - h(part_a | part_b)


@dataclass(frozen=True)
class EntropyReport:
    subset: frozenset[str]
    entropy_H: float
    mutual_I_with_reference: float


def entropy_report(rho: DensityMatrix, subset: Iterable[str], reference: str = "R") -> EntropyReport:
    subset = frozenset(subset)
    h = von_neumann_entropy(partial_trace(rho, subset)) if subset else 0.0
    return EntropyReport(subset, h, mutual_information(rho, {reference}, subset))


def ensemble_entropy(kets: Sequence[Ket], weights: Sequence[float], keep: Iterable[str]) -> float:
    """Entropy of sum_k w_k tr_{~keep} |psi_k><psi_k| without forming it.

    Each ket is reshaped into a (kept x rest) matrix; stacking them side by
    side gives G with G G^dagger equal to the reduced state.  The nonzero
    spectrum is read from whichever of G G^dagger, G^dagger G is smaller.
    """
    if not kets:
        raise ValueError("empty ensemble")
    layout = kets[0].layout
    keep = set(keep)
    axes = [layout.index(label) for label in layout.labels if label in keep]
    rest = [i for i in range(len(layout.parts)) if i not in axes]
    d_keep = math.prod(layout.dims[i] for i in axes)
    blocks = []
    for ket, w in zip(kets, weights):
        if ket.layout != layout:
            raise LayoutError("ensemble members have different layouts")
        if w == 0:
            continue
        a = np.transpose(ket.amplitudes, axes + rest).reshape(d_keep, -1)
        blocks.append(math.sqrt(w) * a)
    g = np.hstack(blocks)
    gram = g @ g.conj().T if g.shape[0] <= g.shape[1] else g.conj().T @ g
    return spectrum_entropy(eig_hermitian(gram), layout.q)
