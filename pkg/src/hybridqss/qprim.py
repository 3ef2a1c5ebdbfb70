"""Qudit building blocks: generalized Paulis, Bell pairs, the one-time pad,
superdense coding and the polynomial threshold code."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .gf import FieldElement, require_prime
from .qcore import TOL_HERM, DensityMatrix, Ket, LayoutError, SubsystemLayout


@lru_cache(maxsize=None)
def _pauli_x(q: int) -> np.ndarray:
    x = np.roll(np.eye(q, dtype=complex), 1, axis=0)
    x.setflags(write=False)
    return x


@lru_cache(maxsize=None)
def _pauli_z(q: int) -> np.ndarray:
    z = np.diag(np.exp(2j * np.pi * np.arange(q) / q))
    z.setflags(write=False)
    return z


def pauli_x(q: int) -> np.ndarray:
    """Shift: X|j> = |j+1 mod q>."""
    require_prime(q)
    return _pauli_x(q)


def pauli_z(q: int) -> np.ndarray:
    """Clock: Z|j> = w^j |j>, w = exp(2 pi i / q)."""
    require_prime(q)
    return _pauli_z(q)


@dataclass(frozen=True)
class PauliPower:
    alpha: int
    beta: int
    q: int

    def __post_init__(self) -> None:
        require_prime(self.q)
        object.__setattr__(self, "alpha", int(self.alpha) % self.q)
        object.__setattr__(self, "beta", int(self.beta) % self.q)

    @classmethod
    def of(cls, alpha: FieldElement | int, beta: FieldElement | int, q: int) -> "PauliPower":
        return cls(int(alpha), int(beta), q)

    def matrix(self) -> np.ndarray:
        """X^alpha Z^beta."""
        return (np.linalg.matrix_power(pauli_x(self.q), self.alpha)
                @ np.linalg.matrix_power(pauli_z(self.q), self.beta))

    def inverse_matrix(self) -> np.ndarray:
        """Z^-beta X^-alpha."""
        return self.matrix().conj().T


def bell_ket(q: int, labels: tuple[str, str] = ("A", "B")) -> Ket:
    """(1/sqrt q) sum_j |j>|j>."""
    require_prime(q)
    layout = SubsystemLayout.of(q, (labels[0], q), (labels[1], q))
    return Ket(layout, np.eye(q, dtype=complex) / math.sqrt(q))


def bell_pair(q: int, labels: tuple[str, str] = ("A", "B")) -> DensityMatrix:
    return bell_ket(q, labels).density()


def qotp_apply(rho: DensityMatrix, target: str, p: PauliPower) -> DensityMatrix:
    if rho.layout.dim_of(target) != p.q:
        raise LayoutError(f"subsystem {target!r} has dimension {rho.layout.dim_of(target)}, not {p.q}")
    return rho.conjugate_by(p.matrix(), target)


def qotp_invert(rho: DensityMatrix, target: str, p: PauliPower) -> DensityMatrix:
    if rho.layout.dim_of(target) != p.q:
        raise LayoutError(f"subsystem {target!r} has dimension {rho.layout.dim_of(target)}, not {p.q}")
    return rho.conjugate_by(p.inverse_matrix(), target)


def superdense_ket(message: tuple[int, int], q: int,
                   labels: tuple[str, str] = ("pi1", "pi2")) -> Ket:
    """Bell pair (pi1, pi0) with X^a Z^b applied to pi0, which becomes pi2."""
    a, b = message
    return bell_ket(q, labels).apply(PauliPower(a, b, q).matrix(), labels[1])


def superdense_encode(message: tuple[int, int], q: int,
                      labels: tuple[str, str] = ("pi1", "pi2")) -> DensityMatrix:
    return superdense_ket(message, q, labels).density()


def superdense_decode(state: DensityMatrix) -> tuple[int, int]:
    """Project onto the generalized Bell basis; the state must be one of its members."""
    q = state.layout.q
    if state.layout.dims != (q, q):
        raise LayoutError("superdense decoding needs exactly two qudits")
    labels = state.layout.labels
    for a, b in itertools.product(range(q), repeat=2):
        v = superdense_ket((a, b), q, labels).vector()
        overlap = np.vdot(v, state.entries @ v).real
        if overlap > 1 - 1e-6:
            return a, b
    raise ValueError("state is not a generalized Bell basis state")


@lru_cache(maxsize=None)
def cgl_isometry(k: int, q: int) -> np.ndarray:
    """Encoding map of the ((K, 2K-1)) polynomial code, shape (q^(2K-1), q).

    |s> goes to q^-(K-1)/2 sum_c |f(0), f(1), ..., f(2K-2)> with
    f(x) = c_0 + ... + c_{K-2} x^{K-2} + s x^{K-1}.  Putting the secret in
    the top coefficient lets the 2K-1 evaluation points be 0..2K-2, so
    q >= 2K-1 suffices.
    """
    require_prime(q)
    n = 2 * k - 1
    if q < n:
        raise ValueError(f"need q >= 2K-1 = {n}, got q={q}")
    iso = np.zeros((q,) * n + (q,), dtype=complex)
    amp = q ** (-(k - 1) / 2)
    for s in range(q):
        for c in itertools.product(range(q), repeat=k - 1):
            coeffs = c + (s,)
            values = tuple(sum(a * pow(x, i, q) for i, a in enumerate(coeffs)) % q
                           for x in range(n))
            iso[values + (s,)] += amp
    iso = iso.reshape(q ** n, q)
    iso.setflags(write=False)
    return iso


def cgl_outputs(k: int, n: int, q: int, prefix: str = "Q", env: str = "E"
                ) -> list[tuple[str, int]]:
    labels = [(f"{prefix}{j}", q) for j in range(1, n + 1)]
    extra = 2 * k - 1 - n
    if extra:
        labels.append((env, q ** extra))
    return labels


def check_cgl_parameters(k: int, n: int, q: int) -> None:
    require_prime(q)
    if not (n / 2 < k <= n):
        raise ValueError(f"need N/2 < K <= N, got K={k}, N={n}")
    if q < 2 * k - 1:
        raise ValueError(f"need q >= 2K-1 = {2 * k - 1}, got q={q}")


def cgl_encode_ket(state: Ket, secret: str, k: int, n: int, q: int,
                   prefix: str = "Q", env: str = "E") -> Ket:
    """Encode subsystem ``secret`` into N share qudits (+ environment)."""
    check_cgl_parameters(k, n, q)
    if state.layout.dim_of(secret) != q:
        raise LayoutError(f"secret subsystem {secret!r} must have dimension {q}")
    return state.apply_isometry(cgl_isometry(k, q), secret, cgl_outputs(k, n, q, prefix, env))


def cgl_encode(rho: DensityMatrix, secret: str, k: int, n: int, q: int,
               prefix: str = "Q", env: str = "E") -> DensityMatrix:
    """Density-matrix form of :func:`cgl_encode_ket`.

    Discarded coordinates (when N < 2K-1) stay in the output under ``env``.
    """
    check_cgl_parameters(k, n, q)
    layout = rho.layout
    if layout.dim_of(secret) != q:
        raise LayoutError(f"secret subsystem {secret!r} must have dimension {q}")
    outputs = cgl_outputs(k, n, q, prefix, env)
    axis = layout.index(secret)
    parts = layout.parts[:axis] + tuple(outputs) + layout.parts[axis + 1:]
    new_layout = SubsystemLayout(parts, q)
    left = math.prod(layout.dims[:axis])
    right = math.prod(layout.dims[axis + 1:])
    full = np.kron(np.kron(np.eye(left), cgl_isometry(k, q)), np.eye(right))
    out = full @ rho.entries @ full.conj().T
    if abs(np.trace(out) - 1) > TOL_HERM:
        raise AssertionError("encoding is not trace preserving")
    return DensityMatrix(new_layout, out)
