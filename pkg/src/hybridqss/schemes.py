"""Constructions of every secret-sharing scheme in the catalog.

A :class:`Scheme` maps each assignment of its uniform classical randomness
to a :class:`Branch`: the digits held by classical shares plus a pure state
on the reference ``R``, the quantum shares and (for truncated threshold
codes) an environment ``E`` that is never handed out.  Quantum shares that
carry classical digits hold them as computational-basis qudits.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

from . import gf
from .access import (AccessStructure, Q, ShareLabel, T3_STRUCTURE, T4_STRUCTURES, Y,
                     twin_structure)
from .qcore import DensityMatrix, Ket, SubsystemLayout
from .qprim import PauliPower, bell_ket, cgl_encode_ket, check_cgl_parameters, superdense_ket
from .rates import RateRegion, RateTuple, region_for_structure, region_of

REFERENCE = "R"
SECRET = "Q0"
ENVIRONMENT = "E"


class InfeasibleStructureError(ValueError):
    pass


class UnsupportedStructureError(ValueError):
    pass


@dataclass(frozen=True)
class Branch:
    classical: Mapping[ShareLabel, tuple[int, ...]]
    state: Ket | DensityMatrix


@dataclass(frozen=True)
class Scheme:
    family: str
    params: Mapping[str, int]
    structure: AccessStructure
    q: int
    randomness: tuple[tuple[str, int], ...]
    branch_rule: Callable[[Mapping[str, int]], Branch] = field(repr=False)
    share_sizes: Mapping[ShareLabel, int]
    lambda0: int = 1

    @property
    def name(self) -> str:
        args = ",".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.family}({args})"

    def assignments(self) -> Iterator[dict[str, int]]:
        names = [n for n, _ in self.randomness]
        for values in itertools.product(*(range(size) for _, size in self.randomness)):
            yield dict(zip(names, values))

    def branches(self) -> Iterator[tuple[dict[str, int], Branch]]:
        for a in self.assignments():
            yield a, self.branch_rule(a)

    def region(self) -> RateRegion | None:
        return region_for_structure(self.structure)

    def quantum_layout(self) -> SubsystemLayout:
        return self.branch_rule(next(self.assignments())).state.layout


def rates_of(scheme: Scheme) -> RateTuple:
    s = scheme.structure
    return RateTuple(tuple(Fraction(scheme.share_sizes[y], scheme.lambda0) for y in s.classical),
                     tuple(Fraction(scheme.share_sizes[q], scheme.lambda0) for q in s.quantum))


def secret_ket(q: int) -> Ket:
    """Secret qudit Q0 maximally entangled with the reference R."""
    return bell_ket(q, (REFERENCE, SECRET))


def digits_ket(label: str, digits: Sequence[int], q: int) -> Ket:
    layout = SubsystemLayout.of(q, (label, q ** len(digits)))
    index = 0
    for d in digits:
        index = index * q + int(d) % q
    a = np.zeros(layout.dim, dtype=complex)
    a[index] = 1
    return Ket(layout, a)


def _canonical_order(ket: Ket) -> Ket:
    def key(label: str) -> tuple[int, int]:
        if label == REFERENCE:
            return (0, 0)
        if label == ENVIRONMENT:
            return (2, 0)
        return (1, int(label[1:]))
    return ket.reorder(sorted(ket.layout.labels, key=key))


def _ints(values: Sequence) -> tuple[int, ...]:
    return tuple(int(v) for v in values)


def _encrypted(a: Mapping[str, int], q: int) -> Ket:
    return secret_ket(q).apply(PauliPower(a["alpha"], a["beta"], q).matrix(), SECRET)


def _key_space(q: int, *extra: str) -> tuple[tuple[str, int], ...]:
    return tuple((name, q) for name in ("alpha", "beta") + extra)


def build_otp(q: int = 2) -> Scheme:
    """Y1 = (alpha, beta), Q1 = X^alpha Z^beta Q0."""
    gf.require_prime(q)

    def rule(a: Mapping[str, int]) -> Branch:
        state = _encrypted(a, q).rename({SECRET: "Q1"})
        return Branch({Y(1): (a["alpha"], a["beta"])}, state)

    return Scheme("otp", {"q": q}, twin_structure(1, 1, 1, 1), q, _key_space(q), rule,
                  {Y(1): 2, Q(1): 1})


def build_plain(q: int = 2) -> Scheme:
    """Negative control: the key goes to Y1 but Q1 is the unencrypted secret."""
    gf.require_prime(q)

    def rule(a: Mapping[str, int]) -> Branch:
        return Branch({Y(1): (a["alpha"], a["beta"])}, secret_ket(q).rename({SECRET: "Q1"}))

    return Scheme("plain", {"q": q}, twin_structure(1, 1, 1, 1), q, _key_space(q), rule,
                  {Y(1): 2, Q(1): 1})


def check_twin_parameters(k1: int, n1: int, k2: int, n2: int, q: int) -> None:
    gf.require_prime(q)
    if not 1 <= k1 <= n1:
        raise ValueError(f"need 1 <= K1 <= N1, got K1={k1}, N1={n1}")
    if not n2 / 2 < k2 <= n2:
        raise ValueError(f"need N2/2 < K2 <= N2, got K2={k2}, N2={n2} "
                         "(K2 <= N2/2 leaves two disjoint quantum qualified sets: infeasible)")
    if q < 2 * k2 - 1:
        raise ValueError(f"need q >= 2K2-1 = {2 * k2 - 1}, got q={q}")
    if q <= n1:
        raise ValueError(f"need q > N1 = {n1} for classical threshold sharing, got q={q}")


def smallest_prime_at_least(n: int) -> int:
    n = max(n, 2)
    while not gf.is_prime(n):
        n += 1
    return n


def default_twin_q(k1: int, n1: int, k2: int, n2: int) -> int:
    return smallest_prime_at_least(max(2 * k2 - 1, n1 + 1))


def build_twin(k1: int, n1: int, k2: int, n2: int, q: int) -> Scheme:
    """Threshold sharing of the key on classical shares, threshold code on quantum shares."""
    check_twin_parameters(k1, n1, k2, n2, q)
    coeff_names = tuple(f"a{i}" for i in range(1, k1)) + tuple(f"b{i}" for i in range(1, k1))

    def rule(a: Mapping[str, int]) -> Branch:
        shares = gf.shamir_share((a["alpha"], a["beta"]), k1, n1, q,
                                 [a[name] for name in coeff_names])
        classical = {Y(i): _ints(s) for i, s in enumerate(shares, start=1)}
        state = cgl_encode_ket(_encrypted(a, q), SECRET, k2, n2, q, env=ENVIRONMENT)
        return Branch(classical, _canonical_order(state))

    sizes = {**{Y(i): 2 for i in range(1, n1 + 1)}, **{Q(j): 1 for j in range(1, n2 + 1)}}
    return Scheme("twin", {"k1": k1, "n1": n1, "k2": k2, "n2": n2, "q": q},
                  twin_structure(k1, n1, k2, n2), q, _key_space(q, *coeff_names), rule, sizes)


def _split_extremes(a: Mapping[str, int], q: int, extreme: int,
                    q2_message: tuple[int, int]) -> Ket:
    """Quantum part shared by the two-quantum-share constructions.

    Extreme 1: Q1 = X^a Z^b Q0, Q2 holds ``q2_message`` as two basis qudits.
    Extreme 2: Q1 = (X^a Z^b Q0, pi1), Q2 = pi2, the superdense coding of
    ``q2_message``.
    """
    enc = _encrypted(a, q)
    if extreme == 1:
        return enc.rename({SECRET: "Q1"}).extend(digits_ket("Q2", q2_message, q))
    if extreme == 2:
        sd = superdense_ket(q2_message, q, ("pi1", "Q2"))
        return enc.extend(sd).merge([SECRET, "pi1"], "Q1")
    raise ValueError(f"extreme must be 1 or 2, got {extreme}")


def _extreme_sizes(extreme: int) -> tuple[int, int]:
    return (1, 2) if extreme == 1 else (2, 1)


def build_t3(extreme: int, q: int = 3) -> Scheme:
    """One classical, two quantum shares; minimal sets {Y1,Q1}, {Q1,Q2}."""
    gf.require_prime(q)
    if extreme not in (1, 2):
        raise ValueError(f"extreme must be 1 or 2, got {extreme}")

    def rule(a: Mapping[str, int]) -> Branch:
        key = (a["alpha"], a["beta"])
        return Branch({Y(1): key}, _split_extremes(a, q, extreme, key))

    s1, s2 = _extreme_sizes(extreme)
    return Scheme("t3", {"extreme": extreme, "q": q}, T3_STRUCTURE, q, _key_space(q), rule,
                  {Y(1): 2, Q(1): s1, Q(2): s2})


# Y1, Y2 and the Q2 message for each structure, from (key, 2-of-3 shares of key).
_T4_ASSIGNMENTS: dict[int, Callable[[tuple, tuple], tuple[tuple, tuple, tuple]]] = {
    1: lambda key, t: (t[0], t[1], key),
    2: lambda key, t: (key, t[1], t[0]),
    3: lambda key, t: (t[0], t[1], t[0]),
    4: lambda key, t: (key, key, key),
    5: lambda key, t: (t[0], t[1], t[2]),
}


def build_t4(structure_index: int, extreme: int, q: int = 3) -> Scheme:
    """Two classical, two quantum shares; the five non-threshold structures.

    Randomness is (alpha, beta, gamma1, gamma2) over F_3 for every structure,
    even where gamma goes unused.
    """
    if structure_index not in T4_STRUCTURES:
        raise ValueError(f"structure index must be 1..5, got {structure_index}")
    if extreme not in (1, 2):
        raise ValueError(f"extreme must be 1 or 2, got {extreme}")
    if q != 3:
        raise ValueError("these constructions use F_3")
    pick = _T4_ASSIGNMENTS[structure_index]

    def rule(a: Mapping[str, int]) -> Branch:
        key = (a["alpha"], a["beta"])
        t = tuple(_ints(s) for s in gf.additive_2of3(key, (a["gamma1"], a["gamma2"]), q))
        y1, y2, message = pick(key, t)
        return Branch({Y(1): y1, Y(2): y2}, _split_extremes(a, q, extreme, message))

    s1, s2 = _extreme_sizes(extreme)
    return Scheme("t4", {"structure": structure_index, "extreme": extreme, "q": q},
                  T4_STRUCTURES[structure_index], q, _key_space(q, "gamma1", "gamma2"), rule,
                  {Y(1): 2, Y(2): 2, Q(1): s1, Q(2): s2})


def quantum_threshold(structure: AccessStructure) -> tuple[tuple[ShareLabel, ...], int]:
    """Support and threshold of the quantum projection, if it is a threshold family."""
    projected = structure.quantum_projection()
    support = tuple(sorted(set().union(*projected), key=lambda s: s.sort_key))
    sizes = {len(p) for p in projected}
    if len(sizes) == 1:
        k = sizes.pop()
        if k > 0 and projected == {frozenset(c) for c in itertools.combinations(support, k)}:
            return support, k
    raise UnsupportedStructureError(
        "unsupported quantum substructure: the quantum parts of the minimal sets "
        "do not form a threshold family")


def build_general(structure: AccessStructure, q: int) -> Scheme:
    """Key shared classically over all shares, encrypted secret over the quantum ones.

    The key (alpha, beta) is split by replication over the maximal forbidden
    sets, with quantum shares holding their pieces as basis qudits.  The
    encrypted secret goes through a threshold code on the quantum parts of
    the minimal sets, which must form a threshold family.
    """
    gf.require_prime(q)
    witness = structure.infeasibility_witness()
    if witness is not None:
        a, b = witness
        raise InfeasibleStructureError(
            f"infeasible: minimal sets {sorted(map(str, a))} and {sorted(map(str, b))} "
            "share no quantum share")
    support, k = quantum_threshold(structure)
    n = len(support)
    check_cgl_parameters(k, n, q)
    holdings = gf.replication_holdings(structure)
    m = len(structure.maximal_forbidden_sets())
    piece_names = tuple(f"r{j}_{d}" for j in range(1, m) for d in (0, 1))

    def rule(a: Mapping[str, int]) -> Branch:
        pieces = [(a[f"r{j}_0"], a[f"r{j}_1"]) for j in range(1, m)]
        shares = gf.replication_share((a["alpha"], a["beta"]), structure, pieces, q)
        state = cgl_encode_ket(_encrypted(a, q), SECRET, k, n, q, prefix="s", env=ENVIRONMENT)
        state = state.rename({f"s{i}": str(label) for i, label in enumerate(support, start=1)})
        for label in structure.quantum:
            digits = _ints(shares[label])
            if label in support:
                state = state.extend(digits_ket(f"{label}.c", digits, q))
                state = state.merge([str(label), f"{label}.c"], str(label))
            else:
                state = state.extend(digits_ket(str(label), digits, q))
        classical = {y: _ints(shares[y]) for y in structure.classical}
        return Branch(classical, _canonical_order(state))

    sizes = {s: 2 * len(holdings[s]) + (1 if s in support else 0) for s in structure.shares}
    return Scheme("general", {"q": q}, structure, q, _key_space(q, *piece_names), rule, sizes)


def build(family: str, **params: int) -> Scheme:
    """Dispatch by family name, as used by the command line."""
    if family == "otp":
        return build_otp(params.get("q", 2))
    if family == "plain":
        return build_plain(params.get("q", 2))
    if family == "twin":
        k1, n1, k2, n2 = (params[p] for p in ("k1", "n1", "k2", "n2"))
        q = params.get("q") or default_twin_q(k1, n1, k2, n2)
        return build_twin(k1, n1, k2, n2, q)
    if family == "t3":
        return build_t3(params["extreme"], params.get("q", 3))
    if family == "t4":
        return build_t4(params["structure"], params["extreme"], params.get("q", 3))
    raise ValueError(f"unknown family {family!r}")


def family_region(family: str, **params: int) -> RateRegion:
    if family in ("otp", "plain"):
        return region_of("otp")
    return region_of(family, **params)


def catalog() -> list[Scheme]:
    """Every construction whose rates sit at an extreme point of its region."""
    out = [build_otp(2), build_twin(2, 2, 2, 3, 5), build_twin(1, 2, 2, 3, 5),
           build_t3(1), build_t3(2)]
    out += [build_t4(i, e) for i in sorted(T4_STRUCTURES) for e in (1, 2)]
    return out
