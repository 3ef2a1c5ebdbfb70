import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybridqss.qcore import (DensityMatrix, Ket, LayoutError, SubsystemLayout, eig_hermitian,
                             ensemble_entropy, entropy_report, jacobi_eigh, mutual_information,
                             partial_trace, spectrum_entropy, tensor, von_neumann_entropy)
from hybridqss.qprim import PauliPower, bell_pair

import oracles


def _unit(rng, n):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def _rho(layout, rng, rank=None):
    return DensityMatrix(layout, oracles.random_density(rng, layout.dim, rank))


class TestLayout:
    def test_basic_queries(self):
        lay = SubsystemLayout.of(3, ("A", 3), ("B", 9))
        assert lay.labels == ("A", "B")
        assert lay.dim == 27
        assert lay.dim_of("B") == 9
        assert lay.restrict(["B"]).labels == ("B",)

    @pytest.mark.parametrize("parts", [(("A", 2), ("A", 2)), (("A", 1),)])
    def test_rejects_bad_parts(self, parts):
        with pytest.raises(LayoutError):
            SubsystemLayout.of(2, *parts)

    def test_unknown_label(self):
        with pytest.raises(LayoutError):
            SubsystemLayout.of(2, ("A", 2)).dim_of("Z")


class TestDensityMatrix:
    def test_rejects_non_hermitian(self):
        lay = SubsystemLayout.of(2, ("A", 2))
        with pytest.raises(ValueError):
            DensityMatrix(lay, np.array([[0.5, 0.1], [0.0, 0.5]]))

    def test_rejects_bad_trace(self):
        lay = SubsystemLayout.of(2, ("A", 2))
        with pytest.raises(ValueError):
            DensityMatrix(lay, np.eye(2))

    def test_read_only(self):
        rho = DensityMatrix.maximally_mixed(SubsystemLayout.of(2, ("A", 2)))
        with pytest.raises(ValueError):
            rho.entries[0, 0] = 1


class TestPartialTrace:
    def test_product_state_recovers_factors(self):
        rng = np.random.default_rng(1)
        a = _rho(SubsystemLayout.of(3, ("A", 3)), rng)
        b = _rho(SubsystemLayout.of(3, ("B", 9)), rng)
        ab = tensor(a, b)
        np.testing.assert_allclose(partial_trace(ab, ["A"]).entries, a.entries, atol=1e-12)
        np.testing.assert_allclose(partial_trace(ab, ["B"]).entries, b.entries, atol=1e-12)

    def test_against_explicit_sum(self):
        rng = np.random.default_rng(2)
        lay = SubsystemLayout.of(2, ("A", 2), ("B", 4))
        rho = _rho(lay, rng)
        t = rho.entries.reshape(2, 4, 2, 4)
        expect = sum(t[:, j, :, j] for j in range(4))
        np.testing.assert_allclose(partial_trace(rho, ["A"]).entries, expect, atol=1e-12)

    def test_keep_order_follows_layout(self):
        rng = np.random.default_rng(3)
        lay = SubsystemLayout.of(2, ("A", 2), ("B", 2), ("C", 2))
        rho = _rho(lay, rng)
        out = partial_trace(rho, ["C", "A"])
        assert out.layout.labels == ("A", "C")

    def test_composition(self):
        rng = np.random.default_rng(4)
        lay = SubsystemLayout.of(2, ("A", 2), ("B", 2), ("C", 2))
        rho = _rho(lay, rng)
        direct = partial_trace(rho, ["A"])
        staged = partial_trace(partial_trace(rho, ["A", "B"]), ["A"])
        np.testing.assert_allclose(direct.entries, staged.entries, atol=1e-12)

    def test_empty_keep_is_trace(self):
        rho = DensityMatrix.maximally_mixed(SubsystemLayout.of(2, ("A", 2)))
        np.testing.assert_allclose(partial_trace(rho, []), [[1.0]])


class TestEigensolvers:
    @pytest.mark.parametrize("method", ["lapack", "jacobi"])
    def test_charpoly_oracle(self, method):
        rng = np.random.default_rng(20)
        for _ in range(20):
            h = oracles.random_hermitian(rng, 8)
            expect = oracles.charpoly_eigenvalues(h)
            np.testing.assert_allclose(eig_hermitian(h, method), expect, atol=1e-8)

    def test_jacobi_eigenvectors(self):
        rng = np.random.default_rng(21)
        h = oracles.random_hermitian(rng, 6)
        vals, vecs = jacobi_eigh(h)
        np.testing.assert_allclose(h @ vecs, vecs * vals, atol=1e-10)
        np.testing.assert_allclose(vecs.conj().T @ vecs, np.eye(6), atol=1e-10)

    def test_jacobi_degenerate(self):
        vals, _ = jacobi_eigh(np.eye(4) / 4)
        np.testing.assert_allclose(vals, [0.25] * 4)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            eig_hermitian(np.eye(2), "qr")


class TestEntropy:
    def test_maximally_mixed_qudit_is_one(self):
        for q in (2, 3, 5):
            rho = DensityMatrix.maximally_mixed(SubsystemLayout.of(q, ("A", q)))
            assert von_neumann_entropy(rho) == pytest.approx(1.0, abs=1e-12)

    def test_pure_is_zero(self):
        assert von_neumann_entropy(bell_pair(3)) == pytest.approx(0.0, abs=1e-12)

    def test_negative_spectrum_rejected(self):
        with pytest.raises(ValueError):
            spectrum_entropy(np.array([1.1, -0.1]), 2)

    def test_tiny_negative_clamped(self):
        assert spectrum_entropy(np.array([1.0, -1e-12]), 2) == pytest.approx(0.0)

    def test_bell_mutual_information(self):
        rho = bell_pair(3)
        assert mutual_information(rho, ["A"], ["B"]) == pytest.approx(2.0, abs=1e-10)

    def test_entropy_report(self):
        rep = entropy_report(bell_pair(2, ("R", "T")), ["T"])
        assert rep.entropy_H == pytest.approx(1.0)
        assert rep.mutual_I_with_reference == pytest.approx(2.0)

    def test_unitary_invariance(self):
        rng = np.random.default_rng(5)
        lay = SubsystemLayout.of(3, ("A", 3), ("B", 3))
        rho = _rho(lay, rng)
        turned = rho.conjugate_by(PauliPower(1, 2, 3).matrix(), "B")
        assert von_neumann_entropy(turned) == pytest.approx(von_neumann_entropy(rho), abs=1e-10)

    def test_ensemble_matches_density(self):
        rng = np.random.default_rng(6)
        lay = SubsystemLayout.of(2, ("A", 2), ("B", 4), ("C", 2))
        kets = [Ket(lay, _unit(rng, 16)) for _ in range(3)]
        weights = [0.5, 0.3, 0.2]
        full = sum(w * np.outer(k.vector(), k.vector().conj()) for k, w in zip(kets, weights))
        rho = DensityMatrix(lay, full)
        for keep in (["A"], ["B"], ["A", "C"], ["A", "B", "C"]):
            expect = von_neumann_entropy(partial_trace(rho, keep))
            assert ensemble_entropy(kets, weights, keep) == pytest.approx(expect, abs=1e-9)


class TestEntropyInequalities:
    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_subadditivity_and_araki_lieb(self, seed):
        rng = np.random.default_rng(seed)
        lay = SubsystemLayout.of(2, ("A", 2), ("B", 4))
        rho = _rho(lay, rng, rank=int(rng.integers(1, 9)))
        h_ab = von_neumann_entropy(rho)
        h_a = von_neumann_entropy(partial_trace(rho, ["A"]))
        h_b = von_neumann_entropy(partial_trace(rho, ["B"]))
        assert h_ab <= h_a + h_b + 1e-9
        assert h_ab >= abs(h_a - h_b) - 1e-9

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_mutual_information_monotone(self, seed):
        rng = np.random.default_rng(seed)
        lay = SubsystemLayout.of(2, ("R", 2), ("B", 2), ("C", 2))
        rho = _rho(lay, rng)
        small = mutual_information(rho, ["R"], ["B"])
        big = mutual_information(rho, ["R"], ["B", "C"])
        assert -1e-9 <= small <= big + 1e-9
        assert big <= 2 * von_neumann_entropy(partial_trace(rho, ["R"])) + 1e-9

    def test_entropy_bounded_by_log_dim(self):
        rng = np.random.default_rng(7)
        lay = SubsystemLayout.of(3, ("A", 9))
        assert von_neumann_entropy(_rho(lay, rng)) <= math.log(9, 3) + 1e-12


class TestKet:
    def test_norm_checked(self):
        with pytest.raises(ValueError):
            Ket(SubsystemLayout.of(2, ("A", 2)), np.array([1.0, 1.0]))

    def test_merge_and_reorder_preserve_state(self):
        rng = np.random.default_rng(8)
        lay = SubsystemLayout.of(2, ("A", 2), ("B", 2), ("C", 2))
        k = Ket(lay, _unit(rng, 8))
        merged = k.merge(["A", "C"], "AC")
        assert dict(merged.layout.parts)["AC"] == 4
        h_before = ensemble_entropy([k], [1.0], ["B"])
        assert ensemble_entropy([merged], [1.0], ["B"]) == pytest.approx(h_before)
        back = k.reorder(["C", "B", "A"]).reorder(["A", "B", "C"])
        np.testing.assert_allclose(back.vector(), k.vector())
