import itertools

import pytest

from hybridqss.access import (T3_STRUCTURE, T4_STRUCTURES, AccessParseError, AccessStructure, Kind,
                              Q, ShareLabel, Y, canonical, enumerate_all_structures, equivalent,
                              format_set, parse_structure, twin_parameters, twin_structure)

import oracles


class TestShareLabel:
    def test_parse_and_str(self):
        assert ShareLabel.parse("Y3") == Y(3)
        assert str(Q(2)) == "Q2"
        assert Q(1).is_quantum and not Y(1).is_quantum

    @pytest.mark.parametrize("token", ["Z1", "Y0", "Q", "q1", "Y-1"])
    def test_parse_rejects(self, token):
        with pytest.raises(ValueError):
            ShareLabel.parse(token)

    def test_ordering_classical_first(self):
        assert sorted([Q(1), Y(2), Q(2), Y(1)]) == [Y(1), Y(2), Q(1), Q(2)]
        assert format_set({Q(1), Y(1)}) == "{Y1,Q1}"


class TestStructure:
    def test_qualified_closure(self):
        s = T3_STRUCTURE
        assert s.is_qualified({Y(1), Q(1)})
        assert s.is_qualified({Y(1), Q(1), Q(2)})
        assert not s.is_qualified({Y(1), Q(2)})
        assert len(s.qualified_sets()) + len(s.forbidden_sets()) == 8

    def test_rejects_non_antichain(self):
        with pytest.raises(ValueError):
            AccessStructure.of(1, 1, ["Q1"], ["Y1", "Q1"])

    def test_rejects_unused_share(self):
        with pytest.raises(ValueError):
            AccessStructure.of(2, 1, ["Y1", "Q1"])

    def test_rejects_unknown_share(self):
        with pytest.raises(ValueError):
            AccessStructure.of(1, 1, ["Y1", "Q2"])

    def test_maximal_forbidden_t3(self):
        got = set(T3_STRUCTURE.maximal_forbidden_sets())
        assert got == oracles.brute_maximal_forbidden(T3_STRUCTURE.shares, T3_STRUCTURE.minimal)
        assert got == {frozenset({Y(1), Q(2)}), frozenset({Q(1)})}

    def test_quantum_projection(self):
        assert T3_STRUCTURE.quantum_projection() == frozenset({frozenset({Q(1)})})

    def test_text_round_trip(self):
        for s in T4_STRUCTURES.values():
            assert parse_structure(s.to_text()) == s


class TestFeasibility:
    def test_catalog_feasible(self):
        assert T3_STRUCTURE.check_feasible()
        for s in T4_STRUCTURES.values():
            assert s.check_feasible()

    @pytest.mark.parametrize("sets,n1,n2", [
        ([["Y1"], ["Q1"]], 1, 1),
        ([["Y1", "Q1"], ["Y1", "Q2"]], 1, 2),
        ([["Y1", "Y2"]], 2, 0),
        ([["Q1", "Y1"], ["Q2", "Y2"]], 2, 2),
    ])
    def test_hand_built_infeasible(self, sets, n1, n2):
        s = AccessStructure.of(n1, n2, *sets)
        assert not s.check_feasible()
        a, b = s.infeasibility_witness()
        assert not any(x.is_quantum for x in a & b)

    def test_witness_reports_distinct_pair(self):
        s = AccessStructure.of(1, 1, ["Y1"], ["Q1"])
        assert s.infeasibility_witness() == (frozenset({Y(1)}), frozenset({Q(1)}))

    def test_self_pair_counts(self):
        # a single classical-only minimal set overlaps itself classically
        s = AccessStructure.of(1, 0, ["Y1"])
        assert s.infeasibility_witness() == (frozenset({Y(1)}), frozenset({Y(1)}))

    @pytest.mark.parametrize("n1,n2", [(n1, n - n1) for n in range(1, 5) for n1 in range(n + 1)])
    def test_brute_force_agreement(self, n1, n2):
        for e in enumerate_all_structures(n1, n2, canonical_only=False):
            s = e.structure
            assert e.feasible == oracles.brute_feasible(s.shares, s.minimal), str(s)

    def test_classical_only_never_feasible(self):
        for e in enumerate_all_structures(3, 0, canonical_only=False):
            assert not e.feasible


class TestParse:
    def test_comments_and_blanks(self):
        text = "# hdr\n\nN1=1 N2=2\nminimal: Y1 Q1  # first\nminimal: Q1 Q2\n"
        assert parse_structure(text) == T3_STRUCTURE

    @pytest.mark.parametrize("text,line", [
        ("N1=1 N2=1\nminimal: Y1 Z1\n", 2),
        ("N1=1\nminimal: Y1\n", 1),
        ("N1=1 N2=1\nminimal: Y1 Q2\n", 2),
        ("N1=1 N2=1\nminimal:\n", 2),
        ("N1=1 N2=1\nminimal Y1 Q1\n", 2),
        ("N1=1 N2=1\nminimal: Y1 Y1 Q1\n", 2),
        ("", 1),
    ])
    def test_errors_carry_line(self, text, line):
        with pytest.raises(AccessParseError) as info:
            parse_structure(text)
        assert info.value.line == line


class TestTwin:
    def test_structure_and_parameters(self):
        s = twin_structure(2, 2, 2, 3)
        assert len(s.minimal) == 3
        assert twin_parameters(s) == (2, 2)
        assert twin_parameters(T3_STRUCTURE) is None

    @pytest.mark.parametrize("k1,n1,k2,n2", [(1, 2, 2, 3), (2, 3, 3, 4), (1, 1, 1, 1)])
    def test_feasible_iff_majority(self, k1, n1, k2, n2):
        assert twin_structure(k1, n1, k2, n2).check_feasible() == (2 * k2 > n2)

    def test_minority_infeasible(self):
        assert not twin_structure(1, 1, 1, 2).check_feasible()


class TestEnumeration:
    def test_single_quantum_share(self):
        out = enumerate_all_structures(0, 1)
        assert [e.structure.minimal for e in out] == [frozenset({frozenset({Q(1)})})]

    def test_n1_1_n2_2(self):
        out = enumerate_all_structures(1, 2)
        assert len(out) == 7
        special = [e for e in out if e.feasible and not e.twin_threshold]
        assert len(special) == 1
        assert equivalent(special[0].structure, T3_STRUCTURE)

    def test_n1_2_n2_2_catalog(self):
        out = enumerate_all_structures(2, 2)
        special = [e.structure for e in out if e.feasible and not e.twin_threshold]
        assert len(special) == 5
        for s in T4_STRUCTURES.values():
            assert sum(equivalent(s, t) for t in special) == 1

    def test_canonical_is_relabeling_invariant(self):
        s = AccessStructure.of(1, 2, ["Y1", "Q2"], ["Q1", "Q2"])
        assert canonical(s) == canonical(T3_STRUCTURE)

    def test_non_canonical_count_matches_brute_force(self):
        shares = [Y(1), Q(1), Q(2)]
        subsets = [s for s in oracles.power_set(shares) if s]
        count = 0
        for r in range(1, len(subsets) + 1):
            for fam in itertools.combinations(subsets, r):
                if any(a < b for a in fam for b in fam):
                    continue
                if frozenset().union(*fam) == frozenset(shares):
                    count += 1
        assert len(enumerate_all_structures(1, 2, canonical_only=False)) == count

    def test_kinds(self):
        assert {s.kind for s in T4_STRUCTURES[1].shares} == {Kind.CLASSICAL, Kind.QUANTUM}
