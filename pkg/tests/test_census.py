import pytest

from compident import (
    CompartmentGraph,
    LimitExceeded,
    canonical_form,
    enumerate_sc_graphs,
    has_expected_dimension,
)
from compident.census import (
    CONJ_COLLAPSE_CYCLE,
    CONJ_COLLAPSE_MAXIMAL,
    census_classes,
    census_row,
    class_verdicts,
    non_isc_identifiable_classes,
    property_suite,
    test_conjectures as run_conjectures,
)

from conftest import oracle_strongly_connected


class TestEnumeration:
    def test_triangle_count(self):
        graphs = list(enumerate_sc_graphs(3, 3))
        assert len(graphs) == 2
        for g in graphs:
            assert oracle_strongly_connected(g)

    def test_exchange_pair_is_unique(self):
        graphs = list(enumerate_sc_graphs(2, 2))
        assert graphs == [CompartmentGraph(2, ((1, 2), (2, 1)))]

    def test_all_outputs_strongly_connected(self):
        for m in range(4, 7):
            for g in enumerate_sc_graphs(4, m):
                assert oracle_strongly_connected(g)

    def test_counts_match_independent_oracle(self):
        from itertools import combinations

        pool = [(j, i) for j in range(1, 5) for i in range(1, 5) if i != j]
        for m in (4, 5):
            direct = sum(
                1
                for subset in combinations(pool, m)
                if oracle_strongly_connected(CompartmentGraph(4, subset))
            )
            assert len(list(enumerate_sc_graphs(4, m))) == direct

    def test_guardrail(self):
        with pytest.raises(LimitExceeded):
            list(enumerate_sc_graphs(6, 6))
        assert next(enumerate_sc_graphs(6, 6, limit=6)) is not None


class TestCensusRow:
    def test_small_rows(self):
        assert census_row(3, 3).as_dict() == {
            "n": 3, "m": 3, "A": 2, "B": 2, "C": 1, "D": None, "E": 1, "F": None,
        }
        assert census_row(3, 4).as_dict() == {
            "n": 3, "m": 4, "A": 9, "B": 7, "C": 5, "D": 4, "E": 4, "F": 4,
        }

    def test_maximal_row_has_d_and_f(self):
        row = census_row(4, 6)
        assert (row.A, row.B, row.C, row.D, row.E, row.F) == (316, 166, 55, 34, 30, 26)

    def test_orbit_sizes_sum_to_total(self):
        for (n, m) in [(3, 3), (3, 4), (4, 4), (4, 5)]:
            row = census_row(n, m)
            classes = census_classes(n, m)
            assert sum(c.size for c in classes) == row.A
            assert sum(c.size for c in classes if c.expected) == row.B

    def test_verdicts_constant_on_classes(self):
        verdicts = class_verdicts(3, 4)
        for g in enumerate_sc_graphs(3, 4):
            direct = has_expected_dimension(g)
            assert direct == verdicts[canonical_form(g)].expected

    def test_csv_shape(self):
        row = census_row(3, 3)
        assert row.csv_header() == "n,m,A,B,C,D,E,F"
        assert row.csv_line() == "3,3,2,2,1,,1,"
        assert census_row(3, 4).csv_line() == "3,4,9,7,5,4,4,4"


class TestNonIscIdentifiable:
    def test_absent_for_three_vertices(self):
        assert non_isc_identifiable_classes(3, 4) == []

    def test_four_vertices_has_four(self):
        reps = non_isc_identifiable_classes(4, 6)
        assert len(reps) == 4
        from compident.graphs import is_inductively_strongly_connected

        for g in reps:
            assert is_inductively_strongly_connected(g) is None
            assert has_expected_dimension(g)

    def test_rejects_non_maximal(self):
        with pytest.raises(ValueError):
            non_isc_identifiable_classes(4, 5)


class TestConjectures:
    def test_two_vertices_vacuous(self):
        reports = run_conjectures(2)
        assert all(r.tested == 0 and r.holds for r in reports)

    def test_three_vertices(self):
        reports = {r.conjecture: r for r in run_conjectures(3)}
        assert reports[CONJ_COLLAPSE_MAXIMAL].holds
        assert reports[CONJ_COLLAPSE_CYCLE].holds
        assert reports[CONJ_COLLAPSE_CYCLE].tested > 0

    def test_four_vertices(self):
        reports = run_conjectures(4)
        for r in reports:
            assert r.tested > 0
            assert r.holds, r.counterexamples


class TestPropertySuite:
    def test_small_sweep_passes(self):
        checks = property_suite(n_max=3)
        for name, check in checks.items():
            assert check.passed, (name, check.violations)
        # one maximal graph at n=2 plus the seven expected (3,4) graphs
        assert checks["exchange-necessity"].tested == 8
        assert checks["directed-cycle-expected"].tested == 4
        assert checks["add-exchange-preserved"].tested > 0
        assert checks["edge-bound"].tested > 0
