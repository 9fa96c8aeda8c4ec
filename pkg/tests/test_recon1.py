"""Genus-1 reconstruction through the codimension-two boundary relation."""

from fractions import Fraction
from itertools import permutations

import pytest

from orbicorr.recon1 import (
    SOLVE_QUADS,
    STRATA,
    STRATUM_BY_NAME,
    DegenerateCoefficient,
    Genus1Solver,
    MissingDependency,
    _stratum_affine,
    build_g1_table,
    g1_series,
    getzler_residual,
    getzler_solve,
    stratum_contribution,
)

GW_GOLDEN = {
    # <P>_{1,1,d} for d = 0..5
    "gw:p333": [Fraction(-1, 24), 0, 0, 1, 0, 0],
    "gw:p442": [Fraction(-1, 24), 0, 0, 0, 1, 0],
    "gw:p632": [Fraction(-1, 24), 0, 0, 0, 0, 0],
}

FJRW_GOLDEN = {
    # all-top insertions, n = 1..4
    "fjrw:p8": [0, 0, Fraction(1, 324), 0],
    "fjrw:x9t": [0, 0, Fraction(-1, 432), 0],
    "fjrw:j10t": [0, 0, Fraction(-1, 648), 0],
}


class TestStrataShape:
    def test_census(self):
        shape = [
            (s.name, s.coefficient, len(s.layouts), s.automorphisms) for s in STRATA
        ]
        assert shape == [
            ("d22", 12, 3, 1),
            ("d23", -4, 12, 1),
            ("d24", -2, 6, 1),
            ("d34", 6, 4, 1),
            ("d03", 1, 4, 2),
            ("d04", 1, 1, 2),
            ("dbeta", -2, 3, 2),
        ]

    def test_vertex_genera(self):
        genus_one_vertices = {
            s.name: [v for v in s.vertices if v == 1].count(1) for s in STRATA
        }
        assert genus_one_vertices == {
            "d22": 1,
            "d23": 1,
            "d24": 1,
            "d34": 1,
            "d03": 0,
            "d04": 0,
            "dbeta": 0,
        }

    def test_by_name_index(self):
        for s in STRATA:
            assert STRATUM_BY_NAME[s.name] is s

    def test_solve_quads(self):
        assert SOLVE_QUADS["gw:p333"] == (("x2", "x2", "y1", "z1"),)
        assert SOLVE_QUADS["gw:p442"] == (("x3", "x2", "y1", "z1"),)
        assert SOLVE_QUADS["gw:p632"] == (("x5", "x2", "y1", "z1"),)
        for theory in ("fjrw:p8", "fjrw:x9t", "fjrw:j10t"):
            assert len(SOLVE_QUADS[theory]) == 2


class TestOrbifoldLineLadder:
    @pytest.mark.parametrize("theory", sorted(GW_GOLDEN))
    def test_one_point_series(self, engines, theory):
        eng = engines(theory, 6, 6)
        solver = Genus1Solver(eng)
        assert [solver.value_gw(1, d) for d in range(6)] == GW_GOLDEN[theory]

    def test_multi_point_values_follow_divisor_rule(self, engines):
        eng = engines("gw:p333", 6, 6)
        solver = Genus1Solver(eng)
        for n in (2, 3, 4):
            assert solver.value_gw(n, 0) == 0
            for d in (1, 2, 3):
                assert solver.value_gw(n, d) == d ** (n - 1) * solver.value_gw(1, d)

    def test_build_table(self, engines):
        eng = engines("gw:p333", 6, 6)
        table = build_g1_table(eng, 2, 4)
        assert table[(1, 0)] == Fraction(-1, 24)
        assert table[(1, 3)] == 1
        assert table[(2, 3)] == 3
        assert set(table) == {(n, d) for n in (1, 2) for d in range(5)}

    def test_series_wrapper(self, engines):
        s = g1_series("gw:p333", 1, 5, engine=engines("gw:p333", 6, 6))
        assert s.coefficients() == GW_GOLDEN["gw:p333"]
        s2 = g1_series("gw:p333", 2, 4, engine=engines("gw:p333", 6, 6))
        assert s2.coefficients() == [0, 0, 0, 3, 0]


class TestSingularityLadder:
    @pytest.mark.parametrize("theory", sorted(FJRW_GOLDEN))
    def test_all_top_values(self, engines, theory):
        eng = engines(theory, 8, 0)
        solver = Genus1Solver(eng)
        assert [solver.value_fjrw(n) for n in range(1, 5)] == FJRW_GOLDEN[theory]

    def test_series_wrapper(self, engines):
        vals = g1_series("fjrw:p8", 4, engine=engines("fjrw:p8", 8, 0))
        assert vals == FJRW_GOLDEN["fjrw:p8"]

    @pytest.mark.parametrize("theory", sorted(FJRW_GOLDEN))
    def test_d34_unknown_coefficient(self, engines, theory):
        # coefficient of the one-point genus-1 unknown inside the d34 stratum
        expected = {
            "fjrw:p8": Fraction(4, 3),
            "fjrw:x9t": Fraction(-2, 3),
            "fjrw:j10t": Fraction(4, 3),
        }[theory]
        eng = engines(theory, 8, 0)
        const, coef = _stratum_affine(
            eng, STRATUM_BY_NAME["d34"], SOLVE_QUADS[theory][0], 0, None, {}, (1, None)
        )
        assert const == 0
        assert coef == expected


class TestStratumContributions:
    @pytest.mark.parametrize("theory", sorted(GW_GOLDEN))
    def test_ladder_strata_vanish_on_chosen_quads(self, engines, theory):
        eng = engines(theory, 6, 6)
        table = build_g1_table(eng, 1, 3)
        quad = SOLVE_QUADS[theory][0]
        for name in ("d22", "d23", "d24"):
            for degree in range(4):
                assert (
                    stratum_contribution(eng, name, quad, 0, degree, table) == 0
                ), (name, degree)

    def test_missing_dependency(self, engines):
        eng = engines("gw:p333", 6, 6)
        with pytest.raises(MissingDependency):
            getzler_residual(eng, SOLVE_QUADS["gw:p333"][0], 0, 2, table={})


class TestResidualAfterSolve:
    @pytest.mark.parametrize("theory", sorted(GW_GOLDEN))
    def test_orbifold_lines(self, engines, theory):
        eng = engines(theory, 6, 6)
        table = build_g1_table(eng, 3, 3)
        quad = SOLVE_QUADS[theory][0]
        for k in (0, 1, 2):
            for degree in range(4):
                assert (
                    getzler_residual(eng, quad, k, degree, table) == 0
                ), (k, degree)

    @pytest.mark.parametrize("theory", sorted(FJRW_GOLDEN))
    def test_singularities_both_quads(self, engines, theory):
        eng = engines(theory, 8, 0)
        table = build_g1_table(eng, 4, None)
        for quad in SOLVE_QUADS[theory]:
            for k in (0, 1, 2):
                assert getzler_residual(eng, quad, k, table=table) == 0, (quad, k)

    def test_top_heavy_instances_are_live(self, engines):
        # these two instances are the only small ones where the chain
        # stratum with a distinguished leg on the genus-1 vertex survives;
        # they pin its coefficient in the relation
        eng8 = engines("fjrw:p8", 8, 0)
        table8 = build_g1_table(eng8, 4, None)
        assert getzler_residual(eng8, ("ex", "ex", "ex", "exyz"), 2, table=table8) == 0
        engj = engines("fjrw:j10t", 8, 0)
        tablej = build_g1_table(engj, 4, None)
        assert getzler_residual(engj, ("e8", "e8", "e8", "e10"), 2, table=tablej) == 0


class TestGetzlerSolve:
    def test_matches_ladder(self, engines):
        eng = engines("gw:p333", 6, 6)
        assert getzler_solve(eng, (1, 0)) == Fraction(-1, 24)
        assert getzler_solve(eng, (1, 3)) == 1

    def test_fjrw_target_forms(self, engines):
        eng = engines("fjrw:p8", 8, 0)
        assert getzler_solve(eng, 3) == Fraction(1, 324)
        assert getzler_solve(eng, (3, None)) == Fraction(1, 324)

    def test_insertion_ordering_irrelevant(self, engines):
        # the residual vanishes for every ordering of the distinguished marks
        eng = engines("fjrw:x9t", 8, 0)
        table = build_g1_table(eng, 3, None)
        for quad in set(permutations(SOLVE_QUADS["fjrw:x9t"][0])):
            assert getzler_residual(eng, quad, 0, table=table) == 0
        eng333 = engines("gw:p333", 6, 6)
        table333 = build_g1_table(eng333, 1, 2)
        for quad in set(permutations(SOLVE_QUADS["gw:p333"][0])):
            assert getzler_residual(eng333, quad, 0, 2, table333) == 0

    def test_solved_values_survive_insertion_reordering(self, engines):
        for theory in sorted(FJRW_GOLDEN):
            eng = engines(theory, 8, 0)
            base = Genus1Solver(eng)
            shuffled = Genus1Solver(eng)
            q0, q1 = base.quads
            shuffled.quads = (tuple(reversed(q0)), q1[1:] + q1[:1])
            assert [shuffled.value_fjrw(n) for n in (1, 2, 3)] == [
                base.value_fjrw(n) for n in (1, 2, 3)
            ]

    def test_degenerate_coefficient(self, engines):
        eng = engines("gw:p333", 6, 6)
        solver = Genus1Solver(eng)
        solver._ensure_gw(1)
        # an unknown the relation instance never references
        with pytest.raises(DegenerateCoefficient):
            solver._solve(SOLVE_QUADS["gw:p333"][0], 0, 1, (1, 5))
