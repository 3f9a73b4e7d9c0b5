"""Weight-graded CE cohomology: block machinery, both coefficient
modules, and the de Rham cross-check.

Size oracles: H^0 of the slice module must match the monomial counts of
the free graded ring on the chart's invariant generators (computed by an
independent knapsack count), and the regular module must have the
cohomology of a point.  Small blocks are pinned by hand.
"""

from fractions import Fraction

import pytest

from superslice.cohomology import (GradedComplex, build_ce_complex,
                                   cohomology_dims, cohomology_table,
                                   de_rham_check, odd_derivation,
                                   regular_ce_complex, slice_ce_complex,
                                   weighted_monomial_counts,
                                   _gauge_action_fields)
from superslice.liealg import (build_osp_1_2, build_sl, dynkin_grading,
                               principal_nilpotent, sl2_triple_for)
from superslice.slice import gauge_fix
from superslice.supergroup import apply_derivation
from superslice.superpoly import PolyRing, Variable


def principal_setup(alg):
    f = principal_nilpotent(alg)
    triple = sl2_triple_for(alg, f)
    grading = dynkin_grading(alg, triple)
    return triple, grading


@pytest.fixture(scope="module")
def sl2_data():
    alg = build_sl(2)
    return (alg,) + principal_setup(alg)


@pytest.fixture(scope="module")
def sl3_data():
    alg = build_sl(3)
    return (alg,) + principal_setup(alg)


@pytest.fixture(scope="module")
def osp_data():
    alg = build_osp_1_2()
    return (alg,) + principal_setup(alg)


@pytest.fixture(scope="module")
def sl21_data():
    alg = build_sl(2, 1)
    return (alg,) + principal_setup(alg)


# -- regular coefficients --------------------------------------------------------


class TestRegular:
    def test_sl2_blocks_by_hand(self, sl2_data):
        alg, triple, grading = sl2_data
        cx = regular_ce_complex(alg, grading, max_weight=3)
        # one even coordinate x, one odd ghost ph, both of weight -1
        assert cx.block_basis(0, -2) == [((0, 1),)]
        assert cx.block_basis(1, -2) == [((1, 1),)]
        m = cx.d_matrix(0, -4)  # d(x^2) = 2 x ph
        assert m.nrows == 1 and m.ncols == 1 and m[0, 0] == Fraction(2)

    def test_sl2_point_cohomology(self, sl2_data):
        alg, triple, grading = sl2_data
        cx = regular_ce_complex(alg, grading, max_weight=3)
        table = cohomology_table(cx)
        for (k, w), dim in table.items():
            assert dim == (1 if (k == 0 and w == 0) else 0), (k, w)

    def test_heisenberg_point_cohomology(self, sl3_data):
        # positive part of sl3 = Heisenberg; all weights down to -4
        alg, triple, grading = sl3_data
        cx = regular_ce_complex(alg, grading, max_weight=4)
        table = cohomology_table(cx)
        weights = {w for _, w in table}
        assert {Fraction(0), Fraction(-2), Fraction(-4)} <= weights
        for (k, w), dim in table.items():
            assert dim == (1 if (k == 0 and w == 0) else 0), (k, w)

    def test_super_positive_parts(self, osp_data, sl21_data):
        for alg, triple, grading in (osp_data, sl21_data):
            cx = regular_ce_complex(alg, grading, max_weight=3)
            for (k, w), dim in cohomology_table(cx).items():
                assert dim == (1 if (k == 0 and w == 0) else 0), (k, w)


# -- slice-module coefficients ---------------------------------------------------


class TestSliceModule:
    def test_sl3_h0_counts_invariant_monomials(self, sl3_data):
        alg, triple, grading = sl3_data
        chart = gauge_fix(alg, triple, grading)
        cx = slice_ce_complex(chart, max_weight=6)
        gens = [(v.wt2, v.parity) for v in chart.slice_ring.variables]
        want = weighted_monomial_counts(gens, 12)
        for n2 in range(0, 13):
            got = cx.cohomology_dim(0, Fraction(n2, 2))
            assert got == want.get(n2, 0), n2
        # spot values: generators at weights 2 and 3, and both s1^3, s2^2
        # plus s1 s2... weight 6 holds s1^3 and s2^2
        assert cx.cohomology_dim(0, 6) == 2

    def test_osp_h0_includes_odd_generator(self, osp_data):
        alg, triple, grading = osp_data
        chart = gauge_fix(alg, triple, grading)
        cx = slice_ce_complex(chart, max_weight=3)
        assert cx.cohomology_dim(0, Fraction(3, 2)) == 1
        assert cx.cohomology_dim(0, 2) == 1
        assert cx.cohomology_dim(0, 3) == 0  # odd square is zero
        gens = [(v.wt2, v.parity) for v in chart.slice_ring.variables]
        want = weighted_monomial_counts(gens, 6)
        for n2 in range(0, 7):
            assert cx.cohomology_dim(0, Fraction(n2, 2)) == want.get(n2, 0)

    def test_sl21_h0_counts(self, sl21_data):
        alg, triple, grading = sl21_data
        chart = gauge_fix(alg, triple, grading)
        cx = slice_ce_complex(chart, max_weight=3)
        gens = [(v.wt2, v.parity) for v in chart.slice_ring.variables]
        want = weighted_monomial_counts(gens, 6)
        got = {n2: cx.cohomology_dim(0, Fraction(n2, 2)) for n2 in range(7)}
        assert got == {n2: want.get(n2, 0) for n2 in range(7)}

    def test_gauge_fields_are_a_homomorphism(self, osp_data):
        alg, triple, grading = osp_data
        chart = gauge_fix(alg, triple, grading)
        m = len(chart.coord_indices)
        ring = PolyRing([Variable(v.name, v.parity, wt2=v.wt2)
                         for v in chart.ring.variables[:m]])
        fields = _gauge_action_fields(chart, ring)
        pos_idx = grading.positive_indices()
        var_idx = list(range(m))

        def compose(fa, fb):
            return [apply_derivation(fa, var_idx, comp) for comp in fb]

        for a, ia in enumerate(pos_idx):
            for b, ib in enumerate(pos_idx):
                sgn = -1 if (alg.parities[ia] and alg.parities[ib]) else 1
                ab, ba = compose(fields[a], fields[b]), \
                    compose(fields[b], fields[a])
                comm = [x - y * Fraction(sgn) for x, y in zip(ab, ba)]
                br = alg.bracket_num(alg.basis_vector(ia),
                                     alg.basis_vector(ib))
                want = [ring.zero() for _ in range(m)]
                for k, c in enumerate(br):
                    if c:
                        want = [w + x * c
                                for w, x in zip(want, fields[pos_idx.index(k)])]
                assert all((x - y).is_zero() for x, y in zip(comm, want))

    def test_truncation_consistency(self, sl3_data):
        alg, triple, grading = sl3_data
        chart = gauge_fix(alg, triple, grading)
        small = slice_ce_complex(chart, max_weight=3)
        large = slice_ce_complex(chart, max_weight=4)
        for n2 in range(0, 7):
            for k in range(0, small.max_degree(n2) + 1):
                w = Fraction(n2, 2)
                assert small.cohomology_dim(k, w) == large.cohomology_dim(k, w)

    def test_block_outside_truncation(self, osp_data):
        alg, triple, grading = osp_data
        chart = gauge_fix(alg, triple, grading)
        cx = slice_ce_complex(chart, max_weight=2)
        with pytest.raises(ValueError, match="outside the truncation"):
            cx.cohomology_dim(0, 3)
        with pytest.raises(ValueError, match="outside the truncation"):
            cx.cohomology_dim(0, -1)  # wrong sign for this complex


# -- dispatcher and guards -------------------------------------------------------


class TestBuildDispatch:
    def test_regular_and_slice_alias(self, osp_data):
        alg, triple, grading = osp_data
        chart = gauge_fix(alg, triple, grading)
        cx = build_ce_complex(alg, grading, "regular", max_weight=2)
        assert cohomology_dims(cx, 0, 0) == 1
        sx = build_ce_complex(alg, grading, "slice", max_weight=2, chart=chart)
        assert cohomology_dims(sx, 0, 2) == 1

    def test_slice_needs_chart(self, osp_data):
        alg, triple, grading = osp_data
        with pytest.raises(ValueError, match="need a chart"):
            build_ce_complex(alg, grading, "slice-module", max_weight=2)

    def test_unknown_module(self, osp_data):
        alg, triple, grading = osp_data
        with pytest.raises(ValueError, match="unknown coefficient"):
            build_ce_complex(alg, grading, "adjoint", max_weight=2)

    def test_non_half_integer_weight_rejected(self, osp_data):
        alg, triple, grading = osp_data
        cx = build_ce_complex(alg, grading, "regular", max_weight=2)
        with pytest.raises(ValueError, match="half-integer"):
            cx.cohomology_dim(0, Fraction(1, 3))

    def test_square_trap(self):
        # d(x) = ph, d(ph) = x is not a differential: d^2(x) = x
        ring = PolyRing([Variable("x", 0, wt2=-2), Variable("ph", 1, wt2=-2)])
        images = {0: ring.gen(1), 1: ring.gen(0)}
        with pytest.raises(ValueError, match=r"d\^2 != 0"):
            GradedComplex(ring, images, [0], [1], 6)

    def test_mixed_weight_signs_rejected(self):
        ring = PolyRing([Variable("x", 0, wt2=-2), Variable("ph", 1, wt2=2)])
        with pytest.raises(ValueError, match="share a sign"):
            GradedComplex(ring, {}, [0], [1], 6)

    def test_missing_weight_rejected(self):
        ring = PolyRing([Variable("x", 0), Variable("ph", 1, wt2=-2)])
        with pytest.raises(ValueError, match="nonzero weight"):
            GradedComplex(ring, {}, [0], [1], 6)


# -- de Rham cross-check ---------------------------------------------------------


class TestDeRham:
    @pytest.mark.parametrize("p,q", [(1, 0), (0, 1), (1, 1), (2, 1)])
    def test_poincare(self, p, q):
        table = de_rham_check(p, q, max_degree=4)
        for (k, deg), dim in table.items():
            assert dim == (1 if (k, deg) == (0, 0) else 0), (k, deg)

    def test_odd_line_differential_by_hand(self):
        # on C^{0|1}: d(th . dth^m) = -dth^{m+1}, so every positive-degree
        # block is exact
        ring = PolyRing([Variable("th", 1, wt2=2), Variable("dth", 0, wt2=2)])
        d = odd_derivation(ring, {0: -ring.gen(1)})
        th, dth = ring.gen(0), ring.gen(1)
        assert d(th) == -dth
        assert d(th * dth) == -(dth * dth)
        assert d(dth * dth).is_zero()


# -- counting helper -------------------------------------------------------------


class TestCounts:
    def test_single_even_generator(self):
        assert weighted_monomial_counts([(2, 0)], 8) == {
            0: 1, 2: 1, 4: 1, 6: 1, 8: 1}

    def test_single_odd_generator(self):
        assert weighted_monomial_counts([(3, 1)], 8) == {0: 1, 3: 1}

    def test_mixed(self):
        got = weighted_monomial_counts([(2, 0), (3, 1)], 7)
        assert got == {0: 1, 2: 1, 3: 1, 4: 1, 5: 1, 6: 1, 7: 1}

    def test_bad_weight(self):
        with pytest.raises(ValueError, match="positive"):
            weighted_monomial_counts([(0, 0)], 4)
