from fractions import Fraction

import pytest

from maschke_kit.exactlin import FieldSpec, Matrix, membership, unit_vec, vec_sub
from maschke_kit.examples import (
    cyclic_group,
    dual_group_algebra,
    dual_number_algebra,
    ground_field_algebra,
    group_algebra,
    pair_hopf_algebroid,
    split_pair_algebra,
)
from maschke_kit.hopfalgd import (
    BULLET,
    CIRC,
    HopfAlgebroidPresentation,
    check_hopf_algebroid,
    circ_relations,
    ideal_subspace,
    integral_system_hgd,
    solve_cointegral_hgd,
    solve_coseparability_hgd,
    solve_integral_hgd,
    solve_separability_hgd,
    tensor_over_R,
)

QQ = FieldSpec.rationals()
F2 = FieldSpec.gf(2)
F3 = FieldSpec.gf(3)


def hopf_algebra_as_algebroid(w) -> HopfAlgebroidPresentation:
    """Base k: source and target both the unit, comultiplication as lift."""
    return HopfAlgebroidPresentation(
        base=ground_field_algebra(w.field),
        total=w.algebra,
        src=w.algebra.unit_matrix(),
        tgt=w.algebra.unit_matrix(),
        comult_lift=w.coalgebra.comult_matrix(),
        counit=w.coalgebra.counit_matrix(),
        antipode=w.antipode,
    )


BASES = (ground_field_algebra, dual_number_algebra, split_pair_algebra)


class TestValidation:
    def test_pair_algebroids_valid(self):
        for field in (QQ, F2):
            for mk in BASES:
                assert check_hopf_algebroid(pair_hopf_algebroid(mk(field))).ok()

    def test_identity_antipode_fails_composite_at_one_tensor_x(self):
        h = pair_hopf_algebroid(dual_number_algebra(QQ))
        broken = HopfAlgebroidPresentation(
            h.base, h.total, h.src, h.tgt, h.comult_lift, h.counit,
            Matrix.identity(QQ, h.total.dim))
        report = check_hopf_algebroid(broken)
        fails = [f for f in report.failures if f.law == "antipode left composite"]
        assert any(1 in f.witness for f in fails)   # basis element 1 (x) x

    def test_group_algebra_as_algebroid_valid(self):
        for field in (QQ, F3):
            w = group_algebra(cyclic_group(2), field)
            assert check_hopf_algebroid(hopf_algebra_as_algebroid(w)).ok()

    def test_mutated_counit_reported(self):
        h = pair_hopf_algebroid(split_pair_algebra(QQ))
        ent = list(h.counit.entries)
        ent[0] = QQ.coerce(5)
        broken = HopfAlgebroidPresentation(
            h.base, h.total, h.src, h.tgt, h.comult_lift,
            Matrix(QQ, h.counit.rows, h.counit.cols, tuple(ent)), h.antipode)
        assert not check_hopf_algebroid(broken).ok()


class TestQuotients:
    def test_trivial_base(self):
        h = pair_hopf_algebroid(ground_field_algebra(QQ))
        assert tensor_over_R(h, CIRC).dim == 1
        assert tensor_over_R(h, BULLET).dim == 1
        assert ideal_subspace(h).dim == 0

    def test_dual_number_dimensions(self):
        h = pair_hopf_algebroid(dual_number_algebra(QQ))
        assert tensor_over_R(h, CIRC).dim == 8      # dim R^3
        assert tensor_over_R(h, BULLET).dim == 4    # A (x)_A A = A
        assert ideal_subspace(h).dim == 2

    def test_base_k_ideal_is_zero(self):
        w = group_algebra(cyclic_group(3), QQ)
        assert ideal_subspace(hopf_algebra_as_algebroid(w)).dim == 0

    def test_bad_product_name(self):
        h = pair_hopf_algebroid(ground_field_algebra(QQ))
        with pytest.raises(ValueError):
            tensor_over_R(h, "star")

    def test_ideal_is_two_sided(self):
        for mk in (dual_number_algebra, split_pair_algebra):
            h = pair_hopf_algebroid(mk(QQ))
            ideal = ideal_subspace(h)
            n = h.total.dim
            for i in range(ideal.dim):
                v = ideal.basis.row(i)
                for k in range(n):
                    e = unit_vec(QQ, n, k)
                    assert membership(h.total.mult_vec(e, v), ideal)
                    assert membership(h.total.mult_vec(v, e), ideal)


class TestIntegrals:
    def test_unit_element_is_left_integral_of_pair_algebroid(self):
        for field in (QQ, F2):
            for mk in BASES:
                h = pair_hopf_algebroid(mk(field))
                one = tuple(h.total.unit)
                assert integral_system_hgd(h, "left", True).satisfied_by(one)
                sol = solve_integral_hgd(h, "left")
                assert sol is not None

    def test_integral_membership_verified(self):
        h = pair_hopf_algebroid(dual_number_algebra(QQ))
        sol = solve_integral_hgd(h, "left")
        ideal = ideal_subspace(h)
        n = h.total.dim
        for i in range(n):
            e = unit_vec(QQ, n, i)
            lhs = h.total.mult_vec(e, sol.element)
            rhs = h.total.mult_vec(h.src.apply(h.counit.apply(e)), sol.element)
            assert membership(vec_sub(QQ, lhs, rhs), ideal)

    def test_group_algebra_reduction(self):
        h = hopf_algebra_as_algebroid(group_algebra(cyclic_group(3), QQ))
        sol = solve_integral_hgd(h, "left")
        third = Fraction(1, 3)
        assert sol.element == (third, third, third)
        assert solve_integral_hgd(
            hopf_algebra_as_algebroid(group_algebra(cyclic_group(3), F3)),
            "left") is None


class TestCointegrals:
    def test_group_algebra_counit_dual(self):
        for field in (QQ, F2):
            h = hopf_algebra_as_algebroid(group_algebra(cyclic_group(2), field))
            sol = solve_cointegral_hgd(h, "left")
            assert sol is not None
            assert sol.map.to_rows() == [[1, 0]]    # delta_e

    def test_dual_group_algebra_obstruction(self):
        h = hopf_algebra_as_algebroid(dual_group_algebra(cyclic_group(3), F3))
        assert solve_cointegral_hgd(h, "left") is None
        assert solve_cointegral_hgd(h, "right") is None

    def test_pair_algebroid_split_functional_certificate(self):
        # nu(x (x) y) = x phi(y) with phi the coefficient of the unit entry;
        # a normalized left cointegral for every commutative base
        from maschke_kit.hopfalgd import cointegral_system_hgd
        for mk in BASES:
            h = pair_hopf_algebroid(mk(QQ))
            d = h.base.dim
            n = h.total.dim
            f = h.field
            ent = [f.zero()] * (d * n)
            for a in range(d):
                for b in range(d):
                    # phi picks the coefficient of 1 in the second leg
                    if b == 0:
                        for r in range(d):
                            ent[r * n + (a * d + b)] = f.one() if r == a else f.zero()
            cand = tuple(ent)
            assert cointegral_system_hgd(h, "left", True).satisfied_by(cand)


class TestSeparability:
    def test_pair_algebroid_always_separable_over_bullet(self):
        # includes the non-semisimple total algebra over the dual numbers
        for field in (QQ, F2):
            for mk in BASES:
                assert solve_separability_hgd(pair_hopf_algebroid(mk(field))) is not None

    def test_plain_algebra_separability_can_fail_while_bullet_succeeds(self):
        from maschke_kit.finalg import solve_separability
        h = pair_hopf_algebroid(dual_number_algebra(QQ))
        assert solve_separability(h.total) is None       # nilpotents in A
        assert solve_separability_hgd(h) is not None     # but A (x)_{R(x)R} A splits

    def test_group_algebra_reduction(self):
        assert solve_separability_hgd(
            hopf_algebra_as_algebroid(group_algebra(cyclic_group(2), F2))) is None
        assert solve_separability_hgd(
            hopf_algebra_as_algebroid(group_algebra(cyclic_group(2), QQ))) is not None


class TestCoseparability:
    def test_group_algebra_reduction(self):
        for field in (QQ, F2):
            h = hopf_algebra_as_algebroid(group_algebra(cyclic_group(2), field))
            assert solve_coseparability_hgd(h) is not None

    def test_dual_group_algebra_obstruction(self):
        h = hopf_algebra_as_algebroid(dual_group_algebra(cyclic_group(3), F3))
        assert solve_coseparability_hgd(h) is None


def corpus():
    for field in (QQ, F2):
        for mk in BASES:
            yield pair_hopf_algebroid(mk(field))
    for field in (QQ, F2, F3):
        yield hopf_algebra_as_algebroid(group_algebra(cyclic_group(2), field))
        yield hopf_algebra_as_algebroid(group_algebra(cyclic_group(3), field))
        yield hopf_algebra_as_algebroid(dual_group_algebra(cyclic_group(3), field))


class TestEquivalences:
    def test_integral_sides_match_separability(self):
        for h in corpus():
            left = solve_integral_hgd(h, "left") is not None
            right = solve_integral_hgd(h, "right") is not None
            sep = solve_separability_hgd(h) is not None
            assert left == right == sep

    def test_cointegral_sides_match_coseparability(self):
        for h in corpus():
            left = solve_cointegral_hgd(h, "left") is not None
            right = solve_cointegral_hgd(h, "right") is not None
            cosep = solve_coseparability_hgd(h) is not None
            assert left == right == cosep


class TestCrossModuleAgreement:
    def test_base_k_algebroid_matches_weak_hopf_solvers(self):
        from maschke_kit.finalg import solve_coseparability, solve_separability
        from maschke_kit.weakhopf import solve_cointegral, solve_integral
        for field in (QQ, F2, F3):
            for w in (group_algebra(cyclic_group(2), field),
                      group_algebra(cyclic_group(3), field),
                      dual_group_algebra(cyclic_group(3), field)):
                h = hopf_algebra_as_algebroid(w)
                assert (solve_integral_hgd(h, "left") is not None) == \
                    (solve_integral(w, "left", "primed") is not None)
                assert (solve_cointegral_hgd(h, "left") is not None) == \
                    (solve_cointegral(w, "left", "primed") is not None)
                assert (solve_separability_hgd(h) is not None) == \
                    (solve_separability(w.algebra) is not None)
                assert (solve_coseparability_hgd(h) is not None) == \
                    (solve_coseparability(w.coalgebra) is not None)


class TestLiftIndependence:
    def test_relation_perturbations_change_nothing(self):
        h = pair_hopf_algebroid(dual_number_algebra(QQ))
        rel = circ_relations(h)
        n = h.total.dim
        baseline = (
            check_hopf_algebroid(h).ok(),
            solve_integral_hgd(h, "left") is not None,
            solve_cointegral_hgd(h, "left") is not None,
            solve_cointegral_hgd(h, "right") is not None,
            solve_coseparability_hgd(h) is not None,
        )
        assert baseline[0]
        for trial in range(3):
            ent = list(h.comult_lift.entries)
            row = rel.basis.row(trial % rel.dim)
            col = trial % n
            for rr in range(n * n):
                idx = rr * n + col
                ent[idx] = QQ.add(ent[idx], QQ.mul(QQ.coerce(trial + 1), row[rr]))
            perturbed = HopfAlgebroidPresentation(
                h.base, h.total, h.src, h.tgt,
                Matrix(QQ, n * n, n, tuple(ent)), h.counit, h.antipode)
            assert (
                check_hopf_algebroid(perturbed).ok(),
                solve_integral_hgd(perturbed, "left") is not None,
                solve_cointegral_hgd(perturbed, "left") is not None,
                solve_cointegral_hgd(perturbed, "right") is not None,
                solve_coseparability_hgd(perturbed) is not None,
            ) == baseline
