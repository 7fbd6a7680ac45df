import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from maschke_kit.exactlin import (
    AffineSolution,
    ConstraintSystem,
    FieldSpec,
    Matrix,
    Subspace,
    Tensor3,
    flip_matrix,
    kernel,
    kron,
    membership,
    quotient_space,
    rref,
    solve_affine,
    unit_vec,
    zero_vec,
)

QQ = FieldSpec.rationals()
F2 = FieldSpec.gf(2)
F3 = FieldSpec.gf(3)
F5 = FieldSpec.gf(5)

FIELDS = [QQ, F2, F3, F5, FieldSpec.gf(7)]


def brute_force_solutions(field, m, b):
    """Enumerate all solutions of m.x = b over a small prime field."""
    p = field.characteristic
    sols = []
    for cand in itertools.product(range(p), repeat=m.cols):
        if m.apply(cand) == tuple(field.coerce(x) for x in b):
            sols.append(cand)
    return sols


class TestFieldSpec:
    def test_rationals(self):
        assert QQ.kind == "Q"
        assert QQ.coerce("3/2") == Fraction(3, 2)
        assert QQ.format_scalar(Fraction(-3, 2)) == "-3/2"
        assert QQ.parse_scalar("2") == 2

    def test_prime_field(self):
        assert F5.coerce(7) == 2
        assert F5.inv(2) == 3
        assert F5.coerce(Fraction(1, 2)) == 3
        assert F5.format_scalar(9) == "4"

    def test_nonprime_rejected(self):
        for bad in (1, 4, 6, 9, 2**31):
            with pytest.raises(ValueError):
                FieldSpec.gf(bad)

    def test_large_prime_ok(self):
        FieldSpec.gf(2**31 - 1)

    def test_denominator_vanishing_mod_p(self):
        with pytest.raises(ValueError):
            F2.coerce(Fraction(1, 2))


class TestMatrix:
    def test_mixed_field_rejected(self):
        a = Matrix.identity(QQ, 2)
        b = Matrix.identity(F2, 2)
        with pytest.raises(ValueError):
            a @ b
        with pytest.raises(ValueError):
            a + b
        with pytest.raises(ValueError):
            kron(a, b)

    def test_matmul_and_apply(self):
        a = Matrix.from_rows(QQ, [[1, 2], [3, 4]])
        b = Matrix.from_rows(QQ, [[0, 1], [1, 0]])
        assert (a @ b).to_rows() == [[2, 1], [4, 3]]
        assert a.apply((1, 1)) == (3, 7)

    def test_transpose_roundtrip(self):
        a = Matrix.from_rows(F3, [[1, 2, 0], [0, 1, 1]])
        assert a.transpose().transpose() == a

    def test_empty_shapes(self):
        a = Matrix.zeros(QQ, 0, 3)
        b = Matrix.zeros(QQ, 3, 0)
        assert (a @ b.transpose().transpose()).rows == 0
        assert a.apply((1, 2, 3)) == ()


class TestRref:
    def test_zero_matrix(self):
        m = Matrix.zeros(QQ, 2, 2)
        red, piv = rref(m)
        assert red == m and piv == ()

    def test_identity(self):
        m = Matrix.identity(QQ, 2)
        red, piv = rref(m)
        assert red == m and piv == (0, 1)

    def test_rank_one(self):
        # hand Gaussian elimination: [[2,4],[1,2]] -> [[1,2],[0,0]]
        m = Matrix.from_rows(QQ, [[2, 4], [1, 2]])
        red, piv = rref(m)
        assert red.to_rows() == [[1, 2], [0, 0]]
        assert piv == (0,)

    @given(st.integers(1, 4), st.integers(1, 4), st.data())
    @settings(max_examples=60, deadline=None)
    def test_idempotent(self, nr, nc, data):
        field = data.draw(st.sampled_from(FIELDS))
        hi = 6 if field.characteristic == 0 else field.characteristic
        rows = data.draw(
            st.lists(st.lists(st.integers(-hi, hi), min_size=nc, max_size=nc),
                     min_size=nr, max_size=nr))
        m = Matrix.from_rows(field, rows)
        red, piv = rref(m)
        red2, piv2 = rref(red)
        assert red2 == red and piv2 == piv


class TestKernel:
    def test_identity_kernel_zero(self):
        assert kernel(Matrix.identity(QQ, 3)).dim == 0

    def test_zero_matrix_full_kernel(self):
        k = kernel(Matrix.zeros(QQ, 2, 3))
        assert k.dim == 3

    def test_gf2_line(self):
        # enumerate the 4 vectors of GF(2)^2: kernel of [1 1] is {00, 11}
        m = Matrix.from_rows(F2, [[1, 1]])
        k = kernel(m)
        assert k.dim == 1
        assert k.contains((1, 1))
        assert not k.contains((1, 0))
        enumerated = [v for v in itertools.product(range(2), repeat=2)
                      if m.apply(v) == (0,)]
        assert enumerated == [(0, 0), (1, 1)]

    @given(st.integers(1, 4), st.integers(1, 4), st.data())
    @settings(max_examples=60, deadline=None)
    def test_rank_nullity(self, nr, nc, data):
        field = data.draw(st.sampled_from(FIELDS))
        hi = 6 if field.characteristic == 0 else field.characteristic
        rows = data.draw(
            st.lists(st.lists(st.integers(-hi, hi), min_size=nc, max_size=nc),
                     min_size=nr, max_size=nr))
        m = Matrix.from_rows(field, rows)
        _, piv = rref(m)
        assert len(piv) + kernel(m).dim == nc


class TestSolveAffine:
    def test_identity_system(self):
        sol = solve_affine(Matrix.identity(QQ, 1), (5,))
        assert sol.particular == (Fraction(5),)
        assert sol.homogeneous.dim == 0

    def test_gf2_affine_line(self):
        sol = solve_affine(Matrix.from_rows(F2, [[1, 1]]), (1,))
        assert sol.particular == (1, 0)
        assert sol.homogeneous.basis.to_rows() == [[1, 1]]

    def test_infeasible(self):
        assert solve_affine(Matrix.from_rows(QQ, [[0]]), (1,)) is None

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            solve_affine(Matrix.identity(QQ, 2), (1,))

    @given(st.integers(1, 3), st.integers(1, 4), st.data())
    @settings(max_examples=40, deadline=None)
    def test_matches_enumeration_over_gf(self, nr, nc, data):
        field = data.draw(st.sampled_from([F2, F3, F5, FieldSpec.gf(7)]))
        p = field.characteristic
        rows = data.draw(
            st.lists(st.lists(st.integers(0, p - 1), min_size=nc, max_size=nc),
                     min_size=nr, max_size=nr))
        b = data.draw(st.lists(st.integers(0, p - 1), min_size=nr, max_size=nr))
        m = Matrix.from_rows(field, rows)
        sol = solve_affine(m, tuple(b))
        enumerated = brute_force_solutions(field, m, b)
        if sol is None:
            assert enumerated == []
        else:
            assert m.apply(sol.particular) == tuple(field.coerce(x) for x in b)
            for i in range(sol.homogeneous.dim):
                assert m.apply(sol.homogeneous.basis.row(i)) == zero_vec(field, nr)
            # solution-set size: p ** (kernel dim)
            assert len(enumerated) == p ** sol.homogeneous.dim
            assert tuple(sol.particular) in enumerated

    @given(st.integers(1, 4), st.integers(1, 4), st.data())
    @settings(max_examples=50, deadline=None)
    def test_verified_exactly(self, nr, nc, data):
        field = data.draw(st.sampled_from(FIELDS))
        hi = 6 if field.characteristic == 0 else field.characteristic
        rows = data.draw(
            st.lists(st.lists(st.integers(-hi, hi), min_size=nc, max_size=nc),
                     min_size=nr, max_size=nr))
        b = data.draw(st.lists(st.integers(-hi, hi), min_size=nr, max_size=nr))
        m = Matrix.from_rows(field, rows)
        sol = solve_affine(m, tuple(field.coerce(x) for x in b))
        if sol is not None:
            assert m.apply(sol.particular) == tuple(field.coerce(x) for x in b)
            for i in range(sol.homogeneous.dim):
                assert m.apply(sol.homogeneous.basis.row(i)) == zero_vec(field, nr)
        else:
            red, piv = rref(m)
            aug = Matrix.from_rows(field, [list(m.row(i)) + [b[i]] for i in range(nr)])
            _, piv_aug = rref(aug)
            assert len(piv_aug) != len(piv)


class TestMembership:
    def test_zero_in_anything(self):
        s = Subspace.from_rows(QQ, 2, [[1, 1]])
        assert membership((0, 0), s)

    def test_line_membership(self):
        s = Subspace.from_rows(QQ, 2, [[1, 1]])
        assert not membership((1, 0), s)
        assert membership((2, 2), s)

    def test_dimension_mismatch(self):
        s = Subspace.from_rows(QQ, 2, [[1, 1]])
        with pytest.raises(ValueError):
            membership((1, 0, 0), s)


class TestQuotientSpace:
    def test_trivial_relations(self):
        q = quotient_space(3, Subspace.zero(QQ, 3))
        assert q.projection == Matrix.identity(QQ, 3)
        assert q.section == Matrix.identity(QQ, 3)

    def test_line_quotient(self):
        rel = Subspace.from_rows(QQ, 2, [[1, -1]])
        q = quotient_space(2, rel)
        assert q.dim == 1
        assert q.projection @ q.section == Matrix.identity(QQ, 1)
        for i in range(rel.dim):
            assert q.project(rel.basis.row(i)) == zero_vec(QQ, 1)

    def test_full_relations(self):
        rel = Subspace.from_rows(QQ, 2, [[1, 0], [0, 1]])
        q = quotient_space(2, rel)
        assert q.dim == 0

    @given(st.integers(1, 5), st.data())
    @settings(max_examples=40, deadline=None)
    def test_projection_section_laws(self, amb, data):
        field = data.draw(st.sampled_from(FIELDS))
        hi = 4 if field.characteristic == 0 else field.characteristic
        nrel = data.draw(st.integers(0, amb))
        rows = data.draw(
            st.lists(st.lists(st.integers(-hi, hi), min_size=amb, max_size=amb),
                     min_size=nrel, max_size=nrel))
        rel = Subspace.from_rows(field, amb, rows) if rows else Subspace.zero(field, amb)
        q = quotient_space(amb, rel)
        assert q.dim == amb - rel.dim
        assert q.projection @ q.section == Matrix.identity(field, q.dim)
        assert kernel(q.projection).basis == rel.basis


class TestKron:
    def test_identities(self):
        assert kron(Matrix.identity(QQ, 2), Matrix.identity(QQ, 3)) == Matrix.identity(QQ, 6)

    def test_zero_factor(self):
        a = Matrix.from_rows(QQ, [[1, 2]])
        z = Matrix.zeros(QQ, 2, 2)
        assert kron(a, z).is_zero()

    def test_direct_expansion(self):
        a = Matrix.from_rows(QQ, [[1, 2]])
        b = Matrix.from_rows(QQ, [[3], [4]])
        assert kron(a, b).to_rows() == [[3, 6], [4, 8]]

    def test_flip_is_involution(self):
        fl = flip_matrix(QQ, 2, 3)
        fl2 = flip_matrix(QQ, 3, 2)
        assert fl2 @ fl == Matrix.identity(QQ, 6)

    def test_mixed_product_law(self):
        a = Matrix.from_rows(QQ, [[1, 1], [0, 2]])
        b = Matrix.from_rows(QQ, [[2, 0], [1, 1]])
        c = Matrix.from_rows(QQ, [[1], [3]])
        d = Matrix.from_rows(QQ, [[0], [1]])
        assert kron(a @ c, b @ d) == kron(a, b) @ kron(c, d)


class TestTensor3:
    def test_shape_and_access(self):
        t = Tensor3.from_nested(QQ, [[[1, 0], [0, 0]], [[0, 0], [0, 1]]])
        assert t.at(0, 0, 0) == 1 and t.at(1, 1, 1) == 1
        assert set(t.nonzeros()) == {(0, 0, 0, Fraction(1)), (1, 1, 1, Fraction(1))}

    def test_with_entry(self):
        t = Tensor3.zeros(F3, 2, 2, 2)
        t2 = t.with_entry(1, 0, 1, 5)
        assert t2.at(1, 0, 1) == 2
        assert t.at(1, 0, 1) == 0


class TestConstraintSystem:
    def test_matches_dense_solver(self):
        m = Matrix.from_rows(QQ, [[1, 2, 3], [2, 4, 6], [0, 1, 1]])
        b = (1, 2, 0)
        dense = solve_affine(m, b)
        sys = ConstraintSystem(QQ, 3)
        sys.add_matrix_rows(m, b)
        sparse = sys.solve()
        assert dense.particular == sparse.particular
        assert dense.homogeneous.basis == sparse.homogeneous.basis

    def test_infeasible_detection(self):
        sys = ConstraintSystem(F3, 2)
        sys.add_row({0: 1, 1: 1}, 1)
        sys.add_row({0: 2, 1: 2}, 1)
        assert sys.solve() is None

    def test_no_vars(self):
        sys = ConstraintSystem(QQ, 0)
        sys.add_row({}, 0)
        sol = sys.solve()
        assert sol.particular == ()
        sys2 = ConstraintSystem(QQ, 0)
        sys2.add_row({}, 1)
        assert sys2.solve() is None

    def test_satisfied_by(self):
        sys = ConstraintSystem(QQ, 2)
        sys.add_row({0: 1, 1: 1}, 3)
        assert sys.satisfied_by((1, 2))
        assert not sys.satisfied_by((1, 1))

    @given(st.integers(1, 4), st.integers(1, 4), st.data())
    @settings(max_examples=40, deadline=None)
    def test_agrees_with_dense_on_random_systems(self, nr, nc, data):
        field = data.draw(st.sampled_from(FIELDS))
        hi = 5 if field.characteristic == 0 else field.characteristic
        rows = data.draw(
            st.lists(st.lists(st.integers(-hi, hi), min_size=nc, max_size=nc),
                     min_size=nr, max_size=nr))
        b = data.draw(st.lists(st.integers(-hi, hi), min_size=nr, max_size=nr))
        m = Matrix.from_rows(field, rows)
        b = tuple(field.coerce(x) for x in b)
        dense = solve_affine(m, b)
        sys = ConstraintSystem(field, nc)
        sys.add_matrix_rows(m, b)
        sparse = sys.solve()
        if dense is None:
            assert sparse is None
        else:
            assert sparse.particular == dense.particular
            assert sparse.homogeneous.basis == dense.homogeneous.basis


class TestSubspace:
    def test_coords_roundtrip(self):
        s = Subspace.from_rows(QQ, 3, [[1, 0, 2], [0, 1, -1]])
        v = (2, 3, 1)
        coords = s.coords(v)
        assert coords == (2, 3)
        rebuilt = [QQ.zero()] * 3
        for c, i in zip(coords, range(s.dim)):
            for j in range(3):
                rebuilt[j] += c * s.basis.at(i, j)
        assert tuple(rebuilt) == tuple(map(Fraction, v))

    def test_invalid_basis_rejected(self):
        with pytest.raises(ValueError):
            Subspace(2, Matrix.from_rows(QQ, [[2, 0]]))
        with pytest.raises(ValueError):
            Subspace(2, Matrix.from_rows(QQ, [[0, 1], [1, 0]]))


def test_unit_vec():
    assert unit_vec(QQ, 3, 1) == (0, 1, 0)
