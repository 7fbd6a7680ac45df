"""Exact linear algebra over the rationals and prime fields.

This is the single numeric substrate for every validator and feasibility
solver in the package.  Scalars are plain Python values: ``fractions.Fraction``
(always in lowest terms) over Q, and ``int`` residues in ``[0, p)`` over GF(p).
No floating point is used anywhere.

Conventions, fixed globally:

* tensor bases are left-factor major: ``e_j (x) e_k`` has flat index
  ``j * dim_right + k``;
* particular solutions of affine systems set every free variable to zero;
* subspace bases are rows in reduced row echelon form with strictly
  increasing pivot columns.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

# Dense carriers are meant for desk scale; one flat coordinate axis may not
# exceed this.
MAX_AXIS = 4096

_MAX_PRIME = 2**31


def _is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for n < 3_215_031_751 (covers 2**31)."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """An exact coefficient field: Q (characteristic 0) or GF(p)."""

    characteristic: int

    def __post_init__(self):
        p = self.characteristic
        if p == 0:
            return
        if p >= _MAX_PRIME:
            raise ValueError(f"prime field modulus {p} exceeds 2**31")
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")

    @staticmethod
    def rationals() -> "FieldSpec":
        return FieldSpec(0)

    @staticmethod
    def gf(p: int) -> "FieldSpec":
        return FieldSpec(p)

    @property
    def kind(self) -> str:
        return "Q" if self.characteristic == 0 else "Fp"

    def __str__(self):
        return "Q" if self.characteristic == 0 else f"F{self.characteristic}"

    def zero(self):
        return Fraction(0) if self.characteristic == 0 else 0

    def one(self):
        return Fraction(1) if self.characteristic == 0 else 1

    def coerce(self, x):
        """Canonical scalar from an int, Fraction or text token."""
        if self.characteristic == 0:
            if isinstance(x, bool):
                raise TypeError("bool is not a scalar")
            if isinstance(x, (int, Fraction)):
                return Fraction(x)
            if isinstance(x, str):
                return Fraction(x)
            raise TypeError(f"cannot coerce {x!r} into Q")
        p = self.characteristic
        if isinstance(x, bool):
            raise TypeError("bool is not a scalar")
        if isinstance(x, int):
            return x % p
        if isinstance(x, Fraction):
            if x.denominator % p == 0:
                raise ValueError(f"denominator of {x} vanishes mod {p}")
            return x.numerator * pow(x.denominator, -1, p) % p
        if isinstance(x, str):
            return self.coerce(Fraction(x))
        raise TypeError(f"cannot coerce {x!r} into GF({p})")

    def add(self, a, b):
        if self.characteristic == 0:
            return a + b
        return (a + b) % self.characteristic

    def sub(self, a, b):
        if self.characteristic == 0:
            return a - b
        return (a - b) % self.characteristic

    def mul(self, a, b):
        if self.characteristic == 0:
            return a * b
        return a * b % self.characteristic

    def neg(self, a):
        if self.characteristic == 0:
            return -a
        return -a % self.characteristic

    def inv(self, a):
        if self.characteristic == 0:
            if a == 0:
                raise ZeroDivisionError("inverse of zero")
            return 1 / Fraction(a)
        if a % self.characteristic == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.characteristic)

    def parse_scalar(self, text: str):
        """Text encoding: "a/b" or "a" over Q, decimal digits over GF(p)."""
        if not isinstance(text, str):
            raise TypeError(f"scalar token must be text, got {text!r}")
        return self.coerce(text.strip())

    def format_scalar(self, value) -> str:
        return str(self.coerce(value))


def parse_scalar(field: FieldSpec, text: str):
    return field.parse_scalar(text)


def format_scalar(field: FieldSpec, value) -> str:
    return field.format_scalar(value)


def _check_axis(n: int, what: str):
    if not 0 <= n <= MAX_AXIS:
        raise ValueError(f"{what} {n} outside supported range 0..{MAX_AXIS}")


def _same_field(a, b):
    if a.field != b.field:
        raise ValueError("mixed-field input rejected")


# ---------------------------------------------------------------------------
# vectors: plain tuples of scalars


def zero_vec(field: FieldSpec, n: int) -> tuple:
    return (field.zero(),) * n


def unit_vec(field: FieldSpec, n: int, i: int) -> tuple:
    z, o = field.zero(), field.one()
    return tuple(o if j == i else z for j in range(n))


def vec_add(field: FieldSpec, u, v) -> tuple:
    return tuple(field.add(a, b) for a, b in zip(u, v, strict=True))


def vec_sub(field: FieldSpec, u, v) -> tuple:
    return tuple(field.sub(a, b) for a, b in zip(u, v, strict=True))


def vec_scale(field: FieldSpec, c, v) -> tuple:
    return tuple(field.mul(c, a) for a in v)


def vec_is_zero(v) -> bool:
    return all(a == 0 for a in v)


@dataclass(frozen=True)
class Matrix:
    """Dense row-major matrix over one FieldSpec."""

    field: FieldSpec
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        _check_axis(self.rows, "row count")
        _check_axis(self.cols, "column count")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match rows*cols")

    @staticmethod
    def from_rows(field: FieldSpec, rows) -> "Matrix":
        rows = [list(r) for r in rows]
        nr = len(rows)
        nc = len(rows[0]) if rows else 0
        if any(len(r) != nc for r in rows):
            raise ValueError("ragged rows")
        ent = tuple(field.coerce(x) for r in rows for x in r)
        return Matrix(field, nr, nc, ent)

    @staticmethod
    def zeros(field: FieldSpec, rows: int, cols: int) -> "Matrix":
        return Matrix(field, rows, cols, (field.zero(),) * (rows * cols))

    @staticmethod
    def identity(field: FieldSpec, n: int) -> "Matrix":
        z, o = field.zero(), field.one()
        ent = tuple(o if i == j else z for i in range(n) for j in range(n))
        return Matrix(field, n, n, ent)

    @staticmethod
    def from_cols(field: FieldSpec, cols) -> "Matrix":
        return Matrix.from_rows(field, cols).transpose()

    def at(self, i: int, j: int):
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return self.entries[j :: self.cols] if self.cols else ()

    def to_rows(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        ent = tuple(self.at(i, j) for j in range(self.cols) for i in range(self.rows))
        return Matrix(self.field, self.cols, self.rows, ent)

    def __add__(self, other: "Matrix") -> "Matrix":
        _same_field(self, other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        f = self.field
        return Matrix(f, self.rows, self.cols,
                      tuple(f.add(a, b) for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        _same_field(self, other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        f = self.field
        return Matrix(f, self.rows, self.cols,
                      tuple(f.sub(a, b) for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Matrix":
        f = self.field
        return Matrix(f, self.rows, self.cols, tuple(f.neg(a) for a in self.entries))

    def scale(self, c) -> "Matrix":
        f = self.field
        c = f.coerce(c)
        return Matrix(f, self.rows, self.cols, tuple(f.mul(c, a) for a in self.entries))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        # Sparse-aware: iterates nonzeros only, which keeps composites of
        # structure-constant matrices near-linear.
        _same_field(self, other)
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        f = self.field
        add, mul, zero = f.add, f.mul, f.zero()
        bc = other.cols
        brows = [other.row(k) for k in range(other.rows)]
        out = [zero] * (self.rows * bc)
        for i in range(self.rows):
            base = i * bc
            arow = self.row(i)
            for k, a in enumerate(arow):
                if a == 0:
                    continue
                brow = brows[k]
                for j, b in enumerate(brow):
                    if b == 0:
                        continue
                    out[base + j] = add(out[base + j], mul(a, b))
        return Matrix(f, self.rows, bc, tuple(out))

    def apply(self, vec) -> tuple:
        """Matrix times column vector."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        f = self.field
        add, mul, zero = f.add, f.mul, f.zero()
        out = [zero] * self.rows
        for i in range(self.rows):
            acc = zero
            row = self.row(i)
            for a, x in zip(row, vec):
                if a != 0 and x != 0:
                    acc = add(acc, mul(a, x))
            out[i] = acc
        return tuple(out)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.entries)

    def nonzeros(self):
        """Yield (i, j, value) over nonzero entries."""
        nc = self.cols
        for idx, v in enumerate(self.entries):
            if v != 0:
                yield idx // nc, idx % nc, v


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product in left-factor-major basis order."""
    _same_field(a, b)
    f = a.field
    mul, zero = f.mul, f.zero()
    rows, cols = a.rows * b.rows, a.cols * b.cols
    _check_axis(rows, "row count")
    _check_axis(cols, "column count")
    out = [zero] * (rows * cols)
    for ia, ja, va in a.nonzeros():
        rbase = ia * b.rows
        cbase = ja * b.cols
        for ib, jb, vb in b.nonzeros():
            out[(rbase + ib) * cols + (cbase + jb)] = mul(va, vb)
    return Matrix(f, rows, cols, tuple(out))


def flip_matrix(field: FieldSpec, d1: int, d2: int) -> Matrix:
    """The swap V1 (x) V2 -> V2 (x) V1 in left-major coordinates."""
    z, o = field.zero(), field.one()
    rows = d2 * d1
    cols = d1 * d2
    out = [z] * (rows * cols)
    for a in range(d1):
        for b in range(d2):
            out[(b * d1 + a) * cols + (a * d2 + b)] = o
    return Matrix(field, rows, cols, tuple(out))


@dataclass(frozen=True)
class Tensor3:
    """Order-3 structure-constant tensor, entries indexed [i][j][k]."""

    field: FieldSpec
    d0: int
    d1: int
    d2: int
    entries: tuple

    def __post_init__(self):
        for d in (self.d0, self.d1, self.d2):
            _check_axis(d, "tensor axis")
        if len(self.entries) != self.d0 * self.d1 * self.d2:
            raise ValueError("entry count does not match d0*d1*d2")
        nz = tuple(
            (idx // (self.d1 * self.d2),
             idx // self.d2 % self.d1,
             idx % self.d2,
             v)
            for idx, v in enumerate(self.entries) if v != 0
        )
        object.__setattr__(self, "_nonzeros", nz)

    @staticmethod
    def from_nested(field: FieldSpec, nested) -> "Tensor3":
        d0 = len(nested)
        d1 = len(nested[0]) if d0 else 0
        d2 = len(nested[0][0]) if d0 and d1 else 0
        ent = []
        for plane in nested:
            if len(plane) != d1:
                raise ValueError("ragged tensor")
            for row in plane:
                if len(row) != d2:
                    raise ValueError("ragged tensor")
                ent.extend(field.coerce(x) for x in row)
        return Tensor3(field, d0, d1, d2, tuple(ent))

    @staticmethod
    def zeros(field: FieldSpec, d0: int, d1: int, d2: int) -> "Tensor3":
        return Tensor3(field, d0, d1, d2, (field.zero(),) * (d0 * d1 * d2))

    def at(self, i: int, j: int, k: int):
        return self.entries[(i * self.d1 + j) * self.d2 + k]

    def nonzeros(self) -> tuple:
        return self._nonzeros

    def to_nested(self) -> list:
        return [[[self.at(i, j, k) for k in range(self.d2)]
                 for j in range(self.d1)]
                for i in range(self.d0)]

    def with_entry(self, i: int, j: int, k: int, value) -> "Tensor3":
        ent = list(self.entries)
        ent[(i * self.d1 + j) * self.d2 + k] = self.field.coerce(value)
        return Tensor3(self.field, self.d0, self.d1, self.d2, tuple(ent))


# ---------------------------------------------------------------------------
# echelon forms, subspaces, quotients


def rref(m: Matrix) -> tuple:
    """Reduced row echelon form and pivot columns, exact arithmetic."""
    f = m.field
    sub, mul, inv = f.sub, f.mul, f.inv
    rows = m.to_rows()
    nr, nc = m.rows, m.cols
    pivots = []
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        s = inv(rows[r][c])
        rows[r] = [mul(s, x) for x in rows[r]]
        for i in range(nr):
            if i != r and rows[i][c] != 0:
                t = rows[i][c]
                rows[i] = [sub(x, mul(t, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return Matrix.from_rows(f, rows) if nr else m, tuple(pivots)


@dataclass(frozen=True)
class Subspace:
    """A subspace given by a reduced-row-echelon basis."""

    ambient_dim: int
    basis: Matrix

    def __post_init__(self):
        b = self.basis
        if b.cols != self.ambient_dim:
            raise ValueError("basis width must equal ambient_dim")
        seen = -1
        for i in range(b.rows):
            row = b.row(i)
            lead = next((j for j, v in enumerate(row) if v != 0), None)
            if lead is None:
                raise ValueError("zero row in subspace basis")
            if lead <= seen:
                raise ValueError("pivot columns not strictly increasing")
            if row[lead] != b.field.one():
                raise ValueError("pivot entry must be 1")
            if any(b.at(k, lead) != 0 for k in range(b.rows) if k != i):
                raise ValueError("pivot column not reduced")
            seen = lead

    @staticmethod
    def from_rows(field: FieldSpec, ambient_dim: int, rows) -> "Subspace":
        rows = [r for r in rows]
        if not rows:
            return Subspace(ambient_dim, Matrix.zeros(field, 0, ambient_dim))
        red, pivots = rref(Matrix.from_rows(field, rows))
        keep = [list(red.row(i)) for i in range(len(pivots))]
        if not keep:
            return Subspace(ambient_dim, Matrix.zeros(field, 0, ambient_dim))
        return Subspace(ambient_dim, Matrix.from_rows(field, keep))

    @staticmethod
    def zero(field: FieldSpec, ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, Matrix.zeros(field, 0, ambient_dim))

    @property
    def field(self) -> FieldSpec:
        return self.basis.field

    @property
    def dim(self) -> int:
        return self.basis.rows

    @property
    def pivots(self) -> tuple:
        out = []
        for i in range(self.basis.rows):
            row = self.basis.row(i)
            out.append(next(j for j, v in enumerate(row) if v != 0))
        return tuple(out)

    def reduce(self, vec) -> tuple:
        """Remainder of vec after eliminating all pivot coordinates."""
        if len(vec) != self.ambient_dim:
            raise ValueError("vector length mismatch")
        f = self.field
        v = list(f.coerce(x) for x in vec)
        for i, p in enumerate(self.pivots):
            c = v[p]
            if c != 0:
                row = self.basis.row(i)
                v = [f.sub(x, f.mul(c, y)) for x, y in zip(v, row)]
        return tuple(v)

    def contains(self, vec) -> bool:
        return vec_is_zero(self.reduce(vec))

    def coords(self, vec):
        """Coordinates w.r.t. the echelon basis, or None if not a member."""
        rem = self.reduce(vec)
        if not vec_is_zero(rem):
            return None
        f = self.field
        return tuple(f.coerce(vec[p]) for p in self.pivots)


def membership(vec, s: Subspace) -> bool:
    """True iff vec lies in the span of the subspace basis."""
    return s.contains(vec)


def kernel(m: Matrix) -> Subspace:
    """Null space {v : m.v = 0} as an echelon-basis subspace."""
    red, pivots = rref(m)
    f = m.field
    pivset = set(pivots)
    free = [c for c in range(m.cols) if c not in pivset]
    rows = []
    for fc in free:
        v = [f.zero()] * m.cols
        v[fc] = f.one()
        for i, p in enumerate(pivots):
            v[p] = f.neg(red.at(i, fc))
        rows.append(v)
    return Subspace.from_rows(f, m.cols, rows)


@dataclass(frozen=True)
class AffineSolution:
    """Solution set of a feasible affine system: particular + null space."""

    particular: tuple
    homogeneous: Subspace


def solve_affine(m: Matrix, b):
    """Solve m.x = b exactly; returns AffineSolution or None when infeasible.

    The particular solution sets every free variable to zero.
    """
    if len(b) != m.rows:
        raise ValueError("right-hand side length mismatch")
    sys = ConstraintSystem(m.field, m.cols)
    f = m.field
    for i in range(m.rows):
        coeffs = {j: v for j, v in enumerate(m.row(i)) if v != 0}
        sys.add_row(coeffs, f.coerce(b[i]))
    return sys.solve()


@dataclass(frozen=True)
class QuotientSpace:
    """Quotient of k^ambient by a relation subspace, with chosen section."""

    ambient_dim: int
    relations: Subspace
    projection: Matrix
    section: Matrix

    @property
    def dim(self) -> int:
        return self.projection.rows

    def project(self, vec) -> tuple:
        return self.projection.apply(vec)

    def lift(self, vec) -> tuple:
        return self.section.apply(vec)


def quotient_space(ambient_dim: int, relations: Subspace) -> QuotientSpace:
    """Projection/section pair with ker(projection) = relations.

    Quotient coordinates are the non-pivot ambient coordinates of the
    relation basis; the section picks the corresponding ambient unit vectors.
    """
    if relations.ambient_dim != ambient_dim:
        raise ValueError("relation subspace has wrong ambient dimension")
    f = relations.field
    z, o = f.zero(), f.one()
    pivots = relations.pivots
    pivset = set(pivots)
    free = [c for c in range(ambient_dim) if c not in pivset]
    q = len(free)
    proj = [[z] * ambient_dim for _ in range(q)]
    for r, fc in enumerate(free):
        proj[r][fc] = o
        for i, p in enumerate(pivots):
            proj[r][p] = f.neg(relations.basis.at(i, fc))
    sect = [[z] * q for _ in range(ambient_dim)]
    for r, fc in enumerate(free):
        sect[fc][r] = o
    return QuotientSpace(
        ambient_dim,
        relations,
        Matrix(f, q, ambient_dim, tuple(x for row in proj for x in row)),
        Matrix(f, ambient_dim, q, tuple(x for row in sect for x in row)),
    )


# ---------------------------------------------------------------------------
# sparse incremental eliminator


class ConstraintSystem:
    """Accumulates sparse rows of one affine system and solves it exactly.

    Rows are dictionaries ``column -> coefficient``.  ``solve`` runs an
    incremental Gauss-Jordan elimination that only ever stores the reduced
    pivot rows, so systems with many redundant structure-constant equations
    stay cheap.  Every produced solution is re-verified against the stored
    rows before it is returned.
    """

    def __init__(self, field: FieldSpec, nvars: int):
        self.field = field
        self.nvars = nvars
        self.rows: list = []

    def add_row(self, coeffs: dict, rhs=0):
        f = self.field
        clean = {}
        for c, v in coeffs.items():
            if not 0 <= c < self.nvars:
                raise ValueError(f"variable index {c} out of range")
            v = f.coerce(v)
            if v != 0:
                clean[c] = v
        rhs = f.coerce(rhs)
        if clean or rhs != 0:
            self.rows.append((clean, rhs))

    def add_matrix_rows(self, m: Matrix, rhs_vec=None):
        """One row per matrix row; rhs defaults to zero."""
        f = self.field
        for i in range(m.rows):
            coeffs = {j: v for j, v in enumerate(m.row(i)) if v != 0}
            self.add_row(coeffs, f.zero() if rhs_vec is None else rhs_vec[i])

    def satisfied_by(self, x) -> bool:
        """Exact residual check of every stored row."""
        if len(x) != self.nvars:
            raise ValueError("candidate length mismatch")
        f = self.field
        add, mul = f.add, f.mul
        zero = f.zero()
        xs = [f.coerce(v) for v in x]
        for coeffs, rhs in self.rows:
            acc = zero
            for c, v in coeffs.items():
                xv = xs[c]
                if xv != 0:
                    acc = add(acc, mul(v, xv))
            if acc != rhs:
                return False
        return True

    def _eliminate(self):
        """Forward elimination; returns pivot map or None when inconsistent."""
        f = self.field
        sub, mul, inv = f.sub, f.mul, f.inv
        pivots: dict = {}
        for coeffs, rhs in self.rows:
            row = dict(coeffs)
            r = rhs
            while row:
                c = min(row)
                hit = pivots.get(c)
                if hit is None:
                    s = inv(row.pop(c))
                    if s != 1:
                        row = {k: mul(s, v) for k, v in row.items()}
                        r = mul(s, r)
                    pivots[c] = (row, r)
                    break
                t = row.pop(c)
                prow, prhs = hit
                for k, v in prow.items():
                    nv = sub(row.get(k, 0), mul(t, v))
                    if nv == 0:
                        row.pop(k, None)
                    else:
                        row[k] = nv
                if prhs != 0:
                    r = sub(r, mul(t, prhs))
            else:
                if r != 0:
                    return None
        # back substitution: leave each pivot row supported on free columns only
        for c in sorted(pivots, reverse=True):
            row, rhs = pivots[c]
            for k in sorted(list(row)):
                hit = pivots.get(k)
                if hit is None:
                    continue
                t = row.pop(k)
                prow, prhs = hit
                for k2, v in prow.items():
                    nv = sub(row.get(k2, 0), mul(t, v))
                    if nv == 0:
                        row.pop(k2, None)
                    else:
                        row[k2] = nv
                if prhs != 0:
                    rhs = sub(rhs, mul(t, prhs))
            pivots[c] = (row, rhs)
        return pivots

    def solve(self):
        """AffineSolution with canonical particular, or None if infeasible."""
        f = self.field
        pivots = self._eliminate()
        if pivots is None:
            return None
        zero, one = f.zero(), f.one()
        x = [zero] * self.nvars
        for c, (_, rhs) in pivots.items():
            x[c] = rhs
        particular = tuple(x)
        free = [c for c in range(self.nvars) if c not in pivots]
        kern_rows = []
        for fc in free:
            v = {fc: one}
            for c, (row, _) in pivots.items():
                coef = row.get(fc)
                if coef is not None:
                    v[c] = f.neg(coef)
            kern_rows.append(v)
        homogeneous = self._echelonize(kern_rows)
        if not self.satisfied_by(particular):
            raise ArithmeticError("eliminator produced an unverified solution")
        return AffineSolution(particular, homogeneous)

    def _echelonize(self, sparse_rows) -> Subspace:
        """Canonical echelon basis from sparse row dicts (homogeneous)."""
        f = self.field
        sub, mul, inv = f.sub, f.mul, f.inv
        pivots: dict = {}
        for row0 in sparse_rows:
            row = dict(row0)
            while row:
                c = min(row)
                hit = pivots.get(c)
                if hit is None:
                    s = inv(row.pop(c))
                    pivots[c] = {k: mul(s, v) for k, v in row.items()}
                    break
                t = row.pop(c)
                for k, v in hit.items():
                    nv = sub(row.get(k, 0), mul(t, v))
                    if nv == 0:
                        row.pop(k, None)
                    else:
                        row[k] = nv
        for c in sorted(pivots, reverse=True):
            row = pivots[c]
            for k in sorted(list(row)):
                hit = pivots.get(k)
                if hit is None:
                    continue
                t = row.pop(k)
                for k2, v in hit.items():
                    nv = sub(row.get(k2, 0), mul(t, v))
                    if nv == 0:
                        row.pop(k2, None)
                    else:
                        row[k2] = nv
            pivots[c] = row
        zero, one = f.zero(), f.one()
        rows = []
        for c in sorted(pivots):
            v = [zero] * self.nvars
            v[c] = one
            for k, val in pivots[c].items():
                v[k] = val
            rows.append(v)
        if not rows:
            return Subspace.zero(f, self.nvars)
        basis = Matrix(f, len(rows), self.nvars, tuple(x for r in rows for x in r))
        return Subspace(self.nvars, basis)
