"""Finite-dimensional algebras and coalgebras by structure constants.

Presentations carry the multiplication/comultiplication tensors and the
unit/counit vectors relative to a chosen basis.  Axiom checkers report every
failed identity with a basis witness; the two feasibility solvers look for a
bimodule section of the multiplication (separability) and a bicomodule
retraction of the comultiplication (coseparability) by exact linear algebra.

Tensor index convention: ``mult[i][j][k]`` is the coefficient of ``e_k`` in
``e_i * e_j``; ``comult[i][j][k]`` is the coefficient of ``e_j (x) e_k`` in
the comultiplication of ``e_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .exactlin import (
    ConstraintSystem,
    FieldSpec,
    Matrix,
    Tensor3,
    unit_vec,
    vec_is_zero,
    zero_vec,
)


@dataclass(frozen=True)
class AxiomFailure:
    law: str
    witness: tuple
    detail: str = ""

    def render(self) -> str:
        core = f"{self.law} fails at {self.witness}"
        return f"{core}: {self.detail}" if self.detail else core


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of a validator run: all failures, plus non-fatal warnings."""

    failures: tuple = ()
    warnings: tuple = ()

    def ok(self) -> bool:
        return not self.failures

    def merged(self, other: "AxiomReport") -> "AxiomReport":
        return AxiomReport(self.failures + other.failures,
                           self.warnings + other.warnings)

    def render(self) -> str:
        if self.ok() and not self.warnings:
            return "all axioms hold"
        lines = [f.render() for f in self.failures]
        lines += [f"warning: {w.render()}" for w in self.warnings]
        return "\n".join(lines)


class InvalidPresentationError(ValueError):
    """Raised when an operation requires a presentation whose axioms fail."""

    def __init__(self, report: AxiomReport, what: str = "presentation"):
        self.report = report
        super().__init__(f"invalid {what}:\n{report.render()}")


def _auto_labels(dim: int) -> tuple:
    return tuple(f"b{i}" for i in range(dim))


@dataclass(frozen=True)
class AlgebraPresentation:
    """A unital associative algebra given by structure constants."""

    field: FieldSpec
    dim: int
    labels: tuple
    mult: Tensor3
    unit: tuple

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be at least 1 (the unit needs a carrier)")
        if len(self.labels) != self.dim:
            raise ValueError("label count must equal dim")
        t = self.mult
        if (t.d0, t.d1, t.d2) != (self.dim,) * 3 or t.field != self.field:
            raise ValueError("mult tensor has wrong shape or field")
        if len(self.unit) != self.dim:
            raise ValueError("unit vector has wrong length")
        object.__setattr__(self, "unit",
                           tuple(self.field.coerce(x) for x in self.unit))
        if vec_is_zero(self.unit):
            raise ValueError("unit vector must be nonzero")

    @staticmethod
    def make(field, mult_nested, unit, labels=None) -> "AlgebraPresentation":
        mult = Tensor3.from_nested(field, mult_nested)
        dim = mult.d0
        return AlgebraPresentation(field, dim, tuple(labels) if labels else _auto_labels(dim),
                                   mult, tuple(unit))

    def mult_vec(self, u, v) -> tuple:
        """Product of two coefficient vectors."""
        f = self.field
        add, mul = f.add, f.mul
        out = [f.zero()] * self.dim
        for i, a in enumerate(u):
            if a == 0:
                continue
            for j, b in enumerate(v):
                if b == 0:
                    continue
                c = mul(a, b)
                for k in range(self.dim):
                    t = self.mult.at(i, j, k)
                    if t != 0:
                        out[k] = add(out[k], mul(c, t))
        return tuple(out)

    def left_mult_matrix(self, u) -> Matrix:
        """Matrix of v -> u*v."""
        f = self.field
        n = self.dim
        out = [f.zero()] * (n * n)
        for i, j, k, t in self.mult.nonzeros():
            a = u[i]
            if a != 0:
                out[k * n + j] = f.add(out[k * n + j], f.mul(a, t))
        return Matrix(f, n, n, tuple(out))

    def right_mult_matrix(self, u) -> Matrix:
        """Matrix of v -> v*u."""
        f = self.field
        n = self.dim
        out = [f.zero()] * (n * n)
        for i, j, k, t in self.mult.nonzeros():
            a = u[j]
            if a != 0:
                out[k * n + i] = f.add(out[k * n + i], f.mul(a, t))
        return Matrix(f, n, n, tuple(out))

    def mult_matrix(self) -> Matrix:
        """Multiplication as a matrix A (x) A -> A (left-major columns)."""
        f = self.field
        n = self.dim
        out = [f.zero()] * (n * n * n)
        for i, j, k, t in self.mult.nonzeros():
            out[k * (n * n) + i * n + j] = t
        return Matrix(f, n, n * n, tuple(out))

    def unit_matrix(self) -> Matrix:
        """The unit as a column k -> A."""
        return Matrix(self.field, self.dim, 1, tuple(self.unit))


@dataclass(frozen=True)
class CoalgebraPresentation:
    """A counital coassociative coalgebra given by structure constants."""

    field: FieldSpec
    dim: int
    comult: Tensor3
    counit: tuple

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be at least 1 (the counit needs a carrier)")
        t = self.comult
        if (t.d0, t.d1, t.d2) != (self.dim,) * 3 or t.field != self.field:
            raise ValueError("comult tensor has wrong shape or field")
        if len(self.counit) != self.dim:
            raise ValueError("counit vector has wrong length")
        object.__setattr__(self, "counit",
                           tuple(self.field.coerce(x) for x in self.counit))

    @staticmethod
    def make(field, comult_nested, counit) -> "CoalgebraPresentation":
        comult = Tensor3.from_nested(field, comult_nested)
        return CoalgebraPresentation(field, comult.d0, comult, tuple(counit))

    def comult_vec(self, u) -> tuple:
        """Comultiplication of a coefficient vector, in A (x) A coordinates."""
        f = self.field
        n = self.dim
        out = [f.zero()] * (n * n)
        for i, j, k, t in self.comult.nonzeros():
            a = u[i]
            if a != 0:
                out[j * n + k] = f.add(out[j * n + k], f.mul(a, t))
        return tuple(out)

    def comult_matrix(self) -> Matrix:
        """Comultiplication as a matrix A -> A (x) A."""
        f = self.field
        n = self.dim
        out = [f.zero()] * (n * n * n)
        for i, j, k, t in self.comult.nonzeros():
            out[(j * n + k) * n + i] = t
        return Matrix(f, n * n, n, tuple(out))

    def counit_matrix(self) -> Matrix:
        return Matrix(self.field, 1, self.dim, tuple(self.counit))


# ---------------------------------------------------------------------------
# axiom checks


def check_algebra(a: AlgebraPresentation) -> AxiomReport:
    """Associativity on all basis triples plus two-sided unitality."""
    n = a.dim
    failures = []
    basis = [unit_vec(a.field, n, i) for i in range(n)]
    for i in range(n):
        left = a.mult_vec(a.unit, basis[i])
        if left != basis[i]:
            failures.append(AxiomFailure("left unit", (i,), a.labels[i]))
        right = a.mult_vec(basis[i], a.unit)
        if right != basis[i]:
            failures.append(AxiomFailure("right unit", (i,), a.labels[i]))
    prods = [[a.mult_vec(basis[i], basis[j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = a.mult_vec(prods[i][j], basis[k])
                rhs = a.mult_vec(basis[i], prods[j][k])
                if lhs != rhs:
                    failures.append(AxiomFailure(
                        "associativity", (i, j, k),
                        f"({a.labels[i]}*{a.labels[j]})*{a.labels[k]}"))
    return AxiomReport(tuple(failures))


def check_coalgebra(c: CoalgebraPresentation) -> AxiomReport:
    """Coassociativity on all basis elements plus two-sided counitality."""
    n = c.dim
    f = c.field
    failures = []
    for i in range(n):
        # counit laws: (eps (x) 1) delta = id = (1 (x) eps) delta
        left = [f.zero()] * n
        right = [f.zero()] * n
        for i0, j, k, t in c.comult.nonzeros():
            if i0 != i:
                continue
            left[k] = f.add(left[k], f.mul(t, c.counit[j]))
            right[j] = f.add(right[j], f.mul(t, c.counit[k]))
        e = unit_vec(f, n, i)
        if tuple(left) != e:
            failures.append(AxiomFailure("left counit", (i,)))
        if tuple(right) != e:
            failures.append(AxiomFailure("right counit", (i,)))
    for i in range(n):
        lhs = [f.zero()] * (n ** 3)
        rhs = [f.zero()] * (n ** 3)
        for i0, j, k, t in c.comult.nonzeros():
            if i0 != i:
                continue
            # (delta (x) 1) delta: expand the left leg
            for j0, p, q, s in c.comult.nonzeros():
                if j0 == j:
                    idx = (p * n + q) * n + k
                    lhs[idx] = f.add(lhs[idx], f.mul(t, s))
                if j0 == k:
                    idx = (j * n + p) * n + q
                    rhs[idx] = f.add(rhs[idx], f.mul(t, s))
        if lhs != rhs:
            failures.append(AxiomFailure("coassociativity", (i,)))
    return AxiomReport(tuple(failures))


# ---------------------------------------------------------------------------
# separability / coseparability solvers


@dataclass(frozen=True)
class SeparabilitySection:
    """A bimodule section of the multiplication; element = section(unit)."""

    map: Matrix   # dim^2 x dim
    element: tuple

    @property
    def dim(self) -> int:
        return self.map.cols


@dataclass(frozen=True)
class CoseparabilityRetraction:
    """A bicomodule retraction of the comultiplication."""

    map: Matrix   # dim x dim^2

    @property
    def dim(self) -> int:
        return self.map.rows


def separability_system(a: AlgebraPresentation) -> ConstraintSystem:
    """Constraint rows for a bimodule section of the multiplication.

    Unknowns: section entries N[(k,l), j], variable index (k*n+l)*n + j.
    Rows: mu . N = id plus the two bimodule squares quantified over all basis
    pairs and output components.
    """
    f = a.field
    n = a.dim
    one = f.one()
    sys = ConstraintSystem(f, n ** 3)
    nz = a.mult.nonzeros()
    # mu . N = id
    for j in range(n):
        rows = [dict() for _ in range(n)]
        for i, l, k, t in nz:
            var = (i * n + l) * n + j
            row = rows[k]
            row[var] = f.add(row.get(var, f.zero()), t)
        for m in range(n):
            sys.add_row(rows[m], one if m == j else f.zero())
    by_first = [[] for _ in range(n)]
    by_second = [[] for _ in range(n)]
    for i, j, k, t in nz:
        by_first[i].append((j, k, t))
        by_second[j].append((i, k, t))
    prods = [[[(k, t) for (jj, k, t) in by_first[i] if jj == j] for j in range(n)]
             for i in range(n)]
    for i in range(n):
        for j in range(n):
            # left square: (mu (x) 1)(1 (x) N) e_i(x)e_j = N(e_i e_j)
            rows = {}
            for k, m, t in by_first[i]:
                for l in range(n):
                    var = (k * n + l) * n + j
                    row = rows.setdefault((m, l), {})
                    row[var] = f.add(row.get(var, f.zero()), t)
            for q, t in prods[i][j]:
                for m in range(n):
                    for l in range(n):
                        var = (m * n + l) * n + q
                        row = rows.setdefault((m, l), {})
                        row[var] = f.sub(row.get(var, f.zero()), t)
            for row in rows.values():
                sys.add_row(row, f.zero())
            # right square: (1 (x) mu)(N (x) 1) e_i(x)e_j = N(e_i e_j)
            rows = {}
            for l, m, t in by_second[j]:
                for k in range(n):
                    var = (k * n + l) * n + i
                    row = rows.setdefault((k, m), {})
                    row[var] = f.add(row.get(var, f.zero()), t)
            for q, t in prods[i][j]:
                for k in range(n):
                    for m in range(n):
                        var = (k * n + m) * n + q
                        row = rows.setdefault((k, m), {})
                        row[var] = f.sub(row.get(var, f.zero()), t)
            for row in rows.values():
                sys.add_row(row, f.zero())
    return sys


def solve_separability(a: AlgebraPresentation):
    """A verified SeparabilitySection, or None when the system is infeasible."""
    report = check_algebra(a)
    if not report.ok():
        raise InvalidPresentationError(report, "algebra")
    sys = separability_system(a)
    sol = sys.solve()
    if sol is None:
        return None
    n = a.dim
    section = Matrix(a.field, n * n, n, tuple(sol.particular))
    element = section.apply(a.unit)
    assert a.mult_matrix().apply(element) == a.unit
    return SeparabilitySection(section, element)


def coseparability_system(c: CoalgebraPresentation) -> ConstraintSystem:
    """Constraint rows for a bicomodule retraction of the comultiplication.

    Unknowns: retraction entries P[m, (i,j)], variable index m*n^2 + i*n + j.
    Rows: P . delta = id plus the two bicomodule squares.
    """
    f = c.field
    n = c.dim
    one = f.one()
    sys = ConstraintSystem(f, n ** 3)
    nz = c.comult.nonzeros()
    # P . delta = id
    for i in range(n):
        rows = [dict() for _ in range(n)]
        for i0, j, k, t in nz:
            if i0 != i:
                continue
            for m in range(n):
                var = m * n * n + j * n + k
                row = rows[m]
                row[var] = f.add(row.get(var, f.zero()), t)
        for m in range(n):
            sys.add_row(rows[m], one if m == i else f.zero())
    by_source = [[] for _ in range(n)]
    for i, j, k, t in nz:
        by_source[i].append((j, k, t))
    for i in range(n):
        for j in range(n):
            # left square: (1 (x) P)(delta (x) 1) = delta . P on e_i (x) e_j
            rows = {}
            for a_, b, t in by_source[i]:
                for m in range(n):
                    var = m * n * n + b * n + j
                    row = rows.setdefault((a_, m), {})
                    row[var] = f.add(row.get(var, f.zero()), t)
            for q in range(n):
                var_base = q * n * n + i * n + j
                for a_, b, t in by_source[q]:
                    row = rows.setdefault((a_, b), {})
                    row[var_base] = f.sub(row.get(var_base, f.zero()), t)
            for row in rows.values():
                sys.add_row(row, f.zero())
            # right square: (P (x) 1)(1 (x) delta) = delta . P on e_i (x) e_j
            rows = {}
            for a_, b, t in by_source[j]:
                for m in range(n):
                    var = m * n * n + i * n + a_
                    row = rows.setdefault((m, b), {})
                    row[var] = f.add(row.get(var, f.zero()), t)
            for q in range(n):
                var_base = q * n * n + i * n + j
                for a_, b, t in by_source[q]:
                    row = rows.setdefault((a_, b), {})
                    row[var_base] = f.sub(row.get(var_base, f.zero()), t)
            for row in rows.values():
                sys.add_row(row, f.zero())
    return sys


def solve_coseparability(c: CoalgebraPresentation):
    """A verified CoseparabilityRetraction, or None when infeasible."""
    report = check_coalgebra(c)
    if not report.ok():
        raise InvalidPresentationError(report, "coalgebra")
    sys = coseparability_system(c)
    sol = sys.solve()
    if sol is None:
        return None
    n = c.dim
    retraction = Matrix(c.field, n, n * n, tuple(sol.particular))
    assert retraction @ c.comult_matrix() == Matrix.identity(c.field, n)
    return CoseparabilityRetraction(retraction)
