"""Hopf categories enriched in finite-dimensional vector spaces.

A presentation assigns a coalgebra a(x,y) to every ordered pair of objects,
composition maps a(x,y) (x) a(y,z) -> a(x,z), unit vectors in a(x,x) and an
optional antipode family a(x,y) -> a(y,x).  Composition and units must be
coalgebra morphisms.  The solvers look for object-indexed families: counit
retractions per object, one normalized integral family, and one separability
structure family, each as a single exact feasibility problem.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactlin import ConstraintSystem, FieldSpec, Matrix, flip_matrix, kron, unit_vec
from .finalg import (
    AxiomFailure,
    AxiomReport,
    CoalgebraPresentation,
    InvalidPresentationError,
    check_coalgebra,
    solve_coseparability,
)


@dataclass(frozen=True)
class HopfCategoryPresentation:
    objects: tuple                 # labels; object indices are 0..len-1
    homs: dict                     # (x, y) -> CoalgebraPresentation
    comps: dict                    # (x, y, z) -> Matrix a(x,y)(x)a(y,z) -> a(x,z)
    units: dict                    # x -> vector in a(x,x)
    antipode: dict | None = None   # (x, y) -> Matrix a(x,y) -> a(y,x)

    def __post_init__(self):
        nobj = len(self.objects)
        pairs = [(x, y) for x in range(nobj) for y in range(nobj)]
        if set(self.homs) != set(pairs):
            raise ValueError("homs must be a dense table over object pairs")
        fields = {c.field for c in self.homs.values()}
        if nobj and len(fields) != 1:
            raise ValueError("all homs must share one field")
        for (x, y, z), m in self.comps.items():
            dxy, dyz, dxz = self.dim(x, y), self.dim(y, z), self.dim(x, z)
            if (m.rows, m.cols) != (dxz, dxy * dyz):
                raise ValueError(f"composition {(x, y, z)} has wrong shape")
        if set(self.comps) != {(x, y, z) for x in range(nobj)
                               for y in range(nobj) for z in range(nobj)}:
            raise ValueError("comps must be a dense table over object triples")
        if set(self.units) != set(range(nobj)):
            raise ValueError("units must be a dense table over objects")
        for x, u in self.units.items():
            if len(u) != self.dim(x, x):
                raise ValueError(f"unit of object {x} has wrong length")
        if self.antipode is not None:
            if set(self.antipode) != set(pairs):
                raise ValueError("antipode must be a dense table over object pairs")
            for (x, y), m in self.antipode.items():
                if (m.rows, m.cols) != (self.dim(y, x), self.dim(x, y)):
                    raise ValueError(f"antipode {(x, y)} has wrong shape")

    @property
    def field(self) -> FieldSpec:
        return next(iter(self.homs.values())).field

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    def dim(self, x: int, y: int) -> int:
        return self.homs[(x, y)].dim

    def hom_pairs(self) -> list:
        return [(x, y) for x in range(self.n_objects) for y in range(self.n_objects)]


def check_hopf_category(h: HopfCategoryPresentation) -> AxiomReport:
    """Enriched category axioms, comonoid-morphism laws, antipode family."""
    failures = []
    for (x, y), c in sorted(h.homs.items()):
        rep = check_coalgebra(c)
        for fail in rep.failures:
            failures.append(AxiomFailure(f"hom({x},{y}) {fail.law}", fail.witness))
    if failures:
        return AxiomReport(tuple(failures))
    if h.n_objects == 0:
        return AxiomReport()
    f = h.field
    nobj = h.n_objects

    def eye(x, y):
        return Matrix.identity(f, h.dim(x, y))

    # associativity and unit laws of composition
    for x in range(nobj):
        for y in range(nobj):
            for z in range(nobj):
                for w in range(nobj):
                    lhs = h.comps[(x, z, w)] @ kron(h.comps[(x, y, z)], eye(z, w))
                    rhs = h.comps[(x, y, w)] @ kron(eye(x, y), h.comps[(y, z, w)])
                    if lhs != rhs:
                        failures.append(AxiomFailure("composition associativity",
                                                     (x, y, z, w)))
    for x in range(nobj):
        ux = Matrix(f, h.dim(x, x), 1, tuple(h.units[x]))
        for y in range(nobj):
            if h.comps[(x, x, y)] @ kron(ux, eye(x, y)) != eye(x, y):
                failures.append(AxiomFailure("left unit law", (x, y)))
            uy = Matrix(f, h.dim(y, y), 1, tuple(h.units[y]))
            if h.comps[(x, y, y)] @ kron(eye(x, y), uy) != eye(x, y):
                failures.append(AxiomFailure("right unit law", (x, y)))

    # composition is a coalgebra morphism
    for x in range(nobj):
        for y in range(nobj):
            for z in range(nobj):
                cxy, cyz, cxz = h.homs[(x, y)], h.homs[(y, z)], h.homs[(x, z)]
                m = h.comps[(x, y, z)]
                lhs = cxz.comult_matrix() @ m
                middle = kron(eye(x, y),
                              kron(flip_matrix(f, cxy.dim, cyz.dim), eye(y, z)))
                rhs = kron(m, m) @ middle @ kron(cxy.comult_matrix(),
                                                 cyz.comult_matrix())
                if lhs != rhs:
                    failures.append(AxiomFailure("composition comultiplicativity",
                                                 (x, y, z)))
                if cxz.counit_matrix() @ m != kron(cxy.counit_matrix(),
                                                   cyz.counit_matrix()):
                    failures.append(AxiomFailure("composition counit law", (x, y, z)))

    # units are grouplike
    for x in range(nobj):
        cxx = h.homs[(x, x)]
        u = h.units[x]
        outer = [f.zero()] * (cxx.dim ** 2)
        for a, ca in enumerate(u):
            if ca == 0:
                continue
            for b, cb in enumerate(u):
                if cb != 0:
                    outer[a * cxx.dim + b] = f.mul(ca, cb)
        if cxx.comult_vec(u) != tuple(outer):
            failures.append(AxiomFailure("unit grouplike", (x,)))
        eps = f.zero()
        for a, ca in enumerate(u):
            eps = f.add(eps, f.mul(ca, cxx.counit[a]))
        if eps != f.one():
            failures.append(AxiomFailure("unit counit", (x,)))

    # antipode family (external-definition check)
    if h.antipode is not None:
        for x in range(nobj):
            for y in range(nobj):
                cxy = h.homs[(x, y)]
                s = h.antipode[(x, y)]
                delta = cxy.comult_matrix()
                ux = Matrix(f, h.dim(x, x), 1, tuple(h.units[x]))
                uy = Matrix(f, h.dim(y, y), 1, tuple(h.units[y]))
                left = h.comps[(x, y, x)] @ kron(eye(x, y), s) @ delta
                if left != ux @ cxy.counit_matrix():
                    failures.append(AxiomFailure(
                        "antipode left composite (external-definition check)", (x, y)))
                right = h.comps[(y, x, y)] @ kron(s, eye(x, y)) @ delta
                if right != uy @ cxy.counit_matrix():
                    failures.append(AxiomFailure(
                        "antipode right composite (external-definition check)", (x, y)))
    return AxiomReport(tuple(failures))


def _require_valid(h: HopfCategoryPresentation):
    report = check_hopf_category(h)
    if not report.ok():
        raise InvalidPresentationError(report, "Hopf category")


@dataclass(frozen=True)
class RetractionFamily:
    side: str
    table: dict    # x -> covector on a(x,x)


@dataclass(frozen=True)
class IntegralFamily:
    side: str
    table: dict    # (x, y) -> vector in a(x,y)


@dataclass(frozen=True)
class SeparabilityFamily:
    table: dict    # (x, v, y) -> Matrix a(x,y) -> a(x,v) (x) a(v,y)


@dataclass(frozen=True)
class HomCoseparabilityReport:
    table: dict    # (x, y) -> bool

    @property
    def all_coseparable(self) -> bool:
        return all(self.table.values())


def retraction_system(h: HopfCategoryPresentation, x: int,
                      side: str) -> ConstraintSystem:
    """Per-object system for a comodule retraction of the unit of a(x,x)."""
    if side not in ("left", "right"):
        raise ValueError("side must be left or right")
    f = h.field
    c = h.homs[(x, x)]
    u = h.units[x]
    d = c.dim
    sys = ConstraintSystem(f, d)
    for i in range(d):
        for m in range(d):
            coeffs = {}
            for b in range(d):
                t = c.comult.at(i, m, b) if side == "left" else c.comult.at(i, b, m)
                if t != 0:
                    coeffs[b] = f.add(coeffs.get(b, f.zero()), t)
            if u[m] != 0:
                coeffs[i] = f.sub(coeffs.get(i, f.zero()), u[m])
            sys.add_row(coeffs, f.zero())
    sys.add_row({m: u[m] for m in range(d) if u[m] != 0}, f.one())
    return sys


def solve_retraction_family(h: HopfCategoryPresentation, side: str):
    """One retraction per object, solved independently; None if any fails."""
    _require_valid(h)
    table = {}
    for x in range(h.n_objects):
        sol = retraction_system(h, x, side).solve()
        if sol is None:
            return None
        table[x] = sol.particular
    return RetractionFamily(side, table)


def check_hom_coseparability(h: HopfCategoryPresentation) -> HomCoseparabilityReport:
    """Coseparability of each hom-coalgebra separately."""
    _require_valid(h)
    table = {}
    for (x, y), c in sorted(h.homs.items()):
        table[(x, y)] = solve_coseparability(c) is not None
    return HomCoseparabilityReport(table)


def _offsets(h: HopfCategoryPresentation, keys, sizes):
    offsets = {}
    total = 0
    for k in keys:
        offsets[k] = total
        total += sizes(k)
    return offsets, total


def integral_family_system(h: HopfCategoryPresentation, side: str) -> ConstraintSystem:
    """One coupled affine system over all family vectors theta_{x,y}."""
    if side not in ("left", "right"):
        raise ValueError("side must be left or right")
    f = h.field
    pairs = h.hom_pairs()
    offsets, total = _offsets(h, pairs, lambda p: h.dim(*p))
    sys = ConstraintSystem(f, total)
    nobj = h.n_objects
    for x in range(nobj):
        for y in range(nobj):
            for z in range(nobj):
                m = h.comps[(x, y, z)]
                dxy, dyz, dxz = h.dim(x, y), h.dim(y, z), h.dim(x, z)
                if side == "left":
                    # mu(h (x) theta_{y,z}) = eps(h) theta_{x,z}, h in a(x,y)
                    eps = h.homs[(x, y)].counit
                    for i in range(dxy):
                        for out in range(dxz):
                            coeffs = {}
                            for c in range(dyz):
                                t = m.at(out, i * dyz + c)
                                if t != 0:
                                    key = offsets[(y, z)] + c
                                    coeffs[key] = f.add(coeffs.get(key, f.zero()), t)
                            if eps[i] != 0:
                                key = offsets[(x, z)] + out
                                coeffs[key] = f.sub(coeffs.get(key, f.zero()), eps[i])
                            sys.add_row(coeffs, f.zero())
                else:
                    # mu(theta_{x,y} (x) h) = eps(h) theta_{x,z}, h in a(y,z)
                    eps = h.homs[(y, z)].counit
                    for j in range(dyz):
                        for out in range(dxz):
                            coeffs = {}
                            for c in range(dxy):
                                t = m.at(out, c * dyz + j)
                                if t != 0:
                                    key = offsets[(x, y)] + c
                                    coeffs[key] = f.add(coeffs.get(key, f.zero()), t)
                            if eps[j] != 0:
                                key = offsets[(x, z)] + out
                                coeffs[key] = f.sub(coeffs.get(key, f.zero()), eps[j])
                            sys.add_row(coeffs, f.zero())
    for (x, y) in pairs:
        eps = h.homs[(x, y)].counit
        sys.add_row({offsets[(x, y)] + m_: eps[m_] for m_ in range(h.dim(x, y))
                     if eps[m_] != 0}, f.one())
    return sys


def solve_integral_family(h: HopfCategoryPresentation, side: str):
    """A normalized integral family, or None when infeasible."""
    _require_valid(h)
    if h.n_objects == 0:
        return IntegralFamily(side, {})
    sol = integral_family_system(h, side).solve()
    if sol is None:
        return None
    pairs = h.hom_pairs()
    offsets, _ = _offsets(h, pairs, lambda p: h.dim(*p))
    table = {p: tuple(sol.particular[offsets[p]: offsets[p] + h.dim(*p)])
             for p in pairs}
    return IntegralFamily(side, table)


def separability_family_system(h: HopfCategoryPresentation) -> ConstraintSystem:
    """One coupled feasibility over all splitting maps d_{x,v,y}.

    Variable layout per triple (x, v, y): matrix a(x,y) -> a(x,v) (x) a(v,y),
    entry ((p, q), j) at offset + (p*dim(v,y) + q)*dim(x,y) + j.
    """
    f = h.field
    nobj = h.n_objects
    triples = [(x, v, y) for x in range(nobj) for v in range(nobj)
               for y in range(nobj)]
    offsets, total = _offsets(
        h, triples, lambda t: h.dim(t[0], t[1]) * h.dim(t[1], t[2]) * h.dim(t[0], t[2]))
    sys = ConstraintSystem(f, total)

    def var(x, v, y, p, q, j):
        return offsets[(x, v, y)] + (p * h.dim(v, y) + q) * h.dim(x, y) + j

    # retraction triangles: mu_{x,v,y} . d_{x,v,y} = id
    for (x, v, y) in triples:
        m = h.comps[(x, v, y)]
        dxv, dvy, dxy = h.dim(x, v), h.dim(v, y), h.dim(x, y)
        for j in range(dxy):
            for out in range(dxy):
                coeffs = {}
                for p in range(dxv):
                    for q in range(dvy):
                        t = m.at(out, p * dvy + q)
                        if t != 0:
                            key = var(x, v, y, p, q, j)
                            coeffs[key] = f.add(coeffs.get(key, f.zero()), t)
                sys.add_row(coeffs, f.one() if out == j else f.zero())
    # the two square families over object quadruples
    for x in range(nobj):
        for y in range(nobj):
            for v in range(nobj):
                for z in range(nobj):
                    dxy, dyz = h.dim(x, y), h.dim(y, z)
                    dxv, dvz = h.dim(x, v), h.dim(v, z)
                    dvy, dyv = h.dim(v, y), h.dim(y, v)
                    m_xyz = h.comps[(x, y, z)]
                    m_vyz = h.comps[(v, y, z)]
                    m_xyv = h.comps[(x, y, v)]
                    for i in range(dxy):
                        for j in range(dyz):
                            diag = {}
                            for mm in range(h.dim(x, z)):
                                t = m_xyz.at(mm, i * dyz + j)
                                if t != 0:
                                    diag[mm] = t
                            for p in range(dxv):
                                for w in range(dvz):
                                    # (1 (x) mu_{v,y,z})(d_{x,v,y} (x) 1) = d_{x,v,z} mu
                                    coeffs = {}
                                    for q in range(dvy):
                                        t = m_vyz.at(w, q * dyz + j)
                                        if t != 0:
                                            key = var(x, v, y, p, q, i)
                                            coeffs[key] = f.add(
                                                coeffs.get(key, f.zero()), t)
                                    for mm, t in diag.items():
                                        key = var(x, v, z, p, w, mm)
                                        coeffs[key] = f.sub(
                                            coeffs.get(key, f.zero()), t)
                                    sys.add_row(coeffs, f.zero())
                                    # (mu_{x,y,v} (x) 1)(1 (x) d_{y,v,z}) = d_{x,v,z} mu
                                    coeffs = {}
                                    for q in range(dyv):
                                        t = m_xyv.at(p, i * dyv + q)
                                        if t != 0:
                                            key = var(y, v, z, q, w, j)
                                            coeffs[key] = f.add(
                                                coeffs.get(key, f.zero()), t)
                                    for mm, t in diag.items():
                                        key = var(x, v, z, p, w, mm)
                                        coeffs[key] = f.sub(
                                            coeffs.get(key, f.zero()), t)
                                    sys.add_row(coeffs, f.zero())
    return sys


def solve_separability_family(h: HopfCategoryPresentation):
    """A separability structure family, or None when infeasible."""
    _require_valid(h)
    if h.n_objects == 0:
        return SeparabilityFamily({})
    sol = separability_family_system(h).solve()
    if sol is None:
        return None
    f = h.field
    nobj = h.n_objects
    triples = [(x, v, y) for x in range(nobj) for v in range(nobj)
               for y in range(nobj)]
    offsets, _ = _offsets(
        h, triples, lambda t: h.dim(t[0], t[1]) * h.dim(t[1], t[2]) * h.dim(t[0], t[2]))
    table = {}
    for (x, v, y) in triples:
        rows = h.dim(x, v) * h.dim(v, y)
        cols = h.dim(x, y)
        start = offsets[(x, v, y)]
        table[(x, v, y)] = Matrix(f, rows, cols,
                                  tuple(sol.particular[start: start + rows * cols]))
    return SeparabilityFamily(table)
