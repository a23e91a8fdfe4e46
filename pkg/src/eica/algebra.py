"""The category algebra kC, its non-isomorphism ideal and its Jacobson radical.

The radical is computed through the EI structure: kC/N is a product of matrix
rings over the group algebras kAut(x) (N = span of non-isomorphisms), so

    J(kC) = N + sum over iso classes of t_j · J(kAut(x)) · t_i^{-1}

where t_i: x -> x_i are fixed isomorphisms.  Only small group algebras need a
real radical computation.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from .category import FiniteCategory, full_subcategory
from .errors import InvariantViolation, RadicalBudgetExceeded
from .exactla import (
    ExactMatrix,
    FieldSpec,
    column_space,
    complement_columns,
    hstack,
    kernel_basis,
    rank,
    solve,
)
from .rep import DEFAULT_BUDGET, Representation, quotient, regular_representation


class RadicalMethod(str, enum.Enum):
    MASCHKE = "Maschke"
    TRACE_FORM = "TraceForm"
    PGROUP = "PGroupAugmentation"
    NORMAL_SYLOW = "NormalSylowAugmentation"
    EXHAUSTIVE = "ExhaustiveSeries"


_METHOD_RANK = [RadicalMethod.MASCHKE, RadicalMethod.PGROUP, RadicalMethod.NORMAL_SYLOW,
                RadicalMethod.EXHAUSTIVE]


@dataclass(frozen=True, eq=False)
class CategoryAlgebra:
    category: FiniteCategory
    field: FieldSpec
    basis: tuple[str, ...]
    # product[i][j] = index of basis[i]∘basis[j], or None when not composable
    product: tuple[tuple[int | None, ...], ...]
    unit: tuple
    noniso_ideal: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vector(self, coeffs: dict) -> tuple:
        """Coefficient vector from ``{morphism id: scalar}``."""
        v = [self.field.zero] * self.dim
        for mid, a in coeffs.items():
            i = self.category.index(mid)
            v[i] = self.field.coerce(v[i] + self.field.coerce(a))
        return tuple(v)

    def basis_vector(self, i: int) -> tuple:
        f = self.field
        return tuple(f.one if k == i else f.zero for k in range(self.dim))

    def multiply(self, u, v) -> tuple:
        f = self.field
        out = [f.zero] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            row = self.product[i]
            for j, b in enumerate(v):
                if b:
                    k = row[j]
                    if k is not None:
                        out[k] += a * b
        if f.kind != "Q":
            out = [x % f.p for x in out]
        return tuple(out)

    def left_matrix(self, i: int) -> ExactMatrix:
        """Matrix of left multiplication by the i-th basis element."""
        f = self.field
        rows = [[f.zero] * self.dim for _ in range(self.dim)]
        for j, k in enumerate(self.product[i]):
            if k is not None:
                rows[k][j] = f.one
        return ExactMatrix._raw(f, tuple(map(tuple, rows)), self.dim)


@lru_cache(maxsize=256)
def build_algebra(c: FiniteCategory, f: FieldSpec) -> CategoryAlgebra:
    n = len(c.morphisms)
    product = tuple(tuple(c.compose_idx(i, j) for j in range(n)) for i in range(n))
    idset = {c.identity_index(x) for x in c.objects}
    unit = tuple(f.one if i in idset else f.zero for i in range(n))
    cls = c.order.class_of
    noniso = tuple(i for i, m in enumerate(c.morphisms) if cls[m.dom] != cls[m.cod])
    return CategoryAlgebra(c, f, tuple(m.id for m in c.morphisms), product, unit, noniso)


@dataclass(frozen=True)
class AutInfo:
    order: int
    invertible: bool


def aut_invertibility(c: FiniteCategory, f: FieldSpec) -> dict[str, AutInfo]:
    out = {}
    for x in c.objects:
        n = len(c.hom_idx(x, x))
        out[x] = AutInfo(n, f.characteristic == 0 or n % f.characteristic != 0)
    return out


@dataclass(frozen=True)
class RadicalData:
    basis: ExactMatrix
    method: RadicalMethod
    per_class: dict = dc_field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.basis.ncols


# group algebras --------------------------------------------------------------

def _element_order(a: CategoryAlgebra, i: int, one: int) -> int:
    k, cur = 1, i
    while cur != one:
        cur = a.product[i][cur]
        k += 1
    return k


def _is_power_of(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def group_radical(g: CategoryAlgebra, budget: int = DEFAULT_BUDGET) -> tuple[ExactMatrix, RadicalMethod]:
    """J(kG) for a one-object category algebra kG, with the method used."""
    f = g.field
    c = g.category
    (x,) = c.objects
    one = c.identity_index(x)
    n = g.dim
    p = f.characteristic
    if p == 0 or n % p:
        return ExactMatrix.zeros(f, n, 0), RadicalMethod.MASCHKE
    p_part = p
    while n % (p_part * p) == 0:
        p_part *= p
    p_elems = [i for i in range(n) if _is_power_of(_element_order(g, i, one), p)]
    if len(p_elems) == n:
        cols = [tuple(f.coerce(int(k == i) - int(k == one)) for k in range(n)) for i in range(n) if i != one]
        return column_space(ExactMatrix.from_columns(f, cols, n)), RadicalMethod.PGROUP
    if len(p_elems) == p_part:
        # the p-elements form the unique, hence normal, Sylow p-subgroup P; J = kG·I(P)
        cols = []
        for gi in range(n):
            for h in p_elems:
                if h == one:
                    continue
                v = [f.zero] * n
                v[g.product[gi][h]] += f.one
                v[gi] -= f.one
                cols.append(tuple(a % p for a in v))
        return column_space(ExactMatrix.from_columns(f, cols, n)), RadicalMethod.NORMAL_SYLOW
    return exhaustive_radical(g, budget), RadicalMethod.EXHAUSTIVE


# exhaustive composition-series radical ---------------------------------

def _span_with(a: CategoryAlgebra, base: ExactMatrix, v) -> ExactMatrix:
    """Column basis of the left submodule generated by col(base) and v."""
    cols = base.columns() + [a.multiply(a.basis_vector(i), v) for i in range(a.dim)]
    return column_space(ExactMatrix.from_columns(a.field, cols, a.dim))


def _minimal_over(a: CategoryAlgebra, lower: ExactMatrix, budget: int) -> ExactMatrix:
    """A submodule U of the regular module, minimal among those strictly containing ``lower``."""
    f = a.field
    upper = ExactMatrix.identity(f, a.dim)
    while True:
        d = upper.ncols - lower.ncols
        if d == 1:
            return upper
        if f.p ** d > budget:
            raise RadicalBudgetExceeded(f"{f.p}^{d} vectors exceed the budget of {budget}")
        # complement of lower inside upper, in upper's coordinates
        coords = solve(upper, lower)
        comp = [upper.column(j) for j in complement_columns(coords)]
        smaller = None
        for lead in range(d):
            for tail in itertools.product(range(f.p), repeat=d - lead - 1):
                coeffs = (0,) * lead + (1,) + tail
                v = tuple(sum(c * w[k] for c, w in zip(coeffs, comp)) % f.p for k in range(a.dim))
                s = _span_with(a, lower, v)
                if s.ncols < upper.ncols:
                    smaller = s
                    break
            if smaller is not None:
                break
        if smaller is None:
            return upper
        upper = smaller


def composition_series(a: CategoryAlgebra, budget: int = DEFAULT_BUDGET) -> list[ExactMatrix]:
    """0 = M_0 < M_1 < ... < M_n = A for the left regular module, over a finite field."""
    f = a.field
    if not f.is_finite:
        raise RadicalBudgetExceeded("exhaustive spinning needs a finite field")
    series = [ExactMatrix.zeros(f, a.dim, 0)]
    while series[-1].ncols < a.dim:
        series.append(_minimal_over(a, series[-1], budget))
    return series


def exhaustive_radical(a: CategoryAlgebra, budget: int = DEFAULT_BUDGET) -> ExactMatrix:
    """J = {r : r·M_i ⊆ M_(i-1) for every layer of a composition series}."""
    f = a.field
    series = composition_series(a, budget)
    lefts = [a.left_matrix(i) for i in range(a.dim)]
    conditions = []
    for lower, upper in zip(series, series[1:]):
        # rows of ann spanning the annihilator of col(lower)
        ann = kernel_basis(lower.T).T
        if ann.nrows == 0:
            continue
        for m in upper.columns():
            # r ↦ r·m has columns e_j·m
            rmat = ExactMatrix.from_columns(f, [lm.apply(m) for lm in lefts], a.dim)
            conditions.append(ann @ rmat)
    if not conditions:
        return ExactMatrix.zeros(f, a.dim, 0)
    stacked = ExactMatrix._raw(f, sum((c_.rows for c_ in conditions), ()), a.dim)
    return column_space(kernel_basis(stacked))


def trace_form_radical(a: CategoryAlgebra) -> RadicalData:
    """Characteristic zero only: J = {r : tr(L_{r s}) = 0 for all s}."""
    f = a.field
    if f.characteristic != 0:
        raise ValueError("the trace form detects the radical only in characteristic zero")
    traces = [sum(1 for j in range(a.dim) if a.product[k][j] == j) for k in range(a.dim)]
    tmat = ExactMatrix(f, [[traces[k] if (k := a.product[i][j]) is not None else 0
                            for j in range(a.dim)] for i in range(a.dim)])
    return RadicalData(column_space(kernel_basis(tmat.T)), RadicalMethod.TRACE_FORM)


# the radical of kC -----------------------------------------------------------

@lru_cache(maxsize=256)
def radical(a: CategoryAlgebra, budget: int = DEFAULT_BUDGET) -> RadicalData:
    c, f = a.category, a.field
    cols = [a.basis_vector(i) for i in a.noniso_ideal]
    per_class = {}
    for members in c.order.iso_classes:
        x = members[0]
        g = build_algebra(full_subcategory(c, [x]), f)
        jx, method = group_radical(g, budget)
        per_class[x] = method
        if jx.ncols == 0:
            continue
        lifted = []
        for r in jx.columns():
            v = [f.zero] * a.dim
            for gid, coeff in zip(g.basis, r):
                v[c.index(gid)] = coeff
            lifted.append(tuple(v))
        trivial = {y: c.hom_idx(x, y)[0] for y in members}
        for yi in members:
            back = a.basis_vector(c.inverse_idx(trivial[yi]))
            for yj in members:
                there = a.basis_vector(trivial[yj])
                for r in lifted:
                    cols.append(a.multiply(there, a.multiply(r, back)))
    basis = column_space(ExactMatrix.from_columns(f, cols, a.dim))
    method = max(per_class.values(), key=_METHOD_RANK.index, default=RadicalMethod.MASCHKE)
    return RadicalData(basis, method, per_class)


def ideal_power(a: CategoryAlgebra, left: ExactMatrix, right: ExactMatrix) -> ExactMatrix:
    """Column basis of span{l·r}."""
    prods = [a.multiply(u, v) for u in left.columns() for v in right.columns()]
    return column_space(ExactMatrix.from_columns(a.field, prods, a.dim))


def check_radical(a: CategoryAlgebra, j: RadicalData, budget: int = DEFAULT_BUDGET) -> dict[str, bool]:
    """Independent re-checks of a computed radical.

    ``ideal``: closed under multiplication by every basis morphism on both sides.
    ``nilpotent``: J^dim = 0.  ``semisimple_quotient``: the radical recomputed by
    an unrelated route (trace form in characteristic 0, a composition series of
    the whole regular module in characteristic p) spans the same space.
    """
    f = a.field
    span = j.basis
    ideal_ok = True
    for r in span.columns():
        for i in range(a.dim):
            e = a.basis_vector(i)
            for prod in (a.multiply(e, r), a.multiply(r, e)):
                if solve(span, ExactMatrix.from_columns(f, [prod], a.dim)) is None:
                    ideal_ok = False
    power = span
    for _ in range(a.dim):
        if power.ncols == 0:
            break
        power = ideal_power(a, span, power)
    nilpotent = power.ncols == 0
    if f.characteristic == 0:
        other = trace_form_radical(a).basis
    else:
        other = exhaustive_radical(a, budget)
    same = other.ncols == span.ncols and rank(hstack(f, [other, span], a.dim)) == span.ncols
    return {"ideal": ideal_ok, "nilpotent": nilpotent, "semisimple_quotient": same}


def assert_radical(a: CategoryAlgebra, j: RadicalData, budget: int = DEFAULT_BUDGET):
    report = check_radical(a, j, budget)
    bad = [k for k, v in report.items() if not v]
    if bad:
        raise InvariantViolation(f"radical checks failed: {bad}")


def radical_subspaces(a: CategoryAlgebra, j: RadicalData):
    """Homogeneous pieces of J: yields (dom, cod, {morphism index: coeff}) per basis vector."""
    c = a.category
    for r in j.basis.columns():
        pieces: dict[tuple[str, str], dict[int, object]] = {}
        for i, coeff in enumerate(r):
            if coeff:
                m = c.morphisms[i]
                pieces.setdefault((m.dom, m.cod), {})[i] = coeff
        for (y, z), comp in pieces.items():
            yield y, z, comp


def semisimple_quotient_module(a: CategoryAlgebra, j: RadicalData) -> Representation:
    """kC/J as a left module, in functor form."""
    c, f = a.category, a.field
    reg = regular_representation(c, f)
    basis = {y: [i for i, m in enumerate(c.morphisms) if m.cod == y] for y in c.objects}
    sub = {}
    for y in c.objects:
        cols = [tuple(r[i] for i in basis[y]) for r in j.basis.columns()]
        sub[y] = column_space(ExactMatrix.from_columns(f, cols, len(basis[y])))
    q, _ = quotient(reg, sub)
    return q


def noniso_radical(a: CategoryAlgebra) -> RadicalData:
    """J = span of the non-isomorphisms; the radical when every |Aut(x)| is invertible."""
    cols = [a.basis_vector(i) for i in a.noniso_ideal]
    return RadicalData(column_space(ExactMatrix.from_columns(a.field, cols, a.dim)), RadicalMethod.MASCHKE)
