"""Exact two-phase simplex over the rationals.

Problems have the form ``min/max c.x  s.t.  A x <= b,  lower <= x <= upper``
with optional (``None``) bounds. The tableau is kept integral using
integer-preserving pivots: every stored entry equals ``D`` times the true
tableau entry, where ``D`` is the determinant of the current basis, and each
pivot divides exactly by the previous ``D``. Bland's rule makes the pivot
sequence deterministic and finite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional

from .numeric import as_rational

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpProblem:
    A: tuple
    b: tuple
    c: tuple
    sense: str = "min"
    lower: Optional[tuple] = None
    upper: Optional[tuple] = None

    def __post_init__(self):
        n = len(self.c)
        if len(self.A) != len(self.b):
            raise ValueError("A and b have different row counts")
        for row in self.A:
            if len(row) != n:
                raise ValueError("row of A has wrong length")
        for bounds in (self.lower, self.upper):
            if bounds is not None and len(bounds) != n:
                raise ValueError("bound vector has wrong length")
        if self.sense not in ("min", "max"):
            raise ValueError(f"unknown sense {self.sense!r}")

    @property
    def num_vars(self) -> int:
        return len(self.c)

    def bounds(self):
        n = self.num_vars
        lo = self.lower if self.lower is not None else (None,) * n
        up = self.upper if self.upper is not None else (None,) * n
        return lo, up

    def with_bounds(self, lower, upper) -> "LpProblem":
        return LpProblem(self.A, self.b, self.c, self.sense, tuple(lower), tuple(upper))


@dataclass(frozen=True)
class LpOutcome:
    """Result of :func:`solve_lp`.

    For ``optimal``: ``x`` is a basic solution (a vertex whenever the feasible
    region has one), ``basis`` lists the active constraints defining it
    (``i < m`` for rows of A, ``m + j`` for ``x_j >= lower_j``, ``m + n + j``
    for ``x_j <= upper_j``), ``duals`` holds nonnegative multipliers of the
    rows of A for the minimisation form and ``reduced_costs`` the final
    reduced costs, all nonnegative. For ``unbounded``: ``ray`` is an improving
    recession direction.
    """

    status: str
    x: Optional[tuple] = None
    value: Optional[Fraction] = None
    ray: Optional[tuple] = None
    basis: Optional[tuple] = None
    duals: Optional[tuple] = None
    reduced_costs: Optional[tuple] = None


def _scale_to_ints(values):
    """Return (integers, positive scale) with integers == scale * values."""
    fr = [as_rational(v) for v in values]
    s = 1
    for v in fr:
        if v.denominator != 1:
            s = lcm(s, v.denominator)
    return [int(v * s) for v in fr], s


def _pivot(T, obj, r, e, D):
    prow = T[r]
    p = prow[e]
    nz = [j for j, v in enumerate(prow) if v]
    for i, row in enumerate(T):
        if i == r:
            continue
        f = row[e]
        if f == 0:
            if p != D:
                T[i] = [v * p // D for v in row]
        else:
            new = [v * p for v in row]
            for j in nz:
                new[j] -= f * prow[j]
            T[i] = [v // D for v in new]
    f = obj[e]
    new = [v * p for v in obj]
    if f:
        for j in nz:
            new[j] -= f * prow[j]
    obj[:] = [v // D for v in new]
    if p < 0:
        for i in range(len(T)):
            T[i] = [-v for v in T[i]]
        obj[:] = [-v for v in obj]
        return -p
    return p


def _simplex(T, obj, basis, D, ncols):
    """Bland's-rule primal simplex on columns ``< ncols``.

    Returns ``(D, entering)`` where ``entering`` is None at optimality and the
    unbounded column otherwise.
    """
    while True:
        e = None
        for j in range(ncols):
            if obj[j] < 0:
                e = j
                break
        if e is None:
            return D, None
        r = None
        for i, row in enumerate(T):
            a = row[e]
            if a > 0:
                if r is None:
                    r = i
                    continue
                lhs = row[-1] * T[r][e]
                rhs = T[r][-1] * a
                if lhs < rhs or (lhs == rhs and basis[i] < basis[r]):
                    r = i
        if r is None:
            return D, e
        D = _pivot(T, obj, r, e, D)
        basis[r] = e


def solve_lp(p: LpProblem) -> LpOutcome:
    n = p.num_vars
    m = len(p.A)
    lower, upper = p.bounds()
    lower = [None if v is None else as_rational(v) for v in lower]
    upper = [None if v is None else as_rational(v) for v in upper]

    # x_j = offset_j + sum(sign * y_col), y >= 0
    var_cols = []
    offset = []
    kinds = []
    extra = []  # rows y_col <= bound
    ncol = 0
    for j in range(n):
        lo, up = lower[j], upper[j]
        if lo is not None:
            var_cols.append(((ncol, 1),))
            offset.append(lo)
            kinds.append("lower")
            if up is not None:
                extra.append((j, ncol, up - lo))
            ncol += 1
        elif up is not None:
            var_cols.append(((ncol, -1),))
            offset.append(up)
            kinds.append("upper")
            ncol += 1
        else:
            var_cols.append(((ncol, 1), (ncol + 1, -1)))
            offset.append(Fraction(0))
            kinds.append("free")
            ncol += 2
    nstruct = ncol

    raw_rows = []
    for i in range(m):
        coef = [Fraction(0)] * nstruct
        rhs = as_rational(p.b[i])
        for j, a in enumerate(p.A[i]):
            if a:
                a = as_rational(a)
                rhs -= a * offset[j]
                for col, sign in var_cols[j]:
                    coef[col] += sign * a
        raw_rows.append((coef, rhs))
    for _, col, bound in extra:
        coef = [Fraction(0)] * nstruct
        coef[col] = Fraction(1)
        raw_rows.append((coef, bound))
    M = len(raw_rows)

    n_art = sum(1 for _, rhs in raw_rows if rhs < 0)
    art_start = nstruct + M
    N = art_start + n_art
    T = []
    basis = []
    row_scale = []
    art = art_start
    for i, (coef, rhs) in enumerate(raw_rows):
        ints, s = _scale_to_ints(coef + [rhs])
        row_scale.append(s)
        row = ints[:-1] + [0] * (M + n_art) + [ints[-1]]
        if ints[-1] < 0:
            row = [-v for v in row]
            row[nstruct + i] = -1
            row[art] = 1
            basis.append(art)
            art += 1
        else:
            row[nstruct + i] = 1
            basis.append(nstruct + i)
        T.append(row)

    D = 1
    if n_art:
        obj = [0] * (N + 1)
        for i, row in enumerate(T):
            if basis[i] >= art_start:
                for j, v in enumerate(row):
                    obj[j] -= v
        for j in range(art_start, N):
            obj[j] = 0
        D, _ = _simplex(T, obj, basis, D, N)
        if obj[-1] != 0:
            return LpOutcome(INFEASIBLE)
        for i in range(M):
            if basis[i] >= art_start:
                row = T[i]
                e = next((j for j in range(art_start) if row[j] != 0), None)
                if e is not None:
                    D = _pivot(T, obj, i, e, D)
                    basis[i] = e

    # phase 2 in minimisation form
    cmin = [as_rational(v) for v in p.c]
    if p.sense == "max":
        cmin = [-v for v in cmin]
    ct = [Fraction(0)] * nstruct
    for j in range(n):
        for col, sign in var_cols[j]:
            ct[col] += sign * cmin[j]
    cti, cs = _scale_to_ints(ct)
    cti = cti + [0] * (N - nstruct)
    obj = [D * cti[j] for j in range(N)] + [0]
    for i, row in enumerate(T):
        cb = cti[basis[i]]
        if cb:
            for j, v in enumerate(row):
                obj[j] -= cb * v
    D, entering = _simplex(T, obj, basis, D, art_start)

    if entering is not None:
        dy = [0] * nstruct
        if entering < nstruct:
            dy[entering] = D
        for i, row in enumerate(T):
            if basis[i] < nstruct:
                dy[basis[i]] = -row[entering]
        ray = [sum(sign * dy[col] for col, sign in var_cols[j]) for j in range(n)]
        g = 0
        for v in ray:
            g = _gcd(g, v)
        if g > 1:
            ray = [v // g for v in ray]
        return LpOutcome(UNBOUNDED, ray=tuple(Fraction(v) for v in ray))

    denom = D * cs
    reduced = tuple(Fraction(obj[j], denom) for j in range(art_start))
    if any(v < 0 for v in reduced):
        raise AssertionError("simplex terminated with a negative reduced cost")
    y = [Fraction(0)] * nstruct
    basic_set = set()
    for i, row in enumerate(T):
        if basis[i] < nstruct:
            y[basis[i]] = Fraction(row[-1], D)
        basic_set.add(basis[i])
    x = [offset[j] + sum(sign * y[col] for col, sign in var_cols[j]) for j in range(n)]
    duals = tuple(row_scale[i] * reduced[nstruct + i] for i in range(m))

    active = [i for i in range(m) if nstruct + i not in basic_set]
    for idx, (j, _, _) in enumerate(extra):
        if nstruct + m + idx not in basic_set:
            active.append(m + n + j)
    needs_crossover = False
    for j in range(n):
        cols = var_cols[j]
        if kinds[j] == "lower" and cols[0][0] not in basic_set:
            active.append(m + j)
        elif kinds[j] == "upper" and cols[0][0] not in basic_set:
            active.append(m + n + j)
        elif kinds[j] == "free" and not any(col in basic_set for col, _ in cols):
            needs_crossover = True
    if needs_crossover:
        x, active = _crossover(p, x, active, lower, upper, cmin)
    value = sum(as_rational(cj) * xj for cj, xj in zip(p.c, x))
    return LpOutcome(OPTIMAL, x=tuple(x), value=value, basis=tuple(sorted(active)),
                     duals=duals, reduced_costs=reduced)


def _gcd(a, b):
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def constraint_rows(p: LpProblem):
    """All constraints as (label, row, rhs) triples of ``row . x <= rhs``."""
    n = p.num_vars
    m = len(p.A)
    lower, upper = p.bounds()
    out = [(i, [as_rational(a) for a in p.A[i]], as_rational(p.b[i])) for i in range(m)]
    for j in range(n):
        if lower[j] is not None:
            row = [Fraction(0)] * n
            row[j] = Fraction(-1)
            out.append((m + j, row, -as_rational(lower[j])))
    for j in range(n):
        if upper[j] is not None:
            row = [Fraction(0)] * n
            row[j] = Fraction(1)
            out.append((m + n + j, row, as_rational(upper[j])))
    return out


def _rref(rows, n):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    R = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(R)) if R[i][col] != 0), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        pv = R[r][col]
        R[r] = [v / pv for v in R[r]]
        for i in range(len(R)):
            if i != r and R[i][col] != 0:
                f = R[i][col]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(col)
        r += 1
        if r == len(R):
            break
    return R[:r], pivots


def _crossover(p, x, active, lower, upper, cmin):
    """Slide an optimal basic point along the optimal face until it is a vertex.

    Only needed when a free variable sits at zero without being basic. When
    the feasible region has no vertex the point is returned unchanged.
    """
    n = p.num_vars
    cons = constraint_rows(p)
    by_label = {lab: (row, rhs) for lab, row, rhs in cons}
    _, piv = _rref([row for _, row, _ in cons], n)
    if len(piv) < n:
        return x, active
    x = list(x)
    active = list(active)
    while True:
        R, pivots = _rref([by_label[lab][0] for lab in active], n)
        if len(pivots) == n:
            return x, active
        free = next(j for j in range(n) if j not in pivots)
        d = [Fraction(0)] * n
        d[free] = Fraction(1)
        for row, pc in zip(R, pivots):
            d[pc] = -row[free]
        if sum(c * v for c, v in zip(cmin, d)) != 0:
            raise AssertionError("optimal face direction changes the objective")
        for direction in (d, [-v for v in d]):
            best = None
            for lab, row, rhs in cons:
                rd = sum(a * v for a, v in zip(row, direction))
                if rd > 0:
                    t = (rhs - sum(a * v for a, v in zip(row, x))) / rd
                    if best is None or t < best[0]:
                        best = (t, lab)
            if best is not None:
                t, lab = best
                x = [a + t * v for a, v in zip(x, direction)]
                active.append(lab)
                break
        else:
            raise AssertionError("pointed region without a blocking constraint")


def check_optimality(p: LpProblem, out: LpOutcome) -> bool:
    """Independent optimality proof: primal feasibility plus a matching dual.

    Uses ``out.duals`` for the rows of A, derives bound multipliers from the
    residual and checks dual feasibility and equal objective values.
    """
    if out.status != OPTIMAL:
        return False
    if any(v < 0 for v in out.reduced_costs):
        return False
    n = p.num_vars
    x = out.x
    for _, row, rhs in constraint_rows(p):
        if sum(a * v for a, v in zip(row, x)) > rhs:
            return False
    lam = out.duals
    if any(v < 0 for v in lam):
        return False
    lower, upper = p.bounds()
    c = [as_rational(v) for v in p.c]
    if p.sense == "max":
        c = [-v for v in c]
    dual_value = -sum(l * as_rational(bi) for l, bi in zip(lam, p.b))
    for j in range(n):
        r = c[j] + sum(lam[i] * as_rational(p.A[i][j]) for i in range(len(p.A)))
        if r > 0:
            if lower[j] is None:
                return False
            dual_value += r * as_rational(lower[j])
        elif r < 0:
            if upper[j] is None:
                return False
            dual_value += r * as_rational(upper[j])
    primal = sum(cj * xj for cj, xj in zip(c, x))
    return primal == dual_value


def check_ray(p: LpProblem, ray) -> bool:
    """True iff ``ray`` is a recession direction that strictly improves the objective."""
    n = p.num_vars
    for _, row, _ in constraint_rows(p):
        if sum(a * v for a, v in zip(row, ray)) > 0:
            return False
    slope = sum(as_rational(cj) * d for cj, d in zip(p.c, ray))
    return slope < 0 if p.sense == "min" else slope > 0
