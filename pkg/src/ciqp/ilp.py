"""Exact integer linear programming by depth-first LP branch-and-bound."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Callable, Optional

from .lp import INFEASIBLE, OPTIMAL, UNBOUNDED, LpProblem, _scale_to_ints, solve_lp
from .numeric import as_rational, ceil_sqrt


class IlpUndecided(RuntimeError):
    """Branch-and-bound could not settle the problem within its limits."""


@dataclass(frozen=True)
class IlpOutcome:
    status: str
    x: Optional[tuple] = None
    value: Optional[Fraction] = None


def _hadamard_bound(rows) -> int:
    """Upper bound on every subdeterminant of an integer matrix."""
    norms = sorted((ceil_sqrt(sum(v * v for v in r)) for r in rows if any(r)), reverse=True)
    width = max((len(r) for r in rows), default=0)
    bound = 1
    for v in norms[:width]:
        bound *= v
    return bound


def integer_point_bound(p: LpProblem) -> int:
    """Radius R such that the polyhedron has an integer point iff it has one with |x_j| <= R.

    Integer points of {x : Gx <= g} with integral G, g are generated by integral
    vectors of infinity norm at most (n+1) times the largest subdeterminant of
    [G g]; the Hadamard bound stands in for that subdeterminant.
    """
    n = p.num_vars
    lower, upper = p.bounds()
    rows = []
    for a, b in zip(p.A, p.b):
        ints, _ = _scale_to_ints(list(a) + [b])
        rows.append(ints)
    for j in range(n):
        for bound, sign in ((lower[j], -1), (upper[j], 1)):
            if bound is not None:
                e = [0] * (n + 1)
                e[j] = sign
                e[n] = sign * as_rational(bound)
                ints, _ = _scale_to_ints(e)
                rows.append(ints)
    return (n + 1) * _hadamard_bound(rows)


def _branch_and_bound(p: LpProblem, lower, upper, node_limit, on_lp, feasibility_only=False):
    """Minimise over integers; returns (status, x, value). p must be a min problem."""
    integral_obj = all(as_rational(c).denominator == 1 for c in p.c)
    stack = [(tuple(lower), tuple(upper))]
    best_x = None
    best_val = None
    nodes = 0
    while stack:
        lo, up = stack.pop()
        nodes += 1
        if nodes > node_limit:
            raise IlpUndecided(f"branch-and-bound node limit {node_limit} reached")
        sub = p.with_bounds(lo, up)
        out = solve_lp(sub)
        if on_lp is not None:
            on_lp(sub, out)
        if out.status == INFEASIBLE:
            continue
        if out.status == UNBOUNDED:
            return UNBOUNDED, None, None
        bound = out.value
        if integral_obj:
            bound = Fraction(ceil(bound))
        if best_val is not None and bound >= best_val:
            continue
        frac = next((j for j, v in enumerate(out.x) if v.denominator != 1), None)
        if frac is None:
            best_x = tuple(int(v) for v in out.x)
            best_val = out.value
            if feasibility_only:
                break
            continue
        v = out.x[frac]
        up_ceil = list(lo), list(up)
        up_ceil[0][frac] = ceil(v)
        down = list(lo), list(up)
        down[1][frac] = floor(v)
        stack.append((tuple(up_ceil[0]), tuple(up_ceil[1])))
        stack.append((tuple(down[0]), tuple(down[1])))
    if best_x is None:
        return INFEASIBLE, None, None
    return OPTIMAL, best_x, best_val


def find_integer_point(p: LpProblem, probe_cap: int = 1024, node_limit: int = 200_000,
                       on_lp=None):
    """Some integer feasible point, or None when provably none exists.

    Searches boxes [-R, R]^n for R = 1, 2, 4, ... up to the certified radius of
    :func:`integer_point_bound`; gives up with :class:`IlpUndecided` once R
    would exceed ``probe_cap`` without reaching that radius.
    """
    n = p.num_vars
    zero = LpProblem(p.A, p.b, (0,) * n, "min", p.lower, p.upper)
    lower, upper = p.bounds()
    limit = integer_point_bound(p)
    radius = 1
    while True:
        r = min(radius, limit)
        lo = [-r if l is None else max(as_rational(l), -r) for l in lower]
        hi = [r if u is None else min(as_rational(u), r) for u in upper]
        lo = [ceil(v) for v in lo]
        hi = [floor(v) for v in hi]
        if all(a <= b for a, b in zip(lo, hi)):
            status, x, _ = _branch_and_bound(zero, lo, hi, node_limit, on_lp, feasibility_only=True)
            if status == OPTIMAL:
                return x
        if r >= limit:
            return None
        radius *= 2
        if radius > probe_cap:
            raise IlpUndecided(
                f"integer feasibility unresolved up to radius {probe_cap} (certified radius {limit})")


def solve_ilp(p: LpProblem, *, node_limit: int = 200_000, probe_cap: int = 1024,
              on_lp: Optional[Callable] = None) -> IlpOutcome:
    """Optimise over all-integer x.

    Depth-first search, branching on the smallest-index fractional variable
    with the floor branch explored first; the first optimum found is kept.
    If the LP relaxation is unbounded the problem is unbounded exactly when an
    integer feasible point exists, which :func:`find_integer_point` decides.
    """
    lower, upper = p.bounds()
    lo = [None if v is None else ceil(as_rational(v)) for v in lower]
    hi = [None if v is None else floor(as_rational(v)) for v in upper]
    if any(a is not None and b is not None and a > b for a, b in zip(lo, hi)):
        return IlpOutcome(INFEASIBLE)
    sign = 1 if p.sense == "min" else -1
    cmin = tuple(sign * as_rational(c) for c in p.c)
    pmin = LpProblem(p.A, p.b, cmin, "min", tuple(lo), tuple(hi))
    status, x, val = _branch_and_bound(pmin, lo, hi, node_limit, on_lp)
    if status == UNBOUNDED:
        point = find_integer_point(pmin, probe_cap, node_limit, on_lp)
        if point is None:
            return IlpOutcome(INFEASIBLE)
        return IlpOutcome(UNBOUNDED)
    if status == INFEASIBLE:
        return IlpOutcome(INFEASIBLE)
    return IlpOutcome(OPTIMAL, x=x, value=sign * val)
