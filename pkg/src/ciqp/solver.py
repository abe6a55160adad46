"""Epsilon-approximation for separable concave integer quadratic programs.

The algorithm screens feasibility/boundedness with 2k+1 linear subproblems,
then repeatedly takes a subproblem from a depth-first stack: narrow nonlinear
ranges are split by fixing the variable to each of its integer values, and
once every range is at least as wide as the grid size ``g`` the nonlinear box
is cut into ``g**k`` cells, each solved as a linear subproblem under the
affine interpolant of the concave part. The best point found overall is
returned.

In ``general`` mode every subproblem is an ILP (branch-and-bound); in ``tu``
mode the constraint matrix is totally unimodular, so LP vertices are already
integral and a smaller grid suffices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import ceil, floor
from typing import Callable, Optional

from .ilp import IlpOutcome, solve_ilp
from .lp import INFEASIBLE, OPTIMAL, UNBOUNDED, LpProblem, solve_lp
from .matprops import DEFAULT_SIZE_CAP, is_totally_unimodular, max_abs_subdeterminant
from .ilp import _hadamard_bound
from .model import Instance, SolveConfig, SolveReport, SolveStats, Subproblem, validate
from .numeric import as_rational, ceil_sqrt

EPS_APPROX = "eps_approx"


class InvalidInstanceError(ValueError):
    def __init__(self, violations):
        super().__init__("invalid instance: " + "; ".join(violations))
        self.violations = list(violations)


class NotTotallyUnimodularError(RuntimeError):
    """Raised when tu mode meets a matrix that is not totally unimodular."""


class TuRejectedError(NotTotallyUnimodularError):
    """tu mode with verification requested on a matrix that fails the TU check."""


class DeltaUnavailableError(ValueError):
    """No trustworthy subdeterminant bound could be obtained."""


@dataclass(frozen=True)
class VariableRange:
    index: int
    lower: int
    upper: int


@dataclass(frozen=True)
class Box:
    """Grid cell [r_i, s_i] over the free nonlinear variables ``indices``."""

    indices: tuple
    r: tuple
    s: tuple
    grid_index: tuple


@dataclass(frozen=True)
class AffineUnderestimator:
    """mu(x) = sum_i coefficients[i] * x[indices[i]] + constant."""

    indices: tuple
    coefficients: tuple
    constant: Fraction

    def __call__(self, point) -> Fraction:
        """Evaluate on a point given over ``indices`` (same order)."""
        return sum(c * as_rational(v) for c, v in zip(self.coefficients, point)) + self.constant


@dataclass(frozen=True)
class Split:
    index: int
    values: tuple


@dataclass(frozen=True)
class ProbeResult:
    status: str  # infeasible | unbounded | feasible
    x_bar: Optional[tuple] = None
    ranges: Optional[tuple] = None


class Subsolver:
    """Counts and dispatches the linear subproblems (ILP or LP by mode)."""

    def __init__(self, mode: str, stats: Optional[SolveStats] = None,
                 config: Optional[SolveConfig] = None, on_subsolve: Optional[Callable] = None):
        if mode not in ("general", "tu"):
            raise ValueError(f"subsolver mode must be general or tu, got {mode!r}")
        self.mode = mode
        self.stats = stats if stats is not None else SolveStats()
        self.config = config if config is not None else SolveConfig()
        self.on_subsolve = on_subsolve

    def solve(self, problem: LpProblem) -> IlpOutcome:
        if self.mode == "tu":
            self.stats.lp_solves += 1
            out = solve_lp(problem)
            if self.on_subsolve is not None:
                self.on_subsolve("lp", problem, out)
            if out.status != OPTIMAL:
                return IlpOutcome(out.status)
            if any(v.denominator != 1 for v in out.x):
                raise NotTotallyUnimodularError(
                    f"matrix not TU: LP returned fractional vertex {tuple(map(str, out.x))}")
            return IlpOutcome(OPTIMAL, tuple(int(v) for v in out.x), out.value)
        self.stats.ilp_solves += 1
        out = solve_ilp(problem, node_limit=self.config.node_limit, probe_cap=self.config.probe_cap)
        if self.on_subsolve is not None:
            self.on_subsolve("ilp", problem, out)
        return out


def _sub_lp(sub: Subproblem, cost: dict, sense: str = "min", bounds: Optional[dict] = None) -> LpProblem:
    """LP over the free variables of ``sub``; ``cost``/``bounds`` are keyed by original index."""
    free = sub.free_vars
    c = tuple(cost.get(j, 0) for j in free)
    lower = upper = None
    if bounds:
        lower = tuple(bounds[j][0] if j in bounds else None for j in free)
        upper = tuple(bounds[j][1] if j in bounds else None for j in free)
    A = tuple(tuple(row) for row in sub.matrix())
    return LpProblem(A, tuple(sub.rhs()), c, sense, lower, upper)


def compute_grid_size(k_tilde: int, n_tilde: int, delta: int, epsilon, mode: str) -> int:
    """ceil(sqrt(k((2 n delta)^2 + 1/eps))) in general mode, ceil(sqrt(k(1 + 1/eps))) in tu mode."""
    if k_tilde < 1:
        raise ValueError("grid size needs at least one free nonlinear variable")
    eps = as_rational(epsilon)
    if not 0 < eps <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    if mode == "tu":
        inner = 1 + 1 / eps
    else:
        inner = (2 * n_tilde * delta) ** 2 + 1 / eps
    return ceil_sqrt(k_tilde * inner)


def step1_probe(instance: Instance, mode: str, subsolver: Optional[Subsolver] = None) -> ProbeResult:
    """Decide infeasibility/unboundedness and compute the root nonlinear ranges."""
    if subsolver is None:
        subsolver = Subsolver(mode)
    root = instance.root()
    x_bar = None
    ranges = []
    for i in range(instance.k):
        vals = []
        for sense in ("min", "max"):
            out = subsolver.solve(_sub_lp(root, {i: 1}, sense))
            if out.status == INFEASIBLE:
                return ProbeResult("infeasible")
            if out.status == UNBOUNDED:
                return ProbeResult("unbounded")
            if x_bar is None:
                x_bar = out.x
            vals.append(int(out.value))
        ranges.append(VariableRange(i, vals[0], vals[1]))
    fixed = {i: (x_bar[i], x_bar[i]) for i in range(instance.k)}
    out = subsolver.solve(_sub_lp(root, dict(enumerate(instance.h)), "min", fixed))
    if out.status == UNBOUNDED:
        return ProbeResult("unbounded")
    if out.status != OPTIMAL:
        raise RuntimeError("auxiliary problem infeasible at a feasible point")
    return ProbeResult("feasible", tuple(x_bar), tuple(ranges))


def variable_ranges(sub: Subproblem, subsolver: Subsolver):
    """Integral min/max of each free nonlinear variable, or None if the subproblem is infeasible."""
    if sub.k_tilde < 1:
        raise ValueError("variable_ranges needs a free nonlinear variable")
    if sub.cached_ranges is not None:
        return list(sub.cached_ranges)
    ranges = []
    for i in sub.free_nonlinear:
        vals = []
        for sense in ("min", "max"):
            out = subsolver.solve(_sub_lp(sub, {i: 1}, sense))
            if out.status == INFEASIBLE:
                return None
            if out.status == UNBOUNDED:
                raise RuntimeError("unbounded range subproblem after boundedness screening")
            vals.append(int(out.value))
        ranges.append(VariableRange(i, vals[0], vals[1]))
    return ranges


def decomposition_step(ranges, g: int) -> Optional[Split]:
    """Split on the first range narrower than ``g``; None means proceed to the mesh."""
    for rg in ranges:
        if rg.upper - rg.lower < g:
            return Split(rg.index, tuple(range(rg.lower, rg.upper + 1)))
    return None


def build_boxes(ranges, g: int) -> list:
    """The g**k grid cells over the ranges, in lexicographic grid order."""
    if g < 1:
        raise ValueError("grid size must be positive")
    indices = tuple(rg.index for rg in ranges)
    lows = [Fraction(rg.lower) for rg in ranges]
    steps = [Fraction(rg.upper - rg.lower, g) for rg in ranges]
    boxes = []
    for grid in product(range(g), repeat=len(ranges)):
        r = tuple(lo + t * st for lo, t, st in zip(lows, grid, steps))
        s = tuple(ri + st for ri, st in zip(r, steps))
        boxes.append(Box(indices, r, s, grid))
    return boxes


def build_underestimator(box: Box, q) -> AffineUnderestimator:
    """Affine interpolant of sum -q_i x_i^2 at the vertices of ``box``; q aligns with box.indices."""
    coeffs = tuple(-qi * (ri + si) for qi, ri, si in zip(q, box.r, box.s))
    const = sum((qi * ri * si for qi, ri, si in zip(q, box.r, box.s)), Fraction(0))
    return AffineUnderestimator(box.indices, coeffs, const)


def solve_box(sub: Subproblem, box: Box, mu: AffineUnderestimator, subsolver: Subsolver):
    """Minimise mu + h over the cell; returns (lifted x, true objective) or None if empty."""
    cost = {j: Fraction(sub.base.h[j]) for j in sub.free_vars}
    for j, coef in zip(mu.indices, mu.coefficients):
        cost[j] += coef
    bounds = {j: (ceil(r), floor(s)) for j, r, s in zip(box.indices, box.r, box.s)}
    out = subsolver.solve(_sub_lp(sub, cost, "min", bounds))
    if out.status == INFEASIBLE:
        return None
    if out.status == UNBOUNDED:
        raise RuntimeError("unbounded box subproblem after boundedness screening")
    x = sub.lift(out.x)
    return x, sub.base.objective(x)


def mesh_step(sub: Subproblem, ranges, g: int, subsolver: Subsolver):
    """Best (lifted x, objective) over all grid cells; ties go to the earliest cell."""
    q = [sub.base.q[rg.index] for rg in ranges]
    best = None
    for box in build_boxes(ranges, g):
        subsolver.stats.boxes_solved += 1
        cand = solve_box(sub, box, build_underestimator(box, q), subsolver)
        if cand is not None and (best is None or cand[1] < best[1]):
            best = cand
    if best is None:
        raise RuntimeError("no feasible grid cell for a feasible subproblem")
    return best


def sandwich_epsilon(eps_prime, xi) -> Fraction:
    """Accuracy to request on an objective so that the result is eps_prime-approximate for
    any objective sandwiched within a ``xi`` fraction of its range: eps' (1 - xi) - xi."""
    eps_prime = as_rational(eps_prime)
    xi = as_rational(xi)
    if not 0 <= xi < 1:
        raise ValueError("xi must lie in [0, 1)")
    if not xi / (1 - xi) < eps_prime <= 1:
        raise ValueError(f"eps' must lie in ({xi / (1 - xi)}, 1]")
    return eps_prime * (1 - xi) - xi


def resolve_mode(instance: Instance, config: SolveConfig) -> str:
    if config.mode == "general":
        return "general"
    if config.mode == "tu":
        if config.verify_tu and not is_totally_unimodular(instance.W, config.tu_size_cap):
            raise TuRejectedError("constraint matrix is not totally unimodular")
        return "tu"
    if config.delta_policy == "use_declared" and instance.declared_delta is not None:
        return "tu" if instance.declared_delta == 1 else "general"
    verdict = is_totally_unimodular(instance.W, config.tu_size_cap)
    return "tu" if verdict and verdict.exhaustive else "general"


def resolve_delta(instance: Instance, config: SolveConfig) -> int:
    if config.delta_policy == "use_declared" and instance.declared_delta is not None:
        return instance.declared_delta
    cap = config.delta_cap if config.delta_policy == "compute_capped" else DEFAULT_SIZE_CAP
    cert = max_abs_subdeterminant(instance.W, cap)
    if cert.exhaustive:
        return max(cert.delta, 1)
    if config.allow_delta_overestimate:
        return max(cert.delta, _hadamard_bound([list(r) for r in instance.W]), 1)
    raise DeltaUnavailableError(
        f"subdeterminant search capped at size {cap}; declare delta or allow over-estimation")


def solve_count_bound(k: int, n: int, delta: int, epsilon, mode: str) -> int:
    """(3 + g)^k with g the root grid size."""
    if k == 0:
        return 1
    return (3 + compute_grid_size(k, n, delta, epsilon, mode)) ** k


def main_loop(instance: Instance, config: SolveConfig, probe: ProbeResult, delta: int,
              subsolver: Subsolver) -> SolveReport:
    stats = subsolver.stats
    mode = subsolver.mode
    eps = config.epsilon
    stack = [Subproblem(instance, (), probe.ranges)]
    best = None
    while stack:
        sub = stack.pop()
        if sub.k_tilde == 0:
            out = subsolver.solve(_sub_lp(sub, dict(enumerate(instance.h)), "min"))
            if out.status == UNBOUNDED:
                raise RuntimeError("unbounded leaf after boundedness screening")
            if out.status == OPTIMAL:
                x = sub.lift(out.x)
                f = instance.objective(x)
                if best is None or f < best[1]:
                    best = (x, f)
            continue
        ranges = variable_ranges(sub, subsolver)
        if ranges is None:
            continue
        g = compute_grid_size(sub.k_tilde, sub.n_tilde, delta, eps, mode)
        split = decomposition_step(ranges, g)
        if split is not None:
            stats.subproblems_created += len(split.values)
            for value in reversed(split.values):
                stack.append(sub.restrict(split.index, value))
            continue
        x, f = mesh_step(sub, ranges, g, subsolver)
        if best is None or f < best[1]:
            best = (x, f)
    if best is None:
        raise RuntimeError("no candidate found for a feasible bounded instance")
    return SolveReport(EPS_APPROX, best[0], Fraction(best[1]), stats, mode, delta)


def solve(instance: Instance, config: Optional[SolveConfig] = None,
          on_subsolve: Optional[Callable] = None) -> SolveReport:
    """Find an epsilon-approximate solution, or report infeasibility/unboundedness.

    ``on_subsolve(kind, problem, outcome)`` is called after every linear
    subproblem (``kind`` is ``"lp"`` or ``"ilp"``).
    """
    if config is None:
        config = SolveConfig()
    violations = validate(instance)
    if violations:
        raise InvalidInstanceError(violations)
    mode = resolve_mode(instance, config)
    delta = 1 if mode == "tu" else resolve_delta(instance, config)
    stats = SolveStats()
    subsolver = Subsolver(mode, stats, config, on_subsolve)
    k, n = instance.k, instance.num_vars
    if k >= 1:
        stats.grid_size_root = compute_grid_size(k, n, delta, config.epsilon, mode)

    if k == 0:
        out = subsolver.solve(_sub_lp(instance.root(), dict(enumerate(instance.h)), "min"))
        if out.status == OPTIMAL:
            report = SolveReport(EPS_APPROX, tuple(out.x), Fraction(instance.objective(out.x)),
                                 stats, mode, delta)
        else:
            report = SolveReport(out.status, stats=stats, mode=mode, delta=delta)
    else:
        probe = step1_probe(instance, mode, subsolver)
        if probe.status != "feasible":
            report = SolveReport(probe.status, stats=stats, mode=mode, delta=delta)
        else:
            report = main_loop(instance, config, probe, delta, subsolver)

    used = stats.lp_solves if mode == "tu" else stats.ilp_solves
    bound = solve_count_bound(k, n, delta, config.epsilon, mode)
    if used > bound:
        raise RuntimeError(f"solve-count bound violated: {used} > {bound}")
    return report
