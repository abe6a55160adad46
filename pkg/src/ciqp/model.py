"""Problem data: instances, subproblems obtained by fixing variables, configs and reports.

Variables are 0-based. The nonlinear (concave) variables are always the first
``k`` indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .numeric import as_rational

MODES = ("general", "tu", "auto")
DELTA_POLICIES = ("use_declared", "compute", "compute_capped")


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


@dataclass(frozen=True)
class Instance:
    """min sum_{i<k} -q_i x_i^2 + h.x  s.t.  W x <= w,  x integral."""

    num_vars: int
    num_cons: int
    k: int
    W: tuple
    w: tuple
    q: tuple
    h: tuple
    declared_delta: Optional[int] = None
    name: Optional[str] = None
    oracle_box: Optional[tuple] = None

    @classmethod
    def build(cls, W, w, q, h, k=None, declared_delta=None, name=None, oracle_box=None):
        """Convenience constructor from nested lists; dimensions are inferred."""
        W = tuple(tuple(row) for row in W)
        w = tuple(w)
        q = tuple(q)
        h = tuple(h)
        n = len(h)
        if k is None:
            k = len(q)
        box = None
        if oracle_box is not None:
            box = tuple((lo, hi) for lo, hi in oracle_box)
        return cls(num_vars=n, num_cons=len(W), k=k, W=W, w=w, q=q, h=h,
                   declared_delta=declared_delta, name=name, oracle_box=box)

    def objective(self, x) -> int:
        """True objective f(x); integral for integral x."""
        return sum(-self.q[i] * x[i] * x[i] for i in range(self.k)) + sum(
            hj * xj for hj, xj in zip(self.h, x))

    def is_feasible(self, x) -> bool:
        if len(x) != self.num_vars:
            return False
        if any(not _is_int(v) for v in x):
            return False
        return all(sum(a * v for a, v in zip(row, x)) <= rhs for row, rhs in zip(self.W, self.w))

    def root(self) -> "Subproblem":
        return Subproblem(self)


def validate(instance: Instance) -> list:
    """Return the list of invariant violations (empty when the instance is well formed)."""
    out = []
    n, m, k = instance.num_vars, instance.num_cons, instance.k
    if not _is_int(n) or n < 0:
        out.append("num_vars must be a nonnegative integer")
        return out
    if not _is_int(m) or m < 0:
        out.append("num_cons must be a nonnegative integer")
        return out
    if not _is_int(k) or not 0 <= k <= n:
        out.append("k must satisfy 0 <= k <= num_vars")
    if len(instance.W) != m:
        out.append(f"dimension mismatch: W has {len(instance.W)} rows, expected {m}")
    for r, row in enumerate(instance.W):
        if len(row) != n:
            out.append(f"dimension mismatch: W row {r} has {len(row)} entries, expected {n}")
        if any(not _is_int(v) for v in row):
            out.append(f"W row {r} has non-integer entries")
    if len(instance.w) != m:
        out.append(f"dimension mismatch: w has {len(instance.w)} entries, expected {m}")
    if any(not _is_int(v) for v in instance.w):
        out.append("w has non-integer entries")
    if _is_int(k) and len(instance.q) != k:
        out.append(f"dimension mismatch: q has {len(instance.q)} entries, expected {k}")
    if any(not _is_int(v) for v in instance.q):
        out.append("q has non-integer entries")
    elif any(v <= 0 for v in instance.q):
        out.append("q must be positive")
    if len(instance.h) != n:
        out.append(f"dimension mismatch: h has {len(instance.h)} entries, expected {n}")
    if any(not _is_int(v) for v in instance.h):
        out.append("h has non-integer entries")
    d = instance.declared_delta
    if d is not None and (not _is_int(d) or d < 1):
        out.append("delta must be a positive integer")
    if instance.oracle_box is not None:
        box = instance.oracle_box
        if len(box) != n:
            out.append(f"dimension mismatch: oracle_box has {len(box)} entries, expected {n}")
        for j, pair in enumerate(box):
            if len(pair) != 2 or not all(_is_int(v) for v in pair) or pair[0] > pair[1]:
                out.append(f"oracle_box entry {j} must be an integer pair lo <= hi")
    return out


@dataclass(frozen=True)
class Subproblem:
    """An instance with some nonlinear variables fixed to integers.

    ``fixings`` is a sorted tuple of ``(index, value)`` pairs so that fixing
    order does not matter for equality.
    """

    base: Instance
    fixings: tuple = ()
    cached_ranges: Optional[tuple] = field(default=None, compare=False)

    @property
    def fixed(self) -> dict:
        return dict(self.fixings)

    @property
    def free_vars(self) -> list:
        fixed = self.fixed
        return [j for j in range(self.base.num_vars) if j not in fixed]

    @property
    def free_nonlinear(self) -> list:
        fixed = self.fixed
        return [i for i in range(self.base.k) if i not in fixed]

    @property
    def k_tilde(self) -> int:
        return self.base.k - len(self.fixings)

    @property
    def n_tilde(self) -> int:
        return self.base.num_vars - len(self.fixings)

    def restrict(self, var: int, value: int) -> "Subproblem":
        if not 0 <= var < self.base.k:
            raise ValueError(f"variable {var} is not a nonlinear variable")
        if var in self.fixed:
            raise ValueError(f"variable {var} is already fixed")
        if not _is_int(value):
            raise ValueError("fixings must be integers")
        return Subproblem(self.base, tuple(sorted(self.fixings + ((var, value),))))

    def matrix(self) -> list:
        """Column submatrix of W on the free variables."""
        cols = self.free_vars
        return [[row[j] for j in cols] for row in self.base.W]

    def rhs(self) -> list:
        fixed = self.fixings
        return [wi - sum(row[j] * v for j, v in fixed) for row, wi in zip(self.base.W, self.base.w)]

    def constant(self) -> int:
        """Objective contribution of the fixed variables."""
        b = self.base
        return sum(-b.q[j] * v * v + b.h[j] * v for j, v in self.fixings)

    def lift(self, x_free) -> tuple:
        """Re-insert the fixed values into a vector over the free variables."""
        full = [0] * self.base.num_vars
        for j, v in zip(self.free_vars, x_free):
            full[j] = v
        for j, v in self.fixings:
            full[j] = v
        return tuple(full)


@dataclass(frozen=True)
class SolveConfig:
    epsilon: Fraction = Fraction(1, 2)
    mode: str = "auto"
    delta_policy: str = "use_declared"
    delta_cap: Optional[int] = None
    allow_delta_overestimate: bool = False
    verify_tu: bool = False
    tu_size_cap: int = 8
    node_limit: int = 200_000
    probe_cap: int = 1024

    def __post_init__(self):
        eps = as_rational(self.epsilon)
        object.__setattr__(self, "epsilon", eps)
        if not 0 < eps <= 1:
            raise ValueError(f"epsilon must lie in (0, 1], got {eps}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.delta_policy not in DELTA_POLICIES:
            raise ValueError(f"unknown delta policy {self.delta_policy!r}")
        if self.delta_policy == "compute_capped" and (self.delta_cap is None or self.delta_cap < 1):
            raise ValueError("compute_capped needs a positive delta_cap")


@dataclass
class SolveStats:
    ilp_solves: int = 0
    lp_solves: int = 0
    subproblems_created: int = 0
    boxes_solved: int = 0
    grid_size_root: int = 0


@dataclass
class SolveReport:
    status: str
    solution: Optional[tuple] = None
    objective: Optional[Fraction] = None
    stats: SolveStats = field(default_factory=SolveStats)
    mode: Optional[str] = None
    delta: Optional[int] = None
