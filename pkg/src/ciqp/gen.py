"""Seeded instance generators with known constraint structure.

All randomness comes from SplitMix64 (Steele, Lea & Flood's 64-bit mixing
generator), so a seed reproduces the same instance on any platform.
Every instance plants a feasible integral point and carries explicit variable
bounds ``0 <= x_j <= u_j`` as constraint rows, so it is feasible, bounded and
enumerable over its ``oracle_box``.
"""

from __future__ import annotations

from .matprops import max_abs_subdeterminant
from .model import Instance

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform-ish integer in [lo, hi] (plain modulo reduction)."""
        if hi < lo:
            raise ValueError("empty range")
        return lo + self.next_u64() % (hi - lo + 1)


def _objective(rng, n, k, coeff_bound):
    q = [rng.randint(1, coeff_bound) for _ in range(k)]
    h = [rng.randint(-coeff_bound, coeff_bound) for _ in range(n)]
    return q, h


def _with_bounds(core, rhs, upper):
    n = len(upper)
    eye = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    W = [list(r) for r in core] + eye + [[-v for v in r] for r in eye]
    w = list(rhs) + list(upper) + [0] * n
    return W, w


def _check_common(n, k, coeff_bound):
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= number of variables")
    if coeff_bound < 1:
        raise ValueError("coeff_bound must be positive")


def gen_network(nodes: int, arcs: int, k: int, coeff_bound: int, seed: int,
                capacity: int = 3) -> Instance:
    """Concave-cost flow on a random connected digraph.

    Flow conservation ``N x = b`` is written as ``N x <= b, -N x <= -b`` with
    the node-arc incidence matrix N (+1 at the tail, -1 at the head); ``b``
    comes from a random integral flow, so the instance is feasible.
    """
    _check_common(arcs, k, coeff_bound)
    if nodes < 2 or arcs < nodes - 1:
        raise ValueError("need nodes >= 2 and arcs >= nodes - 1 for a connected digraph")
    if capacity < 1:
        raise ValueError("capacity must be positive")
    rng = SplitMix64(seed)
    arc_list = [(rng.randint(0, v - 1), v) for v in range(1, nodes)]
    while len(arc_list) < arcs:
        u = rng.randint(0, nodes - 1)
        v = rng.randint(0, nodes - 2)
        if v >= u:
            v += 1
        arc_list.append((u, v))
    N = [[0] * arcs for _ in range(nodes)]
    for a, (u, v) in enumerate(arc_list):
        N[u][a] = 1
        N[v][a] = -1
    cap = [rng.randint(1, capacity) for _ in range(arcs)]
    flow = [rng.randint(0, c) for c in cap]
    b = [sum(N[v][a] * flow[a] for a in range(arcs)) for v in range(nodes)]
    core = N + [[-x for x in row] for row in N]
    W, w = _with_bounds(core, b + [-x for x in b], cap)
    q, h = _objective(rng, arcs, k, coeff_bound)
    return Instance.build(W, w, q, h, k=k, declared_delta=1,
                          name=f"network-n{nodes}-a{arcs}-k{k}-s{seed}",
                          oracle_box=[(0, c) for c in cap])


def gen_interval(rows: int, cols: int, k: int, coeff_bound: int, seed: int,
                 bound: int = 3) -> Instance:
    """Consecutive-ones rows (each row possibly negated) plus variable bounds."""
    _check_common(cols, k, coeff_bound)
    if rows < 0 or cols < 1 or bound < 1:
        raise ValueError("need rows >= 0, cols >= 1, bound >= 1")
    rng = SplitMix64(seed)
    upper = [rng.randint(1, bound) for _ in range(cols)]
    x0 = [rng.randint(0, u) for u in upper]
    core = []
    rhs = []
    for _ in range(rows):
        a = rng.randint(0, cols - 1)
        b = rng.randint(a, cols - 1)
        sign = 1 if rng.randint(0, 1) else -1
        row = [sign if a <= j <= b else 0 for j in range(cols)]
        core.append(row)
        rhs.append(sum(r * x for r, x in zip(row, x0)) + rng.randint(0, 2))
    W, w = _with_bounds(core, rhs, upper)
    q, h = _objective(rng, cols, k, coeff_bound)
    return Instance.build(W, w, q, h, k=k, declared_delta=1,
                          name=f"interval-r{rows}-c{cols}-k{k}-s{seed}",
                          oracle_box=[(0, u) for u in upper])


def gen_general_delta(n: int, m: int, k: int, target_delta_max: int, coeff_bound: int,
                      seed: int, bound: int = 3, row_budget: int = 2000) -> Instance:
    """Random rows with entries in [-2, 2] whose subdeterminants stay within the target.

    Rows are drawn one at a time and each is redrawn until the matrix built so
    far still has largest absolute subdeterminant <= ``target_delta_max``.
    For a target of at least 2 the block [[1, 1], [-1, 1]] is planted in the
    top-left corner so the matrix really is non-unimodular.
    """
    _check_common(n, k, coeff_bound)
    if not (1 <= n <= 8 and 0 <= m <= 8):
        raise ValueError("general-delta instances need 1 <= n <= 8 and 0 <= m <= 8")
    if target_delta_max < 1 or bound < 1:
        raise ValueError("target_delta_max and bound must be positive")
    rng = SplitMix64(seed)
    plant = target_delta_max >= 2 and n >= 2 and m >= 2
    core = []
    for i in range(m):
        for _ in range(row_budget):
            row = [rng.randint(-2, 2) for _ in range(n)]
            if plant and i < 2:
                row[0], row[1] = ((1, 1), (-1, 1))[i]
            cert = max_abs_subdeterminant(core + [row], size_cap=None, stop_above=target_delta_max)
            if cert.delta <= target_delta_max:
                core.append(row)
                break
        else:
            raise ValueError(f"could not draw row {i} within delta {target_delta_max} "
                             f"after {row_budget} attempts")
    upper = [rng.randint(1, bound) for _ in range(n)]
    x0 = [rng.randint(0, u) for u in upper]
    rhs = [sum(a * x for a, x in zip(row, x0)) + rng.randint(0, 2) for row in core]
    W, w = _with_bounds(core, rhs, upper)
    cert = max_abs_subdeterminant(W, size_cap=None)
    q, h = _objective(rng, n, k, coeff_bound)
    return Instance.build(W, w, q, h, k=k, declared_delta=max(cert.delta, 1),
                          name=f"general-n{n}-m{m}-k{k}-d{target_delta_max}-s{seed}",
                          oracle_box=[(0, u) for u in upper])
