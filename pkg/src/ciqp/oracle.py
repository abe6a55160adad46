"""Brute-force ground truth by enumerating every integer point of a box."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Optional

import numpy as np

from .model import Instance
from .numeric import as_rational

DEFAULT_VOLUME_CAP = 10**7
_CHUNK = 1 << 16
_INT64_SAFE = 1 << 62


class OracleRefusal(ValueError):
    """The requested box is too large to enumerate."""

    def __init__(self, volume, cap):
        super().__init__(f"box volume {volume} exceeds enumeration cap {cap}")
        self.volume = volume
        self.cap = cap


@dataclass(frozen=True)
class OracleResult:
    f_star: Fraction
    f_max: Fraction
    argmin: tuple
    argmax: tuple
    count_feasible: int


@dataclass(frozen=True)
class Verdict:
    kind: str  # pass | fail | optimal_required_fail | infeasible_candidate
    ratio: Optional[Fraction] = None
    f_candidate: Optional[Fraction] = None
    f_star: Optional[Fraction] = None
    f_max: Optional[Fraction] = None

    @property
    def passed(self) -> bool:
        return self.kind == "pass"


def box_volume(box) -> int:
    return prod(hi - lo + 1 for lo, hi in box)


def _fits_int64(instance: Instance, box) -> bool:
    reach = max([abs(v) for pair in box for v in pair] + [1])
    n = max(instance.num_vars, 1)
    coef = max([abs(v) for row in instance.W for v in row] + [abs(v) for v in instance.w]
               + [abs(v) for v in instance.q] + [abs(v) for v in instance.h] + [1])
    return n * coef * (reach * reach + reach) + coef < _INT64_SAFE


def _scan_python(instance: Instance, box):
    lows = [lo for lo, _ in box]
    sizes = [hi - lo + 1 for lo, hi in box]
    total = prod(sizes)
    best_min = best_max = None
    count = 0
    for idx in range(total):
        x = []
        rem = idx
        for size, lo in zip(reversed(sizes), reversed(lows)):
            rem, d = divmod(rem, size)
            x.append(lo + d)
        x = tuple(reversed(x))
        if not instance.is_feasible(x):
            continue
        count += 1
        f = instance.objective(x)
        if best_min is None or f < best_min[0]:
            best_min = (f, x)
        if best_max is None or f > best_max[0]:
            best_max = (f, x)
    return count, best_min, best_max


def _scan_numpy(instance: Instance, box):
    n = instance.num_vars
    lows = np.array([lo for lo, _ in box], dtype=np.int64)
    sizes = [hi - lo + 1 for lo, hi in box]
    total = prod(sizes)
    W = np.array(instance.W, dtype=np.int64).reshape(instance.num_cons, n)
    w = np.array(instance.w, dtype=np.int64)
    q = np.array(instance.q, dtype=np.int64)
    h = np.array(instance.h, dtype=np.int64)
    k = instance.k
    best_min = best_max = None
    count = 0
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        X = np.empty((idx.size, n), dtype=np.int64)
        rem = idx
        for j in range(n - 1, -1, -1):
            rem, d = np.divmod(rem, sizes[j])
            X[:, j] = lows[j] + d
        ok = np.all(X @ W.T <= w, axis=1) if instance.num_cons else np.ones(idx.size, bool)
        if not ok.any():
            continue
        X = X[ok]
        count += X.shape[0]
        f = X @ h - (X[:, :k] ** 2) @ q
        i_min = int(np.argmin(f))
        i_max = int(np.argmax(f))
        if best_min is None or f[i_min] < best_min[0]:
            best_min = (int(f[i_min]), tuple(int(v) for v in X[i_min]))
        if best_max is None or f[i_max] > best_max[0]:
            best_max = (int(f[i_max]), tuple(int(v) for v in X[i_max]))
    return count, best_min, best_max


def enumerate_box(instance: Instance, box=None, cap: int = DEFAULT_VOLUME_CAP) -> Optional[OracleResult]:
    """Exact f*, f_max over the feasible integer points of ``box``; None if there are none.

    Ties are resolved towards the lexicographically smallest point.
    ``box`` defaults to the instance's ``oracle_box``.
    """
    if box is None:
        box = instance.oracle_box
    if box is None:
        raise ValueError("no enumeration box given and the instance has no oracle_box")
    box = [tuple(pair) for pair in box]
    if len(box) != instance.num_vars:
        raise ValueError("box dimension does not match the instance")
    volume = box_volume(box)
    if volume > cap:
        raise OracleRefusal(volume, cap)
    if volume == 0:
        return None
    if instance.num_vars and _fits_int64(instance, box):
        count, best_min, best_max = _scan_numpy(instance, box)
    else:
        count, best_min, best_max = _scan_python(instance, box)
    if count == 0:
        return None
    return OracleResult(Fraction(best_min[0]), Fraction(best_max[0]), best_min[1], best_max[1], count)


def verify_eps(instance: Instance, candidate, epsilon, box=None,
               cap: int = DEFAULT_VOLUME_CAP, result: Optional[OracleResult] = None) -> Verdict:
    """Check that ``candidate`` is an epsilon-approximate solution.

    Passes iff (f(c) - f*) / (f_max - f*) <= epsilon, or, when f* == f_max,
    iff f(c) == f*. A precomputed ``result`` skips the enumeration.
    """
    epsilon = as_rational(epsilon)
    candidate = tuple(candidate)
    if not instance.is_feasible(candidate):
        return Verdict("infeasible_candidate")
    if result is None:
        result = enumerate_box(instance, box, cap)
    if result is None:
        raise ValueError("enumeration box contains no feasible point, yet the candidate is feasible")
    fc = Fraction(instance.objective(candidate))
    if fc < result.f_star or fc > result.f_max:
        raise ValueError("candidate objective lies outside [f*, f_max]: box does not cover the feasible set")
    if result.f_star == result.f_max:
        kind = "pass" if fc == result.f_star else "optimal_required_fail"
        return Verdict(kind, None, fc, result.f_star, result.f_max)
    ratio = (fc - result.f_star) / (result.f_max - result.f_star)
    return Verdict("pass" if ratio <= epsilon else "fail", ratio, fc, result.f_star, result.f_max)
