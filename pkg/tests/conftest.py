import itertools
from fractions import Fraction

import pytest

from ciqp.model import Instance


@pytest.fixture
def micro():
    """min -x^2 over 0 <= x <= 3."""
    return Instance.build([[-1], [1]], [0, 3], [1], [0])


def brute_force(instance, box):
    """Feasible integer points of ``box`` with their objective values (plain loops)."""
    pts = []
    for x in itertools.product(*[range(lo, hi + 1) for lo, hi in box]):
        if all(sum(a * v for a, v in zip(row, x)) <= rhs for row, rhs in zip(instance.W, instance.w)):
            f = sum(-instance.q[i] * x[i] ** 2 for i in range(instance.k)) + sum(
                hj * xj for hj, xj in zip(instance.h, x))
            pts.append((x, Fraction(f)))
    return pts


def gauss_det(M):
    """Determinant by rational Gaussian elimination (independent of the library's Bareiss)."""
    A = [[Fraction(v) for v in row] for row in M]
    n = len(A)
    d = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            A[c], A[p] = A[p], A[c]
            d = -d
        d *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return int(d)


def brute_delta(W):
    m = len(W)
    n = len(W[0]) if m else 0
    best = 0
    for s in range(1, min(m, n) + 1):
        for rs in itertools.combinations(range(m), s):
            for cs in itertools.combinations(range(n), s):
                best = max(best, abs(gauss_det([[W[i][j] for j in cs] for i in rs])))
    return best
