"""Largest absolute subdeterminant and total unimodularity by enumeration.

Before enumerating, the matrix is shrunk without changing its largest
absolute subdeterminant: zero rows/columns go, rows (columns) equal up to sign
to an earlier one go, and rows (columns) that are signed unit vectors go
(expanding a minor along such a line only reproduces a smaller minor). This
keeps the ``[W; I; -I]`` and ``[N; -N]`` shapes used by the solver and the
generators cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

DEFAULT_SIZE_CAP = 8


@dataclass(frozen=True)
class DeltaCertificate:
    delta: int
    witness: tuple  # (row indices, column indices), or ((), ()) when delta == 0
    exhaustive: bool


def det(M) -> int:
    """Determinant of a square integer matrix by fraction-free (Bareiss) elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def _canon(vec):
    """Sign-normalised key so that v and -v collide."""
    for v in vec:
        if v:
            return tuple(vec) if v > 0 else tuple(-x for x in vec)
    return tuple(vec)


def _reduce(W):
    """Shrink W; returns (kept rows, kept cols, first removed unit entry or None)."""
    rows = list(range(len(W)))
    cols = list(range(len(W[0]))) if W else []
    unit = None
    changed = True
    while changed:
        changed = False
        seen = set()
        keep = []
        for i in rows:
            vec = [W[i][j] for j in cols]
            nz = [v for v in vec if v]
            if not nz:
                changed = True
                continue
            if len(nz) == 1 and abs(nz[0]) == 1:
                if unit is None:
                    unit = (i, next(j for j in cols if W[i][j]))
                changed = True
                continue
            key = _canon(vec)
            if key in seen:
                changed = True
                continue
            seen.add(key)
            keep.append(i)
        rows = keep
        seen = set()
        keep = []
        for j in cols:
            vec = [W[i][j] for i in rows]
            nz = [v for v in vec if v]
            if not nz:
                changed = True
                continue
            if len(nz) == 1 and abs(nz[0]) == 1:
                if unit is None:
                    unit = (next(i for i in rows if W[i][j]), j)
                changed = True
                continue
            key = _canon(vec)
            if key in seen:
                changed = True
                continue
            seen.add(key)
            keep.append(j)
        cols = keep
    return rows, cols, unit


def max_abs_subdeterminant(W, size_cap: Optional[int] = DEFAULT_SIZE_CAP,
                           stop_above: Optional[int] = None) -> DeltaCertificate:
    """Largest |det| over all square submatrices of the integer matrix W.

    Submatrices larger than ``size_cap`` (after reduction) are skipped and the
    certificate is then marked non-exhaustive. With ``stop_above`` the search
    returns as soon as a minor exceeding it is found (the certificate is then
    a lower bound and marked non-exhaustive).
    """
    W = [list(r) for r in W]
    rows, cols, unit = _reduce(W)
    best = 0
    witness = ((), ())
    if unit is not None:
        best = 1
        witness = ((unit[0],), (unit[1],))
    top = min(len(rows), len(cols))
    exhaustive = True
    if size_cap is not None and top > size_cap:
        top = size_cap
        exhaustive = False
    for size in range(1, top + 1):
        for rs in combinations(rows, size):
            sub_rows = [W[i] for i in rs]
            for cs in combinations(cols, size):
                d = abs(det([[r[j] for j in cs] for r in sub_rows]))
                if d > best:
                    best = d
                    witness = (rs, cs)
                    if stop_above is not None and best > stop_above:
                        return DeltaCertificate(best, witness, False)
    return DeltaCertificate(best, witness, exhaustive)


@dataclass(frozen=True)
class TuVerdict:
    """Truthy iff no checked subdeterminant lies outside {-1, 0, 1}.

    ``exhaustive`` is False when the size cap cut the search short; a negative
    verdict is always conclusive.
    """

    totally_unimodular: bool
    exhaustive: bool

    def __bool__(self):
        return self.totally_unimodular


def is_totally_unimodular(W, size_cap: Optional[int] = DEFAULT_SIZE_CAP) -> TuVerdict:
    cert = max_abs_subdeterminant(W, size_cap, stop_above=1)
    if cert.delta > 1:
        return TuVerdict(False, True)
    return TuVerdict(True, cert.exhaustive)
