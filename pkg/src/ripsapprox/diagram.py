"""Multiplicative bottleneck distance between barcodes and the
approximation certificate built on it.

Intervals are compared on a log scale: matching [b1,d1) to [b2,d2)
costs max(ratio(b1,b2), ratio(d1,d2)) with ratio(x,y) = max(x/y, y/x),
ratio(0,0) = ratio(inf,inf) = 1, and mixed zero/inf pairs costing inf.
Deleting [b,d) costs sqrt(d/b), the scale factor that shrinks the
interval to nothing. The distance is the minimax cost over partial
matchings; a multiplicative c-interleaving of two filtrations bounds it
by c.
"""

from __future__ import annotations

import math
from typing import Dict, List, NamedTuple, Optional, Tuple

from .persistence import Barcode

__all__ = [
    "scale_barcode",
    "ratio_cost",
    "deletion_cost",
    "multiplicative_bottleneck",
    "certify_approximation",
    "Certificate",
]

INF = math.inf

Interval = Tuple[float, float]


def scale_barcode(bc: Barcode, factor: float) -> Barcode:
    return bc.scaled(factor)


def _ratio(x: float, y: float) -> float:
    if x == y:
        return 1.0
    if x == 0.0 or y == 0.0 or x == INF or y == INF:
        return INF
    return max(x / y, y / x)


def ratio_cost(a: Interval, b: Interval) -> float:
    return max(_ratio(a[0], b[0]), _ratio(a[1], b[1]))


def deletion_cost(a: Interval) -> float:
    b, d = a
    if b == d:
        return 1.0
    if b == 0.0 or d == INF:
        return INF
    return math.sqrt(d / b)


def _feasible(c: float, nA: int, nB: int, pair, delA, delB) -> bool:
    """Perfect matching on A + diag(B) vs B + diag(A) with costs <= c.

    Right vertex j < nB is the j-th interval of B; right vertex nB + i
    is the diagonal slot of A's i-th interval. Diagonal-to-diagonal
    edges are free.
    """
    adj: List[List[int]] = []
    for i in range(nA):
        row = [j for j in range(nB) if pair[i][j] <= c]
        if delA[i] <= c:
            row.append(nB + i)
        adj.append(row)
    for j in range(nB):
        row = list(range(nB, nB + nA))
        if delB[j] <= c:
            row.append(j)
        adj.append(row)

    match_r = [-1] * (nA + nB)

    def augment(u: int, seen: List[bool]) -> bool:
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                if match_r[v] < 0 or augment(match_r[v], seen):
                    match_r[v] = u
                    return True
        return False

    size = 0
    for u in range(nA + nB):
        if augment(u, [False] * (nA + nB)):
            size += 1
        else:
            return False
    return size == nA + nB


def _bottleneck_lists(A: List[Interval], B: List[Interval]) -> float:
    nA, nB = len(A), len(B)
    if nA == 0 and nB == 0:
        return 1.0
    pair = [[ratio_cost(a, b) for b in B] for a in A]
    delA = [deletion_cost(a) for a in A]
    delB = [deletion_cost(b) for b in B]
    cands = {1.0}
    cands.update(c for row in pair for c in row if c < INF)
    cands.update(c for c in delA if c < INF)
    cands.update(c for c in delB if c < INF)
    cands = sorted(cands)
    if not _feasible(cands[-1], nA, nB, pair, delA, delB):
        return INF
    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(cands[mid], nA, nB, pair, delA, delB):
            hi = mid
        else:
            lo = mid + 1
    return cands[lo]


def multiplicative_bottleneck(bc1: Barcode, bc2: Barcode, p: Optional[int] = None) -> float:
    """Bottleneck over one homology dimension, or the max over all."""
    if p is not None:
        return _bottleneck_lists(bc1.intervals(p), bc2.intervals(p))
    dims = set(bc1.dimensions()) | set(bc2.dimensions())
    return max((_bottleneck_lists(bc1.intervals(q), bc2.intervals(q)) for q in sorted(dims)),
               default=1.0)


class Certificate(NamedTuple):
    passed: bool
    claimed: float
    achieved: float
    per_dim: Dict[int, float]


def certify_approximation(bc_approx: Barcode, bc_exact: Barcode, c_claim: float,
                          rel_slack: float = 1e-9) -> Certificate:
    """Check that the barcodes are within multiplicative factor c_claim.

    A tiny relative slack absorbs float noise in the interval endpoints;
    the distance itself is computed exactly on the given values.
    """
    dims = sorted(set(bc_approx.dimensions()) | set(bc_exact.dimensions()))
    per = {q: _bottleneck_lists(bc_approx.intervals(q), bc_exact.intervals(q)) for q in dims}
    achieved = max(per.values(), default=1.0)
    passed = achieved <= c_claim * (1.0 + rel_slack)
    return Certificate(passed, c_claim, achieved, per)
