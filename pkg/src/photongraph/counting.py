"""Exact hafnian and permanent kernels.

The hafnian of a symmetric matrix with zero diagonal sums, over all perfect
pairings of the indices, the products of the paired entries; on an adjacency
matrix it counts perfect matchings.  The permanent does the same job for the
biadjacency matrix of a bipartite graph.  Both are #P-hard, so the kernels
are exact and refuse oversized inputs instead of approximating.

Integer matrices are computed in arbitrary-precision integer arithmetic
(counts overflow 64 bits near order 20).  Complex and float inputs use
double precision; results should be compared at a 1e-9 tolerance.
"""

from __future__ import annotations

from .errors import DomainError, ScaleLimitError
from .graph import ExperimentGraph

__all__ = [
    "hafnian",
    "permanent",
    "count_pm_via_matrix",
    "HAFNIAN_ORDER_LIMIT",
    "PERMANENT_ORDER_LIMIT",
]

HAFNIAN_ORDER_LIMIT = 24
PERMANENT_ORDER_LIMIT = 20


def _validate_square(matrix) -> int:
    if not isinstance(matrix, (list, tuple)):
        raise DomainError("matrix must be a list of rows")
    n = len(matrix)
    for row in matrix:
        if not isinstance(row, (list, tuple)):
            raise DomainError("matrix must be a list of rows")
        if len(row) != n:
            raise DomainError(f"matrix must be square, got a row of length {len(row)} for order {n}")
    return n


def hafnian(matrix, *, override_limits: bool = False):
    """Sum over all perfect pairings {(i1,j1),...} of prod matrix[i][j].

    Recursive expansion on the first remaining index with memoization on the
    set of live indices; zero entries are skipped, so sparse adjacency
    matrices stay fast.  Requires an even order, exact symmetry and a zero
    diagonal."""
    n = _validate_square(matrix)
    if n % 2 != 0:
        raise DomainError(f"hafnian needs an even order, got {n}")
    if not override_limits and n > HAFNIAN_ORDER_LIMIT:
        raise ScaleLimitError(f"hafnian order {n} exceeds the guard (<= {HAFNIAN_ORDER_LIMIT})")
    for i in range(n):
        if matrix[i][i] != 0:
            raise DomainError(f"hafnian needs a zero diagonal, entry ({i},{i}) is {matrix[i][i]!r}")
        for j in range(i + 1, n):
            if matrix[i][j] != matrix[j][i]:
                raise DomainError(f"matrix is not symmetric at ({i},{j})")

    memo: dict[int, object] = {}

    def rec(mask: int):
        if mask == 0:
            return 1
        cached = memo.get(mask)
        if cached is not None:
            return cached
        low = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << low)
        total = 0
        sub = rest
        while sub:
            j = (sub & -sub).bit_length() - 1
            sub &= sub - 1
            entry = matrix[low][j]
            if entry != 0:
                total += entry * rec(rest & ~(1 << j))
        memo[mask] = total
        return total

    return rec((1 << n) - 1)


def permanent(matrix, *, override_limits: bool = False):
    """Ryser inclusion-exclusion with Gray-code column updates:
    perm(A) = (-1)^n sum_{S nonempty} (-1)^{|S|} prod_i sum_{j in S} a_ij.

    Exact for integer inputs; O(2^n * n) time."""
    n = _validate_square(matrix)
    if not override_limits and n > PERMANENT_ORDER_LIMIT:
        raise ScaleLimitError(f"permanent order {n} exceeds the guard (<= {PERMANENT_ORDER_LIMIT})")
    if n == 0:
        return 1

    row_sums = [0] * n
    total = 0
    prev_gray = 0
    for k in range(1, 1 << n):
        gray = k ^ (k >> 1)
        flipped = gray ^ prev_gray
        j = flipped.bit_length() - 1
        if gray & flipped:
            for i in range(n):
                row_sums[i] += matrix[i][j]
        else:
            for i in range(n):
                row_sums[i] -= matrix[i][j]
        prod = 1
        for value in row_sums:
            prod *= value
            if prod == 0:
                break
        if (n - gray.bit_count()) % 2 == 0:
            total += prod
        else:
            total -= prod
        prev_gray = gray
    return total


def count_pm_via_matrix(g: ExperimentGraph, *, override_limits: bool = False) -> int:
    """Perfect-matching count through the matrix kernels: the hafnian of the
    adjacency matrix always, cross-checked against the permanent of the
    biadjacency matrix whenever the graph is bipartite with equal parts."""
    if g.measured:
        raise DomainError("matrix counting covers plain perfect matchings only (no measured vertices)")
    count = hafnian(g.adjacency(), override_limits=override_limits)
    try:
        bi = g.biadjacency()
    except DomainError:
        return count
    if len(bi.rows) == len(bi.cols):
        perm = permanent([list(r) for r in bi.entries], override_limits=override_limits)
        if perm != count:  # pragma: no cover - both kernels are exact
            raise RuntimeError(f"kernel mismatch: hafnian={count} permanent={perm}")
    return count
