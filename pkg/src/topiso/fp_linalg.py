"""Row reduction over the prime field F_p."""
from __future__ import annotations


def rref_mod_p(rows, p: int) -> list[list[int]]:
    """Reduced row echelon form of ``rows`` over F_p, zero rows dropped."""
    m = [[x % p for x in row] for row in rows]
    if not m:
        return []
    ncols = len(m[0])
    pivot_row = 0
    for col in range(ncols):
        piv = next((i for i in range(pivot_row, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[pivot_row], m[piv] = m[piv], m[pivot_row]
        inv = pow(m[pivot_row][col], -1, p)
        m[pivot_row] = [(x * inv) % p for x in m[pivot_row]]
        for i in range(len(m)):
            if i != pivot_row and m[i][col]:
                f = m[i][col]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[pivot_row])]
        pivot_row += 1
        if pivot_row == len(m):
            break
    return [row for row in m[:pivot_row]]


def rank_mod_p(rows, p: int) -> int:
    return len(rref_mod_p(rows, p))


def same_row_space(rows_a, rows_b, p: int) -> bool:
    """Whether two matrices with equal column count span the same subspace.

    Equal row spaces <=> equal null spaces, which is what centraliser
    comparison needs.
    """
    return rref_mod_p(rows_a, p) == rref_mod_p(rows_b, p)


def null_space_mod_p(rows, ncols: int, p: int) -> list[list[int]]:
    """A basis of ``{x : rows . x = 0}`` over F_p."""
    r = rref_mod_p(rows, p) if rows else []
    pivots = []
    for row in r:
        pivots.append(next(j for j, x in enumerate(row) if x))
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        vec = [0] * ncols
        vec[f] = 1
        for row, pc in zip(r, pivots):
            vec[pc] = (-row[f]) % p
        basis.append(vec)
    return basis
