"""Small exact linear algebra over a `Field` (raw data matrices as lists of rows)."""

from __future__ import annotations


def det(F, matrix):
    n = len(matrix)
    m = [list(row) for row in matrix]
    result = F.one()
    zero = F.zero()
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != zero), None)
        if pivot is None:
            return zero
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            result = F.neg(result)
        p = m[col][col]
        result = F.mul(result, p)
        inv_p = F.inv(p)
        for r in range(col + 1, n):
            if m[r][col] == zero:
                continue
            factor = F.mul(m[r][col], inv_p)
            for c in range(col, n):
                m[r][c] = F.sub(m[r][c], F.mul(factor, m[col][c]))
    return result


def diagonalize_symmetric(F, gram):
    """Diagonal entries of a form congruent to the symmetric matrix ``gram``.

    Symmetric Gaussian elimination; needs 2 invertible.  Zero entries that
    come from a degenerate radical are dropped, so the result describes the
    nondegenerate part only.
    """
    n = len(gram)
    m = [list(row) for row in gram]
    zero = F.zero()
    diag = []
    active = list(range(n))
    while active:
        i = next((k for k in active if m[k][k] != zero), None)
        if i is None:
            pair = next(
                ((a, b) for a in active for b in active if a < b and m[a][b] != zero), None
            )
            if pair is None:
                break
            a, b = pair
            # replace e_a by e_a + e_b: new diagonal entry 2*m[a][b] != 0
            for k in range(n):
                m[a][k] = F.add(m[a][k], m[b][k])
            for k in range(n):
                m[k][a] = F.add(m[k][a], m[k][b])
            i = a
        p = m[i][i]
        diag.append(p)
        inv_p = F.inv(p)
        active.remove(i)
        for r in active:
            if m[r][i] == zero:
                continue
            factor = F.mul(m[r][i], inv_p)
            for c in range(n):
                m[r][c] = F.sub(m[r][c], F.mul(factor, m[i][c]))
            for c in range(n):
                m[c][r] = F.sub(m[c][r], F.mul(factor, m[c][i]))
    return diag


def solve(F, matrix, rhs):
    """Solve ``matrix @ x = rhs`` for square invertible ``matrix``."""
    n = len(matrix)
    m = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    zero = F.zero()
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != zero), None)
        if pivot is None:
            raise ValueError("singular system")
        m[col], m[pivot] = m[pivot], m[col]
        inv_p = F.inv(m[col][col])
        m[col] = [F.mul(inv_p, v) for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != zero:
                factor = m[r][col]
                m[r] = [F.sub(v, F.mul(factor, w)) for v, w in zip(m[r], m[col])]
    return [m[i][n] for i in range(n)]


def kernel(F, matrix, ncols):
    """Basis of the right kernel of ``matrix`` (list of rows, ``ncols`` columns)."""
    m = [list(row) for row in matrix]
    zero = F.zero()
    pivots = []
    row = 0
    for col in range(ncols):
        pivot = next((r for r in range(row, len(m)) if m[r][col] != zero), None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        inv_p = F.inv(m[row][col])
        m[row] = [F.mul(inv_p, v) for v in m[row]]
        for r in range(len(m)):
            if r != row and m[r][col] != zero:
                factor = m[r][col]
                m[r] = [F.sub(v, F.mul(factor, w)) for v, w in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [zero] * ncols
        vec[f] = F.one()
        for r, pc in enumerate(pivots):
            vec[pc] = F.neg(m[r][f])
        basis.append(vec)
    return basis
