"""Exact integer and mod-p linear algebra for small matrices.

Everything here is pure Python over exact integers (or Fractions at the
boundaries).  Matrices are tuples of tuples of ints, row-major; vectors are
tuples of ints unless stated otherwise.  Sizes stay tiny (ambient dimension
is d+1 <= 4), so the quadratic/cubic algorithms below are the right tool.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product


def pval(x, p):
    """p-adic valuation of a nonzero int or Fraction.  Raises on zero."""
    if x == 0:
        raise ValueError("valuation of zero is undefined")
    if isinstance(x, Fraction):
        return pval(x.numerator, p) - pval(x.denominator, p)
    x = abs(int(x))
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(m):
    return tuple(zip(*m))


def matmul(a, b):
    bt = list(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def vecmat(v, m):
    """Row vector times matrix."""
    return tuple(sum(v[i] * m[i][j] for i in range(len(v))) for j in range(len(m[0])))


def matvec(m, v):
    """Matrix times column vector."""
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in m)


def det_int(mat):
    """Exact signed determinant by cofactor expansion (n <= 4 in practice)."""
    n = len(mat)
    if n == 1:
        return mat[0][0]
    if n == 2:
        return mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]
    total = 0
    rest = [row[1:] for row in mat]
    for i in range(n):
        minor = tuple(tuple(rest[r]) for r in range(n) if r != i)
        term = mat[i][0] * det_int(minor)
        total += term if i % 2 == 0 else -term
    return total


def inv_scaled(mat):
    """Exact inverse as (N, D) with mat^{-1} = N / D, N integer, D = det(mat)."""
    n = len(mat)
    d = det_int(mat)
    if d == 0:
        raise ValueError("matrix is singular")
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = tuple(
                tuple(mat[r][c] for c in range(n) if c != j)
                for r in range(n)
                if r != i
            )
            cof = det_int(minor) if minor else 1
            adj[j][i] = cof if (i + j) % 2 == 0 else -cof
    return tuple(tuple(row) for row in adj), d


def hnf_rows(rows, expect_full_rank=False):
    """Row-style Hermite normal form of an integer matrix.

    Returns the canonical basis of the row lattice: pivots on strictly
    increasing columns, positive pivots, entries above each pivot reduced
    into [0, pivot).  Zero rows are dropped.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pr = 0
    pivots = []
    for col in range(ncols):
        while True:
            nz = [i for i in range(pr, nrows) if m[i][col] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(m[i][col]))
            m[pr], m[i0] = m[i0], m[pr]
            done = True
            for i in range(pr + 1, nrows):
                if m[i][col] != 0:
                    q = m[i][col] // m[pr][col]
                    m[i] = [a - q * b for a, b in zip(m[i], m[pr])]
                    if m[i][col] != 0:
                        done = False
            if done:
                break
        if pr < nrows and m[pr][col] != 0:
            if m[pr][col] < 0:
                m[pr] = [-a for a in m[pr]]
            pivots.append((pr, col))
            pr += 1
    # reduce entries above each pivot
    for r, c in pivots:
        for i in range(r):
            q = m[i][c] // m[r][c]
            if q:
                m[i] = [a - q * b for a, b in zip(m[i], m[r])]
    result = tuple(tuple(m[r]) for r, _ in pivots)
    if expect_full_rank and len(result) != ncols:
        raise ValueError("row lattice does not have full rank")
    return result


def snf_divisors(rows):
    """Elementary divisors (Smith normal form diagonal), nonneg, divisibility chain."""
    m = [list(r) for r in rows]
    nr = len(m)
    nc = len(m[0]) if m else 0
    divisors = []
    t = 0
    while t < min(nr, nc):
        # locate a nonzero entry in the trailing block
        entries = [
            (abs(m[i][j]), i, j)
            for i in range(t, nr)
            for j in range(t, nc)
            if m[i][j] != 0
        ]
        if not entries:
            break
        while True:
            _, i0, j0 = min(entries)
            m[t], m[i0] = m[i0], m[t]
            for row in m:
                row[t], row[j0] = row[j0], row[t]
            # clear column t then row t
            dirty = False
            for i in range(t + 1, nr):
                if m[i][t] != 0:
                    q = m[i][t] // m[t][t]
                    m[i] = [a - q * b for a, b in zip(m[i], m[t])]
                    dirty = dirty or m[i][t] != 0
            for j in range(t + 1, nc):
                if m[t][j] != 0:
                    q = m[t][j] // m[t][t]
                    for row in m:
                        row[j] -= q * row[t]
                    dirty = dirty or m[t][j] != 0
            if not dirty:
                # enforce divisibility of the trailing block by the pivot
                bad = None
                for i in range(t + 1, nr):
                    for j in range(t + 1, nc):
                        if m[i][j] % m[t][t] != 0:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                m[t] = [a + b for a, b in zip(m[t], m[bad])]
            entries = [
                (abs(m[i][j]), i, j)
                for i in range(t, nr)
                for j in range(t, nc)
                if m[i][j] != 0
            ]
        divisors.append(abs(m[t][t]))
        t += 1
    return divisors


def rank_int(rows):
    """Rank over Q (= number of nonzero elementary divisors)."""
    return len(snf_divisors(rows))


def matinv_mod(mat, p, k):
    """Inverse of an integer matrix modulo p^k.  Requires det(mat) a unit mod p."""
    n = len(mat)
    mod = p**k
    a = [[mat[i][j] % mod for j in range(n)] for i in range(n)]
    inv = [list(row) for row in identity(n)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] % p != 0), None)
        if piv is None:
            raise ValueError("matrix is not invertible mod p")
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        s = pow(a[col][col], -1, mod)
        a[col] = [(s * x) % mod for x in a[col]]
        inv[col] = [(s * x) % mod for x in inv[col]]
        for i in range(n):
            if i != col and a[i][col]:
                f = a[i][col]
                a[i] = [(x - f * y) % mod for x, y in zip(a[i], a[col])]
                inv[i] = [(x - f * y) % mod for x, y in zip(inv[i], inv[col])]
    return tuple(tuple(row) for row in inv)


# ---------------------------------------------------------------------------
# F_p linear algebra


def rref_modp(rows, p):
    """Reduced row echelon form over F_p.  Returns (rows, pivot_columns)."""
    m = [[x % p for x in row] for row in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        s = pow(m[r][c], -1, p)
        m[r] = [(s * x) % p for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return tuple(tuple(m[i]) for i in range(r)), tuple(pivots)


def rank_modp(rows, p):
    return len(rref_modp(rows, p)[0])


def in_span_modp(basis_rref, pivots, v, p):
    """Membership of v in the row space given by a precomputed RREF."""
    v = [x % p for x in v]
    for row, c in zip(basis_rref, pivots):
        if v[c]:
            f = v[c]
            v = [(x - f * y) % p for x, y in zip(v, row)]
    return not any(v)


def complete_basis_modp(current, candidates, p):
    """Greedily extend `current` by rows from `candidates` to a larger independent set.

    Returns the list of candidate rows actually added (in order).
    """
    rows = [list(r) for r in current]
    added = []
    base_rank = rank_modp(rows, p) if rows else 0
    for cand in candidates:
        trial = rows + [list(cand)]
        r = rank_modp(trial, p)
        if r > base_rank:
            rows = trial
            base_rank = r
            added.append(tuple(x % p for x in cand))
    return added


def gaussian_binomial(n, k, p):
    """Number of k-dimensional subspaces of F_p^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    assert num % den == 0
    return num // den


def subspaces_modp(n, k, p):
    """Yield canonical bases (RREF rows) of all k-dimensional subspaces of F_p^n."""
    if k == 0:
        yield ()
        return
    for pivots in combinations(range(n), k):
        free = []
        for r in range(k):
            for c in range(pivots[r] + 1, n):
                if c not in pivots:
                    free.append((r, c))
        for values in product(range(p), repeat=len(free)):
            rows = [[0] * n for _ in range(k)]
            for r in range(k):
                rows[r][pivots[r]] = 1
            for (r, c), val in zip(free, values):
                rows[r][c] = val
            yield tuple(tuple(row) for row in rows)
