"""Exact dense linear algebra over the rational function field.

Matrices are tuples of tuples of RatFunc, vectors are tuples of RatFunc.
Pivoting is deterministic (smallest combined degree first, then lowest
index), which keeps runs reproducible and fractions small.
"""

from .ratfunc import R_ONE, R_ZERO, RatFunc


def mat(rows):
    return tuple(tuple(RatFunc.of(e) for e in row) for row in rows)


def vec(entries):
    return tuple(RatFunc.of(e) for e in entries)


def identity(n):
    return tuple(tuple(R_ONE if i == j else R_ZERO for j in range(n))
                 for i in range(n))


def zeros(n, m):
    return tuple(tuple(R_ZERO for _ in range(m)) for _ in range(n))


def transpose(a):
    return tuple(zip(*a)) if a else ()


def mat_mul(a, b):
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    bt = transpose(b)
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            s = R_ZERO
            for t in range(k):
                if a[i][t] and bt[j][t]:
                    s = s + a[i][t] * bt[j][t]
            row.append(s)
        out.append(tuple(row))
    return tuple(out)


def mat_vec(a, v):
    out = []
    for row in a:
        s = R_ZERO
        for e, x in zip(row, v):
            if e and x:
                s = s + e * x
        out.append(s)
    return tuple(out)


def mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))

def mat_sub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(a, c):
    return tuple(tuple(e * c for e in row) for row in a)


def mat_map(a, fn):
    return tuple(tuple(fn(e) for e in row) for row in a)


def shift_mat(a, k):
    return mat_map(a, lambda e: e.shift(k))


def vec_add(u, v):
    return tuple(x + y for x, y in zip(u, v))


def vec_sub(u, v):
    return tuple(x - y for x, y in zip(u, v))


def vec_scale(u, c):
    return tuple(x * c for x in u)


def vec_is_zero(u):
    return all(x.is_zero() for x in u)


def dot(u, v):
    s = R_ZERO
    for x, y in zip(u, v):
        if x and y:
            s = s + x * y
    return s


def kron(a, b):
    """Kronecker product with row-major block layout."""
    out = []
    for ra in a:
        for rb in b:
            row = []
            for ea in ra:
                for eb in rb:
                    row.append(ea * eb)
            out.append(tuple(row))
    return tuple(out)


def block_diag(blocks):
    n = sum(len(b) for b in blocks)
    out = [[R_ZERO] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, e in enumerate(row):
                out[off + i][off + j] = e
        off += len(b)
    return tuple(tuple(row) for row in out)


def _complexity(f):
    return f.num.degree + f.den.degree


def _pivot_row(rows, col, start):
    best = None
    for i in range(start, len(rows)):
        e = rows[i][col]
        if e.is_zero():
            continue
        c = _complexity(e)
        if best is None or c < best[1]:
            best = (i, c)
    return None if best is None else best[0]


def det(a):
    n = len(a)
    rows = [list(r) for r in a]
    result = R_ONE
    for col in range(n):
        p = _pivot_row(rows, col, col)
        if p is None:
            return R_ZERO
        if p != col:
            rows[col], rows[p] = rows[p], rows[col]
            result = -result
        piv = rows[col][col]
        result = result * piv
        inv = piv.inverse()
        for i in range(col + 1, n):
            e = rows[i][col]
            if e.is_zero():
                continue
            f = e * inv
            rows[i][col] = R_ZERO
            for j in range(col + 1, n):
                if rows[col][j]:
                    rows[i][j] = rows[i][j] - f * rows[col][j]
    return result


def inverse(a):
    n = len(a)
    rows = [list(r) + list(ident_row) for r, ident_row in zip(a, identity(n))]
    for col in range(n):
        p = _pivot_row(rows, col, col)
        if p is None:
            raise ZeroDivisionError("matrix is singular")
        if p != col:
            rows[col], rows[p] = rows[p], rows[col]
        inv = rows[col][col].inverse()
        rows[col] = [e * inv for e in rows[col]]
        for i in range(n):
            if i == col:
                continue
            e = rows[i][col]
            if e.is_zero():
                continue
            rows[i] = [a_ - e * b_ for a_, b_ in zip(rows[i], rows[col])]
    return tuple(tuple(r[n:]) for r in rows)


def kernel(a):
    """Basis of the right nullspace {v : a @ v = 0}."""
    if not a:
        return []
    n, m = len(a), len(a[0])
    rows = [list(r) for r in a]
    pivots = []
    r = 0
    for col in range(m):
        p = _pivot_row(rows, col, r)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = rows[r][col].inverse()
        rows[r] = [e * inv for e in rows[r]]
        for i in range(n):
            if i != r and rows[i][col]:
                e = rows[i][col]
                rows[i] = [a_ - e * b_ for a_, b_ in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == n:
            break
    free = [j for j in range(m) if j not in pivots]
    basis = []
    for j in free:
        v = [R_ZERO] * m
        v[j] = R_ONE
        for i, col in enumerate(pivots):
            v[col] = -rows[i][j]
        basis.append(tuple(v))
    return basis


def solve(a, b):
    """One solution of a @ v = b, or None if inconsistent."""
    if not a:
        return None
    n, m = len(a), len(a[0])
    rows = [list(r) + [bv] for r, bv in zip(a, b)]
    pivots = []
    r = 0
    for col in range(m):
        p = _pivot_row(rows, col, r)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = rows[r][col].inverse()
        rows[r] = [e * inv for e in rows[r]]
        for i in range(n):
            if i != r and rows[i][col]:
                e = rows[i][col]
                rows[i] = [a_ - e * b_ for a_, b_ in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == n:
            break
    for i in range(r, n):
        if rows[i][m]:
            return None
    v = [R_ZERO] * m
    for i, col in enumerate(pivots):
        v[col] = rows[i][m]
    return tuple(v)


def _scalar_inv(e):
    try:
        return 1 / e
    except TypeError:
        return e.inverse()


def scalar_kernel(rows, n):
    """Kernel basis of a matrix of field scalars (Fraction/Constant)."""
    from fractions import Fraction

    rows = [list(r) for r in rows]
    m = len(rows)
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = _scalar_inv(rows[r][col])
        rows[r] = [e * inv for e in rows[r]]
        for i in range(m):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    basis = []
    for j in range(n):
        if j in pivots:
            continue
        v = [Fraction(0)] * n
        v[j] = Fraction(1)
        for i, col in enumerate(pivots):
            v[col] = -rows[i][j]
        basis.append(v)
    return basis


def scalar_inverse(mat, n):
    """Inverse of a matrix of field scalars."""
    from fractions import Fraction

    rows = [list(r) + [Fraction(1) if i == j else Fraction(0)
                       for j in range(n)] for i, r in enumerate(mat)]
    for col in range(n):
        piv = next((i for i in range(col, n) if rows[i][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular scalar matrix")
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = _scalar_inv(rows[col][col])
        rows[col] = [v * inv for v in rows[col]]
        for i in range(n):
            if i != col and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[col])]
    return [r[n:] for r in rows]


def scalar_charpoly(mat, n):
    """Characteristic polynomial by Faddeev-LeVerrier; exact."""
    from fractions import Fraction

    from .poly import Poly

    a = [list(row) for row in mat]
    coeffs = [Fraction(1)]

    def matmul(p, q):
        return [[sum(p[i][k] * q[k][j] for k in range(n)) for j in range(n)]
                for i in range(n)]

    m = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        if k == 1:
            m = [row[:] for row in a]
        else:
            for i in range(n):
                m[i][i] = m[i][i] + coeffs[-1]
            m = matmul(a, m)
        c = -sum(m[i][i] for i in range(n)) / k
        coeffs.append(c)
    return Poly(list(reversed(coeffs)))


class RowReducer:
    """Incremental dependency detector over the rational function field.

    Feed vectors one at a time; the first linearly dependent vector is
    reported together with the coefficients expressing it in terms of the
    previously added vectors.  This is the engine behind minimal
    operators, LCLMs, and symmetric products.
    """

    def __init__(self, width):
        self.width = width
        self.rows = []      # reduced rows
        self.combos = []    # same combination applied to unit vectors

    def count(self):
        return len(self.rows)

    def add(self, v):
        """Returns None if v is independent, else coefficients c with
        v = sum(c[i] * v_i) over the previously added vectors."""
        v = list(v)
        combo = [R_ZERO] * len(self.rows) + [R_ONE]
        for row, rcombo in zip(self.rows, self.combos):
            piv = next(i for i, e in enumerate(row) if not e.is_zero())
            if v[piv].is_zero():
                continue
            f = v[piv] * row[piv].inverse()
            for i in range(self.width):
                if row[i]:
                    v[i] = v[i] - f * row[i]
            for i in range(len(rcombo)):
                combo[i] = combo[i] - f * rcombo[i]
        if all(e.is_zero() for e in v):
            # v + sum(combo[i] v_i over stored) = 0 with combo[-1] = 1
            inv = combo[-1].inverse()  # always 1 here
            return [(-c * inv) for c in combo[:-1]]
        self.rows.append(tuple(v))
        self.combos.append(combo)
        return None
