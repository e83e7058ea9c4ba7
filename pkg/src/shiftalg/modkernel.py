"""Exact kernels of integer matrices via modular arithmetic.

Gaussian elimination runs over a few word-size primes with numpy, the
reduced kernels are combined by the CRT, and entries are lifted back to
rationals by continued-fraction reconstruction.  The lifted basis is
verified exactly against the integer matrix before being returned, so a
wrong prime or an insufficient modulus can only cost another round, never
a wrong answer.
"""

from fractions import Fraction
from math import gcd, isqrt

import numpy as np

_PRIMES = [1048573, 1048571, 1048559, 1048549, 1048517, 1048507,
           1048447, 1048433, 1048423, 1048391]


def _rref_mod(rows, ncols, p):
    """Reduced row echelon form mod p; returns (matrix, pivot columns)."""
    a = np.array([[c % p for c in row] for row in rows], dtype=np.int64)
    if a.size == 0:
        return a, []
    m = a.shape[0]
    pivots = []
    r = 0
    for col in range(ncols):
        if r >= m:
            break
        idx = np.nonzero(a[r:, col])[0]
        if idx.size == 0:
            continue
        piv = r + int(idx[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, col]), p - 2, p)
        a[r] = (a[r] * inv) % p
        column = a[:, col].copy()
        column[r] = 0
        nz = np.nonzero(column)[0]
        if nz.size:
            a[nz] = (a[nz] - np.outer(column[nz], a[r])) % p
        pivots.append(col)
        r += 1
    return a[:r], pivots


def _kernel_mod(rows, ncols, p):
    """Kernel basis mod p in the standard free-column parametrization."""
    rref, pivots = _rref_mod(rows, ncols, p)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for j in free:
        v = [0] * ncols
        v[j] = 1
        for i, col in enumerate(pivots):
            v[col] = int((-rref[i, j]) % p)
        basis.append(v)
    return basis, pivots, free


def _rational_reconstruct(c, m):
    """a/b with c*b = a (mod m), |a|, b <= sqrt(m/2); None if impossible."""
    bound = isqrt(m // 2)
    r0, r1 = m, c % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if abs(s1) > bound or s1 == 0:
        return None
    if gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1) if s1 > 0 else Fraction(-r1, -s1)


def integer_kernel(rows, ncols, max_primes=8):
    """Exact rational kernel basis of an integer matrix (list of rows).

    Returns a list of Fraction vectors in free-column parametrization.
    Raises ArithmeticError when reconstruction keeps failing (practically
    unreachable before max_primes word-size primes).
    """
    rows = [row for row in rows if any(row)]
    if not rows:
        return [[Fraction(1 if i == j else 0) for i in range(ncols)]
                for j in range(ncols)]
    reference = None
    combined = None
    modulus = 1
    used = 0
    for p in _PRIMES:
        basis, pivots, free = _kernel_mod(rows, ncols, p)
        if reference is None:
            reference = (pivots, free)
            combined = [[c % p for c in v] for v in basis]
            modulus = p
        else:
            if (pivots, free) != reference:
                # unlucky prime changed the rank profile; skip it
                continue
            new = []
            for vc, vp in zip(combined, basis):
                row = []
                for c_old, c_new in zip(vc, vp):
                    # CRT combine c_old mod modulus with c_new mod p
                    diff = (c_new - c_old) % p
                    inv = pow(modulus % p, p - 2, p)
                    row.append((c_old + modulus * ((diff * inv) % p))
                               % (modulus * p))
                new.append(row)
            combined = new
            modulus *= p
        used += 1
        # attempt reconstruction
        lifted = []
        ok = True
        for v in combined:
            out = []
            for c in v:
                f = _rational_reconstruct(c, modulus)
                if f is None:
                    ok = False
                    break
                out.append(f)
            if not ok:
                break
            lifted.append(out)
        if ok and _verify_kernel(rows, lifted):
            return lifted
        if used >= max_primes:
            break
    raise ArithmeticError("modular kernel reconstruction failed")


def _verify_kernel(rows, basis):
    for v in basis:
        for row in rows:
            s = Fraction(0)
            for c, x in zip(row, v):
                if c and x:
                    s += c * x
            if s:
                return False
    return True
