"""Square roots modulo squarefree rational polynomials.

Needed by the isotropic-vector search: the congruence-based solver for a
reduced ternary form requires sqrt(w) mod s for squarefree s in Q[x].
The computation factors s, takes square roots in each field Q[x]/(p) by
Trager's norm method (factor the norm over Q, recover the root with a
gcd over the number field), and glues results with the CRT.  Everything
is exact and every root is re-verified before being returned.
"""

from fractions import Fraction

from .poly import P_ONE, P_ZERO, Poly


def _kf_inv(u: Poly, p: Poly) -> Poly:
    """Inverse of u in Q[x]/(p); u must be invertible (gcd(u, p) = 1)."""
    g, a, _ = u.xgcd(p)
    if g.degree != 0:
        raise ZeroDivisionError("element not invertible in Q[x]/(p)")
    return (a * (1 / g.coeff(0))) % p


def _kfpoly_gcd(f, g, p):
    """Monic gcd of polynomials in T over K = Q[x]/(p).

    f, g are lists of Poly (coefficient of T^i at index i).
    """

    def trim(h):
        while h and h[-1].is_zero():
            h.pop()
        return h

    def rem(a, b):
        a = list(a)
        inv = _kf_inv(b[-1], p)
        while len(a) >= len(b) and a:
            f_ = (a[-1] * inv) % p
            off = len(a) - len(b)
            for i in range(len(b)):
                a[off + i] = (a[off + i] - f_ * b[i]) % p
            a.pop()
            trim(a)
        return a

    a, b = trim(list(f)), trim(list(g))
    while b:
        a, b = b, rem(a, b)
    if a:
        inv = _kf_inv(a[-1], p)
        a = [(c * inv) % p for c in a]
    return a


def sqrt_mod_irreducible(w: Poly, p: Poly):
    """y with y^2 = w in Q[x]/(p), p irreducible, or None.

    Trager: the norm of T^2 - w (after a shift T -> T - s*x making it
    squarefree) factors over Q; a factor of degree deg(p) pinpoints the
    root via a gcd over the field.
    """
    w = w % p
    if w.is_zero():
        return P_ZERO
    d = p.degree
    if d == 1:
        # K = Q: evaluate at the rational root
        root = -p.coeff(0) / p.coeff(1)
        val = w.eval(root)
        from .scalars import is_square_fraction, sqrt_fraction

        f = Fraction(val)
        if is_square_fraction(f):
            return Poly.const(sqrt_fraction(f))
        return None
    for s in range(0, 4 * d + 4):
        # norm of (T - s*x)^2 - w: resultant in x, computed by interpolation
        pts = []
        npts = 2 * d + 1
        for tau in range(npts):
            arg = (Poly.const(Fraction(tau)) - Poly.x() * s) ** 2 - w
            pts.append((Fraction(tau), p.resultant(arg)))
        norm = _interpolate(pts)
        if norm.is_zero():
            continue
        if norm.gcd(norm.derivative()).degree > 0:
            continue  # not squarefree; try another shift
        _, factors = norm.factor_rational()
        for fac, _ in factors:
            if fac.degree != d:
                continue
            # gcd over K of (T - s x)^2 - w and fac(T)
            shifted_sq = [Poly.x() ** 2 * (s * s) - w, Poly.x() * (-2 * s),
                          P_ONE]  # ((T - s x)^2 - w) coefficients in T
            fac_k = [Poly.const(c) for c in fac.coeffs]
            g = _kfpoly_gcd(shifted_sq, fac_k, p)
            if len(g) == 2:
                # monic linear: T + g[0] = 0 -> T = -g[0]; y = T - s x
                y = ((-g[0]) - Poly.x() * s) % p
                if (y * y) % p == w:
                    return y
        return None
    return None


def _interpolate(points):
    """Lagrange interpolation through exact rational points."""
    out = P_ZERO
    for i, (xi, yi) in enumerate(points):
        if not yi:
            continue
        term = Poly.const(yi)
        for j, (xj, _) in enumerate(points):
            if i == j:
                continue
            term = term * Poly([-xj, Fraction(1)]) * (1 / (xi - xj))
        out = out + term
    return out


def sqrt_mod_squarefree(w: Poly, s: Poly):
    """All-or-nothing sqrt of w modulo a squarefree rational polynomial.

    Returns one square root mod s, or None when some irreducible factor
    admits none.  Results from the factors are glued by the CRT.
    """
    s = s.monic()
    if s.degree == 0:
        return P_ZERO
    _, factors = s.factor_rational()
    residues = []
    moduli = []
    for p, _ in factors:
        y = sqrt_mod_irreducible(w, p)
        if y is None:
            return None
        residues.append(y)
        moduli.append(p)
    # CRT
    total = P_ONE
    for m in moduli:
        total = total * m
    out = P_ZERO
    for y, m in zip(residues, moduli):
        rest = total.exact_div(m)
        g, inv, _ = rest.xgcd(m)
        # g == 1 since factors are coprime
        out = out + y * rest * inv
    out = out % total
    if (out * out) % total != (w % total):
        return None
    return out
