"""Dense univariate polynomials over Q or Q(sqrt(delta)).

A Poly stores its coefficients as a tuple indexed by degree, with a
nonzero leading coefficient; the zero polynomial is the empty tuple and
reports degree -1.  Coefficients are fractions.Fraction, or
scalars.Constant when the quadratic extension is in play.  All operations
are pure and exact.

Multiplication of rational polynomials of substantial size goes through
Kronecker substitution (one big-integer product), which is what keeps the
exact kernel fast; gcd uses a primitive PRS over the integers.
Irreducible factorization over Q is delegated to sympy behind
factor_rational(); everything else is self-contained.
"""

from fractions import Fraction
from math import gcd as int_gcd

from .errors import CoefficientsNotRational
from .scalars import Constant

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _as_scalar(x):
    if isinstance(x, (Fraction, Constant)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"not a scalar: {x!r}")


class Poly:
    """Univariate polynomial; immutable, canonical (no trailing zeros)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        if isinstance(coeffs, Poly):
            self.coeffs = coeffs.coeffs
            return
        cs = [_as_scalar(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def const(c):
        return Poly((c,))

    @staticmethod
    def x(power: int = 1):
        return Poly([0] * power + [1])

    @staticmethod
    def from_int_list(ints):
        return Poly([Fraction(c) for c in ints])

    # -- basic queries -------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 1

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lead(self):
        if not self.coeffs:
            return _ZERO
        return self.coeffs[-1]

    @property
    def trail(self):
        if not self.coeffs:
            return _ZERO
        return self.coeffs[0]

    def coeff(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return _ZERO

    def is_rational(self) -> bool:
        return all(not isinstance(c, Constant) or c.is_rational()
                   for c in self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Constant)):
            other = Poly.const(_as_scalar(other))
        if not isinstance(other, Poly):
            return NotImplemented
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(self.coeffs)

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Constant)):
            other = Poly.const(_as_scalar(other))
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Constant)):
            other = Poly.const(_as_scalar(other))
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Constant)):
            c = _as_scalar(other)
            if not c:
                return Poly()
            return Poly([a * c for a in self.coeffs])
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        if len(a) + len(b) > 64 and self.is_rational() and other.is_rational():
            return _mul_kronecker(self, other)
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = out[i + j] + ai * bj
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.const(_ONE)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other: "Poly"):
        """Exact field division: self = q*other + r with deg r < deg other."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.degree < other.degree:
            return Poly(), self
        rem = list(self.coeffs)
        dn = other.degree
        inv_lead = 1 / other.lead
        q = [_ZERO] * (len(rem) - dn)
        for i in range(len(rem) - 1, dn - 1, -1):
            c = rem[i]
            if not c:
                continue
            f = c * inv_lead
            q[i - dn] = f
            rem[i] = _ZERO
            for j in range(dn):
                rem[i - dn + j] = rem[i - dn + j] - f * other.coeffs[j]
        return Poly(q), Poly(rem[:dn])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ValueError("division was not exact")
        return q

    # -- gcd and normal forms --------------------------------------------------

    def monic(self) -> "Poly":
        if not self.coeffs or self.lead == 1:
            return self
        return self * (1 / self.lead)

    def content(self) -> Fraction:
        """Positive rational c with self = c * primitive integer polynomial.

        Only defined for rational polynomials.
        """
        if not self.coeffs:
            return _ZERO
        nums, dens = [], []
        for c in self.coeffs:
            f = c.as_fraction() if isinstance(c, Constant) else c
            nums.append(f.numerator)
            dens.append(f.denominator)
        gn = 0
        for n in nums:
            gn = int_gcd(gn, abs(n))
        ld = 1
        for d in dens:
            ld = ld * d // int_gcd(ld, d)
        return Fraction(gn, ld)

    def primitive(self) -> "Poly":
        """self / content: integer coefficients with gcd 1, sign of lead kept."""
        c = self.content()
        if not c:
            return self
        return self * (1 / c)

    def gcd(self, other: "Poly") -> "Poly":
        """Monic greatest common divisor."""
        a, b = self, other
        if a.is_zero():
            return b.monic()
        if b.is_zero():
            return a.monic()
        if a.is_rational() and b.is_rational():
            return _gcd_rational(a, b)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def squarefree_part(self) -> "Poly":
        """Monic product of the distinct irreducible factors."""
        if self.degree <= 0:
            return Poly.const(_ONE)
        return self.exact_div(self.gcd(self.derivative())).monic()

    def squarefree_decomposition(self):
        """Yun's algorithm: list of (monic squarefree factor, multiplicity)."""
        p = self.monic()
        if p.degree <= 0:
            return []
        out = []
        g = p.gcd(p.derivative())
        w = p.exact_div(g)
        i = 1
        while w.degree > 0:
            y = w.gcd(g)
            f = w.exact_div(y)
            if f.degree > 0:
                out.append((f.monic(), i))
            w, g = y, g.exact_div(y)
            i += 1
        return out

    # -- substitutions ----------------------------------------------------------

    def shift(self, k) -> "Poly":
        """p(x + k); k may be any rational."""
        k = Fraction(k) if not isinstance(k, (Fraction, Constant)) else k
        if not k or self.degree <= 0:
            return self
        # Horner: p(x+k) built from the top coefficient down
        out = Poly()
        xk = Poly([k, _ONE])
        for c in reversed(self.coeffs):
            out = out * xk + c
        return out

    def dilate(self, m: int) -> "Poly":
        """p(x / m) for m >= 1."""
        if m == 1:
            return self
        return Poly([c / Fraction(m) ** i for i, c in enumerate(self.coeffs)])

    def scale_arg(self, m) -> "Poly":
        """p(m * x)."""
        m = Fraction(m)
        return Poly([c * m ** i for i, c in enumerate(self.coeffs)])

    def affine(self, m, c) -> "Poly":
        """p(m*x + c)."""
        return self.shift(c).scale_arg(m)

    def reflect(self) -> "Poly":
        """p(-x)."""
        return Poly([(-c if i % 2 else c) for i, c in enumerate(self.coeffs)])

    def eval(self, v):
        out = None
        for c in reversed(self.coeffs):
            out = c if out is None else out * v + c
        return out if out is not None else _ZERO

    # -- factorization helpers (rational coefficients only) ----------------------

    def factor_rational(self):
        """Irreducible factorization over Q.

        Returns (content, [(monic irreducible Poly, multiplicity), ...]) with
        content * prod(f^m) == self.  Raises CoefficientsNotRational when the
        quadratic extension is present.  Delegated to sympy.
        """
        if not self.is_rational():
            raise CoefficientsNotRational(
                "factorization over Q(sqrt(delta)) is not supported")
        if self.is_zero():
            raise ValueError("cannot factor the zero polynomial")
        if self.degree == 0:
            return (_frac(self.coeffs[0]), [])
        import sympy

        xs = sympy.Symbol("x")
        expr = sympy.Poly([_sym_q(c) for c in reversed(self.coeffs)], xs,
                          domain="QQ")
        content, factors = expr.factor_list()
        out = []
        for f, mult in factors:
            cs = [Fraction(c.p, c.q) for c in reversed(f.all_coeffs())]
            p = Poly(cs)
            content = content * _sym_q(p.lead) ** mult
            out.append((p.monic(), mult))
        out.sort(key=lambda fm: (fm[0].degree, fm[0].coeffs))
        return (Fraction(content.p, content.q), out)

    def rational_roots(self):
        """Sorted list of (Fraction root, multiplicity)."""
        if not self.is_rational():
            raise CoefficientsNotRational("root finding over Q only")
        if self.degree <= 0:
            return []
        import sympy

        xs = sympy.Symbol("x")
        expr = sympy.Poly([_sym_q(c) for c in reversed(self.coeffs)], xs,
                          domain="QQ")
        roots = expr.ground_roots()
        out = [(Fraction(r.p, r.q), m) for r, m in roots.items()]
        out.sort()
        return out

    def integer_roots(self):
        return [(int(r), m) for r, m in self.rational_roots()
                if r.denominator == 1]

    def xgcd(self, other: "Poly"):
        """Extended Euclid: (g, u, v) with u*self + v*other = g, g monic."""
        r0, r1 = self, other
        u0, u1 = P_ONE, P_ZERO
        v0, v1 = P_ZERO, P_ONE
        while not r1.is_zero():
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            u0, u1 = u1, u0 - q * u1
            v0, v1 = v1, v0 - q * v1
        if r0.is_zero():
            return r0, u0, v0
        lead = r0.lead
        inv = 1 / lead
        return r0 * inv, u0 * inv, v0 * inv

    def resultant(self, other: "Poly"):
        """Res(self, other) over the coefficient field, exact."""
        f, g = self, other
        if f.is_zero() or g.is_zero():
            return _ZERO
        sign = 1
        acc = _ONE
        while g.degree > 0:
            r = f % g
            d = r.degree if not r.is_zero() else 0
            if r.is_zero():
                return _ZERO
            acc = acc * g.lead ** (f.degree - d)
            if (f.degree * g.degree) % 2:
                sign = -sign
            f, g = g, r
        # g constant
        acc = acc * g.coeff(0) ** f.degree
        return acc if sign == 1 else -acc

    def __repr__(self):
        from .parsing import format_poly

        return format_poly(self)


P_ZERO = Poly()
P_ONE = Poly.const(_ONE)
P_X = Poly.x()


def _frac(c):
    return c.as_fraction() if isinstance(c, Constant) else c


def _sym_q(c):
    import sympy

    f = _frac(c)
    return sympy.Rational(f.numerator, f.denominator)


def _gcd_rational(a: Poly, b: Poly) -> Poly:
    """Monic gcd over Q via a primitive PRS on integer polynomials."""
    fa = [_frac(c) for c in a.coeffs]
    fb = [_frac(c) for c in b.coeffs]
    ia = _int_primitive(fa)
    ib = _int_primitive(fb)
    if len(ia) < len(ib):
        ia, ib = ib, ia
    while ib:
        ia = _int_prem(ia, ib)
        ia = _int_primitive([Fraction(c) for c in ia])
        ia, ib = ib, ia
    return Poly.from_int_list(ia).monic()


def _int_primitive(fracs):
    """Integer coefficient list with content removed; [] for zero."""
    if not fracs:
        return []
    lcm = 1
    for f in fracs:
        d = f.denominator
        lcm = lcm * d // int_gcd(lcm, d)
    ints = [int(f * lcm) for f in fracs]
    g = 0
    for c in ints:
        g = int_gcd(g, abs(c))
    if g > 1:
        ints = [c // g for c in ints]
    return ints


def _int_prem(a, b):
    """Pseudo-remainder of integer coefficient lists (dense, trimmed)."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and a:
        da = len(a) - 1
        la = a[-1]
        a = [c * lb for c in a]
        for j in range(db + 1):
            a[da - db + j] -= la * b[j]
        while a and a[-1] == 0:
            a.pop()
    return a


def _mul_kronecker(a: Poly, b: Poly) -> Poly:
    """Multiply rational polynomials via one big-integer product."""
    fa = [_frac(c) for c in a.coeffs]
    fb = [_frac(c) for c in b.coeffs]
    la = 1
    for f in fa:
        la = la * f.denominator // int_gcd(la, f.denominator)
    lb = 1
    for f in fb:
        lb = lb * f.denominator // int_gcd(lb, f.denominator)
    ia = [int(f * la) for f in fa]
    ib = [int(f * lb) for f in fb]
    bound = 2 * min(len(ia), len(ib)) * max(map(abs, ia)) * max(map(abs, ib)) + 1
    bits = max(bound.bit_length(), 8)
    base = 1 << bits
    va = _pack(ia, bits)
    vb = _pack(ib, bits)
    prod = va * vb
    n = len(ia) + len(ib) - 1
    out = []
    half = base >> 1
    mask = base - 1
    for _ in range(n):
        digit = prod & mask
        if digit >= half:
            digit -= base
        prod = (prod - digit) >> bits
        out.append(digit)
    den = la * lb
    return Poly([Fraction(c, den) for c in out])


def _pack(ints, bits):
    v = 0
    for c in reversed(ints):
        v = (v << bits) + c
    return v
