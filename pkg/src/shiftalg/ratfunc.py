"""Rational functions over the constant field: the coefficient field of D.

Canonical form: numerator and denominator coprime, denominator monic and
nonzero; the sign (and any constant) lives in the numerator.  Equality is
structural, which is what makes operator equality decidable downstream.

The shift map x -> x+k (any rational k) is the field automorphism that
everything else in the library twists by.
"""

from fractions import Fraction

from .poly import P_ONE, Poly
from .scalars import Constant


def _as_poly(v):
    if isinstance(v, Poly):
        return v
    if isinstance(v, (int, Fraction, Constant)):
        return Poly.const(v)
    raise TypeError(f"cannot interpret {v!r} as a polynomial")


class RatFunc:
    """Quotient of two polynomials in reduced canonical form."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=P_ONE, _reduced=False):
        num = _as_poly(num)
        den = _as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if num.is_zero():
                den = P_ONE
            else:
                g = num.gcd(den)
                if g.degree > 0:
                    num = num.exact_div(g)
                    den = den.exact_div(g)
                lead = den.lead
                if lead != 1:
                    inv = 1 / lead
                    num = num * inv
                    den = den * inv
        self.num = num
        self.den = den

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def const(c):
        return RatFunc(Poly.const(c), P_ONE, _reduced=True)

    @staticmethod
    def x():
        return RatFunc(Poly.x(), P_ONE, _reduced=True)

    @staticmethod
    def of(v):
        if isinstance(v, RatFunc):
            return v
        return RatFunc(_as_poly(v))

    # -- queries ----------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_one()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def is_rational(self) -> bool:
        return self.num.is_rational() and self.den.is_rational()

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self!r} is not a constant")
        return self.num.coeff(0)

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Constant, Poly)):
            other = RatFunc.of(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    # -- field operations --------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Constant, Poly)):
            other = RatFunc.of(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        # Henrici: reduce by gcd of denominators first
        g = self.den.gcd(other.den)
        if g.degree == 0:
            num = self.num * other.den + other.num * self.den
            return RatFunc(num, self.den * other.den)
        da = self.den.exact_div(g)
        db = other.den.exact_div(g)
        num = self.num * db + other.num * da
        return RatFunc(num, da * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Constant, Poly)):
            other = RatFunc.of(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Constant, Poly)):
            other = RatFunc.of(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return R_ZERO
        # cross-cancel before multiplying to keep degrees down
        g1 = self.num.gcd(other.den)
        g2 = other.num.gcd(self.den)
        n1 = self.num.exact_div(g1) if g1.degree > 0 else self.num
        d2 = other.den.exact_div(g1) if g1.degree > 0 else other.den
        n2 = other.num.exact_div(g2) if g2.degree > 0 else other.num
        d1 = self.den.exact_div(g2) if g2.degree > 0 else self.den
        den = d1 * d2
        lead = den.lead
        num = n1 * n2
        if lead != 1:
            inv = 1 / lead
            num = num * inv
            den = den * inv
        return RatFunc(num, den, _reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        num, den = self.den, self.num
        lead = den.lead
        if lead != 1:
            inv = 1 / lead
            num = num * inv
            den = den * inv
        return RatFunc(num, den, _reduced=True)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, Constant, Poly)):
            other = RatFunc.of(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RatFunc.of(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num ** n, self.den ** n)

    # -- substitutions --------------------------------------------------------------

    def shift(self, k) -> "RatFunc":
        """f(x + k): the shift automorphism, k any rational."""
        if not k or self.is_constant():
            return self
        return RatFunc(self.num.shift(k), self.den.shift(k))

    def dilate(self, m: int) -> "RatFunc":
        """f(x / m) for m >= 1."""
        if m == 1:
            return self
        if m < 1:
            raise ValueError("dilate requires m >= 1")
        return RatFunc(self.num.dilate(m), self.den.dilate(m))

    def affine(self, m, c) -> "RatFunc":
        """f(m*x + c)."""
        return RatFunc(self.num.affine(m, c), self.den.affine(m, c))

    def reflect(self) -> "RatFunc":
        """f(-x): the involution pairing left and right factors."""
        return RatFunc(self.num.reflect(), self.den.reflect())

    def eval(self, v):
        """Exact value at a scalar; ZeroDivisionError at a pole."""
        den = self.den.eval(v)
        if not den:
            raise ZeroDivisionError(f"pole at {v}")
        return self.num.eval(v) / den

    def __repr__(self):
        from .parsing import format_ratfunc

        return format_ratfunc(self)


R_ZERO = RatFunc.const(Fraction(0))
R_ONE = RatFunc.const(Fraction(1))
R_X = RatFunc.x()


def shift(f: RatFunc, k) -> RatFunc:
    """Module-level alias for RatFunc.shift (the map x -> x+k)."""
    return RatFunc.of(f).shift(k)


def dilate(f: RatFunc, m: int) -> RatFunc:
    """Module-level alias for RatFunc.dilate (the map x -> x/m)."""
    return RatFunc.of(f).dilate(m)


def square_decompose(f: RatFunc):
    """Write f = c * h**2 * s with s a squarefree monic-quotient part.

    Returns (c, h, s): c a rational constant, h and s RatFuncs with s =
    product of the odd-multiplicity monic factors of f.  f must be rational
    and nonzero.  Used by the isotropic-vector search to test square-ness:
    f is a square in F exactly when s == 1 and c is a rational square.
    """
    if f.is_zero():
        raise ValueError("square decomposition of zero")
    num, den = f.num, f.den
    lead = num.lead
    c = lead.as_fraction() if isinstance(lead, Constant) else Fraction(lead)
    parts_h = R_ONE
    parts_s = R_ONE
    for p, mult in num.monic().squarefree_decomposition():
        if mult // 2:
            parts_h = parts_h * RatFunc(p) ** (mult // 2)
        if mult % 2:
            parts_s = parts_s * RatFunc(p)
    for p, mult in den.squarefree_decomposition():
        if mult // 2:
            parts_h = parts_h / RatFunc(p) ** (mult // 2)
        if mult % 2:
            parts_s = parts_s / RatFunc(p)
    return c, parts_h, parts_s
