"""Scalars of the constant field: Q and one quadratic extension Q(sqrt(delta)).

Rationals are plain fractions.Fraction.  A Constant is a + b*sqrt(delta)
with a, b, delta rational and delta not a square in Q whenever b != 0.
Constants with b == 0 coerce freely with Fraction and int; mixing two
constants with different nonzero deltas raises DeltaMismatch, because a
computation context is allowed exactly one square root.  Anything that
would need a second extension must fail loudly (ExtensionTooDeep) at the
point where the condition arises.

All values are immutable.
"""

from fractions import Fraction
from math import isqrt

from .errors import DeltaMismatch, ExtensionTooDeep

_F0 = Fraction(0)


def is_square_int(n: int) -> bool:
    if n < 0:
        return False
    r = isqrt(n)
    return r * r == n


def sqrt_int(n: int) -> int:
    r = isqrt(n)
    if r * r != n:
        raise ValueError(f"{n} is not a perfect square")
    return r


def is_square_fraction(q: Fraction) -> bool:
    return is_square_int(q.numerator) and is_square_int(q.denominator)


def _reduce_delta(delta: Fraction):
    """Canonical integer tag for sqrt(delta): sqrt(delta) = scale*sqrt(tag).

    Makes delta an integer (multiply by den^2) and strips square factors
    up to a small trial-division bound; equal quadratic fields with
    moderate square parts then share one tag.
    """
    n = delta.numerator * delta.denominator
    scale = Fraction(1, delta.denominator)
    sign = -1 if n < 0 else 1
    n = abs(n)
    d = 2
    while d * d <= min(n, 10 ** 6):
        dd = d * d
        while n % dd == 0:
            n //= dd
            scale *= d
        d += 1
    return Fraction(sign * n), scale


def sqrt_fraction(q: Fraction) -> Fraction:
    return Fraction(sqrt_int(q.numerator), sqrt_int(q.denominator))


class Constant:
    """Element a + b*sqrt(delta) of a quadratic extension of Q.

    Invariants: delta is not a square in Q when b != 0; when b == 0 the
    value is rational and delta is normalized to 0.
    """

    __slots__ = ("a", "b", "delta")

    def __init__(self, a, b=0, delta=0):
        a = Fraction(a)
        b = Fraction(b)
        delta = Fraction(delta)
        if b != 0:
            if delta == 0:
                b = Fraction(0)
            elif is_square_fraction(delta):
                a = a + b * sqrt_fraction(delta)
                b = Fraction(0)
            else:
                # canonicalize the tag: integer delta with small square part
                # removed, so compatible extensions share one tag
                delta, scale = _reduce_delta(delta)
                b = b * scale
        if b == 0:
            delta = Fraction(0)
        self.a = a
        self.b = b
        self.delta = delta

    @classmethod
    def _mk(cls, a, b, delta):
        """Internal fast path: fields already canonical Fractions."""
        self = object.__new__(cls)
        if b:
            self.a = a
            self.b = b
            self.delta = delta
        else:
            self.a = a
            self.b = _F0
            self.delta = _F0
        return self

    # -- coercion ---------------------------------------------------------

    @staticmethod
    def _coerce(x):
        if isinstance(x, Constant):
            return x
        if isinstance(x, Fraction):
            return Constant._mk(x, _F0, _F0)
        if isinstance(x, int):
            return Constant._mk(Fraction(x), _F0, _F0)
        return None

    def _join_delta(self, other):
        if self.b == 0:
            return other.delta
        if other.b == 0:
            return self.delta
        if self.delta != other.delta:
            raise DeltaMismatch(
                f"cannot mix sqrt({self.delta}) with sqrt({other.delta})")
        return self.delta

    def rebase(self, delta):
        """Rewrite over Q(sqrt(delta)) when compatible, else raise."""
        if self.b == 0 or self.delta == delta:
            return Constant(self.a, self.b, delta if self.b else self.delta)
        ratio = self.delta / delta
        if is_square_fraction(ratio):
            return Constant(self.a, self.b * sqrt_fraction(ratio), delta)
        raise DeltaMismatch(
            f"sqrt({self.delta}) does not lie in Q(sqrt({delta}))")

    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if self.b != 0:
            raise ExtensionTooDeep(
                f"value {self} is not rational; sqrt({self.delta}) present")
        return self.a

    def conjugate(self) -> "Constant":
        return Constant._mk(self.a, -self.b, self.delta)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self._join_delta(o)
        return Constant._mk(self.a + o.a, self.b + o.b, d)

    __radd__ = __add__

    def __neg__(self):
        return Constant._mk(-self.a, -self.b, self.delta)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self._join_delta(o)
        return Constant._mk(self.a * o.a + self.b * o.b * d,
                            self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def inverse(self) -> "Constant":
        if not self:
            raise ZeroDivisionError("inverse of zero constant")
        n = self.a * self.a - self.b * self.b * self.delta
        # n != 0 because delta is not a square when b != 0
        return Constant._mk(self.a / n, -self.b / n, self.delta)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = Constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparison and hashing -------------------------------------------

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.b == 0 and o.b == 0:
            return self.a == o.a
        return self.a == o.a and self.b == o.b and self.delta == o.delta

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.delta))

    def __repr__(self):
        if self.b == 0:
            return str(self.a)
        parts = []
        if self.a != 0:
            parts.append(str(self.a))
        coef = "" if self.b == 1 else ("-" if self.b == -1 else f"{self.b}*")
        term = f"{coef}sqrt({self.delta})"
        if parts and not term.startswith("-"):
            return f"{parts[0]}+{term}"
        return f"{''.join(parts)}{term}"


def const_sqrt(q, delta_hint=None):
    """Square root of a rational q inside Q or Q(sqrt(delta)).

    Returns a Fraction when q is a perfect square, otherwise a Constant
    sqrt(q) = 0 + 1*sqrt(q).  delta_hint, when given, is the extension tag
    already in use; a root needing a different extension raises
    ExtensionTooDeep.
    """
    q = Fraction(q)
    if q == 0:
        return Fraction(0)
    if is_square_fraction(q):
        return sqrt_fraction(q)
    if delta_hint is not None and delta_hint != 0:
        ratio = q / Fraction(delta_hint)
        if is_square_fraction(ratio):
            return Constant(0, sqrt_fraction(ratio), Fraction(delta_hint))
        raise ExtensionTooDeep(
            f"sqrt({q}) incompatible with existing extension sqrt({delta_hint})")
    return Constant(0, 1, q)


def scalar_is_zero(x) -> bool:
    return not x


def as_rational(x) -> Fraction:
    """Fraction value of a scalar known to be rational."""
    if isinstance(x, Constant):
        return x.as_fraction()
    return Fraction(x)
