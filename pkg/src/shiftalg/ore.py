"""The noncommutative ring D = F[Phi, Phi^(-1)] of shift operators.

A ShiftOp is a Laurent polynomial in the shift Phi with rational-function
coefficients, subject to the twist Phi o f = f(x+1) o Phi.  Operators
tagged with step t live in the subring D_t = F[Phi^t, Phi^(-t)]: all
exponents are multiples of t and the twist moves x by t per power.

Representation: `low` is the smallest exponent, `coeffs[i]` the
coefficient of Phi^(low + i*step), with nonzero first and last entries
(the zero operator is the empty tuple).  Operators are immutable.

Operators are considered equal up to left multiplication by units f*Phi^k
(the ring's unit group); canonical() picks the unique associate with
trailing exponent 0, polynomial coefficients with no common factor or
content, and positive leading coefficient, which makes associate equality
a structural comparison.
"""

from fractions import Fraction

from .errors import DivisionByZeroOperator, StepMismatch
from .ratfunc import R_ONE, R_ZERO, RatFunc


class ShiftOp:
    __slots__ = ("low", "coeffs", "step")

    def __init__(self, low, coeffs, step=1):
        if step < 1:
            raise ValueError("step must be a positive integer")
        cs = [RatFunc.of(c) for c in coeffs]
        lead = len(cs)
        while lead and cs[lead - 1].is_zero():
            lead -= 1
        del cs[lead:]
        trail = 0
        while trail < len(cs) and cs[trail].is_zero():
            trail += 1
        if trail:
            cs = cs[trail:]
            low += trail * step
        if not cs:
            low = 0
        if low % step != 0:
            raise ValueError("exponents must be multiples of the step")
        self.low = low
        self.coeffs = tuple(cs)
        self.step = step

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(step=1):
        return ShiftOp(0, (), step)

    @staticmethod
    def one(step=1):
        return ShiftOp(0, (R_ONE,), step)

    @staticmethod
    def of_ratfunc(f, step=1):
        return ShiftOp(0, (RatFunc.of(f),), step)

    @staticmethod
    def phi_power(e, step=1):
        return ShiftOp(e, (R_ONE,), step)

    @staticmethod
    def from_terms(terms, step=1):
        """Build from a mapping exponent -> coefficient."""
        nz = {e: RatFunc.of(c) for e, c in terms.items() if RatFunc.of(c)}
        if not nz:
            return ShiftOp.zero(step)
        if any(e % step for e in nz):
            raise StepMismatch(f"exponents {sorted(nz)} not multiples of {step}")
        lo = min(nz)
        hi = max(nz)
        cs = [nz.get(e, R_ZERO) for e in range(lo, hi + 1, step)]
        return ShiftOp(lo, cs, step)

    @staticmethod
    def first_order(r, step=1):
        """Phi^step - r: the operator certified by a hypergeometric rate r."""
        return ShiftOp.from_terms({step: R_ONE, 0: -RatFunc.of(r)}, step)

    # -- queries -----------------------------------------------------------------

    def is_zero(self):
        return not self.coeffs

    @property
    def high(self):
        return self.low + (len(self.coeffs) - 1) * self.step

    @property
    def order(self):
        """Number of basis vectors of D_t/(D_t L): (high - low)/step."""
        if not self.coeffs:
            return -1
        return len(self.coeffs) - 1

    def coeff_at(self, e):
        if not self.coeffs or e < self.low or (e - self.low) % self.step:
            return R_ZERO
        i = (e - self.low) // self.step
        if i >= len(self.coeffs):
            return R_ZERO
        return self.coeffs[i]

    def terms(self):
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                yield self.low + i * self.step, c

    @property
    def lead_coeff(self):
        return self.coeffs[-1] if self.coeffs else R_ZERO

    @property
    def trail_coeff(self):
        return self.coeffs[0] if self.coeffs else R_ZERO

    def is_rational(self):
        return all(c.is_rational() for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, ShiftOp):
            return NotImplemented
        return (self.low == other.low and self.step == other.step
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.low, self.step, self.coeffs))

    def __repr__(self):
        from .parsing import format_shiftop

        return format_shiftop(self)

    def _check_step(self, other):
        if self.step != other.step:
            raise StepMismatch(
                f"step {self.step} vs {other.step}")

    # -- additive structure ----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, ShiftOp):
            return NotImplemented
        self._check_step(other)
        terms = {e: c for e, c in self.terms()}
        for e, c in other.terms():
            terms[e] = terms.get(e, R_ZERO) + c
        return ShiftOp.from_terms(terms, self.step)

    def __neg__(self):
        return ShiftOp(self.low, tuple(-c for c in self.coeffs), self.step)

    def __sub__(self, other):
        if not isinstance(other, ShiftOp):
            return NotImplemented
        return self + (-other)

    def scale(self, f):
        """Left multiplication by the rational function f."""
        f = RatFunc.of(f)
        if f.is_zero():
            return ShiftOp.zero(self.step)
        return ShiftOp(self.low, tuple(f * c for c in self.coeffs), self.step)

    # -- multiplicative structure ---------------------------------------------------

    def mul(self, other):
        """Ore product: (c Phi^a)(d Phi^b) = c * d(x+a) * Phi^(a+b)."""
        if not isinstance(other, ShiftOp):
            raise TypeError("operator product needs two operators")
        self._check_step(other)
        if self.is_zero() or other.is_zero():
            return ShiftOp.zero(self.step)
        out = {}
        for e1, c1 in self.terms():
            for e2, c2 in other.terms():
                e = e1 + e2
                v = c1 * c2.shift(e1)
                out[e] = out.get(e, R_ZERO) + v
        return ShiftOp.from_terms(out, self.step)

    def pow(self, n):
        if n < 0:
            if len(self.coeffs) != 1:
                raise ValueError("negative power of a non-unit operator")
            return self.inverse_unit().pow(-n)
        out = ShiftOp.one(self.step)
        base = self
        while n:
            if n & 1:
                out = out.mul(base)
            base = base.mul(base)
            n >>= 1
        return out

    def inverse_unit(self):
        """Inverse of a unit f*Phi^k: Phi^(-k) f^(-1)."""
        if len(self.coeffs) != 1:
            raise ValueError("only monomial operators are units")
        f = self.coeffs[0]
        k = self.low
        return ShiftOp(-k, (f.inverse().shift(-k),), self.step)

    def conjugate(self, i):
        """Phi^i o L o Phi^(-i): every coefficient shifted by i."""
        return ShiftOp(self.low, tuple(c.shift(i) for c in self.coeffs),
                       self.step)

    def shift_params(self, c):
        """L(x+c, Phi) for rational c."""
        return ShiftOp(self.low, tuple(f.shift(c) for f in self.coeffs),
                       self.step)

    def section_transform(self, m):
        """L(x/m, Phi^m): coefficient f(x) of Phi^e becomes f(x/m) on Phi^(e*m).

        Annihilates the m-interlacing with zeros of anything L annihilates.
        """
        if self.step != 1:
            raise StepMismatch("section transform starts from step 1")
        if m == 1:
            return self
        return ShiftOp(self.low * m,
                       tuple(c.dilate(m) for c in self.coeffs), m)

    def retag(self, new_step):
        """Reinterpret in D_new_step; every exponent must be a multiple."""
        if new_step == self.step:
            return self
        if self.is_zero():
            return ShiftOp.zero(new_step)
        terms = dict(self.terms())
        if any(e % new_step for e in terms):
            raise StepMismatch(
                f"operator has exponents not divisible by {new_step}")
        return ShiftOp.from_terms(terms, new_step)

    def adjoint(self):
        """Exponent-preserving involutive anti-automorphism of D_t.

        Coefficient of Phi^e maps to c(-x) shifted by e, i.e.
        adj(L) = sum_e c_e(e - x) Phi^e.  Being an anti-automorphism, it
        exchanges left and right factors while preserving orders;
        adjoint(adjoint(L)) == L exactly.
        """
        if self.is_zero():
            raise DivisionByZeroOperator("adjoint of the zero operator")
        out = []
        for i, c in enumerate(self.coeffs):
            e = self.low + i * self.step
            out.append(c.reflect().shift(e))
        return ShiftOp(self.low, out, self.step)

    # -- division, gcrd, lclm ------------------------------------------------------

    def monic(self):
        """Left-multiply by a unit to get leading coefficient 1, low 0."""
        if self.is_zero():
            return self
        op = self
        if op.low:
            op = ShiftOp(0, tuple(c.shift(-op.low) for c in op.coeffs),
                         op.step)
        lead = op.coeffs[-1]
        if lead.is_one():
            return op
        inv = lead.inverse()
        return ShiftOp(0, tuple(inv * c for c in op.coeffs), op.step)

    def canonical(self):
        """Unique associate: low 0, primitive polynomial coefficients,
        positive leading coefficient."""
        if self.is_zero():
            return ShiftOp.zero(self.step)
        op = self
        if op.low:
            op = ShiftOp(0, tuple(c.shift(-op.low) for c in op.coeffs),
                         op.step)
        if not op.is_rational():
            return op.monic()
        # clear denominators
        den = None
        for c in op.coeffs:
            if c.is_zero():
                continue
            d = c.den
            den = d if den is None else den * d.exact_div(den.gcd(d))
        coeffs = [c * den for c in op.coeffs]
        nums = [c.num for c in coeffs]
        # remove common polynomial factor
        g = None
        for p in nums:
            if p.is_zero():
                continue
            g = p.monic() if g is None else g.gcd(p)
            if g.degree == 0:
                break
        if g is not None and g.degree > 0:
            nums = [p.exact_div(g) if not p.is_zero() else p for p in nums]
        # remove rational content
        from math import gcd as _gcd

        num_g, den_l = 0, 1
        for p in nums:
            c = p.content()
            if not c:
                continue
            num_g = _gcd(num_g, c.numerator)
            den_l = den_l * c.denominator // _gcd(den_l, c.denominator)
        if num_g:
            content = Fraction(num_g, den_l)
            nums = [p * (1 / content) for p in nums]
        if nums[-1].lead < 0:
            nums = [-p for p in nums]
        return ShiftOp(0, tuple(RatFunc(p) for p in nums), op.step)

    def is_associate(self, other):
        return self.canonical() == other.canonical()


def mul(a, b):
    return a.mul(b)


def right_divide(left, right):
    """Right Euclidean division: left = Q * right + rem, order(rem) < order(right)."""
    if not isinstance(left, ShiftOp) or not isinstance(right, ShiftOp):
        raise TypeError("right_divide needs two operators")
    left._check_step(right)
    if right.is_zero():
        raise DivisionByZeroOperator("division by the zero operator")
    t = left.step
    a, b = left.low, right.low
    # reduce both to trailing exponent 0; restore units afterwards
    la = [c.shift(-a) for c in left.coeffs]
    rb = [c.shift(-b) for c in right.coeffs]
    dn = len(rb) - 1
    lead = rb[-1]
    q = {}
    rem = list(la)
    while len(rem) - 1 >= dn and rem:
        k = (len(rem) - 1 - dn) * t
        c = rem[-1] * lead.shift(k).inverse()
        if not c.is_zero():
            q[k] = q.get(k, R_ZERO) + c
            for j in range(dn + 1):
                rem[len(rem) - 1 - dn + j] = (
                    rem[len(rem) - 1 - dn + j] - c * rb[j].shift(k))
        rem.pop()
        while rem and rem[-1].is_zero() and len(rem) - 1 >= dn:
            rem.pop()
    # left = Phi^a (Q0 R0 + rem0):  Q = Phi^a Q0 Phi^(-b), rem = Phi^a rem0
    quot = ShiftOp.from_terms(
        {e + a - b: c.shift(a) for e, c in q.items()}, t)
    remainder = ShiftOp(a, [c.shift(a) for c in rem], t)
    return quot, remainder


def gcrd(left, right):
    """Canonical greatest common right divisor."""
    if left.is_zero() and right.is_zero():
        raise DivisionByZeroOperator("gcrd(0, 0) is undefined")
    a, b = left, right
    while not b.is_zero():
        _, r = right_divide(a, b)
        a, b = b, r
    return a.canonical()


def lclm(left, right):
    """Canonical least common left multiple: generator of DL intersect DR.

    Computed as the first linear dependency among the images of
    1, Phi^t, Phi^(2t), ... in D/DL (+) D/DR.
    """
    from .linalg import RowReducer

    left._check_step(right)
    if left.is_zero() or right.is_zero():
        raise DivisionByZeroOperator("lclm needs nonzero operators")
    t = left.step
    lm = left.monic()
    rm = right.monic()
    nl, nr = lm.order, rm.order
    if nl == 0 or nr == 0:
        # a unit divides everything: DL = D
        return (right if nl == 0 else left).canonical()

    def advance(state, op, n):
        new = [R_ZERO] + [c.shift(t) for c in state[:-1]]
        top = state[-1].shift(t)
        if not top.is_zero():
            for j in range(n):
                new[j] = new[j] - top * op.coeffs[j]
        return new

    rho = [R_ONE] + [R_ZERO] * (nl - 1)
    pi = [R_ONE] + [R_ZERO] * (nr - 1)
    red = RowReducer(nl + nr)
    k = 0
    while True:
        dep = red.add(tuple(rho + pi))
        if dep is not None:
            terms = {k * t: R_ONE}
            for i, c in enumerate(dep):
                terms[i * t] = -c
            return ShiftOp.from_terms(terms, t).canonical()
        rho = advance(rho, lm, nl)
        pi = advance(pi, rm, nr)
        k += 1


def sym_product(left, right):
    """Symmetric product: minimal operator of 1 (x) 1 in M_L (x) M_R.

    Annihilates every product u*v of a solution u of L and v of R.
    """
    from .dmod import from_operator, minimal_operator, ModVector, tensor

    left._check_step(right)
    if left.is_zero() or right.is_zero():
        raise DivisionByZeroOperator("symmetric product of zero operator")
    if left.order == 0 or right.order == 0:
        return ShiftOp.one(left.step)
    ml = from_operator(left)
    mr = from_operator(right)
    tm = tensor(ml, mr)
    coords = [R_ZERO] * tm.dim
    coords[0] = R_ONE
    return minimal_operator(tm, ModVector(coords)).canonical()


def adjoint(op):
    return op.adjoint()


def conjugate(op, i):
    return op.conjugate(i)


def shift_params(op, c):
    return op.shift_params(c)


def section_transform(op, m):
    return op.section_transform(m)
