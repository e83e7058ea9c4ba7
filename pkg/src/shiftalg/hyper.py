"""Hypergeometric certification: order-1 right factors and rank-1 submodules.

The scalar engine is a Petkovsek-style search.  For an operator
L = sum p_i(x) Phi^(i*t) with integer polynomial coefficients, every
hypergeometric solution has a rate in Gosper normal form
    r = z * a(x)/b(x) * c(x+t)/c(x)
with a a monic factor of p_0, b a monic factor of p_n(x - (n-1)t), z a
root of the degree-matching leading equation, and c a polynomial solution
of the associated recurrence.  We enumerate exactly that space; roots z
requiring a constant-field extension beyond one square root are reported
as CompletenessFlag("z-extension-degree") rather than searched.

Every certificate this module returns is re-verified by exact
zero-remainder division or by the defining matrix identity; there are no
probabilistic answers.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import linalg
from .dmod import DModule, ModVector, cyclic_vector, minimal_operator
from .errors import CoefficientsNotRational, CompletenessFlag, InternalVerificationError
from .ore import ShiftOp, right_divide
from .poly import P_ONE, Poly
from .ratfunc import R_ONE, R_ZERO, RatFunc
from .scalars import Constant, is_square_fraction, sqrt_fraction


@dataclass(frozen=True)
class HyperCertificate:
    """Rate r certifying Phi^t - r as a right factor."""

    rate: RatFunc
    witness_u: Optional[RatFunc] = None  # u with shift(u,t)/u = rate, if rational

    def to_json(self):
        from .parsing import format_ratfunc

        return {
            "rate": format_ratfunc(self.rate),
            "rational_solution": (format_ratfunc(self.witness_u)
                                  if self.witness_u is not None else None),
        }


@dataclass(frozen=True)
class Rank1Witness:
    """Line F*c stable under Phi^t with rate r: action^T . shift(c,t) = r*c."""

    coords: ModVector
    rate: RatFunc

    def verify(self, module: DModule) -> bool:
        lhs = module.apply_phi(self.coords)
        rhs = [self.rate * c for c in self.coords.coords]
        return all(a == b for a, b in zip(lhs.coords, rhs))


# -- polynomial solutions of a recurrence --------------------------------------


_BINOM_CACHE = {}


def _binom_poly(m: int) -> Poly:
    """C(j, m) as a polynomial in j."""
    if m in _BINOM_CACHE:
        return _BINOM_CACHE[m]
    out = P_ONE
    for l in range(m):
        out = out * Poly([Fraction(-l), Fraction(1)])
    denom = 1
    for l in range(1, m + 1):
        denom *= l
    out = out * Fraction(1, denom)
    _BINOM_CACHE[m] = out
    return out


def _split_constant_poly(p: Poly):
    """Split a Poly over Q(sqrt(delta)) into (rational part, sqrt part)."""
    ra, rb = [], []
    for c in p.coeffs:
        if isinstance(c, Constant):
            ra.append(c.a)
            rb.append(c.b)
        else:
            ra.append(Fraction(c))
            rb.append(Fraction(0))
    return Poly(ra), Poly(rb)


def polynomial_solutions(bs, t):
    """Basis of polynomial solutions c of sum_i bs[i](x) * c(x + i*t) = 0.

    bs is a list of Poly (over Q or one quadratic extension).  Uses the
    classical degree bound from the first nonvanishing leading cascade,
    then exact kernel computation over the constants.
    """
    n = len(bs) - 1
    while n >= 0 and bs[n].is_zero():
        n -= 1
    if n < 0:
        raise ValueError("zero recurrence")
    bs = bs[:n + 1]
    b = max(p.degree for p in bs)

    # e_k(j): coefficient of x^(j+b-k) in sum_i bs[i] (x+it)^j, then the
    # candidate degrees are the nonnegative integer roots of the first
    # e_k that is not identically zero.
    binoms = [_binom_poly(m) for m in range(b + n + 3)]
    deg_candidates = None
    for k in range(b + n + 3):
        ek = Poly()
        for i, bi in enumerate(bs):
            for l in range(0, k + 1):
                coef = bi.coeff(b - l) if b - l >= 0 else None
                if not coef:
                    continue
                step_pow = Fraction(i * t) ** (k - l)
                ek = ek + binoms[k - l] * (coef * step_pow)
        if not ek.is_zero():
            pa, pb = _split_constant_poly(ek)
            g = pa.gcd(pb) if (pa and pb) else (pa if pa else pb)
            deg_candidates = [r for r, _ in g.integer_roots() if r >= 0]
            break
    if deg_candidates is None:
        raise InternalVerificationError("leading cascade never terminated")
    if not deg_candidates:
        return []
    dmax = max(deg_candidates)

    # linear system on the coefficients of c
    images = []
    for i, bi in enumerate(bs):
        pw = P_ONE
        shift_x = Poly([Fraction(i * t), Fraction(1)])
        col = []
        for m in range(dmax + 1):
            col.append(bi * pw)
            pw = pw * shift_x
        images.append(col)
    nrows = b + dmax + 1
    mat = []
    for row_deg in range(nrows):
        row = []
        for m in range(dmax + 1):
            s = None
            for i in range(len(bs)):
                c = images[i][m].coeff(row_deg)
                if c:
                    s = c if s is None else s + c
            row.append(s if s is not None else Fraction(0))
        mat.append(row)
    basis = linalg.scalar_kernel(mat, dmax + 1)
    return [Poly(v) for v in basis]


# -- truncated leading-coefficient prescreen -------------------------------------

_TRUNC = 4


class _Top:
    """Degree plus the top few coefficients of a polynomial (descending).

    The top J coefficients of a product depend only on the top J
    coefficients of the factors, so candidate degree bounds for the
    Petkovsek c-polynomial can be computed without building products.
    """

    __slots__ = ("deg", "tops")

    def __init__(self, deg, tops):
        self.deg = deg
        self.tops = tops[:_TRUNC]

    @staticmethod
    def of(p: Poly):
        return _Top(p.degree, [p.coeff(p.degree - i) for i in range(_TRUNC)])

    def mul(self, other):
        tops = [Fraction(0)] * _TRUNC
        for i, a in enumerate(self.tops):
            if not a:
                continue
            for j, b in enumerate(other.tops):
                if i + j >= _TRUNC:
                    break
                if b:
                    tops[i + j] += a * b
        return _Top(self.deg + other.deg, tops)

    def scale(self, c):
        return _Top(self.deg, [t * c for t in self.tops])

    @staticmethod
    def of_shifted(p: Poly, s):
        """Top coefficients of p(x + s)."""
        d = p.degree
        tops = []
        for j in range(d, max(d - _TRUNC, -1), -1):
            acc = Fraction(0)
            for i in range(j, d + 1):
                c = p.coeff(i)
                if c:
                    acc += c * _choose(i, j) * Fraction(s) ** (i - j)
            tops.append(acc)
        return _Top(d, tops)


def _choose(n, k):
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def _viable_degrees(tops, t):
    """Candidate c-degrees from truncated leading data.

    tops: list of _Top for the recurrence coefficients B_i.  Returns a
    list of nonnegative integer degrees, or None when the truncated
    cascade is inconclusive (all inspected levels vanish identically).
    """
    b = max(tp.deg for tp in tops)
    for k in range(_TRUNC):
        ek = Poly()
        for i, tp in enumerate(tops):
            for l in range(0, k + 1):
                idx = b - l
                pos = tp.deg - idx
                if pos < 0 or pos >= len(tp.tops):
                    continue
                coef = tp.tops[pos]
                if not coef:
                    continue
                ek = ek + _binom_poly(k - l) * (coef * Fraction(i * t) ** (k - l))
        if not ek.is_zero():
            pa, pb = _split_constant_poly(ek)
            g = pa.gcd(pb) if (pa and pb) else (pa if pa else pb)
            return [r for r, _ in g.integer_roots() if r >= 0]
    return None


# -- candidate enumeration ------------------------------------------------------


def _monic_divisors(p: Poly, step: int = 1):
    """All monic divisors of a rational polynomial, sorted by degree.

    Each divisor is annotated with its shift-class exponent sums (used by
    the rate-class filter): a dict mapping the class representative of an
    irreducible factor to the total multiplicity used from that class.
    """
    _, factors = p.factor_rational()
    keys = []
    for f, m in factors:
        rep, _ = _shift_class_key(f, step)
        keys.append(tuple(rep.coeffs))
    choices = [[(f, e) for e in range(m + 1)] for f, m in factors]
    divs = []
    for combo in itertools.product(*choices):
        d = P_ONE
        sums = {}
        for (f, e), key in zip(combo, keys):
            if e:
                d = d * f ** e
                sums[key] = sums.get(key, 0) + e
        divs.append((d, sums))
    divs.sort(key=lambda q: (q[0].degree, q[0].coeffs))
    return divs


def _rate_class_data(target: RatFunc, power: int, step: int):
    """Per-shift-class exponent targets for rates r with
    r^power == target modulo shift quotients, or None when impossible."""
    sums = {}

    def add(poly, sign):
        content, factors = poly.factor_rational()
        for f, m in factors:
            rep, _ = _shift_class_key(f, step)
            key = tuple(rep.coeffs)
            sums[key] = sums.get(key, 0) + sign * m
        return content

    cn = add(target.num, +1)
    cd = add(target.den, -1)
    const = cn / cd
    for key in list(sums):
        if sums[key] % power:
            return None
        sums[key] //= power
        if not sums[key]:
            del sums[key]
    return sums, const


def _z_matches_class(z, power, const) -> bool:
    zp = z ** power
    if isinstance(zp, Constant):
        return zp == Constant(const)
    return zp == const


def _z_candidates(zpoly: Poly, flags):
    """Nonzero roots of a rational polynomial, allowing one square root."""
    out = []
    _, factors = zpoly.factor_rational()
    for f, _ in factors:
        if f.degree == 1:
            root = -f.coeff(0)
            if root:
                out.append(root)
        elif f.degree == 2:
            # monic: z^2 + pz + q
            p_, q_ = f.coeff(1), f.coeff(0)
            disc = p_ * p_ - 4 * q_
            if is_square_fraction(disc):
                s = sqrt_fraction(disc)
                for root in ((-p_ + s) / 2, (-p_ - s) / 2):
                    if root:
                        out.append(root)
            else:
                half = Fraction(1, 2)
                out.append(Constant(-p_ * half, half, disc))
                out.append(Constant(-p_ * half, -half, disc))
        else:
            if flags is not None:
                flags.append(CompletenessFlag(
                    "z-extension-degree",
                    f"leading equation has an irreducible factor of degree "
                    f"{f.degree}; its roots were not searched"))
    def keyf(z):
        if isinstance(z, Constant) and not z.is_rational():
            return (1, z.delta, z.a, z.b)
        zf = z.as_fraction() if isinstance(z, Constant) else Fraction(z)
        return (0, zf, 0, 0)
    out.sort(key=keyf)
    return out


def hypergeometric_solutions(op: ShiftOp, flags=None, find_first=False,
                             rate_class=None):
    """All hypergeometric certificates of op within the documented scope.

    Returns HyperCertificate list; every returned rate passes exact
    zero-remainder right division by construction and by re-check.

    rate_class=(target, power) restricts to rates r with
    r^power == target modulo shift quotients (an intrinsic constraint the
    caller has established), which prunes the factor enumeration by the
    per-class exponent sums and pins z^power.
    """
    if op.is_zero():
        raise ValueError("zero operator")
    op = op.canonical()
    t = op.step
    n = op.order
    if n == 0:
        return []
    if not op.is_rational():
        if flags is not None:
            flags.append(CompletenessFlag(
                "coefficients-not-rational",
                "operator coefficients lie in the quadratic extension; "
                "the hypergeometric search runs over Q only"))
        return []
    class_sums = class_const = class_power = None
    if rate_class is not None:
        target, class_power = rate_class
        if not target.is_rational():
            rate_class = None
        else:
            data = _rate_class_data(target, class_power, t)
            if data is None:
                return []
            class_sums, class_const = data
    ps = [c.num for c in op.coeffs]  # canonical: polynomial coefficients
    trail = ps[0]
    lead_shifted = ps[n].shift(-(n - 1) * t)
    found = []
    seen_rates = set()
    a_divs = _monic_divisors(trail, t)
    b_divs = _monic_divisors(lead_shifted, t)

    def pair_admissible(sa, sb):
        if rate_class is None:
            return True
        for k in set(sa) | set(sb) | set(class_sums):
            if sa.get(k, 0) - sb.get(k, 0) != class_sums.get(k, 0):
                return False
        return True

    a_by_deg, b_by_deg = {}, {}
    for a, sa in a_divs:
        a_by_deg.setdefault(a.degree, []).append((a, sa))
    for b_, sb in b_divs:
        b_by_deg.setdefault(b_.degree, []).append((b_, sb))

    # The leading z-equation depends only on (deg a, deg b): with monic a
    # and b the top coefficient of A_i = p_i * prod(a shifts) * prod(b
    # shifts) is lc(p_i).  Solve it once per degree pair; factor pairs in
    # classes with no usable root are pruned without any products.
    degree_pairs = []
    for da in sorted(a_by_deg):
        for db in sorted(b_by_deg):
            degs = [ps[i].degree + i * da + (n - i) * db for i in range(n + 1)]
            m = max(degs)
            zco = {i: ps[i].lead for i in range(n + 1) if degs[i] == m}
            zpoly = Poly([zco.get(i, Fraction(0)) for i in range(n + 1)])
            v = 0
            while not zpoly.coeff(v):
                v += 1
            if v:
                zpoly = Poly(zpoly.coeffs[v:])
            if zpoly.degree < 1:
                continue
            zs = _z_candidates(zpoly, flags)
            if rate_class is not None:
                zs = [z for z in zs
                      if _z_matches_class(z, class_power, class_const)]
            if zs:
                degree_pairs.append((da + db, da, db, zs))
    degree_pairs.sort(key=lambda e: (e[0], e[1]))

    ps_tops = [_Top.of(p) for p in ps]
    for _, da, db, zs in degree_pairs:
        for a, sa in a_by_deg[da]:
            a_sh_tops = None
            a_sh = None
            for b_, sb in b_by_deg[db]:
                if not pair_admissible(sa, sb):
                    continue
                if a_sh_tops is None:
                    a_sh_tops = [_Top.of_shifted(a, k * t) for k in range(n)]
                b_sh_tops = [_Top.of_shifted(b_, k * t) for k in range(n)]
                # truncated leading data of A_i = p_i * a-shifts * b-shifts
                tops = []
                for i in range(n + 1):
                    tp = ps_tops[i]
                    for k in range(i):
                        tp = tp.mul(a_sh_tops[k])
                    for k in range(i, n):
                        tp = tp.mul(b_sh_tops[k])
                    tops.append(tp)
                prods = None
                for z in zs:
                    try:
                        viable = _viable_degrees(
                            [tp.scale(z ** i) for i, tp in enumerate(tops)], t)
                    except CoefficientsNotRational:
                        viable = None
                    if viable is not None and not viable:
                        continue
                    if prods is None:
                        if a_sh is None:
                            a_sh = [a.shift(k * t) for k in range(n)]
                        b_sh = [b_.shift(k * t) for k in range(n)]
                        prods = []
                        for i in range(n + 1):
                            q = ps[i]
                            for k in range(i):
                                q = q * a_sh[k]
                            for k in range(i, n):
                                q = q * b_sh[k]
                            prods.append(q)
                    bs = [prods[i] * (z ** i) for i in range(n + 1)]
                    try:
                        cs = polynomial_solutions(bs, t)
                    except CoefficientsNotRational:
                        continue
                    for c in cs:
                        rate = RatFunc(a * c.shift(t) * z, b_ * c)
                        key = (rate.num.coeffs, rate.den.coeffs)
                        if key in seen_rates:
                            continue
                        _, rem = right_divide(op, ShiftOp.first_order(rate, t))
                        if not rem.is_zero():
                            raise InternalVerificationError(
                                "hypergeometric candidate failed division")
                        seen_rates.add(key)
                        wu = None
                        if rate.is_rational():
                            wu = is_shift_quotient(rate, t)
                        found.append(HyperCertificate(rate, wu))
                        if find_first:
                            return found
    found.sort(key=lambda h: repr(h.rate))
    return found


# -- shift quotients -------------------------------------------------------------


def _shift_class_key(p: Poly, t: int):
    """Canonical (representative, offset) for the shift-by-t class of monic p."""
    d = p.degree
    # normalize so the representative has second coefficient reduced mod d*t
    c1 = p.coeff(d - 1) if d >= 1 else Fraction(0)
    # offset k shifts c1 by d*t*k; reduce c1 into a canonical window
    if d == 0:
        return p, 0
    shift_amount = c1 / (d * t)
    # use floor to make the representative deterministic
    num, den = shift_amount.numerator, shift_amount.denominator
    k = num // den
    rep = p.shift(-k * t)
    return rep, k


def is_shift_quotient(rho: RatFunc, step: int = 1) -> Optional[RatFunc]:
    """u with u(x+step)/u(x) == rho, or None if no rational u exists.

    Telescopes the factor multiset of rho over shift-by-step equivalence
    classes; the constant part of rho must be exactly 1.
    """
    rho = RatFunc.of(rho)
    if rho.is_zero():
        raise ValueError("zero is not a shift quotient")
    if not rho.is_rational():
        raise CoefficientsNotRational("shift-quotient test runs over Q")
    if rho.is_one():
        return R_ONE
    classes = {}

    def add_factors(poly, sign):
        content, factors = poly.factor_rational()
        for f, mult in factors:
            rep, k = _shift_class_key(f, step)
            key = tuple(rep.coeffs)
            offsets = classes.setdefault(key, {})
            offsets[k] = offsets.get(k, 0) + sign * mult
        return content

    cnum = add_factors(rho.num, +1)
    cden = add_factors(rho.den, -1)
    if cnum / cden != 1:
        return None
    u = R_ONE
    for key, offsets in classes.items():
        rep = Poly(key)
        ks = sorted(offsets)
        if sum(offsets.values()) != 0:
            return None
        # m_k = c_(k-1) - c_k  =>  c_k = -(m_min + ... + m_k)
        acc = 0
        for k in range(ks[0], ks[-1] + 1):
            acc += offsets.get(k, 0)
            if acc:
                u = u * RatFunc(rep.shift(k * step)) ** (-acc)
    if u.shift(step) / u != rho:
        raise InternalVerificationError("telescoping produced a bad witness")
    return u


# -- rank-1 submodules -------------------------------------------------------------


def _scaled_constant_action(module: DModule):
    """(f, C) with action == f(x) * C for a constant matrix C, or None."""
    f = None
    for row in module.action:
        for e in row:
            if not e.is_zero():
                f = e
                break
        if f is not None:
            break
    if f is None:
        return None
    c_rows = []
    for row in module.action:
        cr = []
        for e in row:
            q = e / f
            if not q.is_constant():
                return None
            cr.append(q.constant_value())
        c_rows.append(cr)
    return f, c_rows


def _eigenvalues_with_scope(charpoly: Poly, flags):
    """Roots of a rational polynomial up to quadratic factors."""
    out = []
    _, factors = charpoly.factor_rational()
    for fac, _ in factors:
        if fac.degree == 1:
            out.append(-fac.coeff(0))
        elif fac.degree == 2:
            p_, q_ = fac.coeff(1), fac.coeff(0)
            disc = p_ * p_ - 4 * q_
            if is_square_fraction(disc):
                s = sqrt_fraction(disc)
                out.extend([(-p_ + s) / 2, (-p_ - s) / 2])
            else:
                half = Fraction(1, 2)
                out.append(Constant(-p_ * half, half, disc))
                out.append(Constant(-p_ * half, -half, disc))
        else:
            if flags is not None:
                flags.append(CompletenessFlag(
                    "z-extension-degree",
                    f"eigenvalue of degree {fac.degree} over Q skipped in "
                    f"the rank-1 search"))
    return out


def _scaled_constant_rank1(module: DModule, flags):
    """Rank-1 lines of a module whose action is f(x) * (constant matrix).

    With E = inverse transpose of the constant part, every stable line is
    (I + N)^x v0 for v0 in a generalized eigenspace of E with eigenvalue
    eta and nilpotent part N; the rate is f/eta.  Complete up to
    eigenvalues needing more than one square root.
    """
    data = _scaled_constant_action(module)
    if data is None:
        return None
    f, c_mat = data
    n = module.dim
    try:
        e_mat = linalg.scalar_inverse([[c_mat[j][i] for j in range(n)]
                                 for i in range(n)], n)
    except ZeroDivisionError:
        return None
    chp = linalg.scalar_charpoly(e_mat, n)
    out = []
    for eta in _eigenvalues_with_scope(chp, flags):
        inv_eta = eta.inverse() if isinstance(eta, Constant) else 1 / eta
        shifted = [[e_mat[i][j] - (eta if i == j else 0) for j in range(n)]
                   for i in range(n)]
        power = shifted
        for _ in range(n - 1):
            power = [[sum(power[i][k] * shifted[k][j] for k in range(n))
                      for j in range(n)] for i in range(n)]
        basis = linalg.scalar_kernel(power, n)
        for v0 in basis:
            # c(x) = sum_k binom(x, k) * N^k v0,  N = E/eta - I on the space
            coords = [Poly.const(v) for v in v0]
            w = v0
            k = 1
            while True:
                w = [sum(e_mat[i][j] * w[j] for j in range(n)) * inv_eta - w[i]
                     for i in range(n)]
                if all(not e for e in w):
                    break
                bk = _binom_poly(k)
                for i in range(n):
                    if w[i]:
                        coords[i] = coords[i] + bk * w[i]
                k += 1
                if k > n:
                    break
            rate = RatFunc.of(f) * inv_eta
            wit = Rank1Witness(ModVector([RatFunc(p) for p in coords]), rate)
            if wit.coords.is_zero():
                continue
            if not wit.verify(module):
                raise InternalVerificationError(
                    "scaled-constant rank-1 witness failed verification")
            if not any(_same_line(wit.coords, o.coords) for o in out):
                out.append(wit)
    return out


def _as_monomial_action(module: DModule):
    """(perm, rates) if each basis line maps to a single basis line."""
    perm = []
    rates = []
    for i, row in enumerate(module.action):
        nz = [(j, e) for j, e in enumerate(row) if not e.is_zero()]
        if len(nz) != 1:
            return None
        perm.append(nz[0][0])
        rates.append(nz[0][1])
    if sorted(perm) != list(range(module.dim)):
        return None
    return perm, rates


def _nth_root_fraction(c: Fraction, m: int):
    """Rational solutions z of z^m = c (list, possibly empty)."""
    out = []
    if c == 0:
        return out

    def iroot(v, m):
        if v < 0:
            return None
        lo, hi = 0, 1 << (v.bit_length() // m + 2)
        while lo < hi:
            mid = (lo + hi) // 2
            if mid ** m < v:
                lo = mid + 1
            else:
                hi = mid
        return lo if lo ** m == v else None

    neg = c < 0
    if neg and m % 2 == 0:
        return out
    av = abs(c)
    rn = iroot(av.numerator, m)
    rd = iroot(av.denominator, m)
    if rn is None or rd is None:
        return out
    root = Fraction(rn, rd)
    if neg:
        root = -root
    out.append(root)
    if m % 2 == 0:
        out.append(-root)
    return out


def _twisted_mth_root(prod: RatFunc, m: int, t: int, flags):
    """Rates r with r * r(x+t) * ... * r(x+(m-1)t) == prod, rational search.

    Deconvolves the factor multiset of prod against a window of m ones,
    then matches the constant with an exact m-th root.
    """
    if m == 1:
        return [prod]
    classes = {}

    def add_factors(poly, sign):
        content, factors = poly.factor_rational()
        for f, mult in factors:
            rep, k = _shift_class_key(f, t)
            key = tuple(rep.coeffs)
            classes.setdefault(key, {})[k] = (
                classes.get(key, {}).get(k, 0) + sign * mult)
        return content

    cn = add_factors(prod.num, +1)
    cd = add_factors(prod.den, -1)
    const = cn / cd
    h = R_ONE
    for key, offsets in classes.items():
        rep = Poly(key)
        ks = sorted(k for k, e in offsets.items() if e)
        if not ks:
            continue
        f = {}
        lo, hi = ks[0], ks[-1]
        for k in range(lo, hi + 1):
            want = offsets.get(k, 0)
            have = sum(f.get(k - j, 0) for j in range(1, m))
            fk = want - have
            if fk:
                f[k] = fk
        # consistency: the tail must vanish
        for k in range(hi + 1, hi + m):
            if sum(f.get(k - j, 0) for j in range(m)) != 0:
                return []
        for k, e in f.items():
            h = h * RatFunc(rep.shift(k * t)) ** e
    roots = _nth_root_fraction(const, m)
    if not roots:
        if m == 2 and const > 0:
            # one square root of a positive rational is within scope
            from .scalars import const_sqrt

            s = const_sqrt(const)
            roots = [s, -s]
        else:
            if flags is not None:
                flags.append(CompletenessFlag(
                    "z-extension-degree",
                    f"needed an exact {m}-th root of {const}; not available "
                    f"over Q" + (" or one square root" if m == 2 else "")))
            return []
    out = []
    for z in roots:
        r = h * z
        check = R_ONE
        for k in range(m):
            check = check * r.shift(k * t)
        if check == prod:
            out.append(r)
    return out


def _monomial_rank1(module: DModule, flags):
    """Rank-1 lines of a module whose action is a monomial matrix."""
    data = _as_monomial_action(module)
    if data is None:
        return None
    perm, rates = data
    t = module.step
    n = module.dim
    seen = [False] * n
    out = []
    for start in range(n):
        if seen[start]:
            continue
        cycle = [start]
        seen[start] = True
        j = perm[start]
        while j != start:
            cycle.append(j)
            seen[j] = True
            j = perm[j]
        m = len(cycle)
        prod = R_ONE
        for k, jk in enumerate(cycle):
            prod = prod * rates[jk].shift((m - 1 - k) * t)
        for r in _twisted_mth_root(prod, m, t, flags):
            # lambda recursion around the cycle with lambda_0 = 1
            lam = [R_ZERO] * n
            lam[cycle[0]] = R_ONE
            cur = R_ONE
            ok = True
            for k in range(m - 1):
                cur = cur.shift(t) * rates[cycle[k]] / r
                if isinstance(cur, RatFunc) and cur.is_zero():
                    ok = False
                    break
                lam[cycle[k + 1]] = cur
            if not ok:
                continue
            w = Rank1Witness(ModVector(lam), RatFunc.of(r))
            if w.verify(module):
                out.append(w)
    return out


def _witness_key(w):
    # rational-rate witnesses first, then a deterministic textual order
    return (0 if w.rate.is_rational() else 1, repr(w.rate),
            repr(w.coords.coords))


def _same_line(u: ModVector, v: ModVector) -> bool:
    from .errors import DeltaMismatch

    n = len(u)
    try:
        for i in range(n):
            for j in range(n):
                if u.coords[i] * v.coords[j] != u.coords[j] * v.coords[i]:
                    return False
    except DeltaMismatch:
        return False  # coordinates in incompatible quadratic fields
    return True


def rank1_submodules(module: DModule, flags=None, rate_class=None):
    """All Phi-stable lines (c, r) with action^T shift(c) = r c, up to scalar.

    Route: order-1 left factors of the minimal operator of a cyclic
    vector, i.e. right factors of its adjoint, converted back to
    coordinates; fast paths handle monomial and scalar-times-constant
    actions in closed form.  Every witness is re-verified against the
    defining identity.  rate_class=(target, power) restricts to lines
    whose rate satisfies r^power == target modulo shift quotients.
    """
    fast = _monomial_rank1(module, flags)
    if fast is None:
        fast = _scaled_constant_rank1(module, flags)
    if fast is not None:
        fast.sort(key=_witness_key)
        return fast
    t = module.step
    v = cyclic_vector(module)
    op = minimal_operator(module, v).canonical()
    adj = op.adjoint()
    adj_class = None
    if rate_class is not None:
        # left-factor rates p of op appear as reflected right factors of
        # the adjoint, so the constraint transfers through x -> -x
        target, power = rate_class
        adj_class = (target.reflect(), power)
    out = []
    for cert in hypergeometric_solutions(adj, flags=flags,
                                         rate_class=adj_class):
        p = cert.rate.reflect()  # left factor Phi^t - p of op
        quot, rem = right_divide(adj, ShiftOp.first_order(cert.rate, t))
        if not rem.is_zero():
            raise InternalVerificationError("adjoint factor failed division")
        q = quot.adjoint()
        w = module.apply_operator(q, v)
        if w.is_zero():
            continue
        witness = Rank1Witness(w, p)
        if not witness.verify(module):
            raise InternalVerificationError(
                "rank-1 witness failed the matrix identity")
        if any(_same_line(w, o.coords) for o in out):
            continue
        out.append(witness)
    out.sort(key=_witness_key)
    return out


def _universal_denominator(b_mat, b_inv, t):
    """Denominator bound for rational solutions of sigma(Y) = B Y.

    Poles enter upward through B^{-1} and downward through B; per shift
    class the admissible multiplicity at offset j is
    min(prefix of den(B^{-1}) offsets up to j, suffix of den(B) offsets
    beyond j).
    """
    d1 = P_ONE
    for row in b_mat:
        for e in row:
            d1 = d1 * e.den.exact_div(d1.gcd(e.den))
    d2 = P_ONE
    for row in b_inv:
        for e in row:
            d2 = d2 * e.den.exact_div(d2.gcd(e.den))
    classes = {}

    def add(poly, which):
        _, factors = poly.factor_rational()
        for f, m in factors:
            rep, k = _shift_class_key(f, t)
            key = tuple(rep.coeffs)
            cls = classes.setdefault(key, ({}, {}))
            cls[which][k] = cls[which].get(k, 0) + m

    add(d1, 0)
    add(d2, 1)
    u = P_ONE
    for key, (f_off, e_off) in classes.items():
        rep = Poly(key)
        offs = sorted(set(f_off) | set(e_off))
        if not offs:
            continue
        for j in range(offs[0] - 1, offs[-1] + 2):
            up = sum(v for k, v in e_off.items() if k <= j)
            down = sum(v for k, v in f_off.items() if k > j)
            m = min(up, down)
            if m > 0:
                u = u * rep.shift(j * t) ** m
    return u


def rational_system_lines(module: DModule, rate_rep: RatFunc, gmax: int,
                          flags=None):
    """Stable lines whose rate lies in the shift-quotient class of rate_rep.

    Solves sigma(c) = rate_rep * (A^T)^{-1} c for rational vectors c by a
    universal-denominator substitution and one degree-bounded integer
    kernel; every returned witness carries rate exactly rate_rep and is
    re-verified against the module action.  A miss here proves nothing
    (the bound may be too small); callers fall back to the complete
    search when needed.
    """
    from . import modkernel

    n = module.dim
    t = module.step
    if not rate_rep.is_rational() or not all(
            e.is_rational() for row in module.action for e in row):
        return []
    at = linalg.transpose(module.action)
    at_inv = linalg.inverse(at)
    b_mat = linalg.mat_scale(at_inv, rate_rep)
    b_inv = linalg.mat_scale(at, rate_rep.inverse())
    u = _universal_denominator(b_mat, b_inv, t)
    # Y = Z/u: sigma(Z) = (sigma(u)/u) B Z =: (P/q) Z with q, P integral
    scale = RatFunc(u.shift(t), u)
    bu = linalg.mat_scale(b_mat, scale)
    q = P_ONE
    for row in bu:
        for e in row:
            q = q * e.den.exact_div(q.gcd(e.den))
    pmat = [[(e * q).num for e in row] for row in bu]
    # integer content normalization
    content = q.content()
    q_int = q * (1 / content)
    p_int = [[e * (1 / content) for e in row] for row in pmat]
    lcm_den = 1
    polys = [q_int] + [e for row in p_int for e in row]
    for poly in polys:
        for c in poly.coeffs:
            f = Fraction(c) if not isinstance(c, Constant) else c.as_fraction()
            lcm_den = lcm_den * f.denominator // _gcd_int(
                lcm_den, f.denominator)
    q_int = q_int * lcm_den
    p_int = [[e * lcm_den for e in row] for row in p_int]

    dq = q_int.degree
    dp = max(max(e.degree for e in row) for row in p_int)
    nrows_deg = max(dq, dp) + gmax + 1
    ncols = n * (gmax + 1)
    # precompute q * (x+t)^m
    qs = []
    pw = P_ONE
    xt = Poly([Fraction(t), Fraction(1)])
    for m in range(gmax + 1):
        qs.append(q_int * pw)
        pw = pw * xt
    rows = []
    for i in range(n):
        for d in range(nrows_deg):
            row = [0] * ncols
            nonzero = False
            for m in range(gmax + 1):
                c = qs[m].coeff(d)
                if c:
                    row[i * (gmax + 1) + m] = _as_int(c)
                    nonzero = True
                for j in range(n):
                    pc = p_int[i][j]
                    if pc.is_zero():
                        continue
                    # coefficient of x^(d) in p_int[i][j] * x^m
                    if 0 <= d - m <= pc.degree:
                        cc = pc.coeff(d - m)
                        if cc:
                            row[j * (gmax + 1) + m] -= _as_int(cc)
                            nonzero = True
            if nonzero:
                rows.append(row)
    basis = modkernel.integer_kernel(rows, ncols)
    out = []
    for vec in basis:
        comps = []
        for i in range(n):
            comps.append(Poly(vec[i * (gmax + 1):(i + 1) * (gmax + 1)]))
        if all(p.is_zero() for p in comps):
            continue
        coords = ModVector([RatFunc(p, u) for p in comps])
        wit = Rank1Witness(coords, rate_rep)
        if not wit.verify(module):
            raise InternalVerificationError(
                "direct line solver produced a bad witness")
        if not any(_same_line(coords, o.coords) for o in out):
            out.append(wit)
    out.sort(key=_witness_key)
    return out


def _as_int(c):
    f = c.as_fraction() if isinstance(c, Constant) else Fraction(c)
    if f.denominator != 1:
        raise ValueError("expected integer coefficient")
    return f.numerator


def _gcd_int(a, b):
    from math import gcd as g

    return g(a, b)


def mackey_irreducible_1dim(r, s: int, flags=None) -> bool:
    """Mackey test for N = (Phi^s -> r): induced module irreducible iff no
    twist Phi^i (x) N is isomorphic to N for 0 < i < s."""
    r = RatFunc.of(r)
    if r.is_zero():
        raise ValueError("rate must be nonzero")
    for i in range(1, s):
        rho = r.shift(i) / r
        if is_shift_quotient(rho, s) is not None:
            return False
    return True
