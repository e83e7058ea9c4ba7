"""The symmetric-square criterion for 3-dimensional modules.

Pipeline: a stable line q of S^2(M) is read as a ternary quadratic form,
reduced to lambda*(x2^2 - x1*x3) by an exact change of basis, and the
module action G in the new basis then satisfies five polynomial
relations whose solution recovers a 2x2 action a and a rate b with
G = b * sym2(a) entrywise - an explicit witness for M = S^2(N) (x) P.
Every step re-verifies its algebraic identity; a mismatch raises instead
of returning silently.

The only searchy ingredient is the isotropic vector of the reduced form.
Three exact tiers run in order: a square-ratio pair test, a constant
kernel test, and a congruence-based solver (square roots modulo the
squarefree parts plus one linear system), which finds every rational
point on the reduced conic; a miss is reported as IsotropicSearchFailed
with the bound that was exhausted, never papered over.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from ._numberfield import sqrt_mod_squarefree
from .dmod import DModule, gauge_transform, sym_power
from .errors import (CompletenessFlag, DegenerateForm, InternalVerificationError,
                     IsotropicSearchFailed, NotDimension3, ReducibleInput)
from .poly import P_ONE, Poly
from .ratfunc import R_ONE, R_ZERO, RatFunc, square_decompose
from .scalars import Constant, const_sqrt, is_square_fraction, sqrt_fraction


@dataclass(frozen=True)
class QuadForm3:
    """Ternary quadratic form as its symmetric Gram matrix over F."""

    gram: tuple

    def __post_init__(self):
        g = linalg.mat(self.gram)
        if len(g) != 3 or any(len(r) != 3 for r in g):
            raise ValueError("Gram matrix must be 3x3")
        if g != linalg.transpose(g):
            raise ValueError("Gram matrix must be symmetric")
        object.__setattr__(self, "gram", g)

    @staticmethod
    def from_sym2_coords(coords):
        """Form from coordinates in the monomial basis
        (e1^2, e1e2, e1e3, e2^2, e2e3, e3^2)."""
        c = [RatFunc.of(v) for v in coords]
        half = Fraction(1, 2)
        return QuadForm3((
            (c[0], c[1] * half, c[2] * half),
            (c[1] * half, c[3], c[4] * half),
            (c[2] * half, c[4] * half, c[5]),
        ))

    def value(self, v):
        return linalg.dot(v, linalg.mat_vec(self.gram, v))

    def bilinear(self, u, v):
        return linalg.dot(u, linalg.mat_vec(self.gram, v))


# Gram matrix of the hyperbolic normal form x2^2 - x1*x3
HYPERBOLIC_GRAM = (
    (R_ZERO, R_ZERO, RatFunc.const(Fraction(-1, 2))),
    (R_ZERO, R_ONE, R_ZERO),
    (RatFunc.const(Fraction(-1, 2)), R_ZERO, R_ZERO),
)


# -- isotropic vectors ---------------------------------------------------------


def _try_pair(ds, i, j, allow_ext):
    """Isotropic vector supported on coordinates i, j, if -d_i/d_j is a
    square up to a rational constant (one square root when allowed)."""
    ratio = -ds[i] / ds[j]
    if not ratio.is_rational():
        return None
    c, h, s = square_decompose(ratio)
    if not s.is_one():
        return None
    if not allow_ext and not is_square_fraction(c):
        return None
    root = const_sqrt(c)
    v = [R_ZERO, R_ZERO, R_ZERO]
    v[i] = R_ONE
    v[j] = h * RatFunc.const(root)
    return v


def _try_constant_kernel(ds, allow_ext):
    """Constant isotropic vectors: beta with sum d_i beta_i = 0 and the
    beta_i squares up to one common square root."""
    dens = P_ONE
    for d in ds:
        if not d.is_rational():
            return None
        dens = dens * d.den.exact_div(dens.gcd(d.den))
    polys = [(d * dens).num for d in ds]
    deg = max(p.degree for p in polys)
    rows = [[p.coeff(k) for p in polys] for k in range(deg + 1)]
    kernel = linalg.scalar_kernel(rows, 3)
    if not kernel:
        return None
    candidates = []
    for v in kernel:
        candidates.append(v)
    if len(kernel) == 2:
        for lam, mu in itertools.product(range(-3, 4), repeat=2):
            if lam or mu:
                candidates.append([lam * a + mu * b
                                   for a, b in zip(kernel[0], kernel[1])])
    for beta in candidates:
        nz = [k for k, b in enumerate(beta) if b]
        if not nz:
            continue
        base = beta[nz[0]]
        ratios = [beta[k] / base for k in nz]
        # need sqrt(ratio) for each; all must share one extension tag
        roots = []
        ok = True
        delta = None
        for r in ratios:
            if is_square_fraction(r):
                roots.append(sqrt_fraction(r))
                continue
            if not allow_ext:
                ok = False
                break
            rt = const_sqrt(r)
            if isinstance(rt, Constant):
                if delta is None:
                    delta = rt.delta
                elif rt.delta != delta:
                    ok = False
                    break
            roots.append(rt)
        if not ok:
            continue
        v = [R_ZERO, R_ZERO, R_ZERO]
        for k, rt in zip(nz, roots):
            v[k] = RatFunc.const(rt)
        return v
    return None


def _reduce_to_squarefree(ds):
    """Rewrite <d1,d2,d3> as a pairwise-coprime squarefree integer-poly
    form <s1,s2,s3>; returns (s_polys, scale_backs) where the isotropic
    vector of <s> maps back via v_i -> v_i * scale_backs[i]."""
    scales = [R_ONE, R_ONE, R_ONE]
    polys = []
    for i, d in enumerate(ds):
        # sum (n_i/m_i) v_i^2 = 0 with v_i = m_i w_i becomes
        # sum (n_i m_i) w_i^2 = 0
        scales[i] = scales[i] * RatFunc(d.den)
        polys.append(d.num * d.den)
    changed = True
    while changed:
        changed = False
        # strip square parts
        for i in range(3):
            c, h, s = square_decompose(RatFunc(polys[i]))
            if not h.is_one():
                # polys[i] = c * h^2 * s; fold h into the vector scale
                scales[i] = scales[i] * h.inverse()
                polys[i] = (RatFunc(polys[i]) / (h * h)).num
                changed = True
        # move shared factors: s_i = g a, s_j = g b -> <a, b, g*s_k>*g
        for i, j in ((0, 1), (0, 2), (1, 2)):
            g = polys[i].gcd(polys[j])
            if g.degree > 0:
                k = 3 - i - j
                polys[i] = polys[i].exact_div(g)
                polys[j] = polys[j].exact_div(g)
                polys[k] = polys[k] * g
                # multiply the form by g: components i, j pick up g
                scales[i] = scales[i] * RatFunc(g).inverse()
                scales[j] = scales[j] * RatFunc(g).inverse()
                changed = True
    return polys, scales


def _congruence_isotropic(ds, degree_cap=None):
    """Rational isotropic vector of <d1,d2,d3> by the congruence method.

    Reduces to a pairwise-coprime squarefree integer form, takes square
    roots of -s_j*s_k modulo each s_i, and solves the resulting linear
    system; any nonzero kernel vector is an exact solution by a degree
    argument and is verified before being returned.
    """
    polys, scales = _reduce_to_squarefree(ds)
    prims = [p.primitive().monic() for p in polys]
    consts = [RatFunc(p) / RatFunc(q) for p, q in zip(polys, prims)]
    consts = [c.constant_value() for c in consts]

    degs = [p.degree for p in prims]
    total = sum(degs)
    if total == 0:
        v = _try_pair([RatFunc(p) for p in polys], 0, 1, allow_ext=False)
        if v is None:
            return None
        return [a * s for a, s in zip(v, scales)]

    # square roots of -s_j s_k mod s_i
    roots = []
    for i in range(3):
        j, k = [a for a in range(3) if a != i]
        if degs[i] == 0:
            roots.append(None)
            continue
        w = (prims[j] * prims[k]) * (-consts[j] * consts[k])
        y = sqrt_mod_squarefree(w, prims[i])
        if y is None:
            return None
        roots.append(y)

    caps = []
    for i in range(3):
        cap = (total - 1 - degs[i]) // 2
        if degree_cap is not None:
            cap = min(cap, degree_cap)
        caps.append(max(cap, 0))

    for extra in (0, 1):
        bounds = [c + extra for c in caps]
        ncols = sum(b + 1 for b in bounds)
        offsets = [0, bounds[0] + 1, bounds[0] + bounds[1] + 2]

        for signs in itertools.product((1, -1), repeat=3):
            rows = []

            def congruence_rows(target_i, coeff_j, j, coeff_k, k):
                # coeff_j * (component j) + coeff_k * (component k) = 0 mod s_i
                mod = prims[target_i]
                local = [[Fraction(0)] * ncols for _ in range(mod.degree)]
                for comp, coeff in ((j, coeff_j), (k, coeff_k)):
                    for m in range(bounds[comp] + 1):
                        red = (coeff * Poly.x(m)) % mod
                        for r in range(mod.degree):
                            local[r][offsets[comp] + m] += red.coeff(r)
                return local

            # mod s1: s2*b - t1*c = 0; mod s2: s1*a - t2*c = 0;
            # mod s3: s1*a - t3*b = 0
            if degs[0]:
                rows += congruence_rows(
                    0, prims[1] * consts[1], 1,
                    roots[0] * (-signs[0]), 2)
            if degs[1]:
                rows += congruence_rows(
                    1, prims[0] * consts[0], 0,
                    roots[1] * (-signs[1]), 2)
            if degs[2]:
                rows += congruence_rows(
                    2, prims[0] * consts[0], 0,
                    roots[2] * (-signs[2]), 1)
            kernel = linalg.scalar_kernel(rows, ncols)
            for vec in kernel:
                comps = []
                for i in range(3):
                    comps.append(Poly(vec[offsets[i]:offsets[i]
                                          + bounds[i] + 1]))
                if all(p.is_zero() for p in comps):
                    continue
                total_val = Poly()
                for i in range(3):
                    total_val = total_val + prims[i] * consts[i] * comps[i] ** 2
                if not total_val.is_zero():
                    continue
                v = [RatFunc(p) * s for p, s in zip(comps, scales)]
                return v
    return None


def isotropic_vector(ds, degree_cap=None):
    """Isotropic vector of the diagonal form <d1,d2,d3> over F, allowing
    one quadratic constant extension; raises IsotropicSearchFailed.

    Rational tiers run first (pair test, constant kernel, then the
    complete congruence solver); quadratic-extension points are used only
    when no rational point exists.
    """
    rational = all(d.is_rational() for d in ds)
    for allow_ext in (False, True):
        if allow_ext and rational:
            v = _congruence_isotropic(ds, degree_cap)
            if v is not None:
                return v
        for i, j in ((0, 1), (0, 2), (1, 2)):
            v = _try_pair(ds, i, j, allow_ext)
            if v is not None:
                return v
        v = _try_constant_kernel(ds, allow_ext)
        if v is not None:
            return v
    raise IsotropicSearchFailed(
        "no isotropic vector within the search scope "
        f"(diagonal degrees {[d.num.degree + d.den.degree for d in ds]})",
        degree_bound=degree_cap)


# -- reduction to the hyperbolic form ----------------------------------------------


def reduce_quadratic(form: QuadForm3, degree_cap=None):
    """Invertible T and lambda with T^t . gram . T = lambda * (x2^2 - x1 x3).

    Congruence diagonalization, isotropic-vector search, and Witt-style
    hyperbolic completion; the final identity is checked exactly.
    """
    g = form.gram
    if linalg.det(g).is_zero():
        raise DegenerateForm("the form has singular Gram matrix")
    n = 3
    # symmetric Gaussian elimination with completion of squares
    t = [list(r) for r in linalg.identity(n)]
    work = [list(r) for r in g]

    def apply_col(op_col, src, factor):
        # basis[op_col] += factor * basis[src]
        for r in range(n):
            t[r][op_col] = t[r][op_col] + factor * t[r][src]
        for r in range(n):
            work[r][op_col] = work[r][op_col] + factor * work[r][src]
        for c_ in range(n):
            work[op_col][c_] = work[op_col][c_] + factor * work[src][c_]

    def swap_cols(i, j):
        for r in range(n):
            t[r][i], t[r][j] = t[r][j], t[r][i]
        for r in range(n):
            work[r][i], work[r][j] = work[r][j], work[r][i]
        for c_ in range(n):
            work[i][c_], work[j][c_] = work[j][c_], work[i][c_]

    for k in range(n):
        if work[k][k].is_zero():
            pivot = next((l for l in range(k + 1, n)
                          if not work[l][l].is_zero()), None)
            if pivot is not None:
                swap_cols(k, pivot)
            else:
                off = next((l for l in range(k + 1, n)
                            if not work[k][l].is_zero()), None)
                if off is None:
                    raise DegenerateForm("unexpected zero block")
                apply_col(k, off, R_ONE)
        for l in range(k + 1, n):
            if not work[k][l].is_zero():
                apply_col(l, k, -work[k][l] / work[k][k])
    ds = [work[i][i] for i in range(n)]

    iso = isotropic_vector(ds, degree_cap)
    # back to the original coordinates
    v1 = linalg.mat_vec(linalg.mat(t), linalg.vec(iso))
    if form.value(v1) != R_ZERO:
        raise InternalVerificationError("isotropic vector failed the form")

    # hyperbolic completion
    basis = [linalg.vec([R_ONE if i == j else R_ZERO for j in range(n)])
             for i in range(n)]
    u = next((e for e in basis if not form.bilinear(v1, e).is_zero()), None)
    if u is None:
        raise DegenerateForm("isotropic vector is in the radical")
    beta = form.bilinear(v1, u)
    qu = form.value(u)
    v3 = linalg.vec_sub(u, linalg.vec_scale(v1, qu / (beta * 2)))
    # v2: orthogonal complement of span(v1, v3)
    v2 = None
    for w in basis:
        cand = linalg.vec_sub(
            w,
            linalg.vec_add(
                linalg.vec_scale(v1, form.bilinear(w, v3) / beta),
                linalg.vec_scale(v3, form.bilinear(w, v1) / beta)))
        if not linalg.vec_is_zero(cand) and not form.value(cand).is_zero():
            v2 = cand
            break
    if v2 is None:
        raise InternalVerificationError("no anisotropic complement found")
    lam = form.value(v2)
    # scale v3 so that B(v1, v3) = -lambda/2
    v3 = linalg.vec_scale(v3, -lam / (beta * 2))
    tmat = tuple(tuple(col[r] for col in (v1, v2, v3)) for r in range(n))
    target = linalg.mat_scale(linalg.mat(HYPERBOLIC_GRAM), lam)
    got = linalg.mat_mul(linalg.mat_mul(linalg.transpose(tmat), form.gram),
                         tmat)
    if got != target:
        raise InternalVerificationError("hyperbolic reduction failed")
    return tmat, lam


# -- the criterion -------------------------------------------------------------------


@dataclass(frozen=True)
class CriterionResult:
    """Witness for M = S^2(N) (x) P.

    n_matrix: 2x2 action of N; p_rate: rate of P; basis_change: columns
    are the new basis of M in which the action is g_matrix; reflections:
    which formal reflections were applied while solving; rate: the rate
    of the stable line in the new basis.  Invariant (enforced here):
    g_matrix == p_rate * sym2(n_matrix) entrywise and det(n_matrix) != 0.
    """

    n_matrix: tuple
    p_rate: RatFunc
    basis_change: tuple
    reflections: tuple
    g_matrix: tuple
    rate: RatFunc

    def __post_init__(self):
        if not verify_ga_relations(self.g_matrix, self.n_matrix, self.p_rate):
            raise InternalVerificationError(
                "criterion result violates the g-a relations")
        a = self.n_matrix
        if (a[0][0] * a[1][1] - a[0][1] * a[1][0]).is_zero():
            raise InternalVerificationError("recovered N action is singular")
        if self.p_rate.is_zero():
            raise InternalVerificationError("recovered P rate is zero")

    def to_json(self):
        from .parsing import format_ratfunc

        return {
            "n_action": [[format_ratfunc(e) for e in row]
                         for row in self.n_matrix],
            "p_rate": format_ratfunc(self.p_rate),
            "basis_change": [[format_ratfunc(e) for e in row]
                             for row in self.basis_change],
            "reflections": {"rows": self.reflections[0],
                            "cols": self.reflections[1]},
            "g_matrix": [[format_ratfunc(e) for e in row]
                         for row in self.g_matrix],
            "line_rate": format_ratfunc(self.rate),
        }


def sym2_matrix(a):
    """The 3x3 symmetric-square matrix of a 2x2 matrix."""
    a11, a12 = a[0][0], a[0][1]
    a21, a22 = a[1][0], a[1][1]
    return (
        (a11 * a11, a11 * a12 * 2, a12 * a12),
        (a11 * a21, a11 * a22 + a12 * a21, a12 * a22),
        (a21 * a21, a21 * a22 * 2, a22 * a22),
    )


def verify_ga_relations(g, a, b) -> bool:
    """Exact entrywise check of g == b * sym2(a)."""
    g = linalg.mat(g)
    sa = sym2_matrix(linalg.mat(a))
    for i in range(3):
        for j in range(3):
            if g[i][j] != b * sa[i][j]:
                return False
    return True


def g_relations_hold(g) -> bool:
    """The five polynomial relations forced by Phi-stability of the line
    spanned by x2^2 - x1 x3 (the [x2^2]+[x1x3] combination eliminates the
    rate)."""
    g = linalg.mat(g)
    g11, g12, g13 = g[0]
    g21, g22, g23 = g[1]
    g31, g32, g33 = g[2]
    checks = [
        g21 * g21 - g11 * g31,
        g23 * g23 - g13 * g33,
        g21 * g22 * 2 - g11 * g32 - g31 * g12,
        g22 * g23 * 2 - g12 * g33 - g32 * g13,
        (g22 * g22 - g12 * g32) + (g21 * g23 * 2 - g11 * g33 - g31 * g13),
    ]
    return all(c.is_zero() for c in checks)


def _reflect_rows(m):
    return tuple(reversed(m))


def _reflect_cols(m):
    return tuple(tuple(reversed(r)) for r in m)


def _swap_rows2(a):
    return (a[1], a[0])


def _swap_cols2(a):
    return tuple((r[1], r[0]) for r in a)


def _is_diagonal(g):
    return all(g[i][j].is_zero() for i in range(3) for j in range(3) if i != j)


def _is_skew_diagonal(g):
    return all(g[i][j].is_zero() for i in range(3) for j in range(3)
               if i + j != 2)


def criterion(module: DModule, flags=None, assume_irreducible=False,
              degree_cap=None):
    """Symmetric-square witness for an irreducible 3-dimensional module.

    Returns a CriterionResult, or None when S^2(M) has no stable line
    within the search scope.  Raises ReducibleInput when the module is
    visibly reducible (unless the caller vouches for irreducibility).
    """
    from .dmod import order3_reducible
    from .hyper import rank1_submodules

    if module.dim != 3:
        raise NotDimension3(f"criterion needs dim 3, got {module.dim}")
    if not assume_irreducible:
        cert = order3_reducible(module, flags=flags)
        if cert is not None:
            raise ReducibleInput(f"module has an order-1 {cert.side} factor")
    s2 = sym_power(module, 2)
    # any nondegenerate stable line of S^2(M) has rate r with
    # r^3 == det(action)^2 modulo shift quotients (r = b^2 det(a)^2 while
    # det = b^3 det(a)^3 in the reduced basis; both sides change by cubes
    # of shift quotients under gauge)
    det2 = linalg.det(module.action)
    det2 = det2 * det2
    witnesses = _direct_line_witnesses(s2, det2, flags)
    if witnesses is None:
        witnesses = rank1_submodules(s2, flags=flags, rate_class=(det2, 3))
    last_failure = None
    fallback = None
    for wit in witnesses:
        form = QuadForm3.from_sym2_coords(wit.coords.coords)
        if linalg.det(form.gram).is_zero():
            # cannot happen for an irreducible module; skip defensively
            if flags is not None:
                flags.append(CompletenessFlag(
                    "degenerate-line", "stable line gave a singular form"))
            continue
        try:
            tform, _ = reduce_quadratic(form, degree_cap)
        except IsotropicSearchFailed as exc:
            last_failure = exc
            if flags is not None:
                flags.append(CompletenessFlag("isotropic-search", str(exc)))
            continue
        # q is a polynomial in the basis vectors, so its coefficient matrix
        # transforms contravariantly: the module basis change is the
        # inverse transpose of the form-reduction matrix
        tmat = linalg.inverse(linalg.transpose(tform))
        g = gauge_transform(module, tmat).action
        if not g_relations_hold(g):
            raise InternalVerificationError(
                "reduced action violates the stability relations")
        result = _solve_ga(g, tmat)
        if result is None:
            continue
        rational = (all(e.is_rational() for row in result.n_matrix
                        for e in row) and result.p_rate.is_rational())
        if rational:
            return result
        if fallback is None:
            fallback = result
    if fallback is not None:
        return fallback
    if last_failure is not None:
        raise last_failure
    return None


def _direct_line_witnesses(s2, det2, flags):
    """Fast route for the stable line: solve the fixed-rate system for the
    canonical representative of the forced rate class.  Returns None when
    the route does not apply (callers then run the complete search);
    returns a list when the route was conclusive enough to try."""
    from .hyper import (_nth_root_fraction, _rate_class_data,
                        rational_system_lines)
    from .poly import Poly

    if not det2.is_rational() or not all(
            e.is_rational() for row in s2.action for e in row):
        return None
    data = _rate_class_data(det2, 3, s2.step)
    if data is None:
        return []  # no rate class can cube to det^2: no nondegenerate line
    sums, const = data
    roots = _nth_root_fraction(const, 3)
    if not roots:
        if flags is not None:
            flags.append(CompletenessFlag(
                "z-extension-degree",
                f"stable-line rate needs a cube root of {const}, which is "
                f"not rational; only quadratic twists of it could exist"))
        return None
    rep = R_ONE
    for key, s in sums.items():
        rep = rep * RatFunc(Poly(list(key))) ** s
    out = []
    for z in roots:
        rate = rep * z
        for gmax in (8, 32, 80):
            found = rational_system_lines(s2, rate, gmax, flags=flags)
            if found:
                out.extend(found)
                break
    if not out:
        return None  # inconclusive: the degree ladder may have been short
    return out


def _solve_ga(g, tmat):
    """Recover (a, b) from a reduced action g satisfying the relations."""
    rate = g[1][1] * g[1][1] - g[0][1] * g[2][1]
    reflections = None
    work = None
    if _is_diagonal(g):
        reflections = (False, False)
        work = g
    elif _is_skew_diagonal(g):
        reflections = (True, False)
        work = _reflect_rows(g)
    else:
        for rf, cf in ((False, False), (True, False), (False, True),
                       (True, True)):
            cand = g
            if rf:
                cand = _reflect_rows(cand)
            if cf:
                cand = _reflect_cols(cand)
            if not (cand[0][0].is_zero() or cand[1][0].is_zero()):
                reflections = (rf, cf)
                work = cand
                break
        if work is None:
            raise InternalVerificationError(
                "no reflection exposes a usable corner; the exclusion "
                "argument rules this out for invertible actions")
    if _is_diagonal(work):
        b = work[0][0]
        a = ((R_ONE, R_ZERO), (R_ZERO, work[1][1] / work[0][0]))
    else:
        b = work[0][0]
        a = ((R_ONE, work[0][1] / (work[0][0] * 2)),
             (work[1][0] / work[0][0], work[2][1] / (work[1][0] * 2)))
    rf, cf = reflections
    a_final = a
    if rf:
        a_final = _swap_rows2(a_final)
    if cf:
        a_final = _swap_cols2(a_final)
    return CriterionResult(
        n_matrix=linalg.mat(a_final),
        p_rate=b,
        basis_change=linalg.mat(tmat),
        reflections=reflections,
        g_matrix=linalg.mat(g),
        rate=rate,
    )
