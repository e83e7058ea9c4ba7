"""Restriction and induction of difference modules between D_s and D_t.

Restriction leaves the space alone and composes the action along the
orbit: for step s dividing t the new action is the ordered product
shift(A, t-s) ... shift(A, s) . A.  Induction builds the block-cyclic
module on basis Phi^(i*s) (x) e_j.  Both directions come with the exact
decomposition and Mackey bookkeeping used by the order-3 classifier:
every isomorphism this module claims is produced as an explicit matrix
and checked by the intertwining identity H . A_right^T = A_left^T . shift(H).
"""

from dataclasses import dataclass
from math import gcd, lcm
from typing import Optional

from . import linalg
from .dmod import (DModule, ModVector, cyclic_vector, minimal_operator,
                   one_dim, from_operator)
from .errors import (CompletenessFlag, DimensionTooSmall,
                     InternalVerificationError, StepNotDivisor,
                     StepNotMultiple)
from .ore import ShiftOp
from .ratfunc import R_ONE, R_ZERO, RatFunc


def restrict_module(module: DModule, t: int) -> DModule:
    """View a step-s module over D_t (s | t): action becomes the twisted
    product A_t = shift(A, t-s) ... shift(A, s) . A."""
    s = module.step
    if t % s:
        raise StepNotMultiple(f"step {s} does not divide {t}")
    k = t // s
    a = module.action
    out = a
    for i in range(1, k):
        out = linalg.mat_mul(linalg.shift_mat(a, i * s), out)
    return DModule(module.dim, t, out)


def induce_module(module: DModule, s: int) -> DModule:
    """D_s (x)_{D_t} N for s | t = module.step: block-cyclic action on the
    basis Phi^(i*s) (x) e_j, i = 0..t/s-1."""
    t = module.step
    if t % s:
        raise StepNotDivisor(f"step {s} does not divide {t}")
    k = t // s
    d = module.dim
    n = k * d
    rows = [[R_ZERO] * n for _ in range(n)]
    for i in range(k - 1):
        for j in range(d):
            rows[i * d + j][(i + 1) * d + j] = R_ONE
    for j in range(d):
        for l in range(d):
            rows[(k - 1) * d + j][l] = module.action[j][l]
    return DModule(n, s, rows)


def restrict_operator(op: ShiftOp, t: int) -> ShiftOp:
    """Minimal operator of 1 in M_L viewed over D_t: generates D_t n DL."""
    if t % op.step:
        raise StepNotMultiple(f"step {op.step} does not divide {t}")
    m = restrict_module(from_operator(op), t)
    v = ModVector.unit(m.dim, 0)
    return minimal_operator(m, v).canonical()


def twist(module: DModule, i: int) -> DModule:
    """Phi^i (x) N: same space, coefficients shifted by i."""
    return DModule(module.dim, module.step,
                   linalg.shift_mat(module.action, i))


def induce_restrict_decompose(module: DModule, r: int):
    """Summands of restrict(induce(N, r), N.step): the twists
    Phi^(i*r) (x) N in block order, verified blockwise against the
    computed restriction."""
    t = module.step
    if t % r:
        raise StepNotDivisor(f"step {r} does not divide {t}")
    k = t // r
    summands = [twist(module, i * r) for i in range(k)]
    # constructive check: the restriction is exactly block diagonal
    back = restrict_module(induce_module(module, r), t)
    expected = linalg.block_diag([m.action for m in summands])
    if back.action != expected:
        raise InternalVerificationError(
            "induce-then-restrict did not produce the expected blocks")
    return summands


@dataclass(frozen=True)
class MackeyResult:
    """Both sides of the Mackey isomorphism with the explicit intertwiner."""

    summands: list
    left: DModule
    right: DModule
    intertwiner: tuple  # H with H . A_right^T == A_left^T . shift(H, t)


def _power_action(module: DModule, q: int):
    """Matrix of Phi^(q*step) on basis rows: row a = coords of Phi^(qs)(e_a)."""
    a = module.action
    s = module.step
    out = linalg.identity(module.dim)
    for i in range(q):
        out = linalg.mat_mul(linalg.shift_mat(a, i * s), out)
    # rows of the restricted action matrix give the iterated images
    return out


def mackey_decompose(module: DModule, s: int, t: int) -> MackeyResult:
    """Mackey's formula for N = module (step s): decompose
    N^(up to 1)(down to t) into d = gcd(s,t) induced summands, and verify
    the isomorphism by the explicit basis correspondence
    Phi^(jt) (x) Phi^i (x) e_a  ->  Phi^((jt+i) mod s) (x) Phi^(qs) e_a."""
    if module.step != s:
        raise StepNotMultiple(f"module has step {module.step}, expected {s}")
    d = gcd(s, t)
    l = lcm(s, t)
    left = restrict_module(induce_module(module, 1), t)
    summands = []
    blocks = []
    for i in range(d):
        piece = induce_module(restrict_module(twist(module, i), l), t)
        summands.append(piece)
        blocks.append(piece.action)
    right = DModule(sum(b.dim for b in summands), t,
                    linalg.block_diag(blocks))
    # intertwiner: columns indexed by right basis (i, j, a)
    dn = module.dim
    size = s * dn
    cols = []
    for i in range(d):
        for j in range(l // t):
            q, m = divmod(j * t + i, s)
            pw = _power_action(module, q)
            for a in range(dn):
                # Phi^m (x) f e_b = shift(f, m) Phi^m (x) e_b
                col = [R_ZERO] * size
                for b in range(dn):
                    col[m * dn + b] = pw[a][b].shift(m)
                cols.append(col)
    h = tuple(tuple(cols[c][r] for c in range(size)) for r in range(size))
    lhs = linalg.mat_mul(h, linalg.transpose(right.action))
    rhs = linalg.mat_mul(linalg.transpose(left.action),
                         linalg.shift_mat(h, t))
    if lhs != rhs:
        raise InternalVerificationError("Mackey intertwiner identity failed")
    if linalg.det(h).is_zero():
        raise InternalVerificationError("Mackey intertwiner is singular")
    return MackeyResult(summands, left, right, h)


@dataclass(frozen=True)
class InducedWitness:
    """Epimorphism N(up) -> M realized as the matrix of Phi^i(n) columns."""

    inducee: DModule          # 1-dimensional, step p
    gauge_matrix: tuple       # columns Phi^i(n) in M's basis
    gauge_operator: ShiftOp   # Phi^p - rate, the minimal operator of n


@dataclass(frozen=True)
class AbsIrredVerdict:
    """Outcome of the absolute-irreducibility probe for dimension 3."""

    kind: str  # "reducible" | "induced" | "absolutely_irreducible"
    certificate: Optional[object] = None
    witness: Optional[InducedWitness] = None
    flags: tuple = ()


def absolutely_irreducible_order3(module: DModule, flags=None) -> AbsIrredVerdict:
    """Classify a 3-dimensional step-1 module: reducible, induced from
    step 3, or absolutely irreducible (within the search scope).

    For dim 3 the only relevant prime is p = 3; when the restriction to
    D_3 has a stable line, the line pulls back to an explicit isomorphism
    N(up) -> M which is verified exactly before being returned.
    """
    from .dmod import order3_reducible
    from .hyper import rank1_submodules

    if module.dim != 3:
        raise DimensionTooSmall("probe is specific to dimension 3")
    if module.step != 1:
        raise StepNotMultiple("probe expects a step-1 module")
    local_flags = [] if flags is None else flags
    cert = order3_reducible(module, flags=local_flags)
    if cert is not None:
        return AbsIrredVerdict("reducible", certificate=cert,
                               flags=tuple(local_flags))
    m3 = restrict_module(module, 3)
    witnesses = rank1_submodules(m3, flags=local_flags)
    for wit in witnesses:
        w = build_induced_witness(module, wit.coords, wit.rate)
        if w is not None:
            return AbsIrredVerdict("induced", witness=w,
                                   flags=tuple(local_flags))
    return AbsIrredVerdict("absolutely_irreducible", flags=tuple(local_flags))


def build_induced_witness(module: DModule, coords: ModVector,
                          rate: RatFunc) -> Optional[InducedWitness]:
    """Turn a stable line of M(down to 3) into the epimorphism
    Phi^i (x) n -> Phi^i(n); returns None if the map is not invertible."""
    n0 = coords
    n1 = module.apply_phi(n0)
    n2 = module.apply_phi(n1)
    h = tuple(tuple(col.coords[r] for col in (n0, n1, n2)) for r in range(3))
    if linalg.det(h).is_zero():
        return None
    inducee = one_dim(rate, 3)
    induced = induce_module(inducee, 1)
    lhs = linalg.mat_mul(h, linalg.transpose(induced.action))
    rhs = linalg.mat_mul(linalg.transpose(module.action),
                         linalg.shift_mat(h, 1))
    if lhs != rhs:
        raise InternalVerificationError(
            "induced witness failed the intertwining identity")
    gauge_op = ShiftOp.from_terms({3: R_ONE, 0: -rate}, 1)
    return InducedWitness(inducee, h, gauge_op)
