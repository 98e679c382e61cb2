"""Duality and convolution functors on pairs (V, A).

hd realizes the composite: take the canonical datum of the principal
parts, swap the roles of the two vector spaces, and read the realized
system on the other side.  mc is hd . add . hd with a rank-1 parameter
whose poles must sit inside the spectrum of the constant term, with order
bounded by the nilpotency index there.  dr_middle_convolution is the
classical two-step construction on Fuchsian pairs and serves as an
independent oracle for mc with a simple-pole parameter.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    DimensionMismatch,
    Exceptional,
    NonzeroConstantTerm,
    NotFuchsian,
    PoleMismatch,
)
from .exactalg import (
    GaussianRational,
    Matrix,
    generalized_eigendecomposition,
    gr,
    nilpotency_index,
    quotient_projection,
)
from .datum import kappa, psi, resolvent_principal_parts
from .systems import (
    PrincipalPart,
    System,
    add_scalar,
    equivalent,
    order,
    zero_pair,
)

__all__ = [
    "Pair",
    "OkuboTriple",
    "hd",
    "mc",
    "dr_middle_convolution",
    "okubo_to_pair",
    "hd_double",
]

# A pair (V, A) is simply a System; the zero pair has dimension 0.
Pair = System


def hd(p: Pair) -> Pair:
    """The dual pair.  Pure-constant input (no effective poles) dualizes
    to the zero pair."""
    if p.dimension == 0:
        return zero_pair()
    return psi(kappa(p))


def _spectral_orders(s: Matrix) -> dict[GaussianRational, int]:
    """Eigenvalue -> nilpotency index of the nilpotent part on its
    generalized eigenspace."""
    out = {}
    for ev, basis in generalized_eigendecomposition(s):
        from .exactalg import solve

        sub = solve(basis, s * basis)
        nil = sub - ev * Matrix.identity(basis.cols)
        out[ev] = max(1, nilpotency_index(nil))
    return out


def mc(p: Pair, alpha: System) -> Pair:
    """Middle convolution with the rank-1 parameter alpha.

    alpha must carry no constant term (translations are the caller's
    business) and its poles must lie in the spectrum of the constant term
    of p, with pole order at s at most the nilpotency index there.
    """
    if alpha.dimension != 1:
        raise DimensionMismatch("convolution parameter must have rank 1")
    if not alpha.constant.is_zero():
        raise NonzeroConstantTerm(
            "convolution parameter has a constant term; translate the coordinate first"
        )
    allowed = _spectral_orders(p.constant)
    for part in alpha.parts:
        d = order(part)
        if d == 0:
            continue
        if part.point not in allowed:
            raise PoleMismatch(
                f"parameter pole {part.point} is outside the constant term's spectrum"
            )
        if d > allowed[part.point]:
            raise PoleMismatch(
                f"parameter pole order {d} at {part.point} exceeds the allowed {allowed[part.point]}"
            )
    dual = hd(p)
    return hd(add_scalar(dual, alpha))


def dr_middle_convolution(p: Pair, lam: GaussianRational) -> Pair:
    """Classical two-step middle convolution of a Fuchsian pair.

    Step one realizes the pair on W = sum of V/Ker A_t, step two quotients
    W by Ker(PQ + lambda).  Implemented literally as the independent
    oracle for mc with parameter lambda/zeta.
    """
    lam = gr(lam)
    if not p.constant.is_zero():
        raise NotFuchsian("pair has a constant term")
    if any(order(part) > 1 for part in p.parts):
        raise NotFuchsian("pair has a pole of order > 1")
    n = p.dimension
    qs, ps, points = [], [], []
    for part in p.parts:
        a = part.coefficients[0]
        if a.is_zero():
            continue
        pi, iota = quotient_projection(a)
        points.append(part.point)
        qs.append(a * iota)  # injection W_t -> V induced from A_t
        ps.append(pi)  # projection V -> V/Ker A_t
    if not qs:
        return zero_pair()
    q = Matrix.hstack(qs)
    pm = Matrix.vstack(ps)
    w = q.cols
    g = pm * q + lam * Matrix.identity(w)
    pi, iota = quotient_projection(g)
    m = pi.rows
    if m == 0:
        return zero_pair()
    q_lam = pi  # projection W -> V^lambda
    p_lam = g * iota  # injection V^lambda -> W with P Q = G
    parts = []
    offset = 0
    for point, qt in zip(points, qs):
        wt = qt.cols
        q_block = q_lam.submatrix(0, m, offset, offset + wt)
        p_block = p_lam.submatrix(offset, offset + wt, 0, m)
        coeff = q_block * p_block
        if not coeff.is_zero():
            parts.append(PrincipalPart(point, (coeff,)))
        offset += wt
    return System(m, Matrix.zeros(m, m), tuple(parts))


@dataclass(frozen=True)
class OkuboTriple:
    """(W, T, R) presenting the system (z I - T) u' = R u."""

    t_matrix: Matrix
    r_matrix: Matrix

    def __post_init__(self):
        if (
            not self.t_matrix.is_square()
            or not self.r_matrix.is_square()
            or self.t_matrix.rows != self.r_matrix.rows
        ):
            raise DimensionMismatch("Okubo triple needs square T, R of equal size")

    @property
    def dim_w(self) -> int:
        return self.t_matrix.rows


def okubo_to_pair(o: OkuboTriple) -> Pair:
    """Factor R = P Q through V = W/Ker R and expand Q (zI - T)^{-1} P."""
    pi, iota = quotient_projection(o.r_matrix)
    v = pi.rows
    if v == 0:
        return zero_pair()
    q = pi  # projection W -> V
    p = o.r_matrix * iota  # injection V -> W with P Q = R
    parts = resolvent_principal_parts(o.t_matrix, q, p)
    return System(v, Matrix.zeros(v, v), parts)


def hd_double(p: Pair):
    """hd(hd(p)) together with the constant-gauge witness back to p.

    Raises Exceptional exactly when the first dual vanishes, i.e. when p
    is equivalent to a one-dimensional constant pair.
    """
    first = hd(p)
    if first.dimension == 0:
        raise Exceptional("the dual vanishes: pair is equivalent to (C, s)")
    back = hd(first)
    witness = equivalent(back, p)
    return back, witness
