"""Realizations of systems as quintuples (V, W, T, Q, P).

A Datum stores W in blocks over the pole points: per point a nilpotent
N_t together with Q_t: W_t -> V and P_t: V -> W_t, so that the system it
realizes is Sum_t Sum_k Q_t N_t^{k-1} P_t (z-t)^{-k}.  The canonical
datum quotients the obvious k_t-fold suspension by the kernel of a
block-Toeplitz matrix built from the coefficients; the quotient is
represented in the pivot coordinates of that matrix's reduced echelon
form, which makes the output matrices deterministic and reproduces the
stability conditions exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence, Union

from .errors import (
    DimensionMismatch,
    EmptyV,
    NotNilpotent,
    NotStable,
    PointMismatch,
    ValidationError,
)
from .exactalg import (
    GaussianRational,
    Matrix,
    centralizer_basis,
    generalized_eigendecomposition,
    gr,
    kernel_basis,
    nilpotency_index,
    quotient_projection,
    rank,
    solve,
)
from .systems import PrincipalPart, System, TruncatedGauge, truncated_inverse

__all__ = [
    "Block",
    "Datum",
    "HarnadDatum",
    "MomentValue",
    "hat_matrix",
    "phi",
    "canonical",
    "kappa",
    "is_stable",
    "gk_action",
    "moment_mu",
    "datum_isomorphism",
    "harnad_irreducible",
    "psi",
    "resolvent_principal_parts",
]


@dataclass(frozen=True)
class Block:
    """One pole's share of a datum: (W_t, N_t, Q_t, P_t)."""

    point: GaussianRational
    nilpotent: Matrix
    q: Matrix
    p: Matrix

    def __post_init__(self):
        object.__setattr__(self, "point", gr(self.point))
        w = self.nilpotent.rows
        if not self.nilpotent.is_square():
            raise DimensionMismatch("nilpotent part must be square")
        if self.q.cols != w or self.p.rows != w or self.q.rows != self.p.cols:
            raise DimensionMismatch("block shapes are inconsistent")
        if w and not (self.nilpotent**w).is_zero():
            raise NotNilpotent("block endomorphism is not nilpotent")

    @property
    def dim_w(self) -> int:
        return self.nilpotent.rows

    @property
    def dim_v(self) -> int:
        return self.q.rows


@dataclass(frozen=True)
class Datum:
    """A quintuple (V, W, T, Q, P) in pole-blocked form.

    The zero datum (no blocks) is legal for any dim_v.
    """

    dim_v: int
    blocks: tuple[Block, ...] = ()

    def __post_init__(self):
        blocks = sorted(self.blocks, key=lambda b: b.point.sort_key())
        seen = set()
        for b in blocks:
            if b.dim_v != self.dim_v:
                raise DimensionMismatch("block V-dimension differs from the datum")
            if b.point in seen:
                raise ValidationError(f"duplicate block point {b.point}")
            seen.add(b.point)
        object.__setattr__(self, "blocks", tuple(blocks))

    @property
    def dim_w(self) -> int:
        return sum(b.dim_w for b in self.blocks)

    def block_at(self, point) -> Optional[Block]:
        point = gr(point)
        for b in self.blocks:
            if b.point == point:
                return b
        return None

    def t_matrix(self) -> Matrix:
        """T on W = direct sum of the blocks, i.e. t Id + N_t per block."""
        mats = [b.nilpotent + b.point * Matrix.identity(b.dim_w) for b in self.blocks]
        return Matrix.block_diagonal(mats) if mats else Matrix.zeros(0, 0)

    def q_matrix(self) -> Matrix:
        return Matrix.hstack([b.q for b in self.blocks]) if self.blocks else Matrix.zeros(self.dim_v, 0)

    def p_matrix(self) -> Matrix:
        return Matrix.vstack([b.p for b in self.blocks]) if self.blocks else Matrix.zeros(0, self.dim_v)


@dataclass(frozen=True)
class HarnadDatum:
    """A datum together with the constant term S on V."""

    datum: Datum
    s_matrix: Matrix

    def __post_init__(self):
        if self.s_matrix.rows != self.datum.dim_v or not self.s_matrix.is_square():
            raise DimensionMismatch("S must be an endomorphism of V")

    @property
    def dim_v(self) -> int:
        return self.datum.dim_v

    @cached_property
    def s_blocking(self):
        """Generalized eigendecomposition of S, cached; the E-side blocking."""
        return generalized_eigendecomposition(self.s_matrix)


# ---------------------------------------------------------------------------
# Phi and the canonical datum
# ---------------------------------------------------------------------------


def phi(d: Union[Datum, HarnadDatum]) -> System:
    """The realized system: constant (S for a Harnad datum, else 0) plus
    Sum_k Q_t N_t^{k-1} P_t (z-t)^{-k} per block."""
    if isinstance(d, HarnadDatum):
        constant = d.s_matrix
        datum = d.datum
    else:
        constant = Matrix.zeros(d.dim_v, d.dim_v)
        datum = d
    parts = []
    for b in datum.blocks:
        coeffs = []
        power = Matrix.identity(b.dim_w)
        for _ in range(max(1, nilpotency_index(b.nilpotent))):
            coeffs.append(b.q * power * b.p)
            power = power * b.nilpotent
        parts.append(PrincipalPart(b.point, tuple(coeffs)))
    return System(datum.dim_v, constant, tuple(parts))


def hat_matrix(coefficients: Sequence[Matrix]) -> Matrix:
    """Upper-triangular block-Toeplitz matrix with A_k on the diagonal and
    A_{k-1}, ..., A_1 on the superdiagonals."""
    k = len(coefficients)
    n = coefficients[0].rows
    rows = []
    for i in range(k):
        rows.append([coefficients[k - 1 - (j - i)] if j >= i else Matrix.zeros(n, n) for j in range(k)])
    return Matrix.vstack([Matrix.hstack(r) for r in rows])


def _shift_matrix(n: int, k: int) -> Matrix:
    rows = []
    for i in range(k):
        rows.append(
            [Matrix.identity(n) if j == i + 1 else Matrix.zeros(n, n) for j in range(k)]
        )
    return Matrix.vstack([Matrix.hstack(r) for r in rows])


def canonical(parts: Sequence[PrincipalPart], dim_v: int) -> Datum:
    """The canonical datum for Sum of the given principal parts.

    Per pole, the k-fold suspension (Q-hat, P-hat, N-hat) is quotiented by
    Ker A-hat; poles whose A-hat vanishes are dropped.  The result is
    stable whenever dim_v >= 1 and satisfies phi(canonical(A)) = A.
    """
    if dim_v < 1:
        raise EmptyV("canonical datum needs dim V >= 1")
    blocks = []
    for part in sorted(parts, key=lambda p: p.point.sort_key()):
        if part.dimension != dim_v:
            raise DimensionMismatch("part dimension differs from dim V")
        coeffs = part.coefficients
        k = len(coeffs)
        n = dim_v
        ahat = hat_matrix(coeffs)
        pi, iota = quotient_projection(ahat)
        r = pi.rows
        if r == 0:
            continue
        nhat = _shift_matrix(n, k)
        qhat = Matrix.hstack(list(reversed(coeffs)))
        phat = Matrix.vstack([Matrix.zeros((k - 1) * n, n), Matrix.identity(n)])
        blocks.append(
            Block(
                point=part.point,
                nilpotent=pi * nhat * iota,
                q=qhat * iota,
                p=pi * phat,
            )
        )
    return Datum(dim_v, tuple(blocks))


def kappa(sys: System) -> HarnadDatum:
    """Section of phi: the canonical datum of the principal parts plus S."""
    return HarnadDatum(canonical(sys.parts, sys.dimension), sys.constant)


# ---------------------------------------------------------------------------
# Stability, gauge action, moment map
# ---------------------------------------------------------------------------


def is_stable(d: Datum) -> bool:
    """Both rank conditions at every block: Ker Q_t meets Ker N_t only in
    0, and Im P_t + Im N_t fills W_t."""
    if d.dim_v < 1:
        raise EmptyV("stability is defined only for dim V >= 1")
    for b in d.blocks:
        w = b.dim_w
        if rank(Matrix.vstack([b.q, b.nilpotent])) != w:
            return False
        if rank(Matrix.hstack([b.p, b.nilpotent])) != w:
            return False
    return True


def gk_action(g: TruncatedGauge, d: Datum) -> Datum:
    """Action of a truncated gauge at one pole on (Q_t, P_t):
    Q_t -> Sum g_k Q_t N_t^k,  P_t -> Sum N_t^k P_t (g^{-1})_k."""
    target = d.block_at(g.point)
    if target is None:
        raise PointMismatch(f"no block at point {g.point}")
    if g.dimension != d.dim_v:
        raise DimensionMismatch("gauge dimension differs from dim V")
    w = target.dim_w
    m = max(1, nilpotency_index(target.nilpotent))
    n = d.dim_v
    gp = list(g.coefficients) + [Matrix.zeros(n, n)] * max(0, m - len(g.coefficients))
    hp = truncated_inverse(g.coefficients, m)
    new_q = Matrix.zeros(n, w)
    new_p = Matrix.zeros(w, n)
    npow = Matrix.identity(w)
    for k in range(m):
        new_q = new_q + gp[k] * target.q * npow
        new_p = new_p + npow * target.p * hp[k]
        npow = npow * target.nilpotent
    blocks = tuple(
        Block(b.point, b.nilpotent, new_q, new_p) if b.point == g.point else b for b in d.blocks
    )
    return Datum(d.dim_v, blocks)


@dataclass(frozen=True)
class MomentValue:
    """Value of the moment map for the centralizer of T.

    Per block: -P_t Q_t together with its trace pairings against a basis
    of the commutant of N_t.  Equality in the dual of that centralizer is
    equality of all pairings.
    """

    entries: tuple[tuple[GaussianRational, Matrix, tuple[GaussianRational, ...]], ...]

    def __eq__(self, other):
        if not isinstance(other, MomentValue):
            return NotImplemented
        lhs = [(pt, pair) for pt, _, pair in self.entries]
        rhs = [(pt, pair) for pt, _, pair in other.entries]
        return lhs == rhs

    def __hash__(self):  # pragma: no cover
        return hash(tuple((pt, pair) for pt, _, pair in self.entries))


def moment_mu(d: Datum) -> MomentValue:
    entries = []
    for b in d.blocks:
        value = -(b.p * b.q)
        pairings = tuple((value * x).trace() for x in centralizer_basis(b.nilpotent))
        entries.append((b.point, value, pairings))
    return MomentValue(tuple(entries))


# ---------------------------------------------------------------------------
# Uniqueness
# ---------------------------------------------------------------------------


def _block_iso(b1: Block, b2: Block):
    """Solve f N = N' f, Q' f = Q, f P = P' for f: W_t -> W'_t."""
    w = b1.dim_w
    if b2.dim_w != w:
        return None
    n = b1.dim_v
    rows = []
    rhs = []
    # f N - N' f = 0
    for i in range(w):
        for j in range(w):
            row = [gr(0)] * (w * w)
            for l in range(w):
                row[i * w + l] = row[i * w + l] + b1.nilpotent[l, j]
                row[l * w + j] = row[l * w + j] - b2.nilpotent[i, l]
            rows.append(row)
            rhs.append(gr(0))
    # Q' f = Q
    for i in range(n):
        for j in range(w):
            row = [gr(0)] * (w * w)
            for l in range(w):
                row[l * w + j] = row[l * w + j] + b2.q[i, l]
            rows.append(row)
            rhs.append(b1.q[i, j])
    # f P = P'
    for i in range(w):
        for j in range(n):
            row = [gr(0)] * (w * w)
            for l in range(w):
                row[i * w + l] = row[i * w + l] + b1.p[l, j]
            rows.append(row)
            rhs.append(b2.p[i, j])
    a = Matrix.from_rows(rows)
    x = solve(a, Matrix.column(rhs))
    if x is None:
        return None
    candidates = [x]
    for v in kernel_basis(a):
        candidates.append(x + v)
    for c in candidates:
        f = Matrix(w, w, [c[k, 0] for k in range(w * w)])
        if rank(f) == w:
            return f
    return None


def datum_isomorphism(d1: Datum, d2: Datum):
    """An isomorphism f: W -> W' intertwining (N, Q, P), or None.

    Both inputs must be stable; under stability the solution, when an
    invertible one exists, is the unique solution of the linear system.
    """
    if d1.dim_v != d2.dim_v:
        raise DimensionMismatch("data live over different V")
    if not is_stable(d1) or not is_stable(d2):
        raise NotStable("datum isomorphism requires stable inputs")
    pts1 = [b.point for b in d1.blocks]
    pts2 = [b.point for b in d2.blocks]
    if pts1 != pts2:
        return None
    fs = []
    for b1, b2 in zip(d1.blocks, d2.blocks):
        f = _block_iso(b1, b2)
        if f is None:
            return None
        fs.append(f)
    return Matrix.block_diagonal(fs) if fs else Matrix.zeros(0, 0)


# ---------------------------------------------------------------------------
# The dual direction
# ---------------------------------------------------------------------------


def resolvent_principal_parts(
    mid: Matrix, left: Matrix, right: Matrix, eig=None
) -> tuple[PrincipalPart, ...]:
    """Principal parts of left (z I - mid)^{-1} right over the eigenvalues
    of mid, in the ambient coordinates of left/right.

    Raises IrrationalSpectrum when mid does not split over Q(i).
    """
    if mid.rows == 0:
        return ()
    if eig is None:
        eig = generalized_eigendecomposition(mid)
    basis = Matrix.hstack([b for _, b in eig])
    left_c = left * basis
    right_c = solve(basis, right)
    mid_c = solve(basis, mid * basis)
    parts = []
    offset = 0
    out_dim = left.rows
    for ev, b in eig:
        m = b.cols
        sub_mid = mid_c.submatrix(offset, offset + m, offset, offset + m)
        nil = sub_mid - ev * Matrix.identity(m)
        lblk = left_c.submatrix(0, out_dim, offset, offset + m)
        rblk = right_c.submatrix(offset, offset + m, 0, right.cols)
        coeffs = []
        power = Matrix.identity(m)
        for _ in range(max(1, nilpotency_index(nil))):
            coeffs.append(lblk * power * rblk)
            power = power * nil
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        if coeffs:
            parts.append(PrincipalPart(ev, tuple(coeffs)))
        offset += m
    return tuple(parts)


def psi(h: HarnadDatum) -> System:
    """The dual system on W: T + P (zeta I - S)^{-1} Q.

    S is blocked by its generalized eigenspaces (computed on demand); the
    coefficients P_s M_s^{j-1} Q_s are mapped back to the coordinates of
    W fixed by the block order.
    """
    d = h.datum
    w = d.dim_w
    if w == 0:
        return System(0, Matrix.zeros(0, 0), ())
    t = d.t_matrix()
    q = d.q_matrix()
    p = d.p_matrix()
    parts = resolvent_principal_parts(h.s_matrix, p, q, eig=h.s_blocking)
    return System(w, t, parts)


def harnad_irreducible(h: HarnadDatum) -> bool:
    """Irreducibility of the sextuple: stability of the underlying datum
    together with irreducibility of the realized pair."""
    from .systems import is_irreducible

    if h.dim_v < 1:
        raise EmptyV("irreducibility needs dim V >= 1")
    return is_stable(h.datum) and is_irreducible(phi(h))
