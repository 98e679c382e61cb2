"""Systems of linear ODEs with prescribed principal parts, and the
truncated gauge group acting on them.

A System is a constant endomorphism plus finitely many principal parts
Sum_k A_{t,k} (z-t)^{-k} at distinct Gaussian-rational poles.  Pole points
are stored per part and parts are kept sorted by point, so document output
and all derived data are reproducible.  Equality of systems is semantic:
trailing zero coefficients and all-zero parts do not distinguish systems
(the declared truncation order is storage, the pole order is meaning).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import (
    DimensionMismatch,
    InconclusiveEquivalence,
    PointMismatch,
    SingularGauge,
    ValidationError,
)
from .exactalg import (
    GaussianRational,
    Matrix,
    gr,
    invert,
    kernel_basis,
    rank,
)

__all__ = [
    "PrincipalPart",
    "System",
    "TruncatedGauge",
    "order",
    "residue_at_infinity",
    "add_scalar",
    "gauge_coadjoint",
    "gauge_compose",
    "truncated_inverse",
    "is_irreducible",
    "equivalent",
    "conjugate_system",
    "zero_pair",
    "scalar_system",
    "lambda_over_z",
    "scalar_coefficients",
]


@dataclass(frozen=True)
class PrincipalPart:
    """Coefficients [A_1, ..., A_k] of (z-t)^{-1}..(z-t)^{-k} at pole t.

    Trailing zero coefficients are legal; ``order`` gives the semantic
    pole order while len(coefficients) is the storage capacity.
    """

    point: GaussianRational
    coefficients: tuple[Matrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "point", gr(self.point))
        coeffs = tuple(self.coefficients)
        if not coeffs:
            raise ValidationError("a principal part needs at least one coefficient")
        n = coeffs[0].rows
        for c in coeffs:
            if not c.is_square() or c.rows != n:
                raise DimensionMismatch("principal part coefficients must be square of equal size")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def dimension(self) -> int:
        return self.coefficients[0].rows

    @property
    def storage_order(self) -> int:
        return len(self.coefficients)


def order(part: PrincipalPart) -> int:
    """The pole order: largest k with A_k nonzero, or 0."""
    for k in range(len(part.coefficients), 0, -1):
        if not part.coefficients[k - 1].is_zero():
            return k
    return 0


def _trim(coeffs: Sequence[Matrix]) -> tuple[Matrix, ...]:
    out = list(coeffs)
    while out and out[-1].is_zero():
        out.pop()
    return tuple(out)


@dataclass(frozen=True, eq=False)
class System:
    """A pair (V, A): constant term plus principal parts at distinct poles.

    The optional exponent declaration is a tuple of (point, order) pairs
    asserting that prod (S - s)^{l_s} = 0; it is validated on construction.
    """

    dimension: int
    constant: Matrix
    parts: tuple[PrincipalPart, ...] = ()
    declaration: Optional[tuple[tuple[GaussianRational, int], ...]] = None

    def __post_init__(self):
        n = self.dimension
        if self.constant.rows != n or self.constant.cols != n:
            raise DimensionMismatch("constant term has wrong shape")
        parts = sorted(self.parts, key=lambda p: p.point.sort_key())
        seen = set()
        for p in parts:
            if p.dimension != n:
                raise DimensionMismatch("principal part dimension differs from system dimension")
            if p.point in seen:
                raise ValidationError(f"duplicate pole point {p.point}")
            seen.add(p.point)
        object.__setattr__(self, "parts", tuple(parts))
        if self.declaration is not None:
            decl = tuple((gr(s), int(l)) for s, l in self.declaration)
            object.__setattr__(self, "declaration", decl)
            prod = Matrix.identity(n)
            for s, l in decl:
                prod = prod * (self.constant - s * Matrix.identity(n)) ** l
            if not prod.is_zero():
                raise ValidationError("constant term violates the declared exponent condition")

    def part_at(self, point: GaussianRational) -> Optional[PrincipalPart]:
        for p in self.parts:
            if p.point == point:
                return p
        return None

    def pole_points(self) -> tuple[GaussianRational, ...]:
        return tuple(p.point for p in self.parts)

    def _semantic(self):
        parts = {}
        for p in self.parts:
            trimmed = _trim(p.coefficients)
            if trimmed:
                parts[p.point] = trimmed
        return (self.dimension, self.constant, parts)

    def __eq__(self, other):
        if not isinstance(other, System):
            return NotImplemented
        return self._semantic() == other._semantic()

    def __hash__(self):  # pragma: no cover - systems are not meant as keys
        return hash((self.dimension, self.constant))


def zero_pair() -> System:
    return System(0, Matrix.zeros(0, 0), ())


def scalar_system(parts: dict, constant=0) -> System:
    """Rank-1 system from {point: [c_1, .., c_k]} with scalar coefficients."""
    pp = [
        PrincipalPart(gr(pt), tuple(Matrix.from_rows([[c]]) for c in coeffs))
        for pt, coeffs in parts.items()
    ]
    return System(1, Matrix.from_rows([[constant]]), tuple(pp))


def lambda_over_z(lam) -> System:
    """The convolution parameter lam/zeta with its single pole at 0."""
    return scalar_system({0: [lam]})


def scalar_coefficients(part: PrincipalPart) -> list[GaussianRational]:
    if part.dimension != 1:
        raise DimensionMismatch("scalar coefficients of a non-scalar part")
    return [c.scalar() for c in part.coefficients]


def residue_at_infinity(sys: System) -> Matrix:
    """-sum of first-order coefficients; zero iff infinity is regular for A^0."""
    acc = Matrix.zeros(sys.dimension, sys.dimension)
    for p in sys.parts:
        acc = acc + p.coefficients[0]
    return -acc


def add_scalar(sys: System, alpha: System) -> System:
    """sys(z) + alpha(z) * Id, merging poles."""
    if alpha.dimension != 1:
        raise DimensionMismatch("addition parameter must have rank 1")
    n = sys.dimension
    const = sys.constant + alpha.constant.scalar() * Matrix.identity(n)
    if n == 0:
        return System(0, const, ())
    merged = {p.point: list(p.coefficients) for p in sys.parts}
    for ap in alpha.parts:
        coeffs = merged.setdefault(ap.point, [])
        for j, c in enumerate(scalar_coefficients(ap)):
            while len(coeffs) <= j:
                coeffs.append(Matrix.zeros(n, n))
            coeffs[j] = coeffs[j] + c * Matrix.identity(n)
    parts = tuple(PrincipalPart(pt, tuple(cs)) for pt, cs in merged.items())
    return System(n, const, parts, sys.declaration)


# ---------------------------------------------------------------------------
# Truncated gauge group
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TruncatedGauge:
    """g(z) = g_0 + g_1 z + ... + g_{k-1} z^{k-1} in the local coordinate
    at ``point``, with invertible g_0."""

    point: GaussianRational
    coefficients: tuple[Matrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "point", gr(self.point))
        coeffs = tuple(self.coefficients)
        if not coeffs:
            raise ValidationError("a gauge element needs at least one coefficient")
        n = coeffs[0].rows
        for c in coeffs:
            if not c.is_square() or c.rows != n:
                raise DimensionMismatch("gauge coefficients must be square of equal size")
        if rank(coeffs[0]) != n:
            raise SingularGauge("constant term of the gauge element is singular")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def dimension(self) -> int:
        return self.coefficients[0].rows


def truncated_inverse(coeffs: Sequence[Matrix], length: int) -> list[Matrix]:
    """Coefficients of g(z)^{-1} mod z^length."""
    g0inv = invert(coeffs[0])
    if g0inv is None:
        raise SingularGauge("constant term of the gauge element is singular")
    n = coeffs[0].rows
    padded = list(coeffs) + [Matrix.zeros(n, n)] * max(0, length - len(coeffs))
    inv = [g0inv]
    for m in range(1, length):
        acc = Matrix.zeros(n, n)
        for j in range(1, m + 1):
            acc = acc + padded[j] * inv[m - j]
        inv.append(-(g0inv * acc))
    return inv


def gauge_compose(g: TruncatedGauge, h: TruncatedGauge) -> TruncatedGauge:
    """(g h)(z) = g(z) h(z), truncated at the longer of the two."""
    if g.point != h.point:
        raise PointMismatch("cannot compose gauges at different points")
    k = max(len(g.coefficients), len(h.coefficients))
    n = g.dimension
    gp = list(g.coefficients) + [Matrix.zeros(n, n)] * (k - len(g.coefficients))
    hp = list(h.coefficients) + [Matrix.zeros(n, n)] * (k - len(h.coefficients))
    out = []
    for m in range(k):
        acc = Matrix.zeros(n, n)
        for j in range(m + 1):
            acc = acc + gp[j] * hp[m - j]
        out.append(acc)
    return TruncatedGauge(g.point, tuple(out))


def gauge_coadjoint(g: TruncatedGauge, part: PrincipalPart) -> PrincipalPart:
    """Principal part of g(z) A(z) g(z)^{-1}; the coadjoint action on the
    truncation at the pole.  Never increases the pole order."""
    if g.point != part.point:
        raise PointMismatch("gauge point differs from the pole")
    if g.dimension != part.dimension:
        raise DimensionMismatch("gauge dimension differs from the part")
    k = len(part.coefficients)
    n = part.dimension
    gp = list(g.coefficients) + [Matrix.zeros(n, n)] * max(0, k - len(g.coefficients))
    hp = truncated_inverse(g.coefficients, k)
    out = []
    for m in range(1, k + 1):
        acc = Matrix.zeros(n, n)
        for j in range(m, k + 1):
            aj = part.coefficients[j - 1]
            if aj.is_zero():
                continue
            for a in range(0, j - m + 1):
                b = j - m - a
                if a < len(gp) and b < len(hp):
                    acc = acc + gp[a] * aj * hp[b]
        out.append(acc)
    return PrincipalPart(part.point, tuple(out))


# ---------------------------------------------------------------------------
# Irreducibility and equivalence
# ---------------------------------------------------------------------------


def _vec(m: Matrix) -> list[GaussianRational]:
    return list(m.entries())


def _span_insert(rows, pivots, vec) -> bool:
    """Reduce vec against the echelon rows; append if independent."""
    v = list(vec)
    for col, row in pivots.items():
        f = v[col]
        if f.p or f.q:
            base = rows[row]
            for idx in range(len(v)):
                b = base[idx]
                if b.p or b.q:
                    v[idx] = v[idx] - f * b
    lead = None
    for idx, x in enumerate(v):
        if x.p or x.q:
            lead = idx
            break
    if lead is None:
        return False
    inv = v[lead].inverse()
    v = [inv * x for x in v]
    pivots[lead] = len(rows)
    rows.append(v)
    return True


def is_irreducible(sys: System) -> bool:
    """True iff the unital algebra generated by the constant term and all
    coefficients is the full endomorphism algebra.

    Word-span closure: start from {I, S, A_{t,k}}, multiply by generators
    on the right until the span stabilizes.  The span's dimension over
    Q(i) equals its dimension over C, so the verdict transfers.
    """
    n = sys.dimension
    if n < 1:
        raise DimensionMismatch("irreducibility needs dimension >= 1")
    gens = [sys.constant] + [c for p in sys.parts for c in p.coefficients]
    gens = [g for g in gens if not g.is_zero()]
    rows: list[list[GaussianRational]] = []
    pivots: dict[int, int] = {}
    frontier: list[Matrix] = []
    for m in [Matrix.identity(n)] + gens:
        if _span_insert(rows, pivots, _vec(m)):
            frontier.append(m)
    full = n * n
    while frontier and len(rows) < full:
        nxt = []
        for f in frontier:
            for g in gens:
                prod = f * g
                if _span_insert(rows, pivots, _vec(prod)):
                    nxt.append(prod)
                    if len(rows) == full:
                        return True
        frontier = nxt
    return len(rows) == full


def _intertwiner_space(a: System, b: System) -> list[Matrix]:
    """Basis of {f : f S_a = S_b f and f A_{t,k} = B_{t,k} f for all t,k}."""
    n = a.dimension
    points = sorted(
        {p.point for p in a.parts} | {p.point for p in b.parts},
        key=lambda s: s.sort_key(),
    )
    pairs = [(a.constant, b.constant)]
    for pt in points:
        pa, pb = a.part_at(pt), b.part_at(pt)
        ka = len(pa.coefficients) if pa else 0
        kb = len(pb.coefficients) if pb else 0
        for j in range(max(ka, kb)):
            ma = pa.coefficients[j] if pa and j < ka else Matrix.zeros(n, n)
            mb = pb.coefficients[j] if pb and j < kb else Matrix.zeros(n, n)
            pairs.append((ma, mb))
    rows = []
    for x, y in pairs:
        # entry (i,j) of f*x - y*f as a linear functional of vec(f)
        for i in range(n):
            for j in range(n):
                row = [gr(0)] * (n * n)
                for l in range(n):
                    row[i * n + l] = row[i * n + l] + x[l, j]
                    row[l * n + j] = row[l * n + j] - y[i, l]
                rows.append(row)
    basis = kernel_basis(Matrix.from_rows(rows))
    return [Matrix(n, n, [v[k, 0] for k in range(n * n)]) for v in basis]


def equivalent(a: System, b: System):
    """Invertible f with f a(z) f^{-1} = b(z), or None.

    Only defined for irreducible inputs: there the intertwiner space has
    dimension at most one and any nonzero element is invertible, so a
    single exact solve decides.
    """
    if a.dimension == 0 and b.dimension == 0:
        return Matrix.zeros(0, 0)
    if a.dimension != b.dimension:
        raise DimensionMismatch("equivalence of systems of different rank")
    if not is_irreducible(a) or not is_irreducible(b):
        raise InconclusiveEquivalence("equivalence is only decided for irreducible pairs")
    space = _intertwiner_space(a, b)
    if not space:
        return None
    assert len(space) == 1, "Schur bound violated for irreducible inputs"
    f = space[0]
    return f if rank(f) == a.dimension else None


def conjugate_system(c: Matrix, sys: System) -> System:
    """Constant gauge transformation: every matrix goes to c M c^{-1}."""
    cinv = invert(c)
    if cinv is None:
        raise SingularGauge("conjugating matrix is singular")
    parts = tuple(
        PrincipalPart(p.point, tuple(c * m * cinv for m in p.coefficients)) for p in sys.parts
    )
    return System(sys.dimension, c * sys.constant * cinv, parts, sys.declaration)
