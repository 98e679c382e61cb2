"""Hukuhara-Turrittin-Levelt normal forms and the local dimension data
that feeds the rigidity computations.

A normal form is a direct sum over a finite spectrum set: each spectrum
is a residue-free polynomial in 1/z (coefficients of z^{-2}..z^{-k})
acting as a scalar on its block, plus an arbitrary residue matrix.  The
reduction splits the leading coefficient by eigenvalues, kills the
off-diagonal blocks order by order with explicit gauge elements, and
recurses on the diagonal blocks; it applies exactly when every leading
coefficient met along the way is semisimple with spectrum in Q(i).

The stabilizer dimension is computed two independent ways (an exact
linear solve in the truncated gauge Lie algebra, and the eigenspace
bookkeeping formula evaluated on the normal form); both are exposed and
asserted equal when both apply.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import (
    DimensionMismatch,
    InconsistentRank,
    NoNormalForm,
)
from .exactalg import (
    GaussianRational,
    Matrix,
    char_eigenvalues,
    gr,
    kernel_basis,
    nilpotent_partition,
    quotient_projection,
    rank,
    solve,
)
from .datum import hat_matrix
from .systems import PrincipalPart, TruncatedGauge, gauge_coadjoint

__all__ = [
    "SpectralBlock",
    "NormalForm",
    "SpectralSummary",
    "compute_normal_form",
    "assemble_normal_form",
    "stabilizer_dim",
    "stabilizer_dim_linear",
    "stabilizer_dim_formula",
    "hat_kernel_dim",
    "hat_kernel_dim_formula",
    "select_alpha",
    "predicted_spectra",
    "normal_forms_conjugate",
    "jordan_data",
    "jordan_matrix",
]


@dataclass(frozen=True)
class SpectralBlock:
    """One spectrum: tail = (lambda_2, ..., lambda_k) and the residue
    matrix on its subspace."""

    tail: tuple[GaussianRational, ...]
    gamma: Matrix

    @property
    def dim(self) -> int:
        return self.gamma.rows

    def tail_key(self):
        trimmed = list(self.tail)
        while trimmed and trimmed[-1].is_zero():
            trimmed.pop()
        return tuple(x.sort_key() for x in trimmed)

    def is_zero_spectrum(self) -> bool:
        return all(x.is_zero() for x in self.tail)

    def pole_order(self) -> int:
        """ord(lambda(z) + Gamma/z) for this block."""
        for i in range(len(self.tail), 0, -1):
            if not self.tail[i - 1].is_zero():
                return i + 1
        return 0 if self.gamma.is_zero() else 1


@dataclass(frozen=True)
class NormalForm:
    """Finite spectrum set with dimensions and residue matrices.

    ``k`` is the ambient truncation order (number of stored coefficients
    of the part it was computed from); tails all have length k-1.
    """

    k: int
    blocks: tuple[SpectralBlock, ...]

    def __post_init__(self):
        blocks = sorted(self.blocks, key=lambda b: b.tail_key())
        keys = [b.tail_key() for b in blocks]
        if len(set(keys)) != len(keys):
            raise DimensionMismatch("spectra of a normal form must be pairwise distinct")
        for b in blocks:
            if len(b.tail) != max(self.k - 1, 0):
                raise DimensionMismatch("tail length must be k-1")
        object.__setattr__(self, "blocks", tuple(blocks))

    @property
    def dimension(self) -> int:
        return sum(b.dim for b in self.blocks)


def assemble_normal_form(nf: NormalForm) -> list[Matrix]:
    """Coefficient matrices [Lambda_1, ..., Lambda_k] of the block-diagonal
    model."""
    out = []
    for i in range(1, nf.k + 1):
        mats = []
        for b in nf.blocks:
            if i == 1:
                mats.append(b.gamma)
            else:
                mats.append(b.tail[i - 2] * Matrix.identity(b.dim))
        out.append(Matrix.block_diagonal(mats))
    return out


# ---------------------------------------------------------------------------
# Computing the normal form
# ---------------------------------------------------------------------------


def _semisimple_eigensplit(m: Matrix):
    """Eigenvalue/basis pairs of a semisimple matrix, or None if m is not
    semisimple.  Raises IrrationalSpectrum if the spectrum leaves Q(i)."""
    from .exactalg import generalized_eigendecomposition

    eig = generalized_eigendecomposition(m)
    n = m.rows
    for ev, basis in eig:
        if not ((m - ev * Matrix.identity(n)) * basis).is_zero():
            return None
    return eig


def _offdiag(m: Matrix, dims: list[int]) -> Matrix:
    rows = []
    starts = [sum(dims[:i]) for i in range(len(dims) + 1)]
    grid = [[m[i, j] for j in range(m.cols)] for i in range(m.rows)]
    for bi in range(len(dims)):
        for i in range(starts[bi], starts[bi + 1]):
            for j in range(starts[bi], starts[bi + 1]):
                grid[i][j] = gr(0)
    return Matrix.from_rows(grid) if m.rows else m


def _split(coeffs: list[Matrix], k: int) -> list[tuple[list[GaussianRational], Matrix]]:
    """Recursive reduction; returns (tail as list indexed 2..k, gamma)."""
    n = coeffs[0].rows
    d = 0
    for j in range(k, 0, -1):
        if not coeffs[j - 1].is_zero():
            d = j
            break
    if d <= 1:
        tail = [gr(0)] * max(k - 1, 0)
        return [(tail, coeffs[0] if k >= 1 else Matrix.zeros(n, n))]
    lead = coeffs[d - 1]
    eig = _semisimple_eigensplit(lead)
    if eig is None:
        raise NoNormalForm("a leading coefficient encountered is not semisimple")
    if len(eig) == 1:
        a = eig[0][0]
        sub = list(coeffs)
        sub[d - 1] = sub[d - 1] - a * Matrix.identity(n)
        blocks = _split(sub, k)
        for tail, _ in blocks:
            tail[d - 2] = tail[d - 2] + a
        return blocks
    # several leading eigenvalues: pass to the eigenbasis and eliminate
    # the off-diagonal blocks one homogeneous gauge degree at a time
    basis = Matrix.hstack([b for _, b in eig])
    dims = [b.cols for _, b in eig]
    evs = [ev for ev, _ in eig]
    cur = [solve(basis, c * basis) for c in coeffs]
    starts = [sum(dims[:i]) for i in range(len(dims) + 1)]
    for j in range(1, d):
        target = cur[d - j - 1]
        off = _offdiag(target, dims)
        if not off.is_zero():
            x_rows = [[gr(0)] * n for _ in range(n)]
            for r in range(len(dims)):
                for s in range(len(dims)):
                    if r == s:
                        continue
                    denom = evs[r] - evs[s]
                    for i in range(starts[r], starts[r + 1]):
                        for jj in range(starts[s], starts[s + 1]):
                            x_rows[i][jj] = off[i, jj] / denom
            x = Matrix.from_rows(x_rows)
            gauge_coeffs = [Matrix.identity(n)] + [Matrix.zeros(n, n)] * (j - 1) + [x]
            g = TruncatedGauge(gr(0), tuple(gauge_coeffs))
            new_part = gauge_coadjoint(g, PrincipalPart(gr(0), tuple(cur)))
            cur = list(new_part.coefficients)
    for c in cur:
        assert _offdiag(c, dims).is_zero(), "off-diagonal elimination failed"
    out = []
    for bi in range(len(dims)):
        lo, hi = starts[bi], starts[bi + 1]
        sub = [c.submatrix(lo, hi, lo, hi) for c in cur]
        out.extend(_split(sub, k))
    return out


def compute_normal_form(part: PrincipalPart) -> NormalForm:
    """Normal form of one principal part.

    Parts of pole order <= 1 are already normal: single zero spectrum with
    the residue as its matrix.  Otherwise the leading coefficient must be
    semisimple with eigenvalues in Q(i) (NoNormalForm / IrrationalSpectrum
    when not), and likewise recursively on the diagonal blocks.
    """
    k = len(part.coefficients)
    blocks = _split(list(part.coefficients), k)
    merged = {}
    for tail, gamma in blocks:
        key = tuple(x.sort_key() for x in tail)
        if key in merged:
            prev_tail, prev_gamma = merged[key]
            merged[key] = (prev_tail, Matrix.block_diagonal([prev_gamma, gamma]))
        else:
            merged[key] = (tail, gamma)
    return NormalForm(
        k,
        tuple(SpectralBlock(tuple(tail), gamma) for tail, gamma in merged.values()),
    )


# ---------------------------------------------------------------------------
# Stabilizer dimension
# ---------------------------------------------------------------------------


def stabilizer_dim_linear(part: PrincipalPart) -> int:
    """dim of {xi in g_k(V) : ad-coadjoint action of xi kills the part},
    by exact linear solve; works for any part."""
    k = len(part.coefficients)
    n = part.dimension
    unknowns = k * n * n

    rows = [[gr(0)] * unknowns for _ in range(k * n * n)]
    # condition m: sum_{i=0}^{k-m} [xi_i, A_{m+i}] = 0
    for m in range(1, k + 1):
        for i in range(0, k - m + 1):
            a = part.coefficients[m + i - 1]
            if a.is_zero():
                continue
            base_eq = (m - 1) * n * n
            base_un = i * n * n
            for r in range(n):
                for c in range(n):
                    row = rows[base_eq + r * n + c]
                    for l in range(n):
                        row[base_un + r * n + l] = row[base_un + r * n + l] + a[l, c]
                        row[base_un + l * n + c] = row[base_un + l * n + c] - a[r, l]
    return len(kernel_basis(Matrix.from_rows(rows)))


def _tail_groups(nf: NormalForm, i: int) -> dict:
    """Group spectra by the coefficients (lambda_i, ..., lambda_k)."""
    groups: dict[tuple, int] = {}
    for b in nf.blocks:
        key = tuple(x.sort_key() for x in b.tail[i - 2 :])
        groups[key] = groups.get(key, 0) + b.dim
    return groups


def jordan_data(m: Matrix) -> tuple:
    """Sorted ((eigenvalue, jordan partition), ...); the conjugacy class."""
    if m.rows == 0:
        return ()
    out = []
    n = m.rows
    for ev, mult in char_eigenvalues(m):
        power = (m - ev * Matrix.identity(n)) ** n
        basis = Matrix.hstack(kernel_basis(power))
        restricted = solve(basis, (m - ev * Matrix.identity(n)) * basis)
        out.append((ev, nilpotent_partition(restricted)))
    return tuple(sorted(out, key=lambda t: t[0].sort_key()))


def _conjugate_partition(p: Sequence[int]) -> list[int]:
    if not p:
        return []
    return [sum(1 for x in p if x >= j) for j in range(1, max(p) + 1)]


def stabilizer_dim_formula(nf: NormalForm) -> int:
    """Centralizer dimension from the normal form's eigenspace data."""
    total = 0
    for b in nf.blocks:
        for _, partition in jordan_data(b.gamma):
            total += sum(c * c for c in _conjugate_partition(partition))
    for i in range(2, nf.k + 1):
        for _, dim in _tail_groups(nf, i).items():
            total += dim * dim
    return total


def stabilizer_dim(part: PrincipalPart) -> int:
    """Stabilizer dimension; when a normal form is computable the formula
    mode is evaluated too and the two are asserted equal."""
    linear = stabilizer_dim_linear(part)
    try:
        nf = compute_normal_form(part)
    except NoNormalForm:
        return linear
    formula = stabilizer_dim_formula(nf)
    assert linear == formula, f"stabilizer modes disagree: {linear} vs {formula}"
    return linear


# ---------------------------------------------------------------------------
# Kernel dimensions of the Toeplitz pencil and the Katz maximizer
# ---------------------------------------------------------------------------


def _pad_alpha(alpha: PrincipalPart, k: int) -> list[GaussianRational]:
    from .systems import scalar_coefficients

    coeffs = scalar_coefficients(alpha)
    if len(coeffs) > k and any(not c.is_zero() for c in coeffs[k:]):
        raise DimensionMismatch("scalar part exceeds the truncation order")
    coeffs = coeffs[:k] + [gr(0)] * max(0, k - len(coeffs))
    return coeffs


def hat_kernel_dim(part: PrincipalPart, alpha: PrincipalPart) -> int:
    """dim Ker(A-hat - alpha-hat) computed directly on the block-Toeplitz
    matrices; gauge-invariant."""
    k = len(part.coefficients)
    n = part.dimension
    avals = _pad_alpha(alpha, k)
    shifted = [part.coefficients[j] - avals[j] * Matrix.identity(n) for j in range(k)]
    m = hat_matrix(shifted)
    return m.cols - rank(m)


def hat_kernel_dim_formula(nf: NormalForm, alpha_coeffs: Sequence[GaussianRational]) -> int:
    """Sum over levels i of the simultaneous eigenspace dimensions
    dim V(alpha_i, ..., alpha_k) of the normal form coefficients."""
    k = nf.k
    total = 0
    for i in range(2, k + 1):
        for b in nf.blocks:
            if all(b.tail[j - 2] == alpha_coeffs[j - 1] for j in range(i, k + 1)):
                total += b.dim
    # level 1: genuine eigenspace of the residue inside the matching block
    for b in nf.blocks:
        if all(b.tail[j - 2] == alpha_coeffs[j - 1] for j in range(2, k + 1)):
            shifted = b.gamma - alpha_coeffs[0] * Matrix.identity(b.dim)
            total += len(kernel_basis(shifted))
    return total


def select_alpha(part: PrincipalPart) -> PrincipalPart:
    """A scalar part maximizing dim Ker(A-hat - alpha-hat).

    Candidates are every spectrum tail, alone and extended by each
    eigenvalue of its residue matrix; ties break to the lexicographically
    smallest coefficient vector (highest-order coefficient first, ordered
    by (re, im))."""
    nf = compute_normal_form(part)
    k = len(part.coefficients)
    candidates = {}
    for b in nf.blocks:
        base = [gr(0)] + list(b.tail)  # index j-1 <-> alpha_j
        candidates[tuple(x.sort_key() for x in base)] = list(base)
        for ev, _ in char_eigenvalues(b.gamma):
            cand = [ev] + list(b.tail)
            candidates[tuple(x.sort_key() for x in cand)] = cand
    best = None
    for _, coeffs in sorted(candidates.items()):
        cand_part = PrincipalPart(part.point, tuple(Matrix.from_rows([[c]]) for c in coeffs))
        dim = hat_kernel_dim(part, cand_part)
        key = tuple(x.sort_key() for x in reversed(coeffs))
        if best is None or dim > best[0] or (dim == best[0] and key < best[1]):
            best = (dim, key, cand_part)
    return best[2]


# ---------------------------------------------------------------------------
# Spectra prediction under convolution
# ---------------------------------------------------------------------------


def jordan_matrix(blocks: Sequence[tuple[GaussianRational, int]]) -> Matrix:
    """Block-diagonal Jordan matrix from (eigenvalue, size) pairs."""
    mats = []
    for ev, size in blocks:
        rows = [
            [ev if j == i else (gr(1) if j == i + 1 else gr(0)) for j in range(size)]
            for i in range(size)
        ]
        mats.append(Matrix.from_rows(rows))
    return Matrix.block_diagonal(mats) if mats else Matrix.zeros(0, 0)


def predicted_spectra(
    nf: NormalForm, alpha_residue: GaussianRational, new_rank: int
) -> NormalForm:
    """Normal form of the convolution output predicted from the input's.

    Nonzero spectra carry over with their residues shifted by
    -d_lambda * alpha_residue; the zero-spectrum block is rebuilt from the
    rank identities of the shifted residue pencil, as a Jordan
    representative of the determined conjugacy class.
    """
    beta = gr(alpha_residue)
    carried = []
    carried_dim = 0
    zero_block: Optional[SpectralBlock] = None
    for b in nf.blocks:
        if b.is_zero_spectrum():
            zero_block = b
        else:
            d = b.pole_order()
            carried.append(
                SpectralBlock(b.tail, b.gamma - (gr(d) * beta) * Matrix.identity(b.dim))
            )
            carried_dim += b.dim
    if new_rank < carried_dim:
        raise InconsistentRank(
            f"output rank {new_rank} is below the carried dimension {carried_dim}"
        )
    v0 = new_rank - carried_dim
    gamma0 = zero_block.gamma if zero_block is not None else Matrix.zeros(0, 0)
    pi, iota = quotient_projection(gamma0)
    w0 = pi.rows
    m = pi * gamma0 * iota - beta * Matrix.identity(w0)
    if v0 < w0:
        raise InconsistentRank("output rank cannot accommodate the residue pencil")
    jordan_blocks: list[tuple[GaussianRational, int]] = []
    zero_count = 0
    for ev, partition in jordan_data(m):
        if ev.is_zero():
            for size in partition:
                jordan_blocks.append((gr(0), size + 1))
                zero_count += 1
        else:
            for size in partition:
                jordan_blocks.append((ev, size))
    extra_ones = v0 - w0 - zero_count
    if extra_ones < 0:
        raise InconsistentRank("rank identities are infeasible at the requested rank")
    jordan_blocks.extend([(gr(0), 1)] * extra_ones)
    blocks = list(carried)
    if v0 > 0:
        blocks.append(
            SpectralBlock(tuple([gr(0)] * max(nf.k - 1, 0)), jordan_matrix(jordan_blocks))
        )
    return NormalForm(nf.k, tuple(blocks))


def normal_forms_conjugate(a: NormalForm, b: NormalForm) -> bool:
    """Same spectra (as trimmed tails), same dimensions, conjugate
    residue matrices."""
    da = {blk.tail_key(): (blk.dim, jordan_data(blk.gamma)) for blk in a.blocks}
    db = {blk.tail_key(): (blk.dim, jordan_data(blk.gamma)) for blk in b.blocks}
    return da == db


@dataclass(frozen=True)
class SpectralSummary:
    """Per spectrum: the pole order d and the residue's Jordan data."""

    entries: tuple[tuple[tuple, int, int, tuple], ...]
    # (tail key, dim, d_lambda, jordan data of gamma)


def summarize(nf: NormalForm) -> SpectralSummary:
    return SpectralSummary(
        tuple(
            (b.tail_key(), b.dim, b.pole_order(), jordan_data(b.gamma)) for b in nf.blocks
        )
    )
