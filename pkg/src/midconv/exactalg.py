"""Exact linear algebra over the Gaussian rationals Q(i).

Scalars are pairs of ``fractions.Fraction`` values; matrices are dense and
immutable.  Everything downstream (gauge actions, canonical data, duality,
rigidity) reduces to the primitives here: reduced row echelon form with a
fixed pivot rule, exact linear solves, eigenvalue extraction inside Q(i),
and nilpotent/commutant structure.  No floating point is used anywhere.

The pivot rule (first nonzero entry in column order) is part of the
contract: repeated runs produce byte-identical bases.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import DimensionMismatch, IrrationalSpectrum, NotNilpotent

__all__ = [
    "GaussianRational",
    "Matrix",
    "gr",
    "rref",
    "rank",
    "kernel_basis",
    "image_basis",
    "quotient_projection",
    "solve",
    "solve_linear",
    "invert",
    "restrict_to_column_span",
    "char_poly",
    "char_eigenvalues",
    "nilpotent_partition",
    "nilpotency_index",
    "generalized_eigendecomposition",
    "centralizer_basis",
]


class GaussianRational:
    """A number a + b*i with rational a, b, always kept reduced.

    Stored as one integer triple (p + q*i)/r with r > 0 and
    gcd(p, q, r) = 1, so every arithmetic step pays a single gcd.
    """

    __slots__ = ("p", "q", "r")

    def __init__(self, re=0, im=0):
        if type(re) is int and type(im) is int:
            p, q, r = re, im, 1
        else:
            re = re if type(re) is Fraction else Fraction(re)
            im = im if type(im) is Fraction else Fraction(im)
            r = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
            p = re.numerator * (r // re.denominator)
            q = im.numerator * (r // im.denominator)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "r", r)

    @staticmethod
    def _make(p: int, q: int, r: int) -> "GaussianRational":
        if r != 1:
            if r < 0:
                p, q, r = -p, -q, -r
            g = gcd(p, q, r)
            if g > 1:
                p //= g
                q //= g
                r //= g
        self = object.__new__(GaussianRational)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "r", r)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @property
    def re(self) -> Fraction:
        return Fraction(self.p, self.r)

    @property
    def im(self) -> Fraction:
        return Fraction(self.q, self.r)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if type(other) is not GaussianRational:
            other = _coerce_or_none(other)
            if other is None:
                return NotImplemented
        r1, r2 = self.r, other.r
        if r1 == r2:
            return GaussianRational._make(self.p + other.p, self.q + other.q, r1)
        return GaussianRational._make(
            self.p * r2 + other.p * r1, self.q * r2 + other.q * r1, r1 * r2
        )

    __radd__ = __add__

    def __sub__(self, other):
        if type(other) is not GaussianRational:
            other = _coerce_or_none(other)
            if other is None:
                return NotImplemented
        r1, r2 = self.r, other.r
        if r1 == r2:
            return GaussianRational._make(self.p - other.p, self.q - other.q, r1)
        return GaussianRational._make(
            self.p * r2 - other.p * r1, self.q * r2 - other.q * r1, r1 * r2
        )

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if type(other) is not GaussianRational:
            other = _coerce_or_none(other)
            if other is None:
                return NotImplemented
        if self.q == 0 and other.q == 0:
            return GaussianRational._make(self.p * other.p, 0, self.r * other.r)
        return GaussianRational._make(
            self.p * other.p - self.q * other.q,
            self.p * other.q + self.q * other.p,
            self.r * other.r,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        n = other.p * other.p + other.q * other.q
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational._make(
            (self.p * other.p + self.q * other.q) * other.r,
            (self.q * other.p - self.p * other.q) * other.r,
            self.r * n,
        )

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __neg__(self):
        out = object.__new__(GaussianRational)
        object.__setattr__(out, "p", -self.p)
        object.__setattr__(out, "q", -self.q)
        object.__setattr__(out, "r", self.r)
        return out

    def conjugate(self) -> "GaussianRational":
        out = object.__new__(GaussianRational)
        object.__setattr__(out, "p", self.p)
        object.__setattr__(out, "q", -self.q)
        object.__setattr__(out, "r", self.r)
        return out

    def norm(self) -> Fraction:
        return Fraction(self.p * self.p + self.q * self.q, self.r * self.r)

    def inverse(self) -> "GaussianRational":
        n = self.p * self.p + self.q * self.q
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational._make(self.p * self.r, -self.q * self.r, n)

    # -- structure --------------------------------------------------------

    def is_zero(self) -> bool:
        return self.p == 0 and self.q == 0

    def sort_key(self):
        return (Fraction(self.p, self.r), Fraction(self.q, self.r))

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.p == other.p and self.q == other.q and self.r == other.r
        if isinstance(other, int):
            return self.q == 0 and self.r == 1 and self.p == other
        if isinstance(other, Fraction):
            return self.q == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.q, self.r))

    def __repr__(self):
        if self.q == 0:
            return str(self.re)
        if self.p == 0:
            return f"{self.im}i"
        sign = "+" if self.q > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


def gr(re=0, im=0) -> GaussianRational:
    """Shorthand constructor accepting ints, Fractions or 'p/q' strings."""
    if isinstance(re, GaussianRational):
        return re
    if isinstance(re, str):
        re = Fraction(re)
    if isinstance(im, str):
        im = Fraction(im)
    return GaussianRational(re, im)


def _coerce_or_none(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(x)
    return None


def _coerce(x) -> GaussianRational:
    c = _coerce_or_none(x)
    if c is None:
        raise TypeError(f"cannot coerce {type(x).__name__} to GaussianRational")
    return c


_ZERO = GaussianRational(0)
_ONE = GaussianRational(1)


class Matrix:
    """Dense immutable matrix over GaussianRational, row-major storage."""

    __slots__ = ("rows", "cols", "_e")

    def __init__(self, rows: int, cols: int, entries: Sequence[GaussianRational]):
        if len(entries) != rows * cols:
            raise DimensionMismatch(f"{rows}x{cols} matrix needs {rows * cols} entries")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "_e", tuple(entries))

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    # -- constructors -----------------------------------------------------

    @staticmethod
    def from_rows(rows: Sequence[Sequence]) -> "Matrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        ents = []
        for row in rows:
            if len(row) != c:
                raise DimensionMismatch("ragged rows")
            ents.extend(_coerce(x) if not isinstance(x, GaussianRational) else x for x in row)
        return Matrix(r, c, ents)

    @staticmethod
    def zeros(rows: int, cols: int) -> "Matrix":
        return Matrix(rows, cols, [_ZERO] * (rows * cols))

    @staticmethod
    def identity(n: int) -> "Matrix":
        ents = [_ZERO] * (n * n)
        for i in range(n):
            ents[i * n + i] = _ONE
        return Matrix(n, n, ents)

    @staticmethod
    def diagonal(values: Sequence) -> "Matrix":
        n = len(values)
        ents = [_ZERO] * (n * n)
        for i, v in enumerate(values):
            ents[i * n + i] = _coerce(v)
        return Matrix(n, n, ents)

    @staticmethod
    def column(values: Sequence) -> "Matrix":
        return Matrix(len(values), 1, [_coerce(v) for v in values])

    @staticmethod
    def hstack(mats: Sequence["Matrix"]) -> "Matrix":
        if not mats:
            return Matrix.zeros(0, 0)
        r = mats[0].rows
        if any(m.rows != r for m in mats):
            raise DimensionMismatch("hstack row mismatch")
        ents = []
        for i in range(r):
            for m in mats:
                ents.extend(m._e[i * m.cols : (i + 1) * m.cols])
        return Matrix(r, sum(m.cols for m in mats), ents)

    @staticmethod
    def vstack(mats: Sequence["Matrix"]) -> "Matrix":
        if not mats:
            return Matrix.zeros(0, 0)
        c = mats[0].cols
        if any(m.cols != c for m in mats):
            raise DimensionMismatch("vstack column mismatch")
        ents = []
        for m in mats:
            ents.extend(m._e)
        return Matrix(sum(m.rows for m in mats), c, ents)

    @staticmethod
    def block_diagonal(mats: Sequence["Matrix"]) -> "Matrix":
        r = sum(m.rows for m in mats)
        c = sum(m.cols for m in mats)
        out = [[_ZERO] * c for _ in range(r)]
        i0 = j0 = 0
        for m in mats:
            for i in range(m.rows):
                for j in range(m.cols):
                    out[i0 + i][j0 + j] = m[i, j]
            i0 += m.rows
            j0 += m.cols
        return Matrix.from_rows(out) if r and c else Matrix(r, c, [_ZERO] * (r * c))

    # -- access -----------------------------------------------------------

    def __getitem__(self, key) -> GaussianRational:
        i, j = key
        return self._e[i * self.cols + j]

    def row_list(self, i: int):
        return list(self._e[i * self.cols : (i + 1) * self.cols])

    def col(self, j: int) -> "Matrix":
        return Matrix(self.rows, 1, [self._e[i * self.cols + j] for i in range(self.rows)])

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        ents = []
        for i in range(r0, r1):
            ents.extend(self._e[i * self.cols + c0 : i * self.cols + c1])
        return Matrix(r1 - r0, c1 - c0, ents)

    def entries(self):
        return self._e

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.rows, self.cols, [a + b for a, b in zip(self._e, other._e)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.rows, self.cols, [a - b for a, b in zip(self._e, other._e)])

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, [-a for a in self._e])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise DimensionMismatch(
                    f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
                )
            n, m, p = self.rows, self.cols, other.cols
            ents = [_ZERO] * (n * p)
            for i in range(n):
                base = i * m
                for k in range(m):
                    a = self._e[base + k]
                    if not (a.p or a.q):
                        continue
                    obase = k * p
                    tbase = i * p
                    for j in range(p):
                        b = other._e[obase + j]
                        if b.p or b.q:
                            ents[tbase + j] = ents[tbase + j] + a * b
            return Matrix(n, p, ents)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, s) -> "Matrix":
        s = _coerce(s)
        return Matrix(self.rows, self.cols, [s * a for a in self._e])

    def __pow__(self, k: int) -> "Matrix":
        if self.rows != self.cols:
            raise DimensionMismatch("power of non-square matrix")
        result = Matrix.identity(self.rows)
        for _ in range(k):
            result = result * self
        return result

    def transpose(self) -> "Matrix":
        ents = [self._e[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)]
        return Matrix(self.cols, self.rows, ents)

    def trace(self) -> GaussianRational:
        if self.rows != self.cols:
            raise DimensionMismatch("trace of non-square matrix")
        t = _ZERO
        for i in range(self.rows):
            t = t + self._e[i * self.cols + i]
        return t

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self._e)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def scalar(self) -> GaussianRational:
        if self.rows != 1 or self.cols != 1:
            raise DimensionMismatch("scalar() needs a 1x1 matrix")
        return self._e[0]

    def _same_shape(self, other: "Matrix"):
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionMismatch(
                f"shape mismatch: {self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and self._e == other._e

    def __hash__(self):
        return hash((self.rows, self.cols, self._e))

    def __repr__(self):
        rows = ["[" + ", ".join(repr(x) for x in self.row_list(i)) + "]" for i in range(self.rows)]
        return "Matrix([" + ", ".join(rows) + "])"


# ---------------------------------------------------------------------------
# Row reduction and solving
# ---------------------------------------------------------------------------


def _row_reduce(m: Matrix):
    """Reduced row echelon form; returns (rank, pivot columns, row grid).

    Rows at or below the working row are zero left of the current column,
    so elimination only touches columns from the pivot onward.
    """
    grid = [m.row_list(i) for i in range(m.rows)]
    cols = m.cols
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot_row = None
        for i in range(r, m.rows):
            e = grid[i][c]
            if e.p or e.q:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        grid[r], grid[pivot_row] = grid[pivot_row], grid[r]
        row_r = grid[r]
        inv = row_r[c].inverse()
        for j in range(c, cols):
            e = row_r[j]
            if e.p or e.q:
                row_r[j] = inv * e
        for i in range(m.rows):
            if i == r:
                continue
            f = grid[i][c]
            if f.p or f.q:
                row_i = grid[i]
                for j in range(c, cols):
                    b = row_r[j]
                    if b.p or b.q:
                        row_i[j] = row_i[j] - f * b
        pivots.append(c)
        r += 1
        if r == m.rows:
            break
    return r, pivots, grid


def rank(m: Matrix) -> int:
    return _row_reduce(m)[0]


def kernel_basis(m: Matrix) -> list[Matrix]:
    """Echelon-normalized basis of Ker m (leading entry of each vector is 1)."""
    r, pivots, grid = _row_reduce(m)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        vec = [_ZERO] * m.cols
        vec[free] = _ONE
        for row, pc in enumerate(pivots):
            vec[pc] = -grid[row][free]
        lead = next(x for x in vec if not x.is_zero())
        if lead != _ONE:
            inv = lead.inverse()
            vec = [inv * x for x in vec]
        basis.append(Matrix.column(vec))
    return basis


def image_basis(m: Matrix) -> list[Matrix]:
    """Echelon basis of the column space, as column vectors."""
    r, _, grid = _row_reduce(m.transpose())
    return [Matrix.column(grid[i]) for i in range(r)]


def rref(m: Matrix):
    """Row reduction summary: (rank, kernel basis, image basis)."""
    return rank(m), kernel_basis(m), image_basis(m)


def quotient_projection(m: Matrix):
    """Coordinates on the quotient (domain of m) / Ker m.

    Returns (pi, iota) with pi: C^cols -> C^r the projection along Ker m
    onto the span of the pivot coordinates, and iota: C^r -> C^cols the
    section embedding, so that pi*iota = I and m*iota*pi = m.  The pivot
    positions come from the reduced echelon form, so the result is
    deterministic.
    """
    r, pivots, grid = _row_reduce(m)
    pi = Matrix(r, m.cols, [x for i in range(r) for x in grid[i]])
    ents = [_ZERO] * (m.cols * r)
    for j, pc in enumerate(pivots):
        ents[pc * r + j] = _ONE
    iota = Matrix(m.cols, r, ents)
    return pi, iota


def solve(a: Matrix, b: Matrix):
    """A particular solution X of a*X = b (free variables 0), or None."""
    if a.rows != b.rows:
        raise DimensionMismatch("solve: row counts differ")
    aug = Matrix.hstack([a, b])
    r, pivots, grid = _row_reduce(aug)
    for pc in pivots:
        if pc >= a.cols:
            return None
    ents = [_ZERO] * (a.cols * b.cols)
    for row, pc in enumerate(pivots):
        for j in range(b.cols):
            ents[pc * b.cols + j] = grid[row][a.cols + j]
    return Matrix(a.cols, b.cols, ents)


def solve_linear(a: Matrix, b: Matrix):
    """Solve a*x = b for a single right-hand side.

    Returns (particular, kernel basis) or None when unsolvable.
    """
    x = solve(a, b)
    if x is None:
        return None
    return x, kernel_basis(a)


def invert(m: Matrix):
    """Exact inverse, or None if singular."""
    if not m.is_square():
        raise DimensionMismatch("inverse of non-square matrix")
    x = solve(m, Matrix.identity(m.rows))
    if x is None or rank(m) != m.rows:
        return None
    return x


# ---------------------------------------------------------------------------
# Characteristic polynomial and Q(i) eigenvalues
# ---------------------------------------------------------------------------


def char_poly(m: Matrix) -> list[GaussianRational]:
    """Coefficients c_0..c_n of det(x*I - m), ascending, via Faddeev-LeVerrier."""
    if not m.is_square():
        raise DimensionMismatch("characteristic polynomial of non-square matrix")
    n = m.rows
    coeffs = [_ZERO] * (n + 1)
    coeffs[n] = _ONE
    mk = m
    for k in range(1, n + 1):
        ck = -(mk.trace() / gr(k))
        coeffs[n - k] = ck
        if k < n:
            mk = m * (mk + ck * Matrix.identity(n))
    return coeffs


def _poly_eval(coeffs: Sequence[GaussianRational], x: GaussianRational) -> GaussianRational:
    acc = _ZERO
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_deflate(coeffs, root):
    """Divide by (x - root); assumes root is exact."""
    out = [_ZERO] * (len(coeffs) - 1)
    carry = coeffs[-1]
    for k in range(len(coeffs) - 2, -1, -1):
        out[k] = carry
        carry = coeffs[k] + carry * root
    return out


# integer factorization support (trial division + deterministic
# Miller-Rabin + Brent rho), enough for desk-scale norms

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                k += m
                g = gcd(q, n)
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"failed to factor {n}")  # pragma: no cover


def _factor_int(n: int) -> dict[int, int]:
    fac: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            fac[p] = fac.get(p, 0) + 1
            n //= p
    d = 7
    inc = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while d * d <= n and d < 100000:
        while n % d == 0:
            fac[d] = fac.get(d, 0) + 1
            n //= d
        d += inc[i]
        i = (i + 1) % 8
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_prime(m):
            fac[m] = fac.get(m, 0) + 1
            continue
        g = _brent_rho(m)
        stack.append(g)
        stack.append(m // g)
    return fac


def _g_mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _g_divmod(a, b):
    # rounded Gaussian-integer division
    n = b[0] * b[0] + b[1] * b[1]
    qr_num = a[0] * b[0] + a[1] * b[1]
    qi_num = a[1] * b[0] - a[0] * b[1]
    q = ((2 * qr_num + n) // (2 * n), (2 * qi_num + n) // (2 * n))
    r = (a[0] - (q[0] * b[0] - q[1] * b[1]), a[1] - (q[0] * b[1] + q[1] * b[0]))
    return q, r


def _g_gcd(a, b):
    while b != (0, 0):
        _, r = _g_divmod(a, b)
        a, b = b, r
    return a


def _g_exact_div(a, b):
    q, r = _g_divmod(a, b)
    return q if r == (0, 0) else None


def _sqrt_minus_one_mod(p: int) -> int:
    for a in range(2, p):
        t = pow(a, (p - 1) // 4, p)
        if t * t % p == p - 1:
            return t
    raise ArithmeticError(f"no sqrt(-1) mod {p}")  # pragma: no cover


def _gaussian_prime_factors(g):
    """Gaussian prime factorization of g (up to units) as [(prime, exponent)]."""
    n = g[0] * g[0] + g[1] * g[1]
    out = []
    for p in sorted(_factor_int(n)):
        if p == 2:
            cands = [(1, 1)]
        elif p % 4 == 3:
            cands = [(p, 0)]
        else:
            c = _sqrt_minus_one_mod(p)
            pi = _g_gcd((p, 0), (c, 1))
            cands = [pi, (pi[0], -pi[1])]
        for pi in cands:
            e = 0
            h = g
            while True:
                q = _g_exact_div(h, pi)
                if q is None:
                    break
                h = q
                e += 1
            if e:
                out.append((pi, e))
                g = h
    return out


def _gaussian_divisors(g):
    divs = [(1, 0)]
    for pi, e in _gaussian_prime_factors(g):
        divs = [_g_mul(d, pw) for d in divs for pw in _g_powers(pi, e)]
    return divs


def _g_powers(pi, e):
    out = [(1, 0)]
    cur = (1, 0)
    for _ in range(e):
        cur = _g_mul(cur, pi)
        out.append(cur)
    return out


_UNITS = ((1, 0), (0, 1), (-1, 0), (0, -1))


def _qi_roots(coeffs: list[GaussianRational]) -> dict[GaussianRational, int]:
    """All Q(i) roots with multiplicity of a monic polynomial over Q(i).

    Raises IrrationalSpectrum if the polynomial does not split over Q(i).
    Strategy: strip zero roots, rescale x -> x/L to make an integral monic
    polynomial, and run the rational root test in Z[i] on its constant term.
    """
    work = list(coeffs)
    roots: dict[GaussianRational, int] = {}
    zero = gr(0)
    while len(work) > 1 and work[0].is_zero():
        roots[zero] = roots.get(zero, 0) + 1
        work.pop(0)
    deg = len(work) - 1
    if deg == 0:
        return roots
    denom = 1
    for c in work:
        denom = denom * c.re.denominator // gcd(denom, c.re.denominator)
        denom = denom * c.im.denominator // gcd(denom, c.im.denominator)
    # y = denom*x turns the polynomial monic with Z[i] coefficients; the
    # constant term of that transform bounds the candidate roots.
    c0 = work[0] * gr(denom**deg) if denom != 1 else work[0]
    c0_int = (int(c0.re), int(c0.im))
    candidates = set()
    for d in _gaussian_divisors(c0_int):
        for u in _UNITS:
            y = _g_mul(d, u)
            candidates.add(GaussianRational(Fraction(y[0], denom), Fraction(y[1], denom)))
    for cand in sorted(candidates, key=GaussianRational.sort_key):
        while len(work) > 1 and _poly_eval(work, cand).is_zero():
            roots[cand] = roots.get(cand, 0) + 1
            work = _poly_deflate(work, cand)
    if len(work) > 1:
        raise IrrationalSpectrum(
            "characteristic polynomial has a factor with no root in Q(i)"
        )
    return roots


def char_eigenvalues(m: Matrix) -> list[tuple[GaussianRational, int]]:
    """Eigenvalues in Q(i) with algebraic multiplicities, sorted.

    Raises IrrationalSpectrum when the spectrum leaves Q(i).
    """
    roots = _qi_roots(char_poly(m))
    return sorted(roots.items(), key=lambda t: t[0].sort_key())


# ---------------------------------------------------------------------------
# Nilpotent structure, eigenspaces, commutants
# ---------------------------------------------------------------------------


def nilpotency_index(m: Matrix) -> int:
    """Least k >= 1 with m^k = 0 (0 for empty matrices)."""
    if not m.is_square():
        raise DimensionMismatch("nilpotency of non-square matrix")
    if m.rows == 0:
        return 0
    power = m
    for k in range(1, m.rows + 1):
        if power.is_zero():
            return k
        power = power * m
    raise NotNilpotent("matrix is not nilpotent")


def nilpotent_partition(n: Matrix) -> tuple[int, ...]:
    """Jordan block sizes of a nilpotent matrix, descending.

    Recovered from ranks of powers: the number of blocks of size >= j is
    rank n^(j-1) - rank n^j.
    """
    if not n.is_square():
        raise DimensionMismatch("partition of non-square matrix")
    dim = n.rows
    if dim == 0:
        return ()
    ranks = [dim]
    power = n
    while not power.is_zero():
        ranks.append(rank(power))
        if len(ranks) > dim + 1:
            raise NotNilpotent("matrix is not nilpotent")
        power = power * n
    ranks.append(0)
    at_least = [ranks[j - 1] - ranks[j] for j in range(1, len(ranks))]
    parts = []
    for j, count in enumerate(at_least, start=1):
        exactly = count - (at_least[j] if j < len(at_least) else 0)
        parts.extend([j] * exactly)
    return tuple(sorted(parts, reverse=True))


def generalized_eigendecomposition(m: Matrix) -> list[tuple[GaussianRational, Matrix]]:
    """Pairs (eigenvalue, basis of Ker (m - ev)^dim as matrix columns).

    The bases concatenate to a full basis of the space; order is the sort
    order of the eigenvalues.
    """
    eigs = char_eigenvalues(m)
    n = m.rows
    out = []
    total = 0
    for ev, _ in eigs:
        power = (m - ev * Matrix.identity(n)) ** n
        basis = kernel_basis(power)
        total += len(basis)
        out.append((ev, Matrix.hstack(basis)))
    if total != n:  # pragma: no cover - guarded by char_eigenvalues
        raise IrrationalSpectrum("generalized eigenspaces do not fill the space")
    return out


def centralizer_basis(n: Matrix) -> list[Matrix]:
    """Basis of {X : X n = n X}, solved exactly as a kernel problem."""
    if not n.is_square():
        raise DimensionMismatch("centralizer of non-square matrix")
    d = n.rows
    if d == 0:
        return []
    rows = []
    for i in range(d):
        for j in range(d):
            row = [_ZERO] * (d * d)
            for b in range(d):
                row[i * d + b] = row[i * d + b] + n[b, j]
            for a in range(d):
                row[a * d + j] = row[a * d + j] - n[i, a]
            rows.append(row)
    basis = kernel_basis(Matrix.from_rows(rows))
    return [Matrix(d, d, [v[k, 0] for k in range(d * d)]) for v in basis]


def restrict_to_column_span(m: Matrix, basis: Matrix) -> Matrix:
    """Matrix of m on the invariant subspace spanned by the columns of basis."""
    x = solve(basis, m * basis)
    if x is None:
        raise DimensionMismatch("subspace is not invariant under the map")
    return x
