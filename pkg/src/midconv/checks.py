"""Seeded random generators and the bundled invariant suite.

The `check` CLI subcommand runs every module's stated invariants against
a given system, using deterministic randomness: same seed and trial
count means byte-identical reports.  Tests reuse both the generators and
the individual check functions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .datum import (
    canonical,
    datum_isomorphism,
    gk_action,
    is_stable,
    moment_mu,
    phi,
)
from .errors import DomainError, Exceptional
from .exactalg import (
    GaussianRational,
    Matrix,
    gr,
    kernel_basis,
    nilpotency_index,
    rank,
)
from .functors import hd_double
from .normalform import (
    compute_normal_form,
    hat_kernel_dim,
    hat_kernel_dim_formula,
    normal_forms_conjugate,
    select_alpha,
    stabilizer_dim_formula,
    stabilizer_dim_linear,
)
from .systems import (
    PrincipalPart,
    System,
    TruncatedGauge,
    add_scalar,
    conjugate_system,
    gauge_coadjoint,
    gauge_compose,
    is_irreducible,
    order,
    residue_at_infinity,
    scalar_system,
)

__all__ = [
    "CheckResult",
    "run_checks",
    "random_matrix",
    "random_invertible",
    "random_gauge",
    "random_system",
]


def random_scalar(rng: random.Random, bound=3) -> GaussianRational:
    return gr(rng.randint(-bound, bound))


def random_matrix(rng: random.Random, rows: int, cols=None, bound=2) -> Matrix:
    cols = rows if cols is None else cols
    return Matrix.from_rows(
        [[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)]
    )


def random_invertible(rng: random.Random, n: int) -> Matrix:
    while True:
        m = random_matrix(rng, n)
        if rank(m) == n:
            return m


def random_gauge(rng: random.Random, point, n: int, k: int) -> TruncatedGauge:
    coeffs = [random_invertible(rng, n)] + [random_matrix(rng, n) for _ in range(k - 1)]
    return TruncatedGauge(point, tuple(coeffs))


def random_system(rng: random.Random, max_dim=3, max_poles=3, max_order=3, constant="zero") -> System:
    n = rng.randint(1, max_dim)
    npoles = rng.randint(1, max_poles)
    points = rng.sample([0, 1, -1, 2, -2], npoles)
    parts = []
    for pt in points:
        k = rng.randint(1, max_order)
        parts.append(PrincipalPart(gr(pt), tuple(random_matrix(rng, n) for _ in range(k))))
    if constant == "zero":
        const = Matrix.zeros(n, n)
    elif constant == "diagonal":
        const = Matrix.diagonal([random_scalar(rng) for _ in range(n)])
    else:
        const = random_matrix(rng, n)
    return System(n, const, tuple(parts))


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    trials: int
    detail: str = ""


def _gauged_parts(rng, sys):
    out = []
    for part in sys.parts:
        g = random_gauge(rng, part.point, sys.dimension, len(part.coefficients))
        out.append((g, part))
    return out


def run_checks(sys: System, seed: int, trials: int) -> list[CheckResult]:
    rng = random.Random(seed)
    results: list[CheckResult] = []

    def record(name, fn):
        count = 0
        try:
            for _ in range(trials):
                fn()
                count += 1
        except AssertionError as exc:
            results.append(CheckResult(name, False, count, str(exc)))
            return
        except DomainError as exc:
            results.append(CheckResult(name, True, count, f"skipped: {type(exc).__name__}"))
            return
        results.append(CheckResult(name, True, count))

    n = sys.dimension

    def rank_nullity():
        for part in sys.parts:
            for c in part.coefficients:
                assert rank(c) + len(kernel_basis(c)) == c.cols

    def gauge_group_law():
        for part in sys.parts:
            k = len(part.coefficients)
            g = random_gauge(rng, part.point, n, k)
            h = random_gauge(rng, part.point, n, k)
            lhs = gauge_coadjoint(gauge_compose(g, h), part)
            rhs = gauge_coadjoint(g, gauge_coadjoint(h, part))
            assert lhs.coefficients == rhs.coefficients, "gauge action is not a group action"

    def order_invariance():
        for g, part in _gauged_parts(rng, sys):
            assert order(gauge_coadjoint(g, part)) == order(part), "pole order moved under gauge"

    def irreducibility_conjugation():
        c = random_invertible(rng, n)
        assert is_irreducible(sys) == is_irreducible(conjugate_system(c, sys))

    def residue_additivity():
        alpha = scalar_system({0: [random_scalar(rng)], 1: [random_scalar(rng)]})
        lhs = residue_at_infinity(add_scalar(sys, alpha))
        rhs = residue_at_infinity(sys) + residue_at_infinity(alpha).scalar() * Matrix.identity(n)
        assert lhs == rhs, "residue at infinity is not additive"

    def section_retraction():
        d = canonical(sys.parts, n)
        assert phi(d) == System(n, Matrix.zeros(n, n), sys.parts), "phi(canonical) != input"
        assert is_stable(d), "canonical datum is not stable"

    def padding_independence():
        padded = tuple(
            PrincipalPart(p.point, p.coefficients + (Matrix.zeros(n, n),)) for p in sys.parts
        )
        d1 = canonical(sys.parts, n)
        d2 = canonical(padded, n)
        assert datum_isomorphism(d1, d2) is not None, "canonical datum depends on padding"

    def equivariance_invariance():
        d = canonical(sys.parts, n)
        for b in d.blocks:
            k = max(1, nilpotency_index(b.nilpotent))
            g = random_gauge(rng, b.point, n, k)
            gd = gk_action(g, d)
            assert moment_mu(gd) == moment_mu(d), "moment value moved under the gauge action"
            lhs = phi(gd)
            rhs_parts = tuple(
                gauge_coadjoint(g, p) if p.point == b.point else p for p in phi(d).parts
            )
            assert lhs == System(n, Matrix.zeros(n, n), rhs_parts), "phi is not equivariant"

    def stabilizer_modes():
        for part in sys.parts:
            nf = compute_normal_form(part)
            assert stabilizer_dim_linear(part) == stabilizer_dim_formula(nf), "stabilizer modes disagree"

    def kernel_modes_and_katz():
        for part in sys.parts:
            nf = compute_normal_form(part)
            sel = select_alpha(part)
            from .systems import scalar_coefficients

            coeffs = scalar_coefficients(sel)
            k = len(part.coefficients)
            coeffs = coeffs + [gr(0)] * (k - len(coeffs))
            assert hat_kernel_dim(part, sel) == hat_kernel_dim_formula(nf, coeffs), "kernel modes disagree"
            assert stabilizer_dim_linear(part) <= n * hat_kernel_dim(part, sel), "Katz inequality failed"

    def normal_form_gauge_invariance():
        for g, part in _gauged_parts(rng, sys):
            nf1 = compute_normal_form(part)
            nf2 = compute_normal_form(gauge_coadjoint(g, part))
            assert normal_forms_conjugate(nf1, nf2), "normal form moved under gauge"

    def duality_involution():
        if not is_irreducible(sys):
            return
        try:
            back, witness = hd_double(sys)
        except Exceptional:
            return
        assert witness is not None, "double dual is not equivalent to the input"

    def rigidity_conjugation():
        from .rigidity import rigidity_index

        if not sys.constant.is_zero() or not residue_at_infinity(sys).is_zero():
            return
        if not is_irreducible(sys):
            return
        c = random_invertible(rng, n)
        assert rigidity_index(sys) == rigidity_index(conjugate_system(c, sys))

    record("rank_nullity", rank_nullity)
    record("gauge_group_law", gauge_group_law)
    record("order_gauge_invariance", order_invariance)
    record("irreducibility_conjugation_invariance", irreducibility_conjugation)
    record("residue_at_infinity_additivity", residue_additivity)
    record("section_retraction_and_stability", section_retraction)
    record("canonical_padding_independence", padding_independence)
    record("equivariance_and_moment_invariance", equivariance_invariance)
    record("stabilizer_two_modes", stabilizer_modes)
    record("kernel_two_modes_and_katz_inequality", kernel_modes_and_katz)
    record("normal_form_gauge_invariance", normal_form_gauge_invariance)
    record("double_dual_identity", duality_involution)
    record("rigidity_index_conjugation_invariance", rigidity_conjugation)
    return results
