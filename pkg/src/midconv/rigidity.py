"""Orbit dimension bookkeeping, the naive rigidity index, and the
generalized reduction loop.

The index of an irreducible pair with no constant term and no residue at
infinity is dim(orbit) - 2 dim GL(V) + 2; zero means the moduli space of
its truncated formal type is a single point.  On such rigid pairs each
reduction step (add the negated per-pole maximizer, convolve with the
resulting simple-pole weight, add again) strictly decreases the rank, so
the loop terminates at rank one within at most the initial rank many
steps.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotInD0, NotRigid, Reducible, ZeroLambda
from .exactalg import GaussianRational, Matrix
from .functors import Pair, mc
from .normalform import select_alpha
from .systems import (
    PrincipalPart,
    System,
    add_scalar,
    is_irreducible,
    lambda_over_z,
    residue_at_infinity,
    scalar_coefficients,
)

__all__ = [
    "ReductionStep",
    "ReductionTrace",
    "orbit_dim",
    "rigidity_index",
    "katz_step",
    "katz_reduce",
]


@dataclass(frozen=True)
class ReductionStep:
    alpha: System
    lam: GaussianRational
    rank_before: int
    rank_after: int
    result: Pair


@dataclass(frozen=True)
class ReductionTrace:
    """Ordered log of reduction steps; ranks strictly decrease and the
    final rank is at most one."""

    steps: tuple[ReductionStep, ...]

    def __post_init__(self):
        ranks = [s.rank_before for s in self.steps] + (
            [self.steps[-1].rank_after] if self.steps else []
        )
        for a, b in zip(ranks, ranks[1:]):
            if b >= a:
                raise ValueError("trace ranks must strictly decrease")
        if self.steps and self.steps[-1].rank_after > 1:
            raise ValueError("trace must end at rank <= 1")

    @property
    def final_rank(self) -> int:
        return self.steps[-1].rank_after if self.steps else -1


def orbit_dim(sys: System) -> int:
    """dim of the truncated-gauge coadjoint orbit: per pole, the group
    dimension k_t (dim V)^2 minus the stabilizer dimension."""
    from .normalform import stabilizer_dim

    n = sys.dimension
    total = 0
    for part in sys.parts:
        total += len(part.coefficients) * n * n - stabilizer_dim(part)
    return total


def _require_d0(p: Pair):
    if not p.constant.is_zero() or not residue_at_infinity(p).is_zero():
        raise NotInD0("pair has a constant term or a nonzero residue at infinity")


def rigidity_index(p: Pair) -> int:
    """dim of the naive moduli space at p's truncated formal type.

    Zero means naively rigid; negative values are reported as computed
    (no irreducible system exists with that local data).
    """
    _require_d0(p)
    if not is_irreducible(p):
        raise Reducible("rigidity index is defined for irreducible pairs")
    n = p.dimension
    return orbit_dim(p) - 2 * n * n + 2


def katz_step(p: Pair, alpha: System) -> Pair:
    """add_alpha then mc with weight Res_infinity(alpha) / z, then
    add_alpha again; preserves zero residue at infinity when the weight
    is nonzero."""
    lam = residue_at_infinity(alpha).scalar()
    shifted = add_scalar(p, alpha)
    convolved = mc(shifted, lambda_over_z(lam))
    if convolved.dimension == 0:
        if lam.is_zero():
            raise ZeroLambda("zero weight with exceptional intermediate")
        return convolved
    return add_scalar(convolved, alpha)


def katz_reduce(p: Pair) -> ReductionTrace:
    """Greedy reduction to rank one.

    Each round recomputes the per-pole maximizer of the kernel dimension,
    assembles alpha as minus their sum, and applies one step.  Strict rank
    decrease is guaranteed for naively rigid inputs; if a step fails to
    decrease the rank, NotRigid is raised carrying the index.
    """
    _require_d0(p)
    if not is_irreducible(p):
        raise Reducible("reduction is defined for irreducible pairs")
    steps: list[ReductionStep] = []
    current = p
    cap = p.dimension
    while current.dimension >= 2:
        if len(steps) >= cap:
            raise AssertionError("reduction exceeded its iteration cap")  # pragma: no cover
        alpha_parts = []
        for part in current.parts:
            sel = select_alpha(part)
            negated = tuple(Matrix.from_rows([[-c]]) for c in scalar_coefficients(sel))
            alpha_parts.append(PrincipalPart(part.point, negated))
        alpha = System(1, Matrix.zeros(1, 1), tuple(alpha_parts))
        lam = residue_at_infinity(alpha).scalar()
        result = katz_step(current, alpha)
        if result.dimension >= current.dimension:
            index = rigidity_index(current)
            if index != 0:
                raise NotRigid(
                    f"rank did not decrease and the rigidity index is {index}",
                    index=index,
                    steps=steps,
                )
            raise AssertionError(
                "rank did not decrease on a rigid input"
            )  # pragma: no cover
        steps.append(
            ReductionStep(
                alpha=alpha,
                lam=lam,
                rank_before=current.dimension,
                rank_after=result.dimension,
                result=result,
            )
        )
        current = result
    return ReductionTrace(tuple(steps))
