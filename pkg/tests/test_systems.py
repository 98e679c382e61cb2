"""System data model, gauge action, irreducibility, equivalence."""

import pytest

from midconv.errors import (
    DimensionMismatch,
    InconclusiveEquivalence,
    SingularGauge,
    ValidationError,
)
from midconv.exactalg import Matrix, gr, invert
from midconv.systems import (
    PrincipalPart,
    System,
    TruncatedGauge,
    add_scalar,
    conjugate_system,
    equivalent,
    gauge_coadjoint,
    gauge_compose,
    is_irreducible,
    order,
    residue_at_infinity,
    scalar_system,
)
from midconv.checks import random_gauge, random_matrix

from conftest import E11, E12, E21, Z2, fuchsian


class TestOrder:
    def test_zero_part(self):
        assert order(PrincipalPart(gr(0), (Z2, Z2))) == 0

    def test_leading_only(self):
        assert order(PrincipalPart(gr(0), (E12, Z2))) == 1

    def test_second_order(self):
        assert order(PrincipalPart(gr(0), (Z2, Matrix.diagonal([1, 2])))) == 2


class TestSystemModel:
    def test_duplicate_points_rejected(self):
        with pytest.raises(ValidationError):
            System(2, Z2, (PrincipalPart(gr(0), (E12,)), PrincipalPart(gr(0), (E21,))))

    def test_parts_sorted_by_point(self):
        s = System(2, Z2, (PrincipalPart(gr(1), (E21,)), PrincipalPart(gr(0), (E12,))))
        assert [p.point for p in s.parts] == [gr(0), gr(1)]

    def test_semantic_equality_ignores_padding(self):
        a = System(2, Z2, (PrincipalPart(gr(0), (E12,)),))
        b = System(2, Z2, (PrincipalPart(gr(0), (E12, Z2)), PrincipalPart(gr(1), (Z2,))))
        assert a == b

    def test_declaration_validated(self):
        s = Matrix.diagonal([2, 2])
        System(2, s, (), declaration=((gr(2), 1),))
        with pytest.raises(ValidationError):
            System(2, s, (), declaration=((gr(3), 1),))


class TestResidueAtInfinity:
    def test_no_parts(self):
        assert residue_at_infinity(System(2, Z2, ())).is_zero()

    def test_sign_convention(self):
        s = System(2, Z2, (PrincipalPart(gr(0), (E11,)),))
        assert residue_at_infinity(s) == -E11

    def test_balanced_residues_vanish(self):
        s = fuchsian({0: E11, 1: -E11})
        assert residue_at_infinity(s).is_zero()


class TestAddScalar:
    def test_zero_alpha_identity(self):
        s = fuchsian({0: E12})
        assert add_scalar(s, scalar_system({0: [0]})) == s

    def test_new_pole_scalar_matrix(self):
        s = System(2, Z2, ())
        r = add_scalar(s, scalar_system({0: [3]}))
        assert r.part_at(gr(0)).coefficients[0] == 3 * Matrix.identity(2)

    def test_entrywise_merge(self):
        s = fuchsian({0: E12})
        r = add_scalar(s, scalar_system({0: [1]}))
        assert r.part_at(gr(0)).coefficients[0] == Matrix.from_rows([[1, 1], [0, 1]])

    def test_residue_additivity(self, rng):
        for _ in range(10):
            n = rng.choice([1, 2, 3])
            s = System(
                n,
                Matrix.zeros(n, n),
                (PrincipalPart(gr(0), (random_matrix(rng, n),)),),
            )
            alpha = scalar_system({0: [rng.randint(-3, 3)], 1: [rng.randint(-3, 3)]})
            lhs = residue_at_infinity(add_scalar(s, alpha))
            rhs = residue_at_infinity(s) + residue_at_infinity(alpha).scalar() * Matrix.identity(n)
            assert lhs == rhs


class TestGauge:
    def test_singular_gauge_rejected(self):
        with pytest.raises(SingularGauge):
            TruncatedGauge(gr(0), (Z2,))

    def test_constant_conjugation(self):
        a = Matrix.from_rows([[1, 1], [1, 2]])
        g = TruncatedGauge(gr(0), (a,))
        part = PrincipalPart(gr(0), (E12, E21))
        res = gauge_coadjoint(g, part)
        ainv = invert(a)
        assert res.coefficients == (a * E12 * ainv, a * E21 * ainv)

    def test_first_order_no_correction_at_k1(self):
        g = TruncatedGauge(gr(0), (Matrix.identity(2), Matrix.from_rows([[1, 2], [3, 4]])))
        part = PrincipalPart(gr(0), (E21,))
        assert gauge_coadjoint(g, part).coefficients == (E21,)

    def test_first_order_commutator_at_k2(self):
        x = Matrix.from_rows([[1, 2], [0, 1]])
        lam = Matrix.diagonal([5, 7])
        g = TruncatedGauge(gr(0), (Matrix.identity(2), x))
        part = PrincipalPart(gr(0), (Z2, lam))
        res = gauge_coadjoint(g, part)
        assert res.coefficients[1] == lam
        assert res.coefficients[0] == x * lam - lam * x

    def test_group_action(self, rng):
        for _ in range(15):
            n, k = rng.choice([2, 3]), rng.choice([1, 2, 3])
            part = PrincipalPart(gr(0), tuple(random_matrix(rng, n) for _ in range(k)))
            g = random_gauge(rng, gr(0), n, k)
            h = random_gauge(rng, gr(0), n, k)
            lhs = gauge_coadjoint(gauge_compose(g, h), part)
            rhs = gauge_coadjoint(g, gauge_coadjoint(h, part))
            assert lhs.coefficients == rhs.coefficients

    def test_order_preserved(self, rng):
        for _ in range(15):
            n, k = rng.choice([2, 3]), rng.choice([1, 2, 3])
            part = PrincipalPart(gr(0), tuple(random_matrix(rng, n) for _ in range(k)))
            g = random_gauge(rng, gr(0), n, k)
            assert order(gauge_coadjoint(g, part)) == order(part)


class TestIrreducibility:
    def test_rank_one_always(self):
        assert is_irreducible(scalar_system({0: [5]}))

    def test_generating_pair(self):
        assert is_irreducible(fuchsian({0: E12, 1: E21}))

    def test_invariant_line(self):
        assert not is_irreducible(fuchsian({0: E11, 1: E21}))

    def test_conjugation_invariance(self, rng):
        from midconv.checks import random_invertible

        s = fuchsian({0: E12, 1: E21})
        t = fuchsian({0: E11, 1: E21})
        for _ in range(8):
            c = random_invertible(rng, 2)
            assert is_irreducible(conjugate_system(c, s))
            assert not is_irreducible(conjugate_system(c, t))

    def test_triangular_families_reducible(self, rng):
        # hidden common invariant line: conjugated upper-triangular families
        from midconv.checks import random_invertible

        for _ in range(10):
            n = rng.choice([2, 3])
            mats = []
            for _ in range(3):
                rows = [
                    [rng.randint(-2, 2) if j >= i else 0 for j in range(n)]
                    for i in range(n)
                ]
                mats.append(Matrix.from_rows(rows))
            c = random_invertible(rng, n)
            sys = conjugate_system(
                c,
                System(
                    n,
                    Matrix.zeros(n, n),
                    tuple(
                        PrincipalPart(gr(k), (m,)) for k, m in enumerate(mats)
                    ),
                ),
            )
            assert not is_irreducible(sys)

    def test_shift_pair_families_irreducible(self, rng):
        # E12/E21-style ladders generate the full endomorphism algebra
        from midconv.checks import random_invertible

        for n in (2, 3):
            up = Matrix.from_rows(
                [[1 if j == i + 1 else 0 for j in range(n)] for i in range(n)]
            )
            down = up.transpose()
            sys = fuchsian({0: up, 1: down}, dim=n)
            assert is_irreducible(sys)
            c = random_invertible(rng, n)
            assert is_irreducible(conjugate_system(c, sys))


class TestEquivalent:
    def test_self_equivalence(self):
        s = fuchsian({0: E12, 1: E21})
        f = equivalent(s, s)
        assert f is not None

    def test_conjugation_round_trip(self, rng):
        from midconv.checks import random_invertible

        s = fuchsian({0: E12, 1: E21})
        for _ in range(8):
            c = random_invertible(rng, 2)
            t = conjugate_system(c, s)
            f = equivalent(s, t)
            assert f is not None
            assert conjugate_system(f, s) == t

    def test_moved_pole_not_equivalent(self):
        a = fuchsian({0: E12, 1: E21})
        b = fuchsian({0: E12, 2: E21})
        assert equivalent(a, b) is None

    def test_reducible_is_inconclusive(self):
        a = fuchsian({0: E11, 1: E21})
        with pytest.raises(InconclusiveEquivalence):
            equivalent(a, a)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            equivalent(scalar_system({0: [1]}), fuchsian({0: E12, 1: E21}))
