"""Cone algebra: membership, orders, duality, strict polar, lineality."""

import random
from fractions import Fraction

import pytest

from dcverify import (
    ConeError,
    DimensionMismatchError,
    InteriorEmptyError,
    PolyhedralCone,
    RationalVector,
    cone_contains,
    dual_cone,
    linearity,
    nonnegative_orthant,
    order_relation,
    parse_rational,
    strict_polar_contains,
)
from conftest import random_cone

V = RationalVector.of


def combo(coeffs, vectors):
    total = RationalVector.zero(vectors[0].dim)
    for c, v in zip(coeffs, vectors):
        total = total + v.scale(c)
    return total


class TestMembership:
    def test_quadrant_interior(self):
        K = nonnegative_orthant(2)
        assert cone_contains(K, V(1, 1), strict=True)

    def test_quadrant_boundary_ray(self):
        K = nonnegative_orthant(2)
        assert not cone_contains(K, V(1, 0), strict=True)
        assert cone_contains(K, V(1, 0))

    def test_nonneg_combination(self):
        # (2,1) = 1*(1,0) + 1*(1,1), solved by hand
        g1, g2 = V(1, 0), V(1, 1)
        cone = PolyhedralCone.from_generators([g1, g2])
        assert combo([1, 1], [g1, g2]) == V(2, 1)
        assert cone_contains(cone, V(2, 1))
        assert not cone_contains(cone, V(-1, 0))

    def test_zero_vector_is_member(self):
        for cone in (nonnegative_orthant(2),
                     PolyhedralCone.from_generators([V(1, 0), V(1, 1)])):
            assert cone_contains(cone, RationalVector.zero(2))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            cone_contains(nonnegative_orthant(2), V(1, 2, 3))

    def test_strict_on_flat_cone_signals_interior_empty(self):
        ray = PolyhedralCone.from_generators([V(1, 0)])
        with pytest.raises(InteriorEmptyError):
            cone_contains(ray, V(1, 0), strict=True)

    def test_construction_rejects_dim_5(self):
        with pytest.raises(ConeError):
            PolyhedralCone.from_generators([V(1, 0, 0, 0, 0)])

    def test_construction_rejects_zero_generator(self):
        with pytest.raises(ConeError):
            PolyhedralCone.from_generators([V(0, 0)])


class TestOrderRelations:
    def test_componentwise_preceq(self):
        K = nonnegative_orthant(2)
        assert order_relation(K, V(1, 2), V(2, 3), "preceq")

    def test_zero_not_interior(self):
        K = nonnegative_orthant(2)
        assert not order_relation(K, V(0, 0), V(0, 0), "prec")

    def test_npreceq_with_negative_coordinate(self):
        K = nonnegative_orthant(2)
        yl = V("1/16", "1/4")
        yr = V("-1/8", 0)
        assert (yr - yl) == V("-3/16", "-1/4")
        assert order_relation(K, yl, yr, "npreceq")

    def test_negations_are_exact(self):
        K = nonnegative_orthant(2)
        rng = random.Random(7)
        for _ in range(50):
            yl = V(Fraction(rng.randint(-4, 4), 2), Fraction(rng.randint(-4, 4), 2))
            yr = V(Fraction(rng.randint(-4, 4), 2), Fraction(rng.randint(-4, 4), 2))
            assert order_relation(K, yl, yr, "npreceq") != order_relation(K, yl, yr, "preceq")
            assert order_relation(K, yl, yr, "nprec") != order_relation(K, yl, yr, "prec")

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            order_relation(nonnegative_orthant(2), V(0, 0), V(1, 1), "lt")


class TestDualCone:
    def test_quadrant_self_dual(self):
        K = nonnegative_orthant(2)
        assert dual_cone(K) == K

    def test_wedge_dual(self):
        # halfspaces y1 >= 0 and y1 + y2 >= 0; extreme rays (0,1), (1,-1)
        cone = PolyhedralCone.from_generators([V(1, 0), V(1, 1)])
        dual = dual_cone(cone)
        assert set(dual.generators) == {V(0, 1), V(1, -1)}

    def test_involution(self):
        cone = PolyhedralCone.from_generators([V(2, 1), V(1, 3)])
        assert dual_cone(dual_cone(cone)) == cone

    def test_involution_redundant_generators(self):
        lean = PolyhedralCone.from_generators([V(1, 0), V(1, 1)])
        fat = PolyhedralCone.from_generators([V(1, 0), V(1, 1), V(2, 1), V(3, 2)])
        assert lean == fat
        assert dual_cone(dual_cone(fat)) == lean

    def test_dual_of_full_space_raises(self):
        full = PolyhedralCone.from_generators([V(1, 0), V(-1, 0), V(0, 1), V(0, -1)])
        with pytest.raises(ConeError):
            dual_cone(full)

    def test_membership_against_dual_description(self):
        # v in cone iff v pairs nonnegatively with every dual generator
        rng = random.Random(11)
        for _ in range(25):
            cone = random_cone(rng, 2)
            dual = dual_cone(cone)
            v = V(Fraction(rng.randint(-6, 6)), Fraction(rng.randint(-6, 6)))
            by_halfspace = cone_contains(cone, v)
            by_dual = all(g.dot(v) >= 0 for g in dual.generators)
            assert by_halfspace == by_dual


class TestStrictPolar:
    def test_quadrant_interior_functional(self):
        assert strict_polar_contains(nonnegative_orthant(2), V(1, 1))

    def test_quadrant_boundary_functional(self):
        # (1,0) pairs to zero with the generator (0,1)
        assert not strict_polar_contains(nonnegative_orthant(2), V(1, 0))

    def test_halfplane_vertical_functional(self):
        halfplane = PolyhedralCone.from_generators([V(1, 0), V(-1, 0), V(0, 1)])
        assert strict_polar_contains(halfplane, V(0, 1))

    def test_halfplane_slanted_functional_rejected(self):
        # (1,1) is positive on the generator (0,1) but takes negative values
        # on the part of the cone with very negative first coordinate
        halfplane = PolyhedralCone.from_generators([V(1, 0), V(-1, 0), V(0, 1)])
        assert V(1, 1).dot(V(0, 1)) > 0
        assert V(1, 1).dot(V(-5, 1)) < 0 and cone_contains(halfplane, V(-5, 1))
        assert not strict_polar_contains(halfplane, V(1, 1))

    def test_strict_polar_inside_dual_minus_zero(self):
        rng = random.Random(13)
        for _ in range(40):
            cone = random_cone(rng, 2)
            ystar = V(Fraction(rng.randint(-4, 4)), Fraction(rng.randint(-4, 4)))
            if ystar.is_zero():
                continue
            subspace = all(cone_contains(cone, -g) for g in cone.generators)
            if strict_polar_contains(cone, ystar) and not subspace:
                assert cone_contains(dual_cone(cone), ystar)
                assert not ystar.is_zero()


class TestLinearity:
    def test_pointed_cone_empty_basis(self):
        assert linearity(nonnegative_orthant(2)) == []

    def test_halfplane_basis(self):
        halfplane = PolyhedralCone.from_generators([V(1, 0), V(-1, 0), V(0, 1)])
        assert [b.primitive() for b in linearity(halfplane)] == [V(1, 0)]

    def test_full_plane_basis_dimension(self):
        full = PolyhedralCone.from_generators([V(1, 0), V(-1, 0), V(0, 1), V(0, -1)])
        assert len(linearity(full)) == 2

    def test_lineality_vectors_are_two_sided_members(self):
        rng = random.Random(17)
        for _ in range(25):
            cone = random_cone(rng, 3)
            for b in linearity(cone):
                assert cone_contains(cone, b) and cone_contains(cone, -b)


class TestConeProperties:
    def test_interior_pairing_positive_with_dual_generators(self):
        # interior points pair strictly positively with every nonzero dual
        # generator, exactly
        rng = random.Random(19)
        for dim in (2, 3, 4):
            for _ in range(12):
                cone = random_cone(rng, dim)
                if not cone.full_dimensional:
                    continue
                coeffs = [Fraction(rng.randint(1, 4), rng.choice([1, 2])) for _ in cone.generators]
                v = combo(coeffs, list(cone.generators))
                assert cone_contains(cone, v, strict=True)
                for ystar in dual_cone(cone).generators:
                    assert ystar.dot(v) > 0

    def test_involution_random_corpus(self):
        rng = random.Random(23)
        for dim in (2, 3, 4):
            for _ in range(10):
                cone = random_cone(rng, dim)
                assert dual_cone(dual_cone(cone)) == cone

    def test_strict_implies_nonstrict(self):
        rng = random.Random(29)
        for _ in range(30):
            cone = random_cone(rng, 2)
            if not cone.full_dimensional:
                continue
            v = V(Fraction(rng.randint(-5, 5)), Fraction(rng.randint(-5, 5)))
            if cone_contains(cone, v, strict=True):
                assert cone_contains(cone, v)

    def test_closed_under_random_nonneg_combinations(self):
        rng = random.Random(31)
        for _ in range(20):
            cone = random_cone(rng, 3)
            coeffs = [Fraction(rng.randint(0, 5), rng.choice([1, 2, 3])) for _ in cone.generators]
            assert cone_contains(cone, combo(coeffs, list(cone.generators)))

    def test_canonical_equality_across_descriptions(self):
        a = PolyhedralCone.from_generators([V(2, 0), V(3, 3)])
        b = PolyhedralCone.from_generators([V(1, 1), V(1, 0), V(5, 2)])
        assert a == b


class TestRationalParsing:
    def test_parse_fraction(self):
        assert parse_rational("-3/4") == Fraction(-3, 4)
        assert parse_rational("7") == 7

    def test_decimals_rejected(self):
        with pytest.raises(ValueError):
            parse_rational("0.5")
