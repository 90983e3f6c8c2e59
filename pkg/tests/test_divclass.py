from unittest import TestCase

from coxfiber.exceptions import (
    CoxFiberInvalidError,
    DimensionMismatch,
    Mismatch,
    TorsionVertical,
    TorusFactor,
)
from coxfiber.toric.divclass import (
    TorusDivisor,
    choose_divisor_subgroup_K,
    class_group,
    fiber_class_group,
    lemma_prim1_check,
    principal_divisor,
    pullback_to_fiber,
    restriction_matrix,
    restriction_surjective,
    vertical_class_group,
    vertical_principal_lattice_check,
)
from coxfiber.toric.fan import (
    Fan,
    ToricMorphism,
    fiber_subfan,
    hirzebruch,
    hirzebruch_fibration,
    identity_morphism,
    product_projection,
    projective_line,
    projective_space,
    weighted_projective_fan,
)
from coxfiber.toric.intlin import lattice_contains, lattice_intersection


def torsion_vertical_fibration():
    """A ruled surface whose vertical classes are ``Z + Z/2``."""
    fan = Fan(
        2,
        [(2, -1), (-2, 1), (0, 1), (0, -1)],
        [(0, 2), (2, 1), (1, 3), (3, 0)],
        name="T",
    )
    return ToricMorphism(fan, projective_line(), [[1, 0]])


def line_times_torus():
    """``P1 x C*`` mapped to ``P1`` by ``(a, b) -> a + b``."""
    fan = Fan(2, [(0, 1), (0, -1)], [(0,), (1,)], name="P1xT")
    return ToricMorphism(fan, projective_line(), [[1, 1]])


class TorusDivisorTests(TestCase):
    def test_basic_divisor(self):
        divisor = TorusDivisor([1, 0, -2])
        self.assertEqual(list(divisor), [1, 0, -2])
        self.assertEqual(len(divisor), 3)
        self.assertEqual(divisor.support, (0, 2))
        self.assertFalse(divisor.is_zero())
        self.assertTrue((divisor - divisor).is_zero())
        self.assertEqual(divisor + TorusDivisor([0, 1, 2]), TorusDivisor([1, 1, 0]))
        self.assertRaises(DimensionMismatch, divisor.__add__, TorusDivisor([1]))
        repr(divisor)


class ClassGroupTests(TestCase):
    def test_projective_plane(self):
        data = class_group(projective_space(2))
        self.assertEqual(data.class_group.describe(), "Z")
        self.assertEqual(data.ray_degrees(), [(1,), (1,), (1,)])

    def test_hirzebruch(self):
        data = class_group(hirzebruch(1))
        self.assertEqual(data.class_group.normal_form(), (2, ()))
        self.assertEqual(data.ray_degrees(), [(1, 0), (0, 1), (1, 0), (1, 1)])
        self.assertEqual(data.degree_of(TorusDivisor([1, 1, 0, 0])), (1, 1))

    def test_weighted_projective_plane(self):
        data = class_group(weighted_projective_fan((1, 1, 2)))
        self.assertEqual(data.class_group.describe(), "Z")
        self.assertEqual(sorted(data.ray_degrees()), [(1,), (1,), (2,)])

    def test_torsion(self):
        data = class_group(torsion_vertical_fibration().source)
        self.assertEqual(data.class_group.describe(), "Z^2 + Z/2")

    def test_torus_factor(self):
        fan = Fan(2, [(1, 0)], [(0,)])
        self.assertRaises(TorusFactor, class_group, fan)
        self.assertTrue(class_group(fan, check=False).class_group.is_trivial())

    def test_principal_divisor(self):
        data = class_group(hirzebruch(1))
        divisor = principal_divisor(data, (1, 0))
        self.assertEqual(divisor, TorusDivisor([1, 0, -1, 0]))
        self.assertEqual(data.degree_of(divisor), (0, 0))
        self.assertRaises(DimensionMismatch, principal_divisor, data, (1,))


class VerticalClassTests(TestCase):
    def test_hirzebruch(self):
        ruling = hirzebruch_fibration(1)
        data = class_group(ruling.source)
        vertical = vertical_class_group(data, ruling)
        self.assertEqual(vertical.vertical_ray_set, (0, 2))
        self.assertEqual(vertical.cl_pi.describe(), "Z")
        self.assertEqual(vertical.cl_eta.describe(), "Z")
        self.assertTrue(vertical.torsion_free)
        self.assertEqual(vertical.horizontal_rays(4), (1, 3))
        repr(vertical)

    def test_torsion_vertical(self):
        morphism = torsion_vertical_fibration()
        vertical = vertical_class_group(class_group(morphism.source), morphism)
        self.assertEqual(vertical.cl_pi.describe(), "Z + Z/2")
        self.assertFalse(vertical.torsion_free)

    def test_identity(self):
        morphism = identity_morphism(weighted_projective_fan((1, 1, 2)))
        vertical = vertical_class_group(class_group(morphism.source), morphism)
        self.assertEqual(vertical.cl_pi.describe(), "Z")
        self.assertTrue(vertical.cl_eta.is_trivial())

    def test_wrong_source(self):
        ruling = hirzebruch_fibration(1)
        self.assertRaises(
            CoxFiberInvalidError,
            vertical_class_group,
            class_group(hirzebruch(2)),
            ruling,
        )


class RestrictionTests(TestCase):
    def setUp(self):
        self.ruling = hirzebruch_fibration(1)
        self.data = class_group(self.ruling.source)
        self.fiber = fiber_subfan(self.ruling)

    def test_pullback_to_fiber(self):
        divisor = TorusDivisor([5, 1, 7, 2])
        self.assertEqual(
            pullback_to_fiber(self.data, self.fiber, divisor), TorusDivisor([1, 2])
        )
        self.assertRaises(
            DimensionMismatch,
            pullback_to_fiber,
            self.data,
            self.fiber,
            TorusDivisor([1]),
        )

    def test_principal_divisors_restrict_to_fiber(self):
        # div(m) restricted to the fiber is div of m restricted to ker(alpha)
        morphisms = [hirzebruch_fibration(a) for a in range(4)]
        morphisms.append(product_projection(projective_line(), projective_space(2)))
        for morphism in morphisms:
            data = class_group(morphism.source)
            fiber = fiber_subfan(morphism)
            fiber_data = fiber_class_group(fiber)
            rank = morphism.source.rank
            for k in range(rank):
                m = tuple(int(j == k) for j in range(rank))
                restricted = tuple(
                    sum(a * b for a, b in zip(m, basis)) for basis in fiber.kernel_basis
                )
                self.assertEqual(
                    pullback_to_fiber(data, fiber, principal_divisor(data, m)),
                    principal_divisor(fiber_data, restricted),
                    msg=(morphism, m),
                )

    def test_restriction_matrix(self):
        self.assertEqual(
            restriction_matrix(self.data, self.fiber).tolist(),
            [[0, 1, 0, 0], [0, 0, 0, 1]],
        )

    def test_restriction_surjective(self):
        result = restriction_surjective(self.data, self.ruling)
        self.assertTrue(result.surjective)
        self.assertEqual(result.fiber_class.class_group.describe(), "Z")
        self.assertEqual(fiber_class_group(self.fiber).ray_degrees(), [(1,), (1,)])


class LatticeCheckTests(TestCase):
    def test_hirzebruch(self):
        ruling = hirzebruch_fibration(2)
        result = vertical_principal_lattice_check(class_group(ruling.source), ruling)
        self.assertTrue(result.ok)
        self.assertTrue(result.saturations_equal)
        self.assertIsNone(result.witness)
        self.assertEqual(result.left, [(1, 0)])

    def test_identity(self):
        morphism = identity_morphism(weighted_projective_fan((1, 1, 2)))
        result = vertical_principal_lattice_check(class_group(morphism.source), morphism)
        self.assertTrue(result.ok)

    def test_line_times_torus(self):
        morphism = line_times_torus()
        data = class_group(morphism.source, check=False)
        result = vertical_principal_lattice_check(data, morphism)
        self.assertFalse(result.ok)
        self.assertFalse(result.lattices_equal)
        self.assertEqual(result.witness, (1, 0))
        self.assertEqual(result.right, [(1, 1)])


class DivisorSubgroupTests(TestCase):
    def assertValidK(self, morphism, K):
        data = class_group(morphism.source)
        vertical = vertical_class_group(data, morphism)
        generators = [tuple(k) for k in K]
        nrays = morphism.source.nrays
        # K maps onto the class group
        for i in range(nrays):
            self.assertTrue(
                lattice_contains(generators + data.pairing.columns(), data.unit(i))
            )
        # K avoids the vertical coordinates
        units = [data.unit(i) for i in vertical.vertical_ray_set]
        self.assertEqual(lattice_intersection(generators, units, dim=nrays), [])

    def test_hirzebruch(self):
        ruling = hirzebruch_fibration(1)
        K = choose_divisor_subgroup_K(class_group(ruling.source), ruling, seed=3)
        self.assertValidK(ruling, K)
        self.assertTrue(all(isinstance(k, TorusDivisor) for k in K))

    def test_product(self):
        projection = product_projection(projective_line(), projective_line())
        for seed in range(3):
            K = choose_divisor_subgroup_K(
                class_group(projection.source), projection, seed=seed
            )
            self.assertValidK(projection, K)

    def test_deterministic(self):
        ruling = hirzebruch_fibration(2)
        data = class_group(ruling.source)
        self.assertEqual(
            choose_divisor_subgroup_K(data, ruling, seed=5),
            choose_divisor_subgroup_K(data, ruling, seed=5),
        )

    def test_torsion_vertical(self):
        morphism = torsion_vertical_fibration()
        self.assertRaises(
            TorsionVertical,
            choose_divisor_subgroup_K,
            class_group(morphism.source),
            morphism,
        )


class Prim1Tests(TestCase):
    def test_hirzebruch(self):
        ruling = hirzebruch_fibration(1)
        data = class_group(ruling.source)
        K = choose_divisor_subgroup_K(data, ruling, seed=1)
        result = lemma_prim1_check(data, ruling, K)
        self.assertTrue(result.ok)
        self.assertEqual(result.quotient.describe(), "Z")
        self.assertTrue(result.primitive)
        self.assertTrue(result.quotient.isomorphic_to(result.cl_pi))

    def test_product(self):
        projection = product_projection(projective_line(), projective_line())
        data = class_group(projection.source)
        K = choose_divisor_subgroup_K(data, projection, seed=0)
        self.assertTrue(lemma_prim1_check(data, projection, K).ok)

    def test_mismatch(self):
        ruling = hirzebruch_fibration(1)
        data = class_group(ruling.source)
        # Too small: no principal divisor of the fiber lies in its restriction.
        K = [TorusDivisor([0, 1, 0, 0])]
        self.assertRaises(Mismatch, lemma_prim1_check, data, ruling, K)
