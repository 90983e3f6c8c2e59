"""
End to end runs over the standard families. These take a while, so they only
run when ``COXFIBER_SLOW_TESTS`` is set (tox sets it).
"""

from functools import reduce
from itertools import combinations
import math
import os
import random
from unittest import TestCase, skipUnless

from coxfiber import CoxFiberClient
from coxfiber.exceptions import HypothesisFailed, Incompatible
from coxfiber.toric.blowup import FiberSpaceSpec, blowup_class_ledger, certify_nonfg
from coxfiber.toric.divclass import class_group, vertical_principal_lattice_check
from coxfiber.toric.fan import (
    ToricMorphism,
    hirzebruch_fibration,
    identity_morphism,
    product_projection,
    projective_line,
    projective_space,
    weighted_projective_fan,
)
from coxfiber.toric.intlin import IntMatrix, kernel_basis, smith_normal_form

from tests.test_divclass import line_times_torus

SKIP_MESSAGE = "Set COXFIBER_SLOW_TESTS to run the end to end checks."
CITATION = "Blow-ups of weighted projective planes at a general point."


@skipUnless(os.environ.get("COXFIBER_SLOW_TESTS"), SKIP_MESSAGE)
class FiberTheoremAcceptanceTests(TestCase):
    def setUp(self):
        self.client = CoxFiberClient(seed=0, box_radius=10)

    def assertTheorem(self, morphism, box_radius):
        report = self.client.morphism(morphism).verify_theorem(box_radius)
        self.assertTrue(report.passed, msg=report.to_dict())
        self.assertEqual(report.degree_zero_dimension, 1)
        return report

    def test_hirzebruch_family(self):
        for a in range(4):
            report = self.assertTheorem(hirzebruch_fibration(a), 10)
            self.assertEqual(len(report.table), 21)
            for row in report.table:
                self.assertEqual(row.dim_fiber, max(row.degree[0] + 1, 0))

    def test_weighted_bundles(self):
        for v in ((0, 0), (1, 0), (1, 1)):
            self.assertTheorem(self.client.wps_bundle((1, 1, 2), v).morphism, 8)

    def test_identity(self):
        report = self.assertTheorem(identity_morphism(weighted_projective_fan((1, 1, 2))), 5)
        self.assertEqual(len(report.table), 1)

    def test_products(self):
        self.assertTheorem(product_projection(projective_line(), projective_space(2)), 4)

    def test_rejections(self):
        cover = ToricMorphism(projective_line(), projective_line(), [[2]])
        self.assertRaises(HypothesisFailed, self.client.morphism(cover).verify_theorem, 2)
        self.assertRaises(
            Incompatible, ToricMorphism, projective_space(2), projective_line(), [[1, 0]]
        )


@skipUnless(os.environ.get("COXFIBER_SLOW_TESTS"), SKIP_MESSAGE)
class LatticeAcceptanceTests(TestCase):
    def setUp(self):
        self.client = CoxFiberClient(seed=0)

    def test_lattice_checks(self):
        for a in range(4):
            self.assertTrue(self.client.morphism(hirzebruch_fibration(a)).verify_lattices().ok)
        bundle = self.client.wps_bundle((1, 1, 2), (1, 1))
        self.assertTrue(bundle.verify_lattices().ok)

        morphism = line_times_torus()
        data = class_group(morphism.source, check=False)
        self.assertFalse(vertical_principal_lattice_check(data, morphism).ok)

    def test_prim1_seeds(self):
        for morphism in (
            product_projection(projective_line(), projective_line()),
            hirzebruch_fibration(1),
        ):
            wrapped = self.client.morphism(morphism)
            for seed in range(10):
                self.assertTrue(wrapped.prim1_check(seed).ok)


@skipUnless(os.environ.get("COXFIBER_SLOW_TESTS"), SKIP_MESSAGE)
class BlowupAcceptanceTests(TestCase):
    def test_ledgers(self):
        client = CoxFiberClient(seed=0)
        for v in ((0, 0), (1, 0), (1, 1)):
            spec = FiberSpaceSpec(client.wps_bundle((1, 1, 2), v).morphism)
            self.assertTrue(blowup_class_ledger(spec).surjective)

    def test_certificate(self):
        client = CoxFiberClient(seed=0)
        spec = FiberSpaceSpec(client.wps_bundle((1, 1, 2), (1, 0)).morphism)
        certificate = certify_nonfg(spec, CITATION, box_radius=4)
        self.assertTrue(certificate.valid)
        self.assertIn("P(1,1,2)", certificate.conclusion)

        # Dropping the citation or the hypotheses voids the certificate
        self.assertFalse(certify_nonfg(spec, "", box_radius=4).valid)
        cover = FiberSpaceSpec(ToricMorphism(projective_line(), projective_line(), [[2]]))
        self.assertFalse(certify_nonfg(cover, CITATION, box_radius=4).valid)


@skipUnless(os.environ.get("COXFIBER_SLOW_TESTS"), SKIP_MESSAGE)
class SmithAcceptanceTests(TestCase):
    def test_random_matrices(self):
        rng = random.Random(2024)
        for _ in range(1000):
            rows, cols = rng.randint(1, 6), rng.randint(1, 6)
            matrix = IntMatrix(
                [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)]
            )
            snf = smith_normal_form(matrix)
            self.assertIn(snf.U.det(), (1, -1))
            self.assertIn(snf.V.det(), (1, -1))
            self.assertEqual(snf.U @ matrix @ snf.V, snf.S)
            self.assertEqual(snf.U @ snf.U_inverse, IntMatrix.identity(rows))
            diagonal = [d for d in snf.diagonal if d]
            for a, b in zip(diagonal, diagonal[1:]):
                self.assertEqual(b % a, 0)
            self.assertTrue(all(d > 0 for d in diagonal))

            # Kernel bases are saturated: their maximal minors are coprime
            basis = kernel_basis(matrix)
            self.assertEqual(len(basis), cols - snf.rank)
            if not basis:
                continue
            for vector in basis:
                self.assertFalse(any(matrix.apply(vector)))
            minors = [
                IntMatrix([[v[j] for j in columns] for v in basis]).det()
                for columns in combinations(range(cols), len(basis))
            ]
            self.assertEqual(reduce(math.gcd, minors, 0), 1)
