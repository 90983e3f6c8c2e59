from unittest import TestCase

from coxfiber.exceptions import (
    HypothesisFailed,
    InfiniteDimension,
    TorsionVertical,
)
from coxfiber.toric.coxring import (
    canonical_form,
    cox_presentation,
    degree_box,
    degree_eta,
    grading_isomorphism,
    hilbert_dimension_fiber,
    hilbert_dimension_quotient,
    quotient_presentation,
    theorem_hypotheses,
    unit_section,
    verify_theorem,
    very_general_fiber_cox,
)
from coxfiber.toric.divclass import (
    class_group,
    fiber_class_group,
    vertical_class_group,
)
from coxfiber.toric.fan import (
    Fan,
    ToricMorphism,
    fiber_subfan,
    hirzebruch_fibration,
    identity_morphism,
    product_projection,
    projective_line,
    projective_space,
    weighted_projective_fan,
)
from coxfiber.toric.intlin import IntMatrix, cokernel

from tests.test_divclass import torsion_vertical_fibration

HYPOTHESES = [
    "source complete",
    "target complete",
    "connected fibers",
    "source rays span",
    "target rays span",
    "vertical torsion free",
]


def double_cover():
    return ToricMorphism(projective_line(), projective_line(), [[2]])


class PresentationTests(TestCase):
    def setUp(self):
        self.ruling = hirzebruch_fibration(1)
        self.data = class_group(self.ruling.source)
        self.vertical = vertical_class_group(self.data, self.ruling)

    def test_cox_presentation(self):
        presentation = cox_presentation(self.data)
        self.assertEqual(presentation.variables, ["x1", "x2", "x3", "x4"])
        self.assertEqual(presentation.degrees(), [(1, 0), (0, 1), (1, 0), (1, 1)])
        repr(presentation)

    def test_unit_section(self):
        section = unit_section(self.data, self.vertical)
        self.assertEqual(len(section.exponents), 1)
        exponent = section.exponents[0]
        self.assertEqual(exponent[1], 0)
        self.assertEqual(exponent[3], 0)
        w = section.generators[0]
        self.assertEqual(
            self.data.degree_of(exponent),
            self.data.class_group.reduce(tuple(-x for x in w)),
        )

    def test_unit_section_needs_torsion_free(self):
        morphism = torsion_vertical_fibration()
        data = class_group(morphism.source)
        self.assertRaises(
            TorsionVertical, unit_section, data, vertical_class_group(data, morphism)
        )

    def test_quotient_presentation(self):
        section = unit_section(self.data, self.vertical)
        presentation = quotient_presentation(self.data, self.vertical, section)
        self.assertEqual(presentation.horizontal_rays, (1, 3))
        self.assertEqual(presentation.vertical_rays, (0, 2))
        self.assertEqual(presentation.eta_grading.tolist(), [[1, 1]])
        self.assertEqual(degree_eta(presentation, (0, 2, 5, 1)), (3,))

        # Vertical exponents are reduced, horizontal ones are kept.
        exponent = (4, 2, -3, 7)
        reduced = canonical_form(presentation, exponent)
        self.assertEqual((reduced[1], reduced[3]), (2, 7))
        shifted = tuple(a + 3 * b for a, b in zip(exponent, section.exponents[0]))
        self.assertEqual(canonical_form(presentation, shifted), reduced)
        repr(presentation)

    def test_hilbert_dimensions(self):
        section = unit_section(self.data, self.vertical)
        presentation = quotient_presentation(self.data, self.vertical, section)
        fiber_class = fiber_class_group(fiber_subfan(self.ruling))
        for n in range(-2, 6):
            self.assertEqual(hilbert_dimension_quotient(presentation, (n,)), max(n + 1, 0))
            self.assertEqual(hilbert_dimension_fiber(fiber_class, (n,)), max(n + 1, 0))


class GradingIsomorphismTests(TestCase):
    def test_hirzebruch(self):
        ruling = hirzebruch_fibration(2)
        data = class_group(ruling.source)
        fiber = fiber_subfan(ruling)
        iso = grading_isomorphism(
            vertical_class_group(data, ruling),
            fiber_class_group(fiber),
            fiber.ray_correspondence,
        )
        self.assertTrue(iso.map.is_isomorphism())
        self.assertEqual(iso.map.induced_matrix().tolist(), [[1]])
        self.assertEqual(iso.inverse.apply_class((4,)), (4,))

    def test_very_general_fiber(self):
        presentation = very_general_fiber_cox(hirzebruch_fibration(1))
        self.assertEqual(presentation.fan.label, "F1_0")
        self.assertEqual(presentation.degrees(), [(1,), (1,)])

    def test_very_general_fiber_of_product(self):
        projection = product_projection(projective_line(), projective_space(2))
        presentation = very_general_fiber_cox(projection)
        self.assertEqual(presentation.group.describe(), "Z")
        self.assertEqual(presentation.degrees(), [(1,), (1,), (1,)])


class DegreeBoxTests(TestCase):
    def test_free(self):
        group = cokernel(IntMatrix.zeros(1, 0))
        self.assertEqual(degree_box(group, 1), [(-1,), (0,), (1,)])

    def test_torsion(self):
        group = cokernel(IntMatrix([[2, 0], [0, 0]]))
        self.assertEqual(
            degree_box(group, 1),
            [(-1, 0), (-1, 1), (0, 0), (0, 1), (1, 0), (1, 1)],
        )

    def test_trivial(self):
        self.assertEqual(degree_box(cokernel(IntMatrix.identity(1)), 5), [()])


class HypothesesTests(TestCase):
    def test_names(self):
        checks = theorem_hypotheses(hirzebruch_fibration(1))
        self.assertEqual([c.name for c in checks], HYPOTHESES)
        self.assertTrue(all(c.passed for c in checks))

    def test_double_cover(self):
        checks = {c.name: c for c in theorem_hypotheses(double_cover())}
        self.assertFalse(checks["connected fibers"].passed)
        self.assertEqual(checks["connected fibers"].witness, [2])

    def test_incomplete_source(self):
        plane = Fan(2, [(1, 0), (0, 1)], [(0, 1)])
        morphism = ToricMorphism(plane, Fan(1, [(1,)], [(0,)]), [[1, 0]])
        failed = [c.name for c in theorem_hypotheses(morphism) if not c.passed]
        self.assertEqual(failed, ["source complete", "target complete"])


class VerifyTheoremTests(TestCase):
    def test_hirzebruch(self):
        report = verify_theorem(hirzebruch_fibration(1), box_radius=3)
        self.assertTrue(report.passed)
        self.assertEqual(report.degree_zero_dimension, 1)
        self.assertTrue(report.fiber_complete)
        self.assertEqual([row.degree for row in report.table], [(n,) for n in range(-3, 4)])
        for row in report.table:
            n = row.degree[0]
            self.assertEqual(row.dim_quotient, max(n + 1, 0))
            self.assertEqual(row.dim_fiber, max(n + 1, 0))
        repr(report)

    def test_report_to_dict(self):
        data = verify_theorem(hirzebruch_fibration(0), box_radius=1).to_dict()
        self.assertEqual(
            list(data),
            [
                "morphism",
                "hypotheses",
                "grading_iso",
                "table",
                "degree_zero_dimension",
                "fiber_complete",
                "pass",
            ],
        )
        self.assertTrue(data["pass"])
        self.assertEqual(data["morphism"], {"source": "F0", "target": "P1"})
        self.assertEqual(data["hypotheses"]["connected fibers"], {"pass": True, "witness": None})
        self.assertEqual(data["grading_iso"]["map"], [[1]])
        self.assertEqual(
            data["table"][0], {"degree": [-1], "dim_quotient": 0, "dim_fiber": 0, "pass": True}
        )

    def test_identity(self):
        report = verify_theorem(identity_morphism(weighted_projective_fan((1, 1, 2))), 5)
        self.assertTrue(report.passed)
        self.assertEqual(len(report.table), 1)
        row = report.table[0]
        self.assertEqual((row.degree, row.dim_quotient, row.dim_fiber), ((), 1, 1))

    def test_double_cover(self):
        with self.assertRaises(HypothesisFailed) as context:
            verify_theorem(double_cover())
        self.assertEqual(context.exception.failed, ["connected fibers"])
        self.assertEqual(len(context.exception.checks), len(HYPOTHESES))

    def test_torsion_vertical(self):
        with self.assertRaises(HypothesisFailed) as context:
            verify_theorem(torsion_vertical_fibration())
        self.assertEqual(context.exception.failed, ["vertical torsion free"])

    def test_unbounded_quotient(self):
        # Both horizontal rays of P1 x P1 -> P1 with the grading forgotten.
        ruling = hirzebruch_fibration(0)
        data = class_group(ruling.source)
        vertical = vertical_class_group(data, ruling)
        presentation = quotient_presentation(
            data, vertical, unit_section(data, vertical)
        )
        presentation.eta_grading = IntMatrix([[1, -1]])
        self.assertRaises(InfiniteDimension, hilbert_dimension_quotient, presentation, (0,))
