"""
Blowing up a toric fiber space along a general horizontal torus orbit, and
certificates of non-finite generation.

Let ``pi: X -> Y`` be a surjective toric morphism with connected fibers and
torsion free ``Cl(Y)``, ``X_0`` the closure of the kernel torus and
``x_0 in X_0`` a general point. Blowing up ``X`` along the closure of
``{x_0} x T_Y`` gives ``X~ -> Y`` whose fibers over ``T_Y`` are the blow-up
``X~_0`` of ``X_0`` at ``x_0``. If the Cox ring of ``X~_0`` is not finitely
generated, neither is the Cox ring of ``X~``.

``X~`` is not toric, so its class group is bookkeeping: ``Cl(X) + Z[E]``
with the exceptional divisor ``E`` restricting to the exceptional divisor of
``X~_0``. The non-finite generation of the Cox ring of ``X~_0`` is never
computed; it enters as a cited external input.
"""

import logging

from coxfiber.exceptions import (
    CoxFiberCheckError,
    CoxFiberError,
    DimensionMismatch,
    HypothesisFailed,
    Mismatch,
    NoSolution,
    PrerequisiteFailed,
)
from coxfiber.toric.coxring import (
    Check,
    failed_names,
    grading_isomorphism,
    theorem_hypotheses,
    verify_theorem,
)
from coxfiber.toric.divclass import (
    class_group,
    fiber_class_group,
    restriction_matrix,
    restriction_surjective,
    vertical_class_group,
)
from coxfiber.toric.fan import (
    Fan,
    ToricMorphism,
    fiber_subfan,
    projective_line,
    rational_section,
    weighted_projective_fan,
)
from coxfiber.toric.intlin import (
    GroupHom,
    IntMatrix,
    cokernel,
    subgroup_and_quotient,
)

logger = logging.getLogger(__name__)

BOOKKEEPING = (
    "Cl of the blow-up is recorded as Cl(X) + Z[E]; the blow-up center is not "
    "torus invariant, so this is bookkeeping rather than a fan computation."
)
GENERALITY = "x0 is assumed to be a general point of X0; generality is not checked."
MORI_REMARK = (
    "The Cox ring of a very general fiber is a quotient of a localization of "
    "the Cox ring of the total space, so finite generation of the latter "
    "implies finite generation of the former."
)


class FiberSpaceSpec(object):
    """A toric fiber space ``X -> Y`` with optional display names."""

    def __init__(self, morphism, source_label=None, target_label=None):
        self.morphism = morphism
        self.source_label = source_label or morphism.source.label
        self.target_label = target_label or morphism.target.label

    def __repr__(self):
        return "<FiberSpaceSpec {0.source_label} -> {0.target_label}>".format(self)

    def to_dict(self):
        data = self.morphism.to_dict()
        data["labels"] = {"source": self.source_label, "target": self.target_label}
        return data


def check_construction_hypotheses(spec):
    """
    Evaluates every machine checkable hypothesis of the blow-up construction
    and of the fiber theorem. Always returns the full list of
    :class:`Check <coxfiber.toric.coxring.Check>` entries.
    """
    morphism = spec.morphism
    checks = theorem_hypotheses(morphism)

    witness = morphism.incompatibility()
    checks.append(
        Check(
            "compatibility",
            witness is None,
            None if witness is None else {"cone": witness[0], "ray": witness[1]},
        )
    )

    target_group = class_group(morphism.target, check=False).class_group
    checks.append(
        Check(
            "target class group torsion free",
            not target_group.invariant_factors,
            list(target_group.invariant_factors) or None,
        )
    )

    try:
        section = rational_section(morphism)
        checks.append(Check("rational section", True, section.tolist()))
    except NoSolution:
        checks.append(Check("rational section", False, None))

    try:
        data = class_group(morphism.source, check=False)
        fiber = fiber_subfan(morphism)
        grading_isomorphism(
            vertical_class_group(data, morphism),
            fiber_class_group(fiber),
            fiber.ray_correspondence,
        )
        checks.append(Check("geometric class group", True, None))
    except CoxFiberError as exc:
        checks.append(Check("geometric class group", False, str(exc)))
    logger.info(
        "Construction hypotheses for %r: %d checks, %d failed",
        spec,
        len(checks),
        len(failed_names(checks)),
    )
    return checks


class BlowupLedger(object):
    """
    Class group bookkeeping for the blow-up. ``restriction_tilde`` maps
    ``Cl(X) + Z[E]`` to ``Cl(X_0) + Z[E_0]``.
    """

    def __init__(self, cl_tilde, cl_pi_tilde, restriction_tilde, cl_pi, surjective):
        self.cl_tilde = cl_tilde
        self.cl_pi_tilde = cl_pi_tilde
        self.restriction_tilde = restriction_tilde
        self.cl_pi = cl_pi
        self.surjective = surjective

    def __repr__(self):
        return "<BlowupLedger {0} -> {1}>".format(
            self.cl_tilde.describe(), self.restriction_tilde.target.describe()
        )

    def to_dict(self):
        return {
            "cl_tilde": self.cl_tilde.describe(),
            "cl_pi_tilde": self.cl_pi_tilde.describe(),
            "cl_pi": self.cl_pi.describe(),
            "cl_fiber_tilde": self.restriction_tilde.target.describe(),
            "restriction": self.restriction_tilde.induced_matrix().tolist(),
            "surjective": self.surjective,
            "note": BOOKKEEPING,
        }


def _with_exceptional(relations):
    return cokernel(IntMatrix.vstack(relations, IntMatrix.zeros(1, relations.cols)))


def blowup_class_ledger(spec):
    """
    Builds ``Cl(X~) = Cl(X) + Z[E]``, its vertical part and the restriction to
    ``Cl(X~_0)``, and records whether the restriction is onto. Raises
    :class:`PrerequisiteFailed <coxfiber.exceptions.PrerequisiteFailed>` when
    a hypothesis fails.
    """
    checks = check_construction_hypotheses(spec)
    failed = failed_names(checks)
    if failed:
        raise PrerequisiteFailed(
            "Cannot build the ledger: {0}.".format(", ".join(failed)),
            failed=failed,
            checks=checks,
        )
    morphism = spec.morphism
    data = class_group(morphism.source)
    vertical_data = vertical_class_group(data, morphism)
    fiber = fiber_subfan(morphism)
    restriction = restriction_surjective(data, morphism, fiber)
    nrays = data.fan.nrays
    fiber_rays = len(fiber.ray_correspondence)

    cl_tilde = _with_exceptional(data.pairing)
    cl_pi_tilde = subgroup_and_quotient(
        cl_tilde, [data.unit(i) + (0,) for i in vertical_data.vertical_ray_set]
    ).subgroup
    cl_fiber_tilde = _with_exceptional(restriction.fiber_class.pairing)
    block = restriction_matrix(data, fiber).tolist()
    matrix = IntMatrix(
        [row + [0] for row in block] + [[0] * nrays + [1]],
        shape=(fiber_rays + 1, nrays + 1),
    )
    restriction_tilde = GroupHom(cl_tilde, cl_fiber_tilde, matrix)

    if cl_pi_tilde.normal_form() != vertical_data.cl_pi.normal_form():
        raise Mismatch(
            "Vertical classes of the blow-up are {0}, expected {1}.".format(
                cl_pi_tilde.describe(), vertical_data.cl_pi.describe()
            ),
            groups=(cl_pi_tilde.normal_form(), vertical_data.cl_pi.normal_form()),
        )
    exceptional = restriction_tilde((0,) * nrays + (1,))
    if exceptional != cl_fiber_tilde.project((0,) * fiber_rays + (1,)):
        raise Mismatch("E does not restrict to the exceptional divisor of the fiber.")

    ledger = BlowupLedger(
        cl_tilde,
        cl_pi_tilde,
        restriction_tilde,
        vertical_data.cl_pi,
        restriction_tilde.is_surjective(),
    )
    logger.info("Blow-up ledger for %r: %r", spec, ledger)
    return ledger


def build_wps_bundle(weights, v):
    """
    The bundle of weighted projective spaces ``P(weights)`` over ``P1`` twisted
    by ``v``: rays of the weighted projective fan with a zero appended, then
    ``(0, 1)`` and ``(v, -1)``; maximal cones ``cone(sigma, (0, 1))`` and
    ``cone(sigma, (v, -1))``. Returns the projection to ``P1``.
    """
    fiber = weighted_projective_fan(weights)
    v = tuple(int(x) for x in v)
    if len(v) != fiber.rank:
        raise DimensionMismatch(
            "Twist of length {0} for a rank {1} fiber.".format(len(v), fiber.rank)
        )
    rays = [ray + (0,) for ray in fiber.rays]
    top, bottom = fiber.nrays, fiber.nrays + 1
    rays += [(0,) * fiber.rank + (1,), v + (-1,)]
    cones = []
    for sigma in fiber.max_cones:
        cones.append(sigma + (top,))
        cones.append(sigma + (bottom,))
    name = "{0}-bundle".format(fiber.name)
    if any(v):
        name = "{0}[{1}]".format(name, ",".join(str(x) for x in v))
    bundle = Fan(fiber.rank + 1, rays, cones, name=name)
    matrix = IntMatrix([[0] * fiber.rank + [1]])
    return ToricMorphism(bundle, projective_line(), matrix)


class NonFGCertificate(object):
    """
    The outcome of :func:`certify_nonfg`. ``valid`` is true only when every
    machine check passed and a citation was supplied.
    """

    def __init__(self, spec, checks, external_input, conclusion, valid):
        self.spec = spec
        self.checks = list(checks)
        self.external_input = external_input
        self.conclusion = conclusion
        self.valid = valid
        self.assumptions = [GENERALITY]

    def __repr__(self):
        return "<NonFGCertificate {0} valid={1}>".format(self.spec, self.valid)

    def to_dict(self):
        return {
            "spec": self.spec.to_dict(),
            "checks": [
                {"name": c.name, "pass": c.passed, "witness": c.witness}
                for c in self.checks
            ],
            "external_input": self.external_input,
            "assumptions": self.assumptions,
            "implication": MORI_REMARK,
            "valid": self.valid,
            "conclusion": self.conclusion,
        }


def certify_nonfg(spec, external_input, box_radius=5):
    """
    Runs the construction checks, the blow-up ledger and the fiber theorem on
    ``spec`` and emits a :class:`NonFGCertificate`. Failures are recorded in
    the certificate, never raised.
    """
    checks = list(check_construction_hypotheses(spec))
    try:
        ledger = blowup_class_ledger(spec)
        checks.append(Check("restriction surjective", ledger.surjective, None))
        checks.append(
            Check(
                "vertical classes preserved",
                ledger.cl_pi_tilde.isomorphic_to(ledger.cl_pi),
                ledger.cl_pi_tilde.describe(),
            )
        )
    except (PrerequisiteFailed, Mismatch) as exc:
        checks.append(Check("blow-up ledger", False, str(exc)))

    try:
        report = verify_theorem(spec.morphism, box_radius)
        checks.append(Check("fiber theorem", report.passed, None))
    except HypothesisFailed as exc:
        checks.append(Check("fiber theorem", False, exc.failed))
    except CoxFiberCheckError as exc:
        checks.append(Check("fiber theorem", False, str(exc)))

    citation = (external_input or "").strip()
    checks.append(Check("external input", bool(citation), None))
    failed = failed_names(checks)
    valid = not failed
    if valid:
        conclusion = (
            "The Cox ring of the blow-up of {0} along the closure of {{x0}} x T_Y "
            "is not finitely generated, because the Cox ring of the blow-up of "
            "the fiber {1} at x0 is not ({2}).".format(
                spec.source_label, fiber_subfan(spec.morphism).fiber_fan.label, citation
            )
        )
    else:
        conclusion = "No conclusion; failed checks: {0}.".format(", ".join(failed))
    certificate = NonFGCertificate(spec, checks, citation, conclusion, valid)
    logger.info("Certificate for %r emitted, valid=%s", spec, valid)
    return certificate
