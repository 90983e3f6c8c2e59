"""
The generic fiber of a toric fiber space and its Cox ring.

For ``pi: X -> Y`` with torsion free vertical class group ``Cl_pi``, the Cox
ring of the generic fiber is obtained from the Cox ring of ``X`` by inverting
the vertical variables and setting ``u(w) = 1`` for a unit section
``u: Cl_pi -> R_pi(X)^*``. In the toric model ``u`` is monomial, so the
quotient is described entirely by exponent lattices:

* the :class:`UnitSection` gives for each generator ``w`` of ``Cl_pi`` an
  exponent vector on vertical rays of degree ``-w``;
* the :class:`QuotientPresentation` reduces vertical exponents modulo the
  lattice of those vectors and grades horizontal exponents by
  ``Cl_eta = Cl(X) / Cl_pi``.

Graded pieces of the quotient have a basis of distinct horizontal exponent
patterns: two monomials with the same horizontal part differ by a monomial
fraction of vertical degree, which lies in the degree zero part, the function
field of ``Y``. :func:`verify_theorem` counts those patterns degree by degree
and compares them with an independent count on the fiber fan.
"""

from collections import namedtuple
from fractions import Fraction
from itertools import product
import logging
import math

from coxfiber.exceptions import (
    GradingError,
    HypothesisFailed,
    InfiniteDimension,
    NoMonomialUnit,
    NoSolution,
    NotInjective,
    NotSurjective,
    TorsionVertical,
    TorusFactor,
)
from coxfiber.toric.divclass import (
    class_group,
    fiber_class_group,
    vertical_class_group,
)
from coxfiber.toric.fan import (
    fiber_subfan,
    is_complete,
    lattice_surjective,
)
from coxfiber.toric.intlin import (
    GroupHom,
    IntMatrix,
    compose,
    hermite_basis,
    reduce_modulo,
    smith_normal_form,
    solve_integer,
)
from coxfiber.toric.polyhedral import count_lattice_points, feasible_point, in_cone

logger = logging.getLogger(__name__)

Check = namedtuple("Check", ["name", "passed", "witness"])


class CoxPresentation(object):
    """
    A polynomial ring with one variable per ray of ``fan``, graded by
    ``group``; column ``i`` of ``degree`` is the degree of ``x_{i+1}``.
    """

    def __init__(self, fan, group, degree):
        self.fan = fan
        self.group = group
        self.degree = degree

    def __repr__(self):
        return "<CoxPresentation {0} graded by {1}>".format(
            self.fan.label, self.group.describe()
        )

    @property
    def variables(self):
        return ["x{0}".format(i + 1) for i in range(self.fan.nrays)]

    def degrees(self):
        return self.degree.columns()


def cox_presentation(data):
    return CoxPresentation(data.fan, data.class_group, data.degree)


def _spread(values, positions, length):
    vector = [0] * length
    for value, position in zip(values, positions):
        vector[position] = value
    return tuple(vector)


class UnitSection(object):
    """
    For each normal form generator ``w`` of ``Cl_pi`` (given as a class of
    ``Cl(X)`` in ``generators``), an exponent vector supported on vertical
    rays whose degree is ``-w``.
    """

    def __init__(self, generators, exponents, vertical_rays):
        self.generators = list(generators)
        self.exponents = list(exponents)
        self.vertical_rays = tuple(vertical_rays)

    def __repr__(self):
        return "<UnitSection {0}>".format([list(e) for e in self.exponents])


def unit_section(data, vertical_data):
    """
    The canonical monomial unit section: each exponent vector is the negated
    lift of a generator reduced modulo the degree zero vertical exponents,
    in trailing Hermite form. Raises
    :class:`TorsionVertical <coxfiber.exceptions.TorsionVertical>` when
    ``Cl_pi`` has torsion.
    """
    cl_pi = vertical_data.cl_pi
    if cl_pi.invariant_factors:
        raise TorsionVertical("Cl_pi is {0}.".format(cl_pi.describe()))
    nrays = data.fan.nrays
    vertical = vertical_data.vertical_ray_set
    relations = cl_pi.relations.columns()
    generators, exponents = [], []
    for i in range(cl_pi.ngens):
        lift = cl_pi.lift.column(i)
        reduced = reduce_modulo(tuple(-x for x in lift), relations, trailing=True)
        exponent = _spread(reduced, vertical, nrays)
        w = data.degree_of(_spread(lift, vertical, nrays))
        if data.degree_of(exponent) != data.class_group.reduce(tuple(-x for x in w)):
            raise NoMonomialUnit(
                "No vertical monomial of degree -{0}.".format(list(w))
            )
        generators.append(w)
        exponents.append(exponent)
    return UnitSection(generators, exponents, vertical)


class QuotientPresentation(object):
    """
    Exponent-lattice model of the localized Cox ring modulo ``1 - u(w)``.
    ``congruence_lattice`` holds the unit section exponents and
    ``eta_grading`` sends horizontal exponents to ``Cl_eta``.
    """

    def __init__(
        self,
        horizontal_rays,
        vertical_rays,
        congruence_lattice,
        eta_grading,
        vertical_data,
    ):
        self.horizontal_rays = tuple(horizontal_rays)
        self.vertical_rays = tuple(vertical_rays)
        self.congruence_lattice = list(congruence_lattice)
        self.eta_grading = eta_grading
        self.vertical_data = vertical_data
        self._hermite = hermite_basis(
            self.congruence_lattice,
            len(self.horizontal_rays) + len(self.vertical_rays),
        )

    def __repr__(self):
        return "<QuotientPresentation H={0} V={1}>".format(
            list(self.horizontal_rays), list(self.vertical_rays)
        )

    @property
    def cl_eta(self):
        return self.vertical_data.cl_eta

    def canonical_form(self, exponent):
        return reduce_modulo(exponent, self._hermite)

    def degree_eta(self, exponent):
        return self.vertical_data.quotient_map(exponent)


def quotient_presentation(data, vertical_data, section):
    nrays = data.fan.nrays
    horizontal = vertical_data.horizontal_rays(nrays)
    columns = [vertical_data.quotient_map(data.unit(h)) for h in horizontal]
    eta_grading = IntMatrix.from_columns(columns, vertical_data.cl_eta.ngens)
    return QuotientPresentation(
        horizontal,
        vertical_data.vertical_ray_set,
        section.exponents,
        eta_grading,
        vertical_data,
    )


def canonical_form(presentation, exponent):
    """
    Reduces vertical coordinates of an exponent vector modulo the unit
    section lattice. Horizontal coordinates are never altered.
    """
    return presentation.canonical_form(exponent)


def degree_eta(presentation, exponent):
    return presentation.degree_eta(exponent)


GradingIso = namedtuple("GradingIso", ["map", "inverse"])


def _missed_generator(hom):
    stacked = IntMatrix.hstack(hom.induced_matrix(), hom.target_relations())
    for i in range(hom.target.ngens):
        try:
            solve_integer(stacked, hom.target.generator(i))
        except NoSolution:
            return hom.target.generator(i)
    return None


def grading_isomorphism(vertical_data, fiber_class, correspondence):
    """
    Extends ``[D_rho]_eta -> [D_rho]_{X_0}`` on fiber rays to an isomorphism
    ``Cl_eta -> Cl(X_0)`` and returns it with its inverse. Raises a subclass
    of :class:`GradingError <coxfiber.exceptions.GradingError>` with a witness
    class when the assignment is not a well defined isomorphism.
    """
    cl_eta = vertical_data.cl_eta
    fiber_group = fiber_class.class_group
    nrays = cl_eta.ambient_rank
    restriction = IntMatrix(
        [[int(j == source) for j in range(nrays)] for source in correspondence],
        shape=(len(correspondence), nrays),
    )
    forward = GroupHom(cl_eta, fiber_group, restriction)
    witness = forward.kernel_witness()
    if witness is not None:
        raise NotInjective(
            "Class {0} of Cl_eta dies on the fiber.".format(list(witness)),
            witness=witness,
        )
    if not forward.is_surjective():
        witness = _missed_generator(forward)
        raise NotSurjective(
            "Fiber class {0} is not reached.".format(list(witness)), witness=witness
        )
    inverse = GroupHom(fiber_group, cl_eta, restriction.T)
    round_trip = compose(inverse, forward)
    for i in range(cl_eta.ngens):
        generator = cl_eta.generator(i)
        if round_trip.apply_class(generator) != generator:
            raise GradingError(
                "Inverse does not invert on {0}.".format(list(generator)),
                witness=generator,
            )
    return GradingIso(forward, inverse)


def _positive_functional(vectors, dim):
    """A rational ``y`` with ``y . g >= 1`` for every ``g``."""
    if dim == 0 or in_cone(
        [tuple(g) + (1,) for g in vectors], (0,) * dim + (1,)
    ):
        raise InfiniteDimension(
            "A nonzero monomial in the horizontal variables has degree zero."
        )
    y = feasible_point(
        [[-x for x in g] for g in vectors], [-1] * len(vectors), dim
    )
    if y is None:
        raise InfiniteDimension("The horizontal grading is not positive.")
    return y


def hilbert_dimension_quotient(presentation, degree):
    """
    Dimension over the function field of the target of the ``degree`` piece
    of the quotient: the number of horizontal exponent vectors of that
    ``Cl_eta`` degree. Enumeration is bounded by a linear functional that is
    positive on every horizontal degree.
    """
    group = presentation.cl_eta
    degree = group.reduce(degree)
    columns = presentation.eta_grading.columns()
    if not columns:
        return int(not any(degree))
    f = group.free_rank
    y = _positive_functional([c[:f] for c in columns], f)
    weights = [sum(a * Fraction(b) for a, b in zip(y, c[:f])) for c in columns]
    budget = sum(a * Fraction(b) for a, b in zip(y, degree[:f]))
    if budget < 0:
        return 0

    def walk(i, remaining, partial):
        if i == len(columns):
            return int(group.reduce(partial) == degree)
        total = 0
        for a in range(math.floor(remaining / weights[i]) + 1):
            total += walk(
                i + 1,
                remaining - a * weights[i],
                tuple(p + a * c for p, c in zip(partial, columns[i])),
            )
        return total

    count = walk(0, budget, (0,) * group.ngens)
    logger.debug("Quotient piece of degree %s has dimension %d", list(degree), count)
    return count


def hilbert_dimension_fiber(fiber_class, degree):
    """
    Dimension of the ``degree`` piece of the Cox ring of the fiber, counted as
    the lattice points ``m`` with ``div(chi^m) + D >= 0`` for a divisor ``D``
    of that class.
    """
    group = fiber_class.class_group
    degree = group.reduce(degree)
    fan = fiber_class.fan
    if fan.rank == 0:
        return int(not any(degree))
    divisor = group.lift_class(degree)
    A = [[-x for x in ray] for ray in fan.rays]
    count = count_lattice_points(A, divisor, fan.rank)
    logger.debug("Fiber piece of degree %s has dimension %d", list(degree), count)
    return count


def degree_box(group, radius):
    """
    Normal form degrees with free coordinates in ``[-radius, radius]`` and a
    full cycle through each torsion coordinate, in lexicographic order.
    """
    ranges = [
        range(-radius, radius + 1) if d == 0 else range(d) for d in group.moduli
    ]
    return [tuple(d) for d in product(*ranges)]


def theorem_hypotheses(morphism):
    """The checkable hypotheses of the fiber theorem, as a list of :class:`Check`."""
    source, target = morphism.source, morphism.target
    checks = [
        Check("source complete", is_complete(source), None),
        Check("target complete", is_complete(target), None),
    ]
    snf = smith_normal_form(morphism.matrix)
    checks.append(
        Check(
            "connected fibers",
            lattice_surjective(morphism),
            None if lattice_surjective(morphism) else list(snf.diagonal),
        )
    )
    spans = {}
    for name, fan in (("source", source), ("target", target)):
        try:
            class_group(fan)
            spans[name] = True
        except TorusFactor:
            spans[name] = False
        checks.append(Check("{0} rays span".format(name), spans[name], None))
    vertical_data = vertical_class_group(class_group(source, check=False), morphism)
    checks.append(
        Check(
            "vertical torsion free",
            vertical_data.torsion_free,
            None
            if vertical_data.torsion_free
            else list(vertical_data.cl_pi.invariant_factors),
        )
    )
    return checks


def failed_names(checks):
    return [c.name for c in checks if not c.passed]


TableRow = namedtuple("TableRow", ["degree", "dim_quotient", "dim_fiber", "passed"])


class Report(object):
    """
    The outcome of :func:`verify_theorem`. ``passed`` is true when every
    hypothesis holds, the grading isomorphism exists, the degree zero piece
    is one dimensional and both counts agree in every degree of the box.
    """

    def __init__(
        self,
        morphism,
        hypotheses,
        grading_iso=None,
        grading_error=None,
        table=(),
        degree_zero_dimension=None,
        fiber_complete=None,
    ):
        self.morphism = morphism
        self.hypotheses = list(hypotheses)
        self.grading_iso = grading_iso
        self.grading_error = grading_error
        self.table = list(table)
        self.degree_zero_dimension = degree_zero_dimension
        self.fiber_complete = fiber_complete

    def __repr__(self):
        return "<Report {0} {1}>".format(
            self.morphism, "pass" if self.passed else "fail"
        )

    @property
    def passed(self):
        return (
            all(c.passed for c in self.hypotheses)
            and self.grading_iso is not None
            and self.degree_zero_dimension == 1
            and bool(self.table)
            and all(row.passed for row in self.table)
        )

    def to_dict(self):
        if self.grading_iso is not None:
            grading = {
                "map": self.grading_iso.map.induced_matrix().tolist(),
                "inverse": self.grading_iso.inverse.induced_matrix().tolist(),
                "source": self.grading_iso.map.source.describe(),
                "target": self.grading_iso.map.target.describe(),
            }
        elif self.grading_error is not None:
            grading = {
                "error": type(self.grading_error).__name__,
                "message": str(self.grading_error),
                "witness": getattr(self.grading_error, "witness", None),
            }
        else:
            grading = None
        return {
            "morphism": {
                "source": self.morphism.source.label,
                "target": self.morphism.target.label,
            },
            "hypotheses": {
                c.name: {"pass": c.passed, "witness": c.witness}
                for c in self.hypotheses
            },
            "grading_iso": grading,
            "table": [
                {
                    "degree": list(row.degree),
                    "dim_quotient": row.dim_quotient,
                    "dim_fiber": row.dim_fiber,
                    "pass": row.passed,
                }
                for row in self.table
            ],
            "degree_zero_dimension": self.degree_zero_dimension,
            "fiber_complete": self.fiber_complete,
            "pass": self.passed,
        }


def _count_or_none(function, *args):
    try:
        return function(*args)
    except InfiniteDimension as exc:
        logger.warning("%s", exc)
        return None


def verify_theorem(morphism, box_radius=10):
    """
    Checks the hypotheses, builds the unit section, the quotient presentation
    and the grading isomorphism, and compares the quotient and fiber Hilbert
    functions on a box of degrees. Raises
    :class:`HypothesisFailed <coxfiber.exceptions.HypothesisFailed>` naming
    the failing hypotheses.
    """
    checks = theorem_hypotheses(morphism)
    failed = failed_names(checks)
    if failed:
        raise HypothesisFailed(
            "Hypotheses failed: {0}.".format(", ".join(failed)),
            failed=failed,
            checks=checks,
        )
    data = class_group(morphism.source)
    vertical_data = vertical_class_group(data, morphism)
    fiber = fiber_subfan(morphism)
    fiber_class = fiber_class_group(fiber)
    fiber_complete = is_complete(fiber.fiber_fan)
    if not fiber_complete:
        logger.warning("Fiber fan of %r is not complete", morphism)
    section = unit_section(data, vertical_data)
    presentation = quotient_presentation(data, vertical_data, section)
    try:
        iso = grading_isomorphism(vertical_data, fiber_class, fiber.ray_correspondence)
    except GradingError as exc:
        logger.warning("No grading isomorphism: %s", exc)
        return Report(morphism, checks, grading_error=exc, fiber_complete=fiber_complete)

    table = []
    for degree in degree_box(vertical_data.cl_eta, box_radius):
        dim_quotient = _count_or_none(hilbert_dimension_quotient, presentation, degree)
        dim_fiber = _count_or_none(
            hilbert_dimension_fiber, fiber_class, iso.map.apply_class(degree)
        )
        table.append(
            TableRow(
                degree,
                dim_quotient,
                dim_fiber,
                dim_quotient is not None and dim_quotient == dim_fiber,
            )
        )
    zero = (0,) * vertical_data.cl_eta.ngens
    report = Report(
        morphism,
        checks,
        grading_iso=iso,
        table=table,
        degree_zero_dimension=_count_or_none(
            hilbert_dimension_quotient, presentation, zero
        ),
        fiber_complete=fiber_complete,
    )
    logger.info("Verified %r over %d degrees: %s", morphism, len(table), report.passed)
    return report


def very_general_fiber_cox(morphism):
    """
    The Cox ring of a very general fiber: the polynomial ring on the fiber
    rays graded by ``Cl(X_0)``, with each degree obtained by carrying the
    ``Cl_eta`` degree of the ray through the grading isomorphism. Raises
    :class:`GradingError <coxfiber.exceptions.GradingError>` if a carried
    degree differs from the fiber degree of the ray.
    """
    checks = theorem_hypotheses(morphism)
    failed = failed_names(checks)
    if failed:
        raise HypothesisFailed(
            "Hypotheses failed: {0}.".format(", ".join(failed)),
            failed=failed,
            checks=checks,
        )
    data = class_group(morphism.source)
    vertical_data = vertical_class_group(data, morphism)
    fiber = fiber_subfan(morphism)
    fiber_class = fiber_class_group(fiber)
    iso = grading_isomorphism(vertical_data, fiber_class, fiber.ray_correspondence)
    degrees = []
    for position, ray in enumerate(fiber.ray_correspondence):
        carried = iso.map.apply_class(vertical_data.quotient_map(data.unit(ray)))
        if carried != fiber_class.ray_degree(position):
            raise GradingError(
                "Ray {0} is carried to {1}.".format(ray, list(carried)),
                witness=carried,
            )
        degrees.append(carried)
    group = fiber_class.class_group
    return CoxPresentation(
        fiber.fiber_fan, group, IntMatrix.from_columns(degrees, group.ngens)
    )
