"""
Toric divisor theory: class groups, vertical classes and the fiber.

Every divisor class of a toric variety has a torus invariant representative,
so class groups are computed from the exact sequence
``M -> Z^{rays} -> Cl(X) -> 0``, where the first map sends a character ``m`` to
its principal divisor ``(<m, u_rho>)_rho``.
"""

from collections import namedtuple
import logging
import random

from coxfiber.exceptions import (
    CoxFiberInvalidError,
    DimensionMismatch,
    Mismatch,
    SearchExhausted,
    TorsionVertical,
    TorusFactor,
)
from coxfiber.toric.fan import fiber_subfan, vertical_rays
from coxfiber.toric.intlin import (
    GroupHom,
    IntMatrix,
    cokernel,
    hermite_basis,
    kernel_basis,
    lattice_contains,
    lattice_intersection,
    saturation,
    solve_integer,
    subgroup_and_quotient,
)

logger = logging.getLogger(__name__)

K_SEARCH_ATTEMPTS = 64
PERTURBATION_RANGE = 3


class TorusDivisor(object):
    """A torus invariant Weil divisor, by its coefficient on each ray."""

    def __init__(self, coefficients):
        self.coefficients = tuple(int(c) for c in coefficients)

    def __repr__(self):
        return "<TorusDivisor {0}>".format(list(self.coefficients))

    def __eq__(self, other):
        return isinstance(other, TorusDivisor) and self.coefficients == other.coefficients

    def __hash__(self):
        return hash(self.coefficients)

    def __len__(self):
        return len(self.coefficients)

    def __iter__(self):
        return iter(self.coefficients)

    def __add__(self, other):
        if len(self) != len(other):
            raise DimensionMismatch("Divisors on different fans.")
        return TorusDivisor(a + b for a, b in zip(self, other))

    def __neg__(self):
        return TorusDivisor(-a for a in self)

    def __sub__(self, other):
        return self + (-other)

    @property
    def support(self):
        return tuple(i for i, c in enumerate(self.coefficients) if c)

    def is_zero(self):
        return not any(self.coefficients)


class DivisorClassData(object):
    """
    The divisor sequence of a fan: the ``pairing`` matrix (one row per ray),
    the class group as its cokernel and the ``degree`` matrix sending
    ``Z^{rays}`` onto the normal form of the class group.
    """

    def __init__(self, fan, pairing, class_group):
        self.fan = fan
        self.pairing = pairing
        self.class_group = class_group

    def __repr__(self):
        return "<DivisorClassData {0} Cl={1}>".format(
            self.fan.label, self.class_group.describe()
        )

    @property
    def degree(self):
        return self.class_group.projection

    def degree_of(self, divisor):
        return self.class_group.project(tuple(divisor))

    def ray_degree(self, i):
        return self.degree_of(self.unit(i))

    def ray_degrees(self):
        return [self.ray_degree(i) for i in range(self.fan.nrays)]

    def unit(self, i):
        return tuple(int(i == j) for j in range(self.fan.nrays))


def class_group(fan, check=True):
    """
    Computes ``Cl(X) = coker(M -> Z^{rays})``. Fans whose rays do not span
    ``N_Q`` have non-constant invertible functions and raise
    :class:`TorusFactor <coxfiber.exceptions.TorusFactor>` unless
    ``check=False``.
    """
    pairing = IntMatrix(fan.rays, shape=(fan.nrays, fan.rank))
    group = cokernel(pairing)
    if check and group.free_rank != fan.nrays - fan.rank:
        raise TorusFactor(
            "The rays of {0} do not span; the torus has a factor.".format(fan.label)
        )
    logger.debug("Class group of %s is %s", fan.label, group.describe())
    return DivisorClassData(fan, pairing, group)


def fiber_class_group(fiber):
    """Class data of the fiber fan in a :class:`FiberFanResult`."""
    return class_group(fiber.fiber_fan, check=False)


def principal_divisor(data, m):
    m = tuple(m)
    if len(m) != data.fan.rank:
        raise DimensionMismatch(
            "Character of length {0} on a rank {1} fan.".format(len(m), data.fan.rank)
        )
    return TorusDivisor(data.pairing.apply(m))


class VerticalClassData(object):
    """
    ``cl_pi`` is the subgroup of the class group generated by vertical ray
    classes, presented on those rays; ``cl_eta`` is the quotient by it and
    ``quotient_map`` goes from ``Z^{rays}`` onto ``cl_eta``.
    """

    def __init__(self, vertical_ray_set, cl_pi, cl_eta, quotient_map, inclusion):
        self.vertical_ray_set = tuple(vertical_ray_set)
        self.cl_pi = cl_pi
        self.cl_eta = cl_eta
        self.quotient_map = quotient_map
        self.inclusion = inclusion

    def __repr__(self):
        return "<VerticalClassData Cl_pi={0} Cl_eta={1}>".format(
            self.cl_pi.describe(), self.cl_eta.describe()
        )

    @property
    def torsion_free(self):
        return not self.cl_pi.invariant_factors

    def horizontal_rays(self, nrays):
        return tuple(i for i in range(nrays) if i not in self.vertical_ray_set)


def _require_source(data, morphism):
    if data.fan != morphism.source:
        raise CoxFiberInvalidError("Class data was not built from the morphism source.")


def vertical_class_group(data, morphism):
    _require_source(data, morphism)
    vertical = vertical_rays(morphism)
    split = subgroup_and_quotient(
        data.class_group, [data.unit(i) for i in vertical]
    )
    result = VerticalClassData(
        vertical, split.subgroup, split.quotient, split.quotient_map, split.inclusion
    )
    logger.debug("Vertical classes of %r: %r", morphism, result)
    return result


def pullback_to_fiber(data, fiber, divisor):
    """
    Restricts a divisor to the fiber: coefficients of fiber rays are kept and
    vertical ones are dropped.
    """
    if len(divisor) != data.fan.nrays:
        raise DimensionMismatch("Divisor does not match the fan.")
    coefficients = tuple(divisor)
    return TorusDivisor(coefficients[i] for i in fiber.ray_correspondence)


def restriction_matrix(data, fiber):
    """``Z^{rays} -> Z^{fiber rays}`` dropping vertical coordinates."""
    return IntMatrix(
        [
            [int(j == source) for j in range(data.fan.nrays)]
            for source in fiber.ray_correspondence
        ],
        shape=(len(fiber.ray_correspondence), data.fan.nrays),
    )


LatticeCheck = namedtuple(
    "LatticeCheck",
    ["ok", "saturations_equal", "lattices_equal", "witness", "left", "right"],
)


def vertical_principal_lattice_check(data, morphism):
    """
    Compares the characters vanishing on every horizontal ray with the
    pullbacks ``alpha^T(M_target)``. Equality means the principal divisors
    supported on vertical rays are exactly the pullbacks of principal
    divisors of the target, which also identifies the degree zero part of
    the localized Cox ring with the function field of the target.

    Returns a :class:`LatticeCheck`; ``witness`` is a character in one lattice
    but not in the other.
    """
    _require_source(data, morphism)
    fan = data.fan
    vertical = set(vertical_rays(morphism))
    horizontal = [fan.rays[i] for i in range(fan.nrays) if i not in vertical]
    left = kernel_basis(IntMatrix(horizontal, shape=(len(horizontal), fan.rank)))
    right = hermite_basis(
        [morphism.matrix.row(i) for i in range(morphism.matrix.rows)], fan.rank
    )
    witness = next((m for m in left if not lattice_contains(right, m)), None)
    if witness is None:
        witness = next((m for m in right if not lattice_contains(left, m)), None)
    saturations_equal = saturation(left, fan.rank) == saturation(right, fan.rank)
    lattices_equal = left == right
    return LatticeCheck(
        lattices_equal, saturations_equal, lattices_equal, witness, left, right
    )


RestrictionResult = namedtuple("RestrictionResult", ["hom", "surjective", "fiber_class"])


def restriction_surjective(data, morphism, fiber=None):
    """
    The restriction ``Cl(X) -> Cl(X_0)`` to the fiber over the identity of the
    target torus, and whether it is onto.
    """
    _require_source(data, morphism)
    fiber = fiber or fiber_subfan(morphism)
    fiber_class = fiber_class_group(fiber)
    hom = GroupHom(
        data.class_group, fiber_class.class_group, restriction_matrix(data, fiber)
    )
    return RestrictionResult(hom, hom.is_surjective(), fiber_class)


def _full_degree(group, generators):
    return subgroup_and_quotient(group, generators).quotient.is_trivial()


def _vertical_free(generators, vertical, nrays):
    coordinates = [tuple(int(i == j) for j in range(nrays)) for i in vertical]
    return not lattice_intersection(generators, coordinates, dim=nrays)


def choose_divisor_subgroup_K(data, morphism, seed=0, attempts=K_SEARCH_ATTEMPTS):
    """
    Chooses divisors spanning a subgroup ``K`` of ``Z^{rays}`` that maps onto
    the class group and meets the vertical coordinate lattice only in zero.

    Horizontal ray divisors are taken greedily while their classes enlarge the
    span; each remaining generator of the class group is then lifted and
    moved by a random principal divisor ``div(chi^m)`` with ``m`` outside
    ``alpha^T(M_target)``. Both properties are verified before returning.
    Raises :class:`SearchExhausted <coxfiber.exceptions.SearchExhausted>`
    after ``attempts`` tries.
    """
    vertical_data = vertical_class_group(data, morphism)
    if not vertical_data.torsion_free:
        raise TorsionVertical(
            "Cl_pi is {0}.".format(vertical_data.cl_pi.describe())
        )
    fan = data.fan
    group = data.class_group
    relations = data.pairing.columns()
    vertical = vertical_data.vertical_ray_set
    horizontal = vertical_data.horizontal_rays(fan.nrays)
    pullbacks = hermite_basis(
        [morphism.matrix.row(i) for i in range(morphism.matrix.rows)], fan.rank
    )
    perturbable = len(pullbacks) < fan.rank or any(
        pullbacks[i][i] != 1 for i in range(len(pullbacks))
    )
    rng = random.Random(seed)

    for attempt in range(attempts):
        order = list(horizontal)
        if attempt:
            rng.shuffle(order)
        chosen = []
        for h in order:
            if not lattice_contains(chosen + relations, data.unit(h)):
                chosen.append(data.unit(h))
        missing = subgroup_and_quotient(group, chosen).quotient
        for i in range(missing.ngens):
            if not perturbable:
                break
            m = _draw_character(rng, fan.rank, pullbacks)
            lift = missing.lift.column(i)
            chosen.append(
                tuple(a + b for a, b in zip(lift, data.pairing.apply(m)))
            )
        if _full_degree(group, chosen) and _vertical_free(chosen, vertical, fan.nrays):
            logger.debug("Found K after %d attempt(s)", attempt + 1)
            return [TorusDivisor(g) for g in chosen]
        logger.debug("K attempt %d rejected", attempt + 1)
    logger.warning("No vertical-free K found in %d attempts", attempts)
    raise SearchExhausted(
        "No subgroup K avoiding vertical divisors after {0} attempts.".format(attempts)
    )


def _draw_character(rng, rank, pullbacks):
    while True:
        m = tuple(
            rng.randint(-PERTURBATION_RANGE, PERTURBATION_RANGE) for _ in range(rank)
        )
        if not lattice_contains(pullbacks, m):
            return m


Prim1Result = namedtuple(
    "Prim1Result", ["ok", "quotient", "cl_pi", "primitive", "k0", "k0_eta"]
)


def lemma_prim1_check(data, morphism, K):
    """
    Compares ``K0_eta / i*(K0)`` with ``Cl_pi``, where ``K0`` are the principal
    divisors in ``K`` and ``K0_eta`` the principal divisors of the fiber in
    the restriction of ``K``. Also records whether ``i*(K0)`` is primitive in
    ``K0_eta``. Raises :class:`Mismatch <coxfiber.exceptions.Mismatch>` when the
    two groups differ.
    """
    vertical_data = vertical_class_group(data, morphism)
    fiber = fiber_subfan(morphism)
    fiber_class = fiber_class_group(fiber)
    nrays = data.fan.nrays
    generators = [tuple(k) for k in K]

    k0 = lattice_intersection(generators, data.pairing.columns(), dim=nrays)
    k_eta = [tuple(pullback_to_fiber(data, fiber, g)) for g in generators]
    fiber_rays = len(fiber.ray_correspondence)
    k0_eta = lattice_intersection(
        k_eta, fiber_class.pairing.columns(), dim=fiber_rays
    )
    restricted = [tuple(pullback_to_fiber(data, fiber, g)) for g in k0]

    basis = IntMatrix.from_columns(k0_eta, fiber_rays)
    coordinates = [solve_integer(basis, c) for c in restricted]
    quotient = cokernel(IntMatrix.from_columns(coordinates, len(k0_eta)))
    primitive = not quotient.invariant_factors
    cl_pi = vertical_data.cl_pi
    if quotient.normal_form() != cl_pi.normal_form():
        raise Mismatch(
            "K0_eta / i*(K0) is {0} but Cl_pi is {1}.".format(
                quotient.describe(), cl_pi.describe()
            ),
            groups=(quotient.normal_form(), cl_pi.normal_form()),
        )
    return Prim1Result(True, quotient, cl_pi, primitive, k0, k0_eta)
