"""
Rational polyhedral fans, toric morphisms and the fiber fan.

A :class:`Fan` stores primitive ray generators and its maximal cones as tuples
of ray indices. Construction validates everything with exact arithmetic, so a
``Fan`` instance you hold is always a fan. A :class:`ToricMorphism` is a lattice
map compatible with a pair of fans.

A torus invariant prime divisor ``D_rho`` of the source dominates the target
exactly when ``alpha(u_rho) = 0``: the orbit closure of ``rho`` maps onto the
orbit closure of the smallest target cone containing ``alpha(rho)``, which is
the whole target only for the zero cone. Rays with ``alpha(u_rho) != 0`` are
therefore the vertical ones.
"""

from collections import Counter, namedtuple
from functools import reduce
from itertools import combinations
import logging
import math

from coxfiber.exceptions import (
    CoxFiberInvalidError,
    BadIntersection,
    BadWeights,
    DimensionMismatch,
    DuplicateRay,
    Incompatible,
    NonPrimitiveRay,
    NotStronglyConvex,
    RedundantGenerator,
)
from coxfiber.toric.intlin import (
    IntMatrix,
    as_matrix,
    kernel_basis,
    smith_normal_form,
    solve_integer,
)
from coxfiber.toric.polyhedral import in_cone

logger = logging.getLogger(__name__)


def _rank_of(vectors, dim):
    if not vectors:
        return 0
    return smith_normal_form(IntMatrix(vectors, shape=(len(vectors), dim))).rank


class Cone(object):
    """A cone of a fan, given by indices into the fan's ray list."""

    def __init__(self, fan, indices):
        self.fan = fan
        self.indices = tuple(indices)

    def __repr__(self):
        return "<Cone {0}>".format(list(self.indices))

    def __eq__(self, other):
        return isinstance(other, Cone) and (self.fan, self.indices) == (
            other.fan,
            other.indices,
        )

    def __hash__(self):
        return hash(self.indices)

    @property
    def generators(self):
        return [self.fan.rays[i] for i in self.indices]

    @property
    def dimension(self):
        return _rank_of(self.generators, self.fan.rank)

    def contains(self, v):
        return cone_contains(self.fan, self, v)

    def face_of(self, subset):
        """Ray indices of the smallest face containing the given generators."""
        subset = tuple(subset)
        if not subset:
            return ()
        center = tuple(sum(col) for col in zip(*(self.fan.rays[i] for i in subset)))
        face = []
        for g in self.indices:
            others = [self.fan.rays[i] for i in self.indices if i != g]
            target = tuple(-x for x in self.fan.rays[g])
            if g in subset or in_cone(others + [tuple(-x for x in center)], target):
                face.append(g)
        return tuple(face)


class Fan(object):
    """
    A rational polyhedral fan in ``N = Z^rank``.

    Pass in the rank, the ray generators and the maximal cones as lists of
    0-based ray indices. The fan is validated upon instantiation and will raise
    a subclass of
    :class:`CoxFiberInvalidError <coxfiber.exceptions.CoxFiberInvalidError>`
    if anything is off. ``check=False`` skips the geometric checks and is only
    meant for fans produced by code that already guarantees them.
    """

    def __init__(self, rank, rays, max_cones, name=None, check=True):
        self.rank = int(rank)
        self.rays = [tuple(int(x) for x in ray) for ray in rays]
        self.max_cones = [tuple(int(i) for i in cone) for cone in max_cones]
        self.name = name
        if check:
            self.validate()

    def __repr__(self):
        return "<Fan {0} rank={1.rank} rays={2} cones={3}>".format(
            self.label, self, len(self.rays), len(self.max_cones)
        )

    def __eq__(self, other):
        if not isinstance(other, Fan):
            return NotImplemented
        return (self.rank, self.rays, self.max_cones) == (
            other.rank,
            other.rays,
            other.max_cones,
        )

    def __hash__(self):
        return hash((self.rank, tuple(self.rays), tuple(self.max_cones)))

    @property
    def label(self):
        return self.name or "fan"

    @property
    def nrays(self):
        return len(self.rays)

    @property
    def cones(self):
        return [Cone(self, c) for c in self.max_cones]

    def ray_matrix(self):
        """Rays as columns, ``rank x nrays``."""
        return IntMatrix.from_columns(self.rays, self.rank)

    def validate(self):
        """
        Checks primitivity and distinctness of rays, that no listed cone is a
        face of another, strong convexity, that listed generators span faces
        and that cones meet along common faces.
        You shouldn't have to call this yourself.
        """
        seen = {}
        for i, ray in enumerate(self.rays):
            if len(ray) != self.rank:
                raise DimensionMismatch(
                    "Ray {0} has length {1}, expected {2}.".format(i, len(ray), self.rank)
                )
            if reduce(math.gcd, ray, 0) != 1:
                raise NonPrimitiveRay("Ray {0} {1} is not primitive.".format(i, ray))
            if ray in seen:
                raise DuplicateRay(
                    "Rays {0} and {1} are both {2}.".format(seen[ray], i, ray)
                )
            seen[ray] = i
        used = set()
        for c, cone in enumerate(self.max_cones):
            for i in cone:
                if not 0 <= i < len(self.rays):
                    raise CoxFiberInvalidError(
                        "Cone {0} refers to unknown ray {1}.".format(c, i)
                    )
            if len(set(cone)) != len(cone):
                raise CoxFiberInvalidError("Cone {0} repeats a ray.".format(c))
            if any(set(cone) == set(other) for other in self.max_cones[:c]):
                raise CoxFiberInvalidError("Cone {0} is listed twice.".format(c))
            larger = next(
                (o for o, other in enumerate(self.max_cones) if set(cone) < set(other)),
                None,
            )
            if larger is not None:
                raise CoxFiberInvalidError(
                    "Cone {0} is a face of cone {1}, not a maximal cone.".format(c, larger)
                )
            used.update(cone)
        unused = sorted(set(range(len(self.rays))) - used)
        if unused:
            raise CoxFiberInvalidError(
                "Ray {0} does not belong to any cone.".format(unused[0])
            )

        for c, cone in enumerate(self.cones):
            generators = cone.generators
            for i, g in zip(cone.indices, generators):
                if in_cone(generators, tuple(-x for x in g)):
                    raise NotStronglyConvex(
                        "Cone {0} contains the line through ray {1}.".format(c, i)
                    )
            for i in cone.indices:
                if cone.face_of((i,)) != (i,):
                    raise RedundantGenerator(
                        "Ray {0} does not span a face of cone {1}.".format(i, c)
                    )

        cones = self.cones
        for a, b in combinations(range(len(cones)), 2):
            first, second = cones[a], cones[b]
            common = set(first.indices) & set(second.indices)
            if (
                set(first.face_of(common)) != common
                or set(second.face_of(common)) != common
                or _meet_beyond(first, second, common)
            ):
                raise BadIntersection(
                    "Cones {0} and {1} do not meet in a common face.".format(a, b),
                    cones=(a, b),
                )
        logger.debug("Validated %r", self)

    def to_dict(self):
        data = {
            "rank": self.rank,
            "rays": [list(r) for r in self.rays],
            "max_cones": [list(c) for c in self.max_cones],
        }
        if self.name is not None:
            data["name"] = self.name
        return data


def _meet_beyond(first, second, common):
    """
    Whether the two cones share a point outside the face spanned by
    ``common``: some ``sum l_i u_i = sum m_j w_j`` with the coefficients of
    ``first`` outside ``common`` summing to one.
    """
    rank = first.fan.rank
    generators = [
        tuple(first.fan.rays[i]) + (int(i not in common),) for i in first.indices
    ]
    generators += [tuple(-x for x in w) + (0,) for w in second.generators]
    return in_cone(generators, (0,) * rank + (1,))


def validate_fan(fan):
    fan.validate()
    return True


def cone_contains(fan, cone, v):
    """
    Whether ``v`` lies in the cone, where ``cone`` is a :class:`Cone` or an
    iterable of ray indices.
    """
    v = tuple(v)
    if len(v) != fan.rank:
        raise DimensionMismatch(
            "Vector of length {0} in a rank {1} fan.".format(len(v), fan.rank)
        )
    indices = cone.indices if isinstance(cone, Cone) else tuple(cone)
    return in_cone([fan.rays[i] for i in indices], v)


def cone_facets(fan, cone):
    """
    The facets of a cone as sorted tuples of ray indices, found through
    supporting hyperplanes spanned by ``dim - 1`` generators.
    """
    cone = cone if isinstance(cone, Cone) else Cone(fan, cone)
    dim = cone.dimension
    if dim != fan.rank:
        raise CoxFiberInvalidError("Facets are only computed for full cones.")
    facets = set()
    for subset in combinations(cone.indices, dim - 1):
        rows = [fan.rays[i] for i in subset]
        normals = kernel_basis(IntMatrix(rows, shape=(len(rows), fan.rank)))
        if len(normals) != 1:
            continue
        h = normals[0]
        values = {i: sum(a * b for a, b in zip(h, fan.rays[i])) for i in cone.indices}
        if any(x < 0 for x in values.values()):
            if any(x > 0 for x in values.values()):
                continue
            values = {i: -x for i, x in values.items()}
        facets.add(tuple(sorted(i for i, x in values.items() if x == 0)))
    return sorted(facets)


def is_complete(fan):
    """
    Whether the support of the fan is all of ``N_Q``: the fan is pure of full
    dimension, every ridge lies in exactly two maximal cones and the cones
    are connected through ridges.
    """
    if fan.rank == 0:
        return True
    if any(cone.dimension != fan.rank for cone in fan.cones):
        return False
    ridges = Counter()
    owners = {}
    for c, cone in enumerate(fan.max_cones):
        for facet in cone_facets(fan, cone):
            ridges[facet] += 1
            owners.setdefault(facet, []).append(c)
    if any(count != 2 for count in ridges.values()):
        return False
    reached = {0}
    frontier = [0]
    while frontier:
        c = frontier.pop()
        for facet in cone_facets(fan, fan.max_cones[c]):
            for other in owners[facet]:
                if other not in reached:
                    reached.add(other)
                    frontier.append(other)
    return len(reached) == len(fan.max_cones)


class ToricMorphism(object):
    """
    A lattice map ``alpha: N_source -> N_target`` sending every cone of the
    source fan into a cone of the target fan. The matrix has ``target.rank``
    rows and acts on column vectors; compatibility is checked upon
    instantiation and raises
    :class:`Incompatible <coxfiber.exceptions.Incompatible>`.
    """

    def __init__(self, source, target, matrix, check=True):
        matrix = as_matrix(matrix) if matrix is not None else None
        if matrix is None or matrix.shape != (target.rank, source.rank):
            raise DimensionMismatch(
                "Morphism matrix must be {0}x{1}.".format(target.rank, source.rank)
            )
        self.source = source
        self.target = target
        self.matrix = matrix
        if check:
            witness = self.incompatibility()
            if witness is not None:
                cone, ray = witness
                raise Incompatible(
                    "Cone {0} is not mapped into a target cone; ray {1} "
                    "escapes.".format(cone, ray),
                    cone=cone,
                    ray=ray,
                )

    def __repr__(self):
        return "<ToricMorphism {0} -> {1}>".format(self.source.label, self.target.label)

    def image(self, i):
        """Image of the ``i``-th source ray."""
        return self.matrix.apply(self.source.rays[i])

    def incompatibility(self):
        """
        ``(cone, ray)`` witnessing incompatibility, or ``None``. The witness
        ray is the first one escaping the target cone that holds the longest
        run of images.
        """
        for c, cone in enumerate(self.source.max_cones):
            images = [self.image(i) for i in cone]
            witness, reach = None, -1
            for target_cone in self.target.max_cones:
                position = next(
                    (
                        p
                        for p, v in enumerate(images)
                        if not cone_contains(self.target, target_cone, v)
                    ),
                    None,
                )
                if position is None:
                    break
                if position > reach:
                    witness, reach = cone[position], position
            else:
                return c, witness
        return None

    def to_dict(self):
        return {
            "source": self.source.to_dict(),
            "target": self.target.to_dict(),
            "matrix": self.matrix.tolist(),
        }


def make_morphism(source, target, matrix):
    return ToricMorphism(source, target, matrix)


def lattice_surjective(morphism):
    """Whether ``alpha`` maps ``N_source`` onto ``N_target``."""
    snf = smith_normal_form(morphism.matrix)
    return snf.rank == morphism.target.rank and not snf.invariant_factors


def vertical_rays(morphism):
    return tuple(
        i for i in range(morphism.source.nrays) if any(morphism.image(i))
    )


def rational_section(morphism):
    """
    An integral splitting ``s: N_target -> N_source`` with ``alpha s = id``.
    It exists exactly when the morphism is lattice surjective; otherwise
    :class:`NoSolution <coxfiber.exceptions.NoSolution>` is raised.
    """
    n = morphism.target.rank
    columns = [
        solve_integer(morphism.matrix, tuple(int(i == j) for j in range(n)))
        for i in range(n)
    ]
    return IntMatrix.from_columns(columns, morphism.source.rank)


class FiberFanResult(
    namedtuple(
        "FiberFanResult",
        ["kernel_basis", "fiber_fan", "ray_correspondence", "source_rank"],
    )
):
    """
    The fiber fan in coordinates of ``kernel_basis``, and for each of its rays
    the index of the source ray it comes from.
    """

    def embed(self, coordinates):
        """Re-embeds kernel coordinates into the source lattice."""
        return tuple(
            sum(c * b[i] for c, b in zip(coordinates, self.kernel_basis))
            for i in range(self.source_rank)
        )


def fiber_subfan(morphism):
    """
    The fan of the fiber over the identity of the target torus: the cones of
    the source lying in ``ker(alpha)_Q``, written in coordinates of the
    Hermite basis of ``ker(alpha)``.
    """
    source = morphism.source
    basis = kernel_basis(morphism.matrix)
    vertical = set(vertical_rays(morphism))
    correspondence = tuple(i for i in range(source.nrays) if i not in vertical)
    index = {ray: position for position, ray in enumerate(correspondence)}
    basis_matrix = IntMatrix.from_columns(basis, source.rank)
    rays = [solve_integer(basis_matrix, source.rays[i]) for i in correspondence]

    candidates = []
    for cone in source.max_cones:
        face = tuple(index[i] for i in cone if i in index)
        if face not in candidates:
            candidates.append(face)
    max_cones = [
        face
        for face in candidates
        if not any(set(face) < set(other) for other in candidates)
    ]
    fiber = Fan(
        len(basis),
        rays,
        max_cones,
        name="{0}_0".format(source.label),
    )
    logger.debug(
        "Fiber fan of %r has %d rays and %d maximal cones",
        morphism,
        len(rays),
        len(max_cones),
    )
    return FiberFanResult(basis, fiber, correspondence, source.rank)


def projective_line():
    return Fan(1, [(1,), (-1,)], [(0,), (1,)], name="P1")


def projective_space(n):
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays.append(tuple(-1 for _ in range(n)))
    cones = list(combinations(range(n + 1), n))
    return Fan(n, rays, cones, name="P{0}".format(n))


def hirzebruch(a):
    return Fan(
        2,
        [(1, 0), (0, 1), (-1, a), (0, -1)],
        [(0, 1), (1, 2), (2, 3), (3, 0)],
        name="F{0}".format(a),
    )


def hirzebruch_fibration(a):
    """The ruling ``F_a -> P1`` given by the first coordinate."""
    return ToricMorphism(hirzebruch(a), projective_line(), [[1, 0]])


def weighted_projective_fan(weights):
    """
    The fan of ``P(a_0, ..., a_n)``. When some weight is one, the other
    coordinates are the standard basis (in order) and the last ray is
    ``-sum a_j e_j``; for ``(1, 1, 2)`` that is ``(1,0), (0,1), (-1,-2)``.
    Otherwise the rays are the images of the standard basis in the quotient
    lattice ``Z^{n+1} / Z a``. Either way every ray is made primitive, so
    ``(1, 2, 2)`` gives the fan of ``P2``. Maximal cones are all ``n``-subsets
    of rays.
    """
    weights = list(weights)
    if len(weights) < 2 or any(
        not isinstance(a, int) or isinstance(a, bool) or a < 1 for a in weights
    ):
        raise BadWeights("Weights must be at least two positive integers.")
    if reduce(math.gcd, weights, 0) != 1:
        raise BadWeights("Weights {0} have a common factor.".format(weights))
    n = len(weights) - 1
    if 1 in weights:
        i0 = weights.index(1)
        others = [a for i, a in enumerate(weights) if i != i0]
        images = [tuple(int(k == j) for j in range(n)) for k in range(n)]
        images.append(tuple(-a for a in others))
    else:
        snf = smith_normal_form(IntMatrix([[a] for a in weights]))
        images = [snf.U.column(i)[1:] for i in range(n + 1)]
    rays = []
    for image in images:
        g = reduce(math.gcd, image, 0)
        rays.append(tuple(x // g for x in image))
    name = "P({0})".format(",".join(str(a) for a in weights))
    return Fan(n, rays, list(combinations(range(n + 1), n)), name=name)


def product_fan(first, second):
    rays = [ray + (0,) * second.rank for ray in first.rays]
    rays += [(0,) * first.rank + ray for ray in second.rays]
    shift = first.nrays
    cones = [
        a + tuple(i + shift for i in b)
        for a in first.max_cones
        for b in second.max_cones
    ]
    return Fan(
        first.rank + second.rank,
        rays,
        cones,
        name="{0}x{1}".format(first.label, second.label),
    )


def product_projection(first, second):
    """The projection of ``first x second`` onto ``first``."""
    matrix = [
        [int(i == j) for j in range(first.rank + second.rank)]
        for i in range(first.rank)
    ]
    return ToricMorphism(
        product_fan(first, second),
        first,
        IntMatrix(matrix, shape=(first.rank, first.rank + second.rank)),
    )


def identity_morphism(fan):
    return ToricMorphism(fan, fan, IntMatrix.identity(fan.rank))
