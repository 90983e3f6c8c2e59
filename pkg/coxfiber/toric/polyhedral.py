"""
Exact rational polyhedral computations by Fourier-Motzkin elimination.

Systems are lists of inequalities ``a . x <= b`` with :class:`fractions.Fraction`
coefficients. Nothing here is fast, but nothing here is ever rounded either,
which is what cone membership and lattice point counting need.
"""

from fractions import Fraction
import logging
import math

from coxfiber.exceptions import DimensionMismatch, InfiniteDimension

logger = logging.getLogger(__name__)


def _normalize(coeffs, rhs):
    scale = next((abs(c) for c in coeffs if c), None)
    if scale is None:
        return tuple(coeffs), rhs
    return tuple(c / scale for c in coeffs), rhs / scale


def _system(A, b):
    A = [[Fraction(x) for x in row] for row in A]
    b = [Fraction(x) for x in b]
    if len(A) != len(b):
        raise DimensionMismatch("{0} inequalities but {1} bounds.".format(len(A), len(b)))
    return list(zip(A, b))


def eliminate(system, j):
    """Projects out variable ``j``; its coefficient is zero in every result row."""
    keep, upper, lower = [], [], []
    for coeffs, rhs in system:
        c = coeffs[j]
        if c > 0:
            upper.append((coeffs, rhs))
        elif c < 0:
            lower.append((coeffs, rhs))
        else:
            keep.append((coeffs, rhs))
    result = {}
    for coeffs, rhs in keep:
        key = _normalize(list(coeffs), rhs)
        result[key[0], key[1]] = key
    for up_coeffs, up_rhs in upper:
        for low_coeffs, low_rhs in lower:
            p, q = up_coeffs[j], -low_coeffs[j]
            coeffs = [q * a + p * c for a, c in zip(up_coeffs, low_coeffs)]
            coeffs[j] = Fraction(0)
            key = _normalize(coeffs, q * up_rhs + p * low_rhs)
            result[key[0], key[1]] = key
    return list(result.values())


def _consistent(system):
    return all(rhs >= 0 for coeffs, rhs in system if not any(coeffs))


def _stages(A, b, n):
    """
    ``stages[k]`` is the projection of ``{A x <= b}`` onto ``x_0 .. x_k``,
    with a final entry for the projection onto no coordinates at all.
    """
    system = _system(A, b)
    stages = [None] * n
    for k in range(n - 1, -1, -1):
        stages[k] = system
        system = eliminate(system, k)
    return stages, system


def is_feasible(A, b, n):
    _, final = _stages(A, b, n)
    return _consistent(final)


def _bounds(system, k, prefix):
    lower = upper = None
    for coeffs, rhs in system:
        c = coeffs[k]
        slack = rhs - sum(a * x for a, x in zip(coeffs, prefix))
        if c > 0:
            bound = slack / c
            upper = bound if upper is None else min(upper, bound)
        elif c < 0:
            bound = slack / c
            lower = bound if lower is None else max(lower, bound)
        elif slack < 0:
            return Fraction(1), Fraction(0)
    return lower, upper


def variable_bounds(A, b, n, prefix=()):
    """
    Range of ``x_k`` over ``{A x <= b}`` once ``x_0 .. x_{k-1}`` are fixed to
    ``prefix``, where ``k = len(prefix)``. ``None`` marks an unbounded side.
    """
    stages, _ = _stages(A, b, n)
    prefix = [Fraction(x) for x in prefix]
    return _bounds(stages[len(prefix)], len(prefix), prefix)


def feasible_point(A, b, n):
    """A rational point of ``{A x <= b}`` or ``None`` when it is empty."""
    stages, final = _stages(A, b, n)
    if not _consistent(final):
        return None
    point = []
    for k in range(n):
        lower, upper = _bounds(stages[k], k, point)
        if lower is not None and upper is not None:
            value = (lower + upper) / 2
        elif lower is not None:
            value = max(lower, Fraction(math.ceil(lower)))
        elif upper is not None:
            value = min(upper, Fraction(math.floor(upper)))
        else:
            value = Fraction(0)
        point.append(value)
    return tuple(point)


def lattice_points(A, b, n):
    """
    Yields every integer point of ``{A x <= b}`` in lexicographic order.
    Raises :class:`InfiniteDimension <coxfiber.exceptions.InfiniteDimension>`
    when the polyhedron is unbounded.
    """
    stages, final = _stages(A, b, n)
    if not _consistent(final):
        return

    def walk(prefix):
        k = len(prefix)
        if k == n:
            yield tuple(int(x) for x in prefix)
            return
        lower, upper = _bounds(stages[k], k, prefix)
        if lower is not None and upper is not None and lower > upper:
            return
        if lower is None or upper is None:
            raise InfiniteDimension(
                "Polyhedron is unbounded in coordinate {0}.".format(k)
            )
        for x in range(math.ceil(lower), math.floor(upper) + 1):
            yield from walk(prefix + [Fraction(x)])

    yield from walk([])


def count_lattice_points(A, b, n):
    count = sum(1 for _ in lattice_points(A, b, n))
    logger.debug("Counted %d lattice points in dimension %d", count, n)
    return count


def _rref(rows, ncols):
    rows = [[Fraction(x) for x in row] for row in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        lead = rows[r][col]
        rows[r] = [x / lead for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                factor = rows[i][col]
                rows[i] = [a - factor * c for a, c in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    return rows, pivots


def in_cone(generators, v):
    """
    Whether ``v`` is a nonnegative rational combination of ``generators``.

    The equalities ``sum l_i g_i = v`` are brought to reduced echelon form;
    the pivot multipliers are then affine in the free ones and nonnegativity
    of everything is a small inequality system for Fourier-Motzkin.
    """
    v = tuple(v)
    generators = [tuple(g) for g in generators]
    for g in generators:
        if len(g) != len(v):
            raise DimensionMismatch(
                "Generator of length {0} for a vector of length {1}.".format(
                    len(g), len(v)
                )
            )
    if not generators:
        return not any(v)
    k = len(generators)
    augmented = [[g[i] for g in generators] + [v[i]] for i in range(len(v))]
    rows, pivots = _rref(augmented, k)
    for row in rows[len(pivots):]:
        if row[k]:
            return False
    free = [j for j in range(k) if j not in pivots]
    if not free:
        return all(rows[i][k] >= 0 for i in range(len(pivots)))
    A, b = [], []
    for i in range(len(pivots)):
        A.append([rows[i][j] for j in free])
        b.append(rows[i][k])
    for position in range(len(free)):
        A.append([-int(p == position) for p in range(len(free))])
        b.append(0)
    return is_feasible(A, b, len(free))
