"""
Exact integer linear algebra and finitely generated abelian groups.

Everything in the library that talks about lattices ends up here: the pairing
of characters with rays, the lattice map of a toric morphism, degree maps and
class groups. Vectors are columns and matrices act on the left, so the matrix
of a composite ``g . f`` is ``M_g @ M_f``.

Entries are Python integers held in numpy ``object`` arrays, which keeps
arbitrary precision (Smith normal form intermediates grow quickly) while still
allowing whole-row operations.
"""

from collections import namedtuple
import logging
import numbers

import numpy as np
import sympy

from coxfiber.exceptions import (
    CoxFiberInvalidError,
    DimensionMismatch,
    NoSolution,
    NotWellDefined,
)

logger = logging.getLogger(__name__)


def _as_int(value):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise CoxFiberInvalidError("{0!r} is not an integer.".format(value))
    return int(value)


def _object_array(rows, shape):
    array = np.empty(shape, dtype=object)
    for i, row in enumerate(rows):
        for j, value in enumerate(row):
            array[i, j] = value
    return array


def _eye(n):
    return _object_array([[int(i == j) for j in range(n)] for i in range(n)], (n, n))


class IntMatrix(object):
    """
    An immutable integer matrix.

    Build it from a list of rows. A matrix without rows (or without columns)
    needs an explicit ``shape``::

        >>> IntMatrix([[2, 4], [6, 8]])
        <IntMatrix 2x2 [[2, 4], [6, 8]]>
        >>> IntMatrix([], shape=(0, 3)).shape
        (0, 3)

    Anything that is not an integer (floats included) raises
    :class:`CoxFiberInvalidError <coxfiber.exceptions.CoxFiberInvalidError>`.
    """

    def __init__(self, rows, shape=None):
        if isinstance(rows, IntMatrix):
            array = rows._array.copy()
        elif isinstance(rows, np.ndarray) and rows.ndim == 2:
            array = _object_array(
                [[_as_int(x) for x in row] for row in rows.tolist()], rows.shape
            )
        else:
            data = [[_as_int(x) for x in row] for row in rows]
            if shape is None:
                if not data:
                    raise DimensionMismatch("A matrix without rows needs a shape.")
                shape = (len(data), len(data[0]))
            if len(data) != shape[0] or any(len(row) != shape[1] for row in data):
                raise DimensionMismatch(
                    "Rows do not match the shape {0}x{1}.".format(*shape)
                )
            array = _object_array(data, tuple(shape))
        array.setflags(write=False)
        self._array = array

    @classmethod
    def identity(cls, n):
        return cls(_eye(n))

    @classmethod
    def zeros(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)], shape=(rows, cols))

    @classmethod
    def from_columns(cls, columns, rows):
        """
        Stacks integer vectors side by side. ``rows`` is the common length,
        which keeps the zero-column case well defined.
        """
        columns = [tuple(c) for c in columns]
        for column in columns:
            if len(column) != rows:
                raise DimensionMismatch(
                    "Column of length {0}, expected {1}.".format(len(column), rows)
                )
        return cls(
            [[column[i] for column in columns] for i in range(rows)],
            shape=(rows, len(columns)),
        )

    @classmethod
    def hstack(cls, *matrices):
        rows = {m.rows for m in matrices}
        if len(rows) != 1:
            raise DimensionMismatch("Cannot stack matrices with different row counts.")
        nrows = rows.pop()
        data = [[x for m in matrices for x in m.row(i)] for i in range(nrows)]
        return cls(data, shape=(nrows, sum(m.cols for m in matrices)))

    @classmethod
    def vstack(cls, *matrices):
        cols = {m.cols for m in matrices}
        if len(cols) != 1:
            raise DimensionMismatch(
                "Cannot stack matrices with different column counts."
            )
        data = [row for m in matrices for row in m.tolist()]
        return cls(data, shape=(len(data), cols.pop()))

    def __repr__(self):
        return "<IntMatrix {0}x{1} {2}>".format(self.rows, self.cols, self.tolist())

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.tolist() == other.tolist()

    def __hash__(self):
        return hash((self.shape, self.entries))

    def __getitem__(self, index):
        return self._array[index]

    def __matmul__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionMismatch(
                "Cannot multiply {0}x{1} by {2}x{3}.".format(*(self.shape + other.shape))
            )
        if self.cols == 0:
            return IntMatrix.zeros(self.rows, other.cols)
        return IntMatrix(np.dot(self._array, other._array))

    def __add__(self, other):
        if self.shape != other.shape:
            raise DimensionMismatch("Cannot add matrices of different shapes.")
        return IntMatrix(self._array + other._array)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return IntMatrix(-self._array) if self._array.size else self

    @property
    def rows(self):
        return self._array.shape[0]

    @property
    def cols(self):
        return self._array.shape[1]

    @property
    def shape(self):
        return self._array.shape

    @property
    def entries(self):
        """All entries in row-major order."""
        return tuple(x for row in self.tolist() for x in row)

    @property
    def array(self):
        """A writable ``object`` array copy of the entries."""
        return self._array.copy()

    @property
    def T(self):
        return IntMatrix(self._array.T.copy())

    def tolist(self):
        return [[int(x) for x in row] for row in self._array.tolist()]

    def row(self, i):
        return tuple(int(x) for x in self._array[i])

    def column(self, j):
        return tuple(int(x) for x in self._array[:, j])

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def submatrix(self, rows=None, cols=None):
        rows = range(self.rows) if rows is None else list(rows)
        cols = range(self.cols) if cols is None else list(cols)
        data = [[self._array[i, j] for j in cols] for i in rows]
        return IntMatrix(data, shape=(len(data), len(cols)))

    def apply(self, vector):
        """Applies the matrix to an integer column vector."""
        vector = tuple(_as_int(x) for x in vector)
        if len(vector) != self.cols:
            raise DimensionMismatch(
                "Vector of length {0} for a matrix with {1} columns.".format(
                    len(vector), self.cols
                )
            )
        return tuple(
            sum(int(a) * b for a, b in zip(self._array[i], vector))
            for i in range(self.rows)
        )

    def is_zero(self):
        return not any(self.entries)

    def to_sympy(self):
        return sympy.Matrix(self.rows, self.cols, list(self.entries))

    def det(self):
        if self.rows != self.cols:
            raise DimensionMismatch("Determinant of a non-square matrix.")
        if self.rows == 0:
            return 1
        return int(self.to_sympy().det())

    def inverse(self):
        """Exact inverse of a unimodular matrix."""
        if self.rows != self.cols:
            raise DimensionMismatch("Inverse of a non-square matrix.")
        if self.rows == 0:
            return self
        inverse = self.to_sympy().inv()
        if any(not x.is_integer for x in inverse):
            raise CoxFiberInvalidError("Matrix is not unimodular.")
        return IntMatrix(inverse.tolist())


def as_matrix(value):
    return value if isinstance(value, IntMatrix) else IntMatrix(value)


class SmithDecomposition(object):
    """
    The result of :func:`smith_normal_form`: unimodular ``U`` and ``V`` with
    ``U @ M @ V == S``. ``U_inverse`` is tracked alongside so cokernel
    generators can be lifted without a rational inversion.
    """

    def __init__(self, U, S, V, U_inverse):
        self.U = U
        self.S = S
        self.V = V
        self.U_inverse = U_inverse

    def __repr__(self):
        return "<SmithDecomposition diag={0}>".format(list(self.diagonal))

    @property
    def diagonal(self):
        return tuple(int(self.S[i, i]) for i in range(min(self.S.shape)))

    @property
    def rank(self):
        return sum(1 for d in self.diagonal if d)

    @property
    def invariant_factors(self):
        """Nonzero diagonal entries larger than one."""
        return tuple(d for d in self.diagonal if d > 1)


def _min_pivot(A, t):
    best = None
    for i in range(t, A.shape[0]):
        for j in range(t, A.shape[1]):
            value = abs(A[i, j])
            if value and (best is None or value < best[0]):
                best = (value, i, j)
    return None if best is None else best[1:]


def smith_normal_form(matrix):
    """
    Diagonalizes an integer matrix by unimodular row and column operations.

    The pivot at each step is the entry of smallest nonzero absolute value in
    the remaining block, ties going to the lowest (row, column), so the output
    is a deterministic function of the input. Diagonal entries are
    nonnegative and each divides the next.
    """
    matrix = as_matrix(matrix)
    A = matrix.array
    m, n = A.shape
    U, V, U_inv = _eye(m), _eye(n), _eye(m)
    steps = 0
    t = 0
    while t < min(m, n):
        pivot = _min_pivot(A, t)
        if pivot is None:
            break
        while True:
            i, j = pivot
            if i != t:
                A[[t, i]] = A[[i, t]]
                U[[t, i]] = U[[i, t]]
                U_inv[:, [t, i]] = U_inv[:, [i, t]]
            if j != t:
                A[:, [t, j]] = A[:, [j, t]]
                V[:, [t, j]] = V[:, [j, t]]
            p = A[t, t]
            clean = True
            for i in range(t + 1, m):
                q = A[i, t] // p
                if q:
                    A[i] -= q * A[t]
                    U[i] -= q * U[t]
                    U_inv[:, t] += q * U_inv[:, i]
                if A[i, t]:
                    clean = False
            for j in range(t + 1, n):
                q = A[t, j] // p
                if q:
                    A[:, j] -= q * A[:, t]
                    V[:, j] -= q * V[:, t]
                if A[t, j]:
                    clean = False
            steps += 1
            if clean:
                offender = next(
                    (
                        i
                        for i in range(t + 1, m)
                        for j in range(t + 1, n)
                        if A[i, j] % p
                    ),
                    None,
                )
                if offender is None:
                    break
                A[t] += A[offender]
                U[t] += U[offender]
                U_inv[:, offender] -= U_inv[:, t]
            pivot = _min_pivot(A, t)
        if A[t, t] < 0:
            A[t] = -A[t]
            U[t] = -U[t]
            U_inv[:, t] = -U_inv[:, t]
        t += 1
    logger.debug("Smith normal form of %dx%d matrix in %d steps", m, n, steps)
    return SmithDecomposition(IntMatrix(U), IntMatrix(A), IntMatrix(V), IntMatrix(U_inv))


def _echelon(vectors, dim):
    rows = [list(v) for v in vectors if any(v)]
    basis = []
    for col in range(dim):
        active = [r for r in rows if r[col]]
        if not active:
            continue
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            pivot = active[0]
            for r in active[1:]:
                q = r[col] // pivot[col]
                for k in range(col, dim):
                    r[k] -= q * pivot[k]
            active = [pivot] + [r for r in active[1:] if r[col]]
        pivot = active[0]
        if pivot[col] < 0:
            pivot[:] = [-x for x in pivot]
        basis.append((col, pivot))
        rows = [r for r in rows if r is not pivot and any(r)]
    for i, (col, row) in enumerate(basis):
        for _, previous in basis[:i]:
            q = previous[col] // row[col]
            if q:
                previous[:] = [a - q * b for a, b in zip(previous, row)]
    return [tuple(row) for _, row in basis]


def _check_lengths(vectors, dim):
    for v in vectors:
        if len(v) != dim:
            raise DimensionMismatch(
                "Vector of length {0} in a lattice of rank {1}.".format(len(v), dim)
            )


def hermite_basis(vectors, dim, trailing=False):
    """
    The canonical Hermite normal form basis of the lattice spanned by
    ``vectors`` inside ``Z^dim``: leading entries positive, entries above each
    pivot reduced into ``[0, pivot)``. With ``trailing=True`` the echelon is
    built from the last coordinate backwards.
    """
    vectors = [tuple(_as_int(x) for x in v) for v in vectors]
    _check_lengths(vectors, dim)
    if trailing:
        basis = _echelon([v[::-1] for v in vectors], dim)
        return [v[::-1] for v in basis]
    return _echelon(vectors, dim)


def reduce_modulo(vector, generators, trailing=False):
    """
    The canonical representative of ``vector`` modulo the lattice spanned by
    ``generators``. Each pivot coordinate of the Hermite basis is brought into
    ``[0, pivot)``.
    """
    vector = [_as_int(x) for x in vector]
    dim = len(vector)
    if trailing:
        reduced = reduce_modulo(vector[::-1], [tuple(g)[::-1] for g in generators])
        return reduced[::-1]
    for row in hermite_basis(generators, dim):
        col = next(k for k, x in enumerate(row) if x)
        q = vector[col] // row[col]
        if q:
            vector = [a - q * b for a, b in zip(vector, row)]
    return tuple(vector)


def kernel_basis(matrix):
    """
    A basis of the integer kernel of ``matrix``, in Hermite normal form. The
    kernel of an integer matrix is always saturated.
    """
    matrix = as_matrix(matrix)
    snf = smith_normal_form(matrix)
    columns = [snf.V.column(j) for j in range(snf.rank, matrix.cols)]
    return hermite_basis(columns, matrix.cols)


def solve_integer(matrix, b):
    """
    Some integer ``x`` with ``matrix @ x == b``. Among all solutions the one
    reduced modulo the kernel in trailing Hermite form is returned, so free
    entries are pushed toward the first coordinates. Raises
    :class:`NoSolution <coxfiber.exceptions.NoSolution>` when ``b`` is not in
    the image lattice.
    """
    matrix = as_matrix(matrix)
    b = tuple(_as_int(x) for x in b)
    if len(b) != matrix.rows:
        raise DimensionMismatch(
            "Right hand side of length {0} for {1} rows.".format(len(b), matrix.rows)
        )
    snf = smith_normal_form(matrix)
    c = snf.U.apply(b)
    diagonal = snf.diagonal
    y = [0] * matrix.cols
    for i, value in enumerate(c):
        d = diagonal[i] if i < len(diagonal) else 0
        if d:
            if value % d:
                raise NoSolution("{0} is not in the image lattice.".format(b))
            y[i] = value // d
        elif value:
            raise NoSolution("{0} is not in the image lattice.".format(b))
    x = snf.V.apply(y)
    return reduce_modulo(x, kernel_basis(matrix), trailing=True)


def saturation(vectors, dim):
    """Hermite basis of the saturation ``(L (x) Q) n Z^dim`` of a lattice."""
    vectors = [tuple(v) for v in vectors]
    _check_lengths(vectors, dim)
    if not any(any(v) for v in vectors):
        return []
    annihilator = kernel_basis(IntMatrix(vectors, shape=(len(vectors), dim)))
    return kernel_basis(IntMatrix(annihilator, shape=(len(annihilator), dim)))


def lattice_contains(vectors, v):
    v = tuple(v)
    if not vectors:
        return not any(v)
    try:
        solve_integer(IntMatrix.from_columns(vectors, len(v)), v)
    except NoSolution:
        return False
    return True


def lattices_equal(a, b, dim):
    return hermite_basis(a, dim) == hermite_basis(b, dim)


def lattice_intersection(a, b, dim=None):
    """
    Hermite basis of the intersection of two sublattices of ``Z^n``, each given
    by spanning vectors. An empty result is the zero lattice.
    """
    a = [tuple(v) for v in a]
    b = [tuple(v) for v in b]
    lengths = {len(v) for v in a + b}
    if dim is not None:
        lengths.add(dim)
    if len(lengths) > 1:
        raise DimensionMismatch("Lattices live in different ambient ranks.")
    if not a or not b:
        return []
    n = lengths.pop()
    stacked = IntMatrix.hstack(
        IntMatrix.from_columns(a, n), -IntMatrix.from_columns(b, n)
    )
    a_matrix = IntMatrix.from_columns(a, n)
    generators = [a_matrix.apply(k[: len(a)]) for k in kernel_basis(stacked)]
    return hermite_basis(generators, n)


class FGAbelianGroup(object):
    """
    A finitely generated abelian group presented as the cokernel of
    ``relations: Z^r -> Z^ambient_rank``.

    Elements are written either as ambient vectors or in the normal form
    ``Z^free_rank + Z/d_1 + ... + Z/d_s``; ``projection`` takes the former to
    the latter and ``lift`` sends each normal form generator back to an
    ambient vector. Build groups with :func:`cokernel`.
    """

    def __init__(self, relations, invariant_factors, free_rank, projection, lift):
        self.relations = relations
        self.invariant_factors = tuple(invariant_factors)
        self.free_rank = free_rank
        self.projection = projection
        self.lift = lift

    def __repr__(self):
        return "<FGAbelianGroup {0}>".format(self.describe())

    @property
    def ambient_rank(self):
        return self.relations.rows

    @property
    def ngens(self):
        """Number of normal form coordinates."""
        return self.free_rank + len(self.invariant_factors)

    @property
    def moduli(self):
        """The modulus of each normal form coordinate, ``0`` for a free one."""
        return (0,) * self.free_rank + self.invariant_factors

    @property
    def torsion_order(self):
        order = 1
        for d in self.invariant_factors:
            order *= d
        return order

    def describe(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank:
            parts.append("Z^{0}".format(self.free_rank))
        parts.extend("Z/{0}".format(d) for d in self.invariant_factors)
        return " + ".join(parts) or "0"

    def normal_form(self):
        return (self.free_rank, self.invariant_factors)

    def isomorphic_to(self, other):
        return self.normal_form() == other.normal_form()

    def is_trivial(self):
        return self.ngens == 0

    def reduce(self, element):
        element = tuple(_as_int(x) for x in element)
        if len(element) != self.ngens:
            raise DimensionMismatch(
                "Class with {0} coordinates in a group with {1}.".format(
                    len(element), self.ngens
                )
            )
        return tuple(x % d if d else x for x, d in zip(element, self.moduli))

    def project(self, vector):
        """Normal form class of an ambient vector."""
        return self.reduce(self.projection.apply(vector))

    def is_zero(self, element):
        return not any(self.reduce(element))

    def generator(self, i):
        return tuple(int(i == j) for j in range(self.ngens))

    def lift_class(self, element):
        """An ambient vector whose class is ``element``."""
        return self.lift.apply(self.reduce(element))


def cokernel(matrix):
    """
    The cokernel of ``matrix: Z^cols -> Z^rows`` in normal form. The free rows
    of the projection are put in Hermite normal form, so the result does not
    depend on sign choices made along the way.
    """
    matrix = as_matrix(matrix)
    m = matrix.rows
    snf = smith_normal_form(matrix)
    diagonal = snf.diagonal
    rank = snf.rank
    free_idx = list(range(rank, m))
    torsion_idx = [i for i in range(rank) if diagonal[i] > 1]

    free_rows = [snf.U.row(i) for i in free_idx]
    augmented = [
        row + tuple(int(i == j) for j in range(len(free_rows)))
        for i, row in enumerate(free_rows)
    ]
    echelon = _echelon(augmented, m + len(free_rows))
    hermite_rows = [row[:m] for row in echelon]
    transform = IntMatrix(
        [row[m:] for row in echelon], shape=(len(free_rows), len(free_rows))
    )
    free_lift = snf.U_inverse.submatrix(cols=free_idx) @ transform.inverse()

    torsion_rows = [
        tuple(x % diagonal[i] for x in snf.U.row(i)) for i in torsion_idx
    ]
    projection = IntMatrix(hermite_rows + torsion_rows, shape=(len(free_idx) + len(torsion_idx), m))
    lift = IntMatrix.hstack(free_lift, snf.U_inverse.submatrix(cols=torsion_idx))
    return FGAbelianGroup(
        relations=matrix,
        invariant_factors=[diagonal[i] for i in torsion_idx],
        free_rank=len(free_idx),
        projection=projection,
        lift=lift,
    )


def is_torsion_free(group):
    return not group.invariant_factors


class GroupHom(object):
    """
    A homomorphism of finitely generated abelian groups given by a matrix on
    ambient generators. Construction checks that relations go to relations and
    raises :class:`NotWellDefined <coxfiber.exceptions.NotWellDefined>`
    otherwise.
    """

    def __init__(self, source, target, matrix):
        matrix = as_matrix(matrix)
        if matrix.shape != (target.ambient_rank, source.ambient_rank):
            raise DimensionMismatch(
                "Homomorphism matrix is {0}x{1}, expected {2}x{3}.".format(
                    matrix.rows, matrix.cols, target.ambient_rank, source.ambient_rank
                )
            )
        for relation in source.relations.columns():
            image = matrix.apply(relation)
            if not target.is_zero(target.project(image)):
                raise NotWellDefined(
                    "Relation {0} is not sent to zero.".format(relation),
                    witness=relation,
                )
        self.source = source
        self.target = target
        self.matrix = matrix

    def __repr__(self):
        return "<GroupHom {0} -> {1}>".format(
            self.source.describe(), self.target.describe()
        )

    def __call__(self, vector):
        return self.target.project(self.matrix.apply(vector))

    def apply_class(self, element):
        return self.target.reduce(self.induced_matrix().apply(self.source.reduce(element)))

    def induced_matrix(self):
        """The matrix of the homomorphism between normal forms."""
        induced = self.target.projection @ self.matrix @ self.source.lift
        moduli = self.target.moduli
        return IntMatrix(
            [
                [x % moduli[i] if moduli[i] else x for x in induced.row(i)]
                for i in range(induced.rows)
            ],
            shape=induced.shape,
        )

    def target_relations(self):
        t = self.target.ngens
        return IntMatrix.from_columns(
            [
                tuple(d if k == i else 0 for k in range(t))
                for i, d in enumerate(self.target.moduli)
                if d
            ],
            t,
        )

    def is_surjective(self):
        image = IntMatrix.hstack(self.induced_matrix(), self.target_relations())
        return cokernel(image).is_trivial()

    def kernel_witness(self):
        """A nonzero source class in the kernel, or ``None``."""
        induced = self.induced_matrix()
        s = self.source.ngens
        stacked = IntMatrix.hstack(induced, self.target_relations())
        for vector in kernel_basis(stacked):
            element = self.source.reduce(vector[:s])
            if any(element):
                return element
        return None

    def is_injective(self):
        return self.kernel_witness() is None

    def is_isomorphism(self):
        return self.is_injective() and self.is_surjective()


def compose(g, f):
    """The composite ``g . f``."""
    return GroupHom(f.source, g.target, g.matrix @ f.matrix)


def hom_is_surjective(hom):
    return hom.is_surjective()


def hom_is_isomorphism(hom):
    return hom.is_isomorphism()


SubgroupQuotient = namedtuple(
    "SubgroupQuotient", ["subgroup", "quotient", "quotient_map", "inclusion"]
)


def subgroup_and_quotient(group, generators):
    """
    The subgroup of ``group`` generated by ambient vectors, the quotient by it,
    the quotient map and the inclusion. The subgroup is presented on the given
    generators.
    """
    n = group.ambient_rank
    generators = [tuple(_as_int(x) for x in g) for g in generators]
    _check_lengths(generators, n)
    gens_matrix = IntMatrix.from_columns(generators, n)
    quotient = cokernel(IntMatrix.hstack(group.relations, gens_matrix))
    quotient_map = GroupHom(group, quotient, IntMatrix.identity(n))

    k = len(generators)
    syzygies = kernel_basis(IntMatrix.hstack(gens_matrix, group.relations))
    subgroup = cokernel(IntMatrix.from_columns([s[:k] for s in syzygies], k))
    inclusion = GroupHom(subgroup, group, gens_matrix)
    return SubgroupQuotient(subgroup, quotient, quotient_map, inclusion)
