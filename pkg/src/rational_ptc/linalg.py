"""
Exact linear algebra over the rationals.

Matrices are sparse tables of ``sympy.QQ`` elements; elimination is delegated
to sympy's sparse domain matrices (``SDM``), which keep every rational
reduced. Subspaces are stored in reduced row echelon form, so two equal
subspaces always carry identical bases.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping, Optional, Sequence

from sympy import QQ
from sympy.polys.matrices.sdm import SDM

from .exceptions import DimensionMismatch, NotSubspace

# A sparse coordinate vector: position -> nonzero QQ element.
Vector = dict[int, Any]


def as_rational(value: Any) -> Any:
    """Convert ints, Fractions, ``"p/q"`` strings and QQ elements to QQ."""
    if QQ.of_type(value):
        return value
    if isinstance(value, bool):
        raise TypeError("Booleans are not rational coefficients")
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, str):
        value = Fraction(value.strip())
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    raise TypeError(f"Cannot interpret {value!r} as an exact rational")


def vector_from_dense(values: Sequence[Any]) -> Vector:
    """Build a sparse vector from a dense sequence, dropping zeros."""
    vector: Vector = {}
    for position, value in enumerate(values):
        q = as_rational(value)
        if q:
            vector[position] = q
    return vector


def vector_to_dense(vector: Mapping[int, Any], dim: int) -> list[Any]:
    dense = [QQ.zero] * dim
    for position, value in vector.items():
        dense[position] = value
    return dense


def axpy(target: Vector, scalar: Any, row: Mapping[int, Any]) -> None:
    """In place ``target += scalar * row``; zeros are removed."""
    if not scalar:
        return
    for position, value in row.items():
        updated = target.get(position, QQ.zero) + scalar * value
        if updated:
            target[position] = updated
        else:
            target.pop(position, None)


def linear_combination(coefficients: Iterable[Any], vectors: Iterable[Mapping[int, Any]]) -> Vector:
    result: Vector = {}
    for coefficient, vector in zip(coefficients, vectors):
        axpy(result, coefficient, vector)
    return result


@dataclass(frozen=True)
class RationalMatrix:
    """Sparse matrix of exact rationals; absent entries are zero."""

    rows: int
    cols: int
    entries: Mapping[tuple[int, int], Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("Matrix shape must be non-negative")
        clean: dict[tuple[int, int], Any] = {}
        for (i, j), value in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise DimensionMismatch(f"Entry ({i}, {j}) outside a {self.rows}x{self.cols} matrix")
            q = as_rational(value)
            if q:
                clean[(i, j)] = q
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[Any]], cols: Optional[int] = None) -> "RationalMatrix":
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        entries = {}
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise DimensionMismatch("Ragged rows in dense matrix")
            for j, value in enumerate(row):
                entries[(i, j)] = value
        return cls(len(rows), ncols, entries)

    @classmethod
    def from_columns(cls, columns: Sequence[Mapping[int, Any]], rows: int) -> "RationalMatrix":
        entries = {}
        for j, column in enumerate(columns):
            for i, value in column.items():
                entries[(i, j)] = value
        return cls(rows, len(columns), entries)

    @classmethod
    def from_row_vectors(cls, vectors: Sequence[Mapping[int, Any]], cols: int) -> "RationalMatrix":
        entries = {}
        for i, vector in enumerate(vectors):
            for j, value in vector.items():
                entries[(i, j)] = value
        return cls(len(vectors), cols, entries)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, {(i, i): QQ.one for i in range(n)})

    @classmethod
    def _from_sdm(cls, sdm: SDM, shape: tuple[int, int]) -> "RationalMatrix":
        entries = {(i, j): value for i, row in sdm.items() for j, value in row.items()}
        return cls(shape[0], shape[1], entries)

    def _to_sdm(self) -> SDM:
        table: dict[int, dict[int, Any]] = {}
        for (i, j), value in self.entries.items():
            table.setdefault(i, {})[j] = value
        return SDM(table, (self.rows, self.cols), QQ)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def is_zero(self) -> bool:
        return not self.entries

    def row(self, i: int) -> Vector:
        return {j: v for (r, j), v in self.entries.items() if r == i}

    def column(self, j: int) -> Vector:
        return {i: v for (i, c), v in self.entries.items() if c == j}

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def apply(self, vector: Mapping[int, Any]) -> Vector:
        """Matrix times column vector."""
        result: Vector = {}
        for (i, j), value in self.entries.items():
            x = vector.get(j)
            if x:
                updated = result.get(i, QQ.zero) + value * x
                if updated:
                    result[i] = updated
                else:
                    result.pop(i, None)
        return result

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"Cannot multiply {self.shape} by {other.shape}")
        if not self.entries or not other.entries:
            return RationalMatrix.zeros(self.rows, other.cols)
        product = self._to_sdm().matmul(other._to_sdm())
        return RationalMatrix._from_sdm(product, (self.rows, other.cols))

    def rank(self) -> int:
        return len(rref(self)[1])

    def to_dense(self) -> list[list[Any]]:
        dense = [[QQ.zero] * self.cols for _ in range(self.rows)]
        for (i, j), value in self.entries.items():
            dense[i][j] = value
        return dense


def rref(m: RationalMatrix) -> tuple[RationalMatrix, list[int]]:
    """
    Reduced row echelon form and pivot columns.

    The result keeps the shape of ``m``; zero rows sit at the bottom.
    """
    if not m.entries:
        return RationalMatrix.zeros(m.rows, m.cols), []
    reduced, pivots = m._to_sdm().rref()
    return RationalMatrix._from_sdm(reduced, m.shape), list(pivots)


@dataclass(frozen=True)
class SubspaceBasis:
    """
    A subspace of QQ^ambient_dim in canonical form.

    ``basis`` is the list of nonzero rows of a reduced row echelon form and
    ``pivots`` their (strictly increasing) pivot columns.
    """

    ambient_dim: int
    basis: tuple[Vector, ...] = ()
    pivots: tuple[int, ...] = ()

    @classmethod
    def span(cls, vectors: Iterable[Mapping[int, Any]], ambient_dim: int) -> "SubspaceBasis":
        rows = [dict(v) for v in vectors if v]
        for vector in rows:
            _check_range(vector, ambient_dim)
        if not rows:
            return cls(ambient_dim)
        reduced, pivots = rref(RationalMatrix.from_row_vectors(rows, ambient_dim))
        basis = tuple(reduced.row(i) for i in range(len(pivots)))
        return cls(ambient_dim, basis, tuple(pivots))

    @classmethod
    def zero(cls, ambient_dim: int) -> "SubspaceBasis":
        return cls(ambient_dim)

    @classmethod
    def full(cls, ambient_dim: int) -> "SubspaceBasis":
        return cls(
            ambient_dim,
            tuple({i: QQ.one} for i in range(ambient_dim)),
            tuple(range(ambient_dim)),
        )

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def normal_form(self, vector: Mapping[int, Any]) -> tuple[Vector, tuple[Any, ...]]:
        """
        Reduce ``vector`` modulo the subspace.

        Returns the remainder (zero in every pivot column) and the
        coefficients of the basis rows that were subtracted.
        """
        _check_range(vector, self.ambient_dim)
        remainder = dict(vector)
        coefficients = []
        for row, pivot in zip(self.basis, self.pivots):
            c = remainder.get(pivot, QQ.zero)
            if c:
                axpy(remainder, -c, row)
            coefficients.append(c)
        return remainder, tuple(coefficients)

    def contains(self, vector: Mapping[int, Any]) -> bool:
        return not self.normal_form(vector)[0]

    def includes(self, other: "SubspaceBasis") -> bool:
        return all(self.contains(v) for v in other.basis)

    def combination(self, coefficients: Sequence[Any]) -> Vector:
        return linear_combination(coefficients, self.basis)


def _check_range(vector: Mapping[int, Any], dim: int) -> None:
    for position in vector:
        if not 0 <= position < dim:
            raise DimensionMismatch(f"Coordinate {position} outside an ambient space of dimension {dim}")


def kernel(m: RationalMatrix) -> SubspaceBasis:
    """Right null space of ``m``."""
    if m.cols == 0:
        return SubspaceBasis.zero(0)
    if not m.entries:
        return SubspaceBasis.full(m.cols)
    null, _ = m._to_sdm().nullspace()
    return SubspaceBasis.span((dict(row) for row in null.values()), m.cols)


def image(m: RationalMatrix) -> SubspaceBasis:
    """Column space of ``m``."""
    return SubspaceBasis.span((m.column(j) for j in range(m.cols)), m.rows)


def subspace_sum(a: SubspaceBasis, b: SubspaceBasis) -> SubspaceBasis:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch("Subspaces live in different ambient spaces")
    return SubspaceBasis.span(a.basis + b.basis, a.ambient_dim)


def subspace_intersection(a: SubspaceBasis, b: SubspaceBasis) -> SubspaceBasis:
    """Intersection via the kernel of the stacked bases [A | -B]."""
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch("Subspaces live in different ambient spaces")
    if a.is_zero() or b.is_zero():
        return SubspaceBasis.zero(a.ambient_dim)
    columns = list(a.basis) + [{i: -v for i, v in vec.items()} for vec in b.basis]
    relations = kernel(RationalMatrix.from_columns(columns, a.ambient_dim))
    vectors = [linear_combination((rel.get(i, QQ.zero) for i in range(a.dim)), a.basis) for rel in relations.basis]
    return SubspaceBasis.span(vectors, a.ambient_dim)


def membership(vector: Mapping[int, Any], s: SubspaceBasis) -> tuple[bool, Optional[tuple[Any, ...]]]:
    """
    Decide whether ``vector`` lies in ``s``.

    Returns ``(True, coefficients)`` with the coefficients of the canonical
    basis of ``s`` when it does, ``(False, None)`` otherwise.

    Raises:
        DimensionMismatch: If the vector has coordinates outside the ambient space
    """
    remainder, coefficients = s.normal_form(vector)
    if remainder:
        return False, None
    return True, coefficients


@dataclass(frozen=True)
class QuotientSpace:
    """
    ``ambient / sub`` with coordinates.

    ``relations`` is ``sub`` rewritten in the coordinates of ``ambient``'s
    canonical basis; the ambient basis rows at the non-pivot positions
    ``free`` of ``relations`` represent a basis of the quotient.
    """

    ambient: SubspaceBasis
    sub: SubspaceBasis
    relations: SubspaceBasis
    free: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.free)

    @property
    def representatives(self) -> tuple[Vector, ...]:
        return tuple(self.ambient.basis[i] for i in self.free)

    def complement(self) -> SubspaceBasis:
        return SubspaceBasis(
            self.ambient.ambient_dim,
            self.representatives,
            tuple(self.ambient.pivots[i] for i in self.free),
        )

    def coordinates(self, vector: Mapping[int, Any]) -> tuple[Any, ...]:
        """Quotient coordinates of a vector already known to lie in ``ambient``."""
        local = {i: vector[p] for i, p in enumerate(self.ambient.pivots) if vector.get(p)}
        remainder, _ = self.relations.normal_form(local)
        return tuple(remainder.get(i, QQ.zero) for i in self.free)

    def lift(self, coordinates: Sequence[Any]) -> Vector:
        if len(coordinates) != self.dim:
            raise DimensionMismatch(f"Quotient has dimension {self.dim}, got {len(coordinates)} coordinates")
        return linear_combination(coordinates, self.representatives)


def quotient(ambient: SubspaceBasis, sub: SubspaceBasis, check: bool = True) -> QuotientSpace:
    """
    Build ``ambient / sub``.

    Raises:
        NotSubspace: If ``check`` is set and ``sub`` is not contained in ``ambient``
    """
    if ambient.ambient_dim != sub.ambient_dim:
        raise DimensionMismatch("Subspaces live in different ambient spaces")
    if check and not ambient.includes(sub):
        raise NotSubspace("Subspace is not contained in the ambient subspace")
    rows = [{i: b[p] for i, p in enumerate(ambient.pivots) if b.get(p)} for b in sub.basis]
    relations = SubspaceBasis.span(rows, ambient.dim)
    taken = set(relations.pivots)
    free = tuple(i for i in range(ambient.dim) if i not in taken)
    return QuotientSpace(ambient, sub, relations, free)


def quotient_basis(ambient: SubspaceBasis, sub: SubspaceBasis) -> tuple[Vector, ...]:
    """
    Coset representatives of a basis of ``ambient / sub``.

    Raises:
        NotSubspace: If ``sub`` is not contained in ``ambient``
    """
    return quotient(ambient, sub).representatives


def quotient_complement(ambient: SubspaceBasis, sub: SubspaceBasis) -> SubspaceBasis:
    """Complement of ``sub`` inside ``ambient`` spanned by rows of ``ambient``'s basis."""
    return quotient(ambient, sub).complement()
