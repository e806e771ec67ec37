"""
Unit tests for exact linear algebra.

This module tests rational conversion, ranks against a dense sympy oracle,
canonical subspaces, intersections and quotient coordinates.
"""

import random
from fractions import Fraction

import pytest
from sympy import QQ, Matrix

from rational_ptc.exceptions import DimensionMismatch, NotSubspace
from rational_ptc.linalg import (
    RationalMatrix,
    SubspaceBasis,
    as_rational,
    image,
    kernel,
    membership,
    quotient,
    quotient_basis,
    rref,
    subspace_intersection,
    subspace_sum,
    vector_from_dense,
)


def e(i: int) -> dict:
    return {i: QQ.one}


def bareiss_rank(dense: list[list[int]]) -> int:
    """Rank by fraction-free integer elimination."""
    m = [row[:] for row in dense]
    rows, cols = len(m), len(m[0]) if m else 0
    rank, previous = 0, 1
    for col in range(cols):
        pivot = next((i for i in range(rank, rows) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for i in range(rank + 1, rows):
            for j in range(col + 1, cols):
                m[i][j] = (m[rank][col] * m[i][j] - m[i][col] * m[rank][j]) // previous
            m[i][col] = 0
        previous = m[rank][col]
        rank += 1
    return rank


class TestRationals:
    """Test coercion of coefficients to exact rationals."""

    def test_as_rational_accepts_exact_values(self):
        """Test ints, fractions and fraction strings."""
        assert as_rational(3) == QQ(3)
        assert as_rational(Fraction(2, 6)) == QQ(1, 3)
        assert as_rational(" -3/4 ") == QQ(-3, 4)

    def test_as_rational_rejects_floats_and_booleans(self):
        """Test that inexact or ambiguous values are refused."""
        with pytest.raises(TypeError):
            as_rational(0.5)
        with pytest.raises(TypeError):
            as_rational(True)

    def test_vector_from_dense_drops_zeros(self):
        """Test sparse vectors store only nonzero entries."""
        assert vector_from_dense([0, 2, 0, "1/2"]) == {1: QQ(2), 3: QQ(1, 2)}


class TestMatrices:
    """Test sparse rational matrices."""

    def test_rank_matches_dense_oracle(self):
        """Test rank on random integer matrices against sympy's dense rank."""
        rng = random.Random(20240601)
        for _ in range(25):
            rows, cols = rng.randint(1, 5), rng.randint(1, 6)
            dense = [[rng.randint(-3, 3) for _ in range(cols)] for _ in range(rows)]
            assert RationalMatrix.from_dense(dense).rank() == Matrix(dense).rank()

    def test_rank_matches_bareiss(self):
        """Test rank against fraction-free integer elimination, including rank-deficient shapes."""
        rng = random.Random(31)
        for _ in range(25):
            rows, cols = rng.randint(1, 6), rng.randint(1, 6)
            base = [[rng.randint(-4, 4) for _ in range(cols)] for _ in range(2)]
            dense = [[rng.randint(-1, 1) * base[0][j] + rng.randint(-1, 1) * base[1][j] for j in range(cols)] for _ in range(rows)]
            assert RationalMatrix.from_dense(dense).rank() == bareiss_rank(dense)

    def test_kernel_dimension_is_cols_minus_rank(self):
        """Test rank-nullity on random matrices."""
        rng = random.Random(7)
        for _ in range(15):
            dense = [[rng.randint(-2, 2) for _ in range(5)] for _ in range(3)]
            m = RationalMatrix.from_dense(dense)
            null = kernel(m)
            assert null.dim == 5 - m.rank()
            for vector in null.basis:
                assert m.apply(vector) == {}

    def test_kernel_of_rank_one_matrix(self):
        """Test the kernel of [[1, 2], [2, 4]]."""
        null = kernel(RationalMatrix.from_dense([[1, 2], [2, 4]]))
        assert null.dim == 1
        assert null.contains({0: QQ(-2), 1: QQ(1)})

    def test_rref_pivots(self):
        """Test pivot columns of a reduced row echelon form."""
        reduced, pivots = rref(RationalMatrix.from_dense([[0, 2, 4], [0, 1, 2], [1, 0, 1]]))
        assert pivots == [0, 1]
        assert reduced.row(0) == {0: QQ(1), 2: QQ(1)}

    def test_matmul_with_identity(self):
        """Test that multiplying by the identity changes nothing."""
        m = RationalMatrix.from_dense([[1, "1/2"], [0, 3]])
        assert (m @ RationalMatrix.identity(2)).entries == m.entries

    def test_matmul_shape_mismatch(self):
        """Test multiplying incompatible shapes."""
        with pytest.raises(DimensionMismatch):
            RationalMatrix.zeros(2, 3) @ RationalMatrix.zeros(2, 3)

    def test_entry_outside_shape(self):
        """Test that entries must lie inside the declared shape."""
        with pytest.raises(DimensionMismatch):
            RationalMatrix(2, 2, {(2, 0): 1})


class TestSubspaces:
    """Test canonical subspaces and their operations."""

    def test_span_is_canonical(self):
        """Test that different spanning sets give identical bases."""
        a = SubspaceBasis.span([{0: QQ(2), 1: QQ(2)}, {2: QQ(5)}], 3)
        b = SubspaceBasis.span([{0: QQ(1), 1: QQ(1), 2: QQ(1)}, {2: QQ(-1)}], 3)
        assert a == b

    def test_span_of_nothing_is_zero(self):
        """Test spans of empty or zero vectors."""
        assert SubspaceBasis.span([{}, {}], 4).is_zero()

    def test_image_of_matrix(self):
        """Test the column space."""
        columns = image(RationalMatrix.from_dense([[1, 2], [1, 2], [0, 0]]))
        assert columns.dim == 1
        assert columns.contains({0: QQ(3), 1: QQ(3)})
        assert not columns.contains(e(2))

    def test_sum_and_intersection(self):
        """Test span(e0, e1) and span(e1, e2) in QQ^3."""
        a = SubspaceBasis.span([e(0), e(1)], 3)
        b = SubspaceBasis.span([e(1), e(2)], 3)
        assert subspace_sum(a, b) == SubspaceBasis.full(3)
        assert subspace_intersection(a, b) == SubspaceBasis.span([e(1)], 3)

    def test_intersection_with_zero(self):
        """Test intersecting with the zero subspace."""
        assert subspace_intersection(SubspaceBasis.full(2), SubspaceBasis.zero(2)).is_zero()

    def test_membership_coefficients(self):
        """Test that membership returns coefficients in the canonical basis."""
        s = SubspaceBasis.span([e(0), e(1)], 3)
        found, coefficients = membership({0: QQ(2), 1: QQ(-1)}, s)
        assert found
        assert s.combination(coefficients) == {0: QQ(2), 1: QQ(-1)}
        assert membership(e(2), s) == (False, None)

    def test_membership_out_of_range(self):
        """Test vectors with coordinates outside the ambient space."""
        with pytest.raises(DimensionMismatch):
            membership({5: QQ.one}, SubspaceBasis.full(3))

    def test_mismatched_ambient_spaces(self):
        """Test operations on subspaces of different spaces."""
        with pytest.raises(DimensionMismatch):
            subspace_sum(SubspaceBasis.full(2), SubspaceBasis.full(3))


class TestQuotients:
    """Test quotient spaces with coordinates."""

    def test_quotient_dimension_and_coordinates(self):
        """Test QQ^3 modulo span(e0 + e1)."""
        q = quotient(SubspaceBasis.full(3), SubspaceBasis.span([{0: QQ.one, 1: QQ.one}], 3))
        assert q.dim == 2
        assert q.coordinates({0: QQ.one, 1: QQ.one}) == (QQ.zero, QQ.zero)
        assert q.coordinates(e(2)) == (QQ.zero, QQ.one)

    def test_lift_returns_the_same_coset(self):
        """Test that lift(coordinates(v)) differs from v by an element of the subspace."""
        sub = SubspaceBasis.span([{0: QQ.one, 1: QQ.one}], 3)
        q = quotient(SubspaceBasis.full(3), sub)
        v = {0: QQ(3), 2: QQ(-1)}
        lifted = q.lift(q.coordinates(v))
        difference = {i: v.get(i, QQ.zero) - lifted.get(i, QQ.zero) for i in range(3)}
        assert sub.contains({i: c for i, c in difference.items() if c})

    def test_complement_is_transverse(self):
        """Test that the complement meets the subspace trivially and fills the ambient space."""
        ambient = SubspaceBasis.full(4)
        sub = SubspaceBasis.span([e(0), {1: QQ.one, 2: QQ.one}], 4)
        complement = quotient(ambient, sub).complement()
        assert complement.dim == 2
        assert subspace_intersection(sub, complement).is_zero()
        assert subspace_sum(sub, complement) == ambient

    def test_quotient_rejects_non_subspace(self):
        """Test that the subspace must lie in the ambient subspace."""
        with pytest.raises(NotSubspace):
            quotient_basis(SubspaceBasis.span([e(0)], 2), SubspaceBasis.span([e(1)], 2))

    def test_lift_with_wrong_length(self):
        """Test lifting coordinates of the wrong length."""
        q = quotient(SubspaceBasis.full(2), SubspaceBasis.zero(2))
        with pytest.raises(DimensionMismatch):
            q.lift([QQ.one])
