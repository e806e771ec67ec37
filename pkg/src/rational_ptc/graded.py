"""
Graded-commutative polynomials over QQ.

A monomial is stored with its factors in ascending generator index; the sign
produced by reordering factors (Koszul rule: moving ``a`` past ``b`` costs
``(-1)^{|a||b|}``) is absorbed into the coefficient of the owning
polynomial. Odd generators square to zero.
"""

from bisect import bisect_left
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Iterable, Mapping, Optional, Sequence

from sympy import QQ

from .exceptions import DimensionMismatch, WrongDegree
from .interfaces import Generator
from .linalg import Vector, as_rational

GeneratorTuple = tuple[Generator, ...]


@dataclass(frozen=True, order=True)
class Monomial:
    """Sparse exponent map, sorted by generator index."""

    exponents: tuple[tuple[int, int], ...] = ()

    @classmethod
    def of(cls, gens: GeneratorTuple, exponents: Mapping[int, int]) -> "Monomial":
        pairs = []
        for index, exponent in sorted(exponents.items()):
            if exponent <= 0:
                continue
            if gens[index].is_odd and exponent > 1:
                raise ValueError(f"Odd generator {gens[index].name} cannot appear squared")
            pairs.append((index, exponent))
        return cls(tuple(pairs))

    def degree(self, gens: GeneratorTuple) -> int:
        return sum(gens[i].degree * e for i, e in self.exponents)

    def exponent(self, index: int) -> int:
        for i, e in self.exponents:
            if i == index:
                return e
        return 0

    def indices(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.exponents)

    def is_unit(self) -> bool:
        return not self.exponents


UNIT = Monomial()


def multiply_monomials(gens: GeneratorTuple, left: Monomial, right: Monomial) -> Optional[tuple[int, Monomial]]:
    """
    Product of two canonical monomials.

    Returns ``(sign, monomial)`` or ``None`` when an odd generator repeats.
    """
    odd_right = [i for i, _ in right.exponents if gens[i].is_odd]
    swaps = 0
    if odd_right:
        odd_right_set = set(odd_right)
        for i, _ in left.exponents:
            if gens[i].is_odd:
                if i in odd_right_set:
                    return None
                swaps += bisect_left(odd_right, i)
    merged = dict(left.exponents)
    for i, e in right.exponents:
        merged[i] = merged.get(i, 0) + e
    return (-1 if swaps % 2 else 1), Monomial(tuple(sorted(merged.items())))


@dataclass(frozen=True)
class GradedPoly:
    """
    A finite QQ-linear combination of monomials.

    ``terms`` never stores a zero coefficient; since the monomials are in
    canonical form, equality of polynomials is equality of term tables.
    """

    gens: GeneratorTuple
    terms: Mapping[Monomial, Any] = field(default_factory=dict)

    def __hash__(self) -> int:
        return hash((self.gens, frozenset(self.terms.items())))

    @classmethod
    def zero(cls, gens: GeneratorTuple) -> "GradedPoly":
        return cls(gens, {})

    @classmethod
    def constant(cls, gens: GeneratorTuple, value: Any) -> "GradedPoly":
        q = as_rational(value)
        return cls(gens, {UNIT: q} if q else {})

    @classmethod
    def generator(cls, gens: GeneratorTuple, index: int) -> "GradedPoly":
        return cls(gens, {Monomial(((index, 1),)): QQ.one})

    @classmethod
    def monomial(cls, gens: GeneratorTuple, monomial: Monomial, coefficient: Any = 1) -> "GradedPoly":
        q = as_rational(coefficient)
        return cls(gens, {monomial: q} if q else {})

    @classmethod
    def from_terms(cls, gens: GeneratorTuple, pairs: Iterable[tuple[Monomial, Any]]) -> "GradedPoly":
        table: dict[Monomial, Any] = {}
        for monomial, coefficient in pairs:
            q = as_rational(coefficient)
            if not q:
                continue
            updated = table.get(monomial, QQ.zero) + q
            if updated:
                table[monomial] = updated
            else:
                table.pop(monomial, None)
        return cls(gens, table)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degrees(self) -> frozenset[int]:
        return frozenset(m.degree(self.gens) for m in self.terms)

    @property
    def degree(self) -> Optional[int]:
        """The homogeneous degree, or ``None`` for zero and mixed polynomials."""
        degrees = self.degrees
        if len(degrees) == 1:
            return next(iter(degrees))
        return None

    def is_homogeneous(self) -> bool:
        return len(self.degrees) <= 1

    def sorted_terms(self) -> list[tuple[Monomial, Any]]:
        return sorted(self.terms.items(), key=lambda item: _display_key(self.gens, item[0]))

    def _check_same(self, other: "GradedPoly") -> None:
        if self.gens is not other.gens and self.gens != other.gens:
            raise DimensionMismatch("Polynomials live over different generator sets")

    def __add__(self, other: "GradedPoly") -> "GradedPoly":
        self._check_same(other)
        table = dict(self.terms)
        for monomial, coefficient in other.terms.items():
            updated = table.get(monomial, QQ.zero) + coefficient
            if updated:
                table[monomial] = updated
            else:
                table.pop(monomial, None)
        return GradedPoly(self.gens, table)

    def __neg__(self) -> "GradedPoly":
        return GradedPoly(self.gens, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "GradedPoly") -> "GradedPoly":
        return self + (-other)

    def scale(self, value: Any) -> "GradedPoly":
        q = as_rational(value)
        if not q:
            return GradedPoly.zero(self.gens)
        return GradedPoly(self.gens, {m: q * c for m, c in self.terms.items()})

    def __mul__(self, other: Any) -> "GradedPoly":
        if isinstance(other, GradedPoly):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other: Any) -> "GradedPoly":
        return self.scale(other)

    def __pow__(self, exponent: int) -> "GradedPoly":
        result = GradedPoly.constant(self.gens, 1)
        for _ in range(exponent):
            result = mul(result, self)
        return result

    def uses_only(self, indices: Iterable[int]) -> bool:
        allowed = set(indices)
        return all(set(m.indices()) <= allowed for m in self.terms)

    def __str__(self) -> str:
        from .expression_parser import format_poly

        return format_poly(self)


def _display_key(gens: GeneratorTuple, monomial: Monomial) -> tuple:
    dense = [0] * len(gens)
    for i, e in monomial.exponents:
        dense[i] = e
    return (monomial.degree(gens), tuple(-e for e in dense))


def mul(p: GradedPoly, q: GradedPoly) -> GradedPoly:
    """Graded-commutative product with Koszul signs."""
    p._check_same(q)
    gens = p.gens
    table: dict[Monomial, Any] = {}
    for left, a in p.terms.items():
        for right, b in q.terms.items():
            product = multiply_monomials(gens, left, right)
            if product is None:
                continue
            sign, monomial = product
            updated = table.get(monomial, QQ.zero) + (a * b if sign > 0 else -(a * b))
            if updated:
                table[monomial] = updated
            else:
                table.pop(monomial, None)
    return GradedPoly(gens, table)


@lru_cache(maxsize=4096)
def monomial_basis(gens: GeneratorTuple, n: int) -> tuple[Monomial, ...]:
    """
    All canonical monomials of total degree ``n``.

    Ordered lexicographically by exponent vector, larger exponents of
    earlier generators first (so ``x*z`` precedes ``y*z``).
    """
    if n < 0:
        return ()
    result: list[Monomial] = []
    exponents: list[tuple[int, int]] = []

    def walk(position: int, remaining: int) -> None:
        if remaining == 0:
            result.append(Monomial(tuple(exponents)))
            return
        if position == len(gens):
            return
        gen = gens[position]
        top = 1 if gen.is_odd else remaining // gen.degree
        top = min(top, remaining // gen.degree)
        for e in range(top, 0, -1):
            exponents.append((position, e))
            walk(position + 1, remaining - e * gen.degree)
            exponents.pop()
        walk(position + 1, remaining)

    walk(0, n)
    return tuple(result)


@lru_cache(maxsize=4096)
def basis_index(gens: GeneratorTuple, n: int) -> dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomial_basis(gens, n))}


def slice_dimension(gens: GeneratorTuple, n: int) -> int:
    return len(monomial_basis(gens, n))


def coordinates(p: GradedPoly, n: int) -> Vector:
    """
    Coordinates of a homogeneous polynomial in ``monomial_basis(gens, n)``.

    Raises:
        WrongDegree: If ``p`` is not zero and not homogeneous of degree ``n``
    """
    if p.is_zero():
        return {}
    if p.degree != n:
        raise WrongDegree(n, p.degree)
    index = basis_index(p.gens, n)
    return {index[m]: c for m, c in p.terms.items()}


def from_coordinates(gens: GeneratorTuple, n: int, vector: Mapping[int, Any]) -> GradedPoly:
    basis = monomial_basis(gens, n)
    table = {}
    for position, value in vector.items():
        if not 0 <= position < len(basis):
            raise DimensionMismatch(f"Coordinate {position} outside degree-{n} slice of size {len(basis)}")
        q = as_rational(value)
        if q:
            table[basis[position]] = q
    return GradedPoly(gens, table)


def apply_derivation(p: GradedPoly, images: Sequence[GradedPoly]) -> GradedPoly:
    """
    Extend ``g_i -> images[i]`` to a degree +1 derivation by the graded Leibniz rule.

    d(a b) = d(a) b + (-1)^{|a|} a d(b); for an even generator,
    d(g^e) = e g^{e-1} d(g).
    """
    gens = p.gens
    result = GradedPoly.zero(gens)
    for monomial, coefficient in p.terms.items():
        factors = monomial.exponents
        prefix_degree = 0
        for j, (index, exponent) in enumerate(factors):
            image = images[index]
            if not image.is_zero():
                head = factors[:j] + (((index, exponent - 1),) if exponent > 1 else ())
                tail = factors[j + 1 :]
                sign = -1 if prefix_degree % 2 else 1
                term = GradedPoly.monomial(gens, Monomial(head), coefficient * exponent * sign)
                term = mul(mul(term, image), GradedPoly.monomial(gens, Monomial(tail)))
                result = result + term
            prefix_degree += gens[index].degree * exponent
    return result


def substitute(p: GradedPoly, images: Sequence[GradedPoly], target: GeneratorTuple) -> GradedPoly:
    """Apply the algebra map ``g_i -> images[i]`` (images over ``target``)."""
    result = GradedPoly.zero(target)
    for monomial, coefficient in p.terms.items():
        term = GradedPoly.constant(target, coefficient)
        for index, exponent in monomial.exponents:
            for _ in range(exponent):
                term = mul(term, images[index])
                if term.is_zero():
                    break
            if term.is_zero():
                break
        result = result + term
    return result
