"""
Finitely presented CDGAs.

This module provides presentations, their validation, degreewise
differential matrices and cohomology, morphisms with their induced maps,
cohomology-ring products and cup-length.
"""

import logging
import threading
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Iterable, Mapping, Optional, Sequence, Union

from sympy import QQ

from .exceptions import (
    DegreeMismatch,
    DimensionMismatch,
    LeibnizSquareNonzero,
    NotACocycle,
    NotValidated,
    ValidationError,
    WrongDegree,
)
from .expression_parser import format_poly, parse_poly
from .graded import (
    GeneratorTuple,
    GradedPoly,
    apply_derivation,
    coordinates,
    from_coordinates,
    monomial_basis,
    mul,
    substitute,
)
from .interfaces import AssertionSet, Block, ComputedValue, Generator, Provenance, Status, VanishingCertificate
from .linalg import (
    QuotientSpace,
    RationalMatrix,
    SubspaceBasis,
    Vector,
    axpy,
    image,
    kernel,
    quotient,
)

logger = logging.getLogger(__name__)


class ComputationCache:
    """Memo of computed slices and models, safe to share between threads."""

    def __init__(self) -> None:
        self._lock = threading.RLock()
        self._table: dict[tuple[Any, ...], Any] = {}

    def get(self, key: tuple[Any, ...], compute: Callable[[], Any]) -> Any:
        with self._lock:
            if key not in self._table:
                self._table[key] = compute()
            return self._table[key]


@dataclass(frozen=True)
class CdgaPresentation:
    """
    Ordered generators with their differential images.

    ``differential[i]`` is d of ``generators[i]``, a polynomial over the same
    generators. ``declared_top`` is the user's statement that cohomology
    vanishes above that degree; ``truncated_above`` marks a presentation whose
    generators of that degree and higher were left out.
    """

    generators: GeneratorTuple
    differential: tuple[GradedPoly, ...]
    declared_top: Optional[int] = None
    truncated_above: Optional[int] = None
    name: str = ""
    validated: bool = False
    _cache: ComputationCache = field(default_factory=ComputationCache, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if len(self.differential) != len(self.generators):
            raise DimensionMismatch("One differential image per generator is required")
        seen = set()
        for position, gen in enumerate(self.generators):
            if gen.index != position:
                raise ValidationError(f"Generator {gen.name} has index {gen.index}, expected {position}", gen.name)
            if gen.name in seen:
                raise ValidationError(f"Duplicate generator name {gen.name}", gen.name)
            seen.add(gen.name)
        for gen, image_ in zip(self.generators, self.differential):
            if image_.gens != self.generators:
                raise DimensionMismatch(f"d({gen.name}) is not a polynomial over this presentation")

    @classmethod
    def build(
        cls,
        generators: Sequence[Union[tuple[str, int], tuple[str, int, Block]]],
        differential: Optional[Mapping[str, Union[str, GradedPoly]]] = None,
        **meta: Any,
    ) -> "CdgaPresentation":
        """
        Convenience constructor from ``(name, degree[, block])`` tuples and expression strings.

        Generators without an entry in ``differential`` have zero differential.
        """
        gens = tuple(
            Generator(entry[0], entry[1], position, entry[2] if len(entry) > 2 else Block.FIBER)  # type: ignore[misc]
            for position, entry in enumerate(generators)
        )
        names = {g.name: g.index for g in gens}
        images = []
        for gen in gens:
            value = (differential or {}).get(gen.name)
            if value is None:
                images.append(GradedPoly.zero(gens))
            elif isinstance(value, GradedPoly):
                images.append(value)
            else:
                images.append(parse_poly(value, gens, names))
        unknown = set(differential or {}) - set(names)
        if unknown:
            raise ValidationError(f"Differential given for unknown generators: {', '.join(sorted(unknown))}")
        return cls(gens, tuple(images), **meta)

    @property
    def names(self) -> dict[str, int]:
        return {g.name: g.index for g in self.generators}

    def generator(self, name: str) -> Generator:
        try:
            return self.generators[self.names[name]]
        except KeyError:
            raise ValueError(f"Unknown generator: {name}")

    def poly(self, text: str) -> GradedPoly:
        """Parse an expression over this presentation's generators."""
        return parse_poly(text, self.generators, self.names)

    def gen_poly(self, name: str) -> GradedPoly:
        return GradedPoly.generator(self.generators, self.names[name])

    def d(self, p: GradedPoly) -> GradedPoly:
        """Apply the differential, extended by the Leibniz rule."""
        return apply_derivation(p, self.differential)

    @property
    def is_finite(self) -> bool:
        """All generators odd, so the underlying algebra is finite-dimensional."""
        return all(g.is_odd for g in self.generators)

    @property
    def algebra_top(self) -> Optional[int]:
        if not self.is_finite:
            return None
        return sum(g.degree for g in self.generators)

    def basis(self, n: int):
        return monomial_basis(self.generators, n)

    def slice_dim(self, n: int) -> int:
        return len(monomial_basis(self.generators, n))

    def __repr__(self) -> str:
        shown = self.name or "CdgaPresentation"
        return f"{shown}({', '.join(f'{g.name}:{g.degree}' for g in self.generators)})"


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of ``validate``; ``presentation`` is the validated copy."""

    presentation: CdgaPresentation
    checked: tuple[str, ...]
    finite: bool


def validate(a: CdgaPresentation, lines: Optional[Mapping[str, int]] = None) -> ValidationReport:
    """
    Check that a presentation is a CDGA.

    Every differential image must be homogeneous of degree ``|g| + 1`` and
    ``d(d(g))`` must vanish.

    Args:
        a: Presentation to check
        lines: Optional generator name -> source line, used in error messages

    Returns:
        ValidationReport holding a copy of ``a`` marked validated

    Raises:
        DegreeMismatch: If a differential image has the wrong degree
        LeibnizSquareNonzero: If d(d(g)) is not zero
    """
    lines = lines or {}
    for gen, image_ in zip(a.generators, a.differential):
        if image_.is_zero():
            continue
        if image_.degree != gen.degree + 1:
            raise DegreeMismatch(gen.name, gen.degree + 1, image_.degree, lines.get(gen.name))
    for gen, image_ in zip(a.generators, a.differential):
        residue = a.d(image_)
        if not residue.is_zero():
            raise LeibnizSquareNonzero(gen.name, format_poly(residue), lines.get(gen.name))
    logger.debug("Validated %r", a)
    return ValidationReport(
        presentation=a if a.validated else replace(a, validated=True),
        checked=tuple(g.name for g in a.generators),
        finite=a.is_finite,
    )


def _require_validated(a: CdgaPresentation) -> None:
    if not a.validated:
        raise NotValidated(f"Presentation {a!r} must be validated first")


def differential_matrix(a: CdgaPresentation, n: int) -> RationalMatrix:
    """Matrix of d: A^n -> A^{n+1} in monomial coordinates (columns are sources)."""
    _require_validated(a)

    def compute() -> RationalMatrix:
        source = monomial_basis(a.generators, n)
        target_dim = a.slice_dim(n + 1)
        columns = [coordinates(a.d(GradedPoly.monomial(a.generators, m)), n + 1) for m in source]
        return RationalMatrix.from_columns(columns, target_dim)

    return a._cache.get(("d", n), compute)


@dataclass(frozen=True)
class CohomologySlice:
    """
    H^n of a presentation with fixed cocycle representatives.

    The representatives are rows of the canonical cocycle basis chosen to
    complement the coboundaries; class coordinates always refer to them.
    """

    gens: GeneratorTuple
    degree: int
    cocycles: SubspaceBasis
    coboundaries: SubspaceBasis
    classes: QuotientSpace

    @property
    def dim(self) -> int:
        return self.classes.dim

    @property
    def representatives(self) -> tuple[Vector, ...]:
        return self.classes.representatives

    def representative_polys(self) -> tuple[GradedPoly, ...]:
        return tuple(from_coordinates(self.gens, self.degree, v) for v in self.representatives)

    def _as_vector(self, element: Union[GradedPoly, Mapping[int, Any]]) -> Vector:
        if isinstance(element, GradedPoly):
            return coordinates(element, self.degree)
        return dict(element)

    def class_coordinates(self, element: Union[GradedPoly, Mapping[int, Any]], check: bool = True) -> tuple[Any, ...]:
        """
        Coordinates of the class of a cocycle.

        Raises:
            NotACocycle: If ``check`` is set and ``element`` is not closed
        """
        vector = self._as_vector(element)
        if check and not self.cocycles.contains(vector):
            raise NotACocycle(f"Element of degree {self.degree} is not a cocycle")
        return self.classes.coordinates(vector)

    def is_cocycle(self, element: Union[GradedPoly, Mapping[int, Any]]) -> bool:
        return self.cocycles.contains(self._as_vector(element))

    def is_exact(self, element: Union[GradedPoly, Mapping[int, Any]]) -> bool:
        return self.coboundaries.contains(self._as_vector(element))

    def representative(self, class_coordinates: Sequence[Any]) -> Vector:
        return self.classes.lift(class_coordinates)

    def representative_poly(self, class_coordinates: Sequence[Any]) -> GradedPoly:
        return from_coordinates(self.gens, self.degree, self.representative(class_coordinates))


def cohomology(a: CdgaPresentation, n: int) -> CohomologySlice:
    """Degree-``n`` cohomology: ker d_n modulo im d_{n-1}."""
    _require_validated(a)

    def compute() -> CohomologySlice:
        dim = a.slice_dim(n) if n >= 0 else 0
        cocycles = kernel(differential_matrix(a, n)) if dim else SubspaceBasis.zero(0)
        if n >= 1 and dim and a.slice_dim(n - 1):
            coboundaries = image(differential_matrix(a, n - 1))
        else:
            coboundaries = SubspaceBasis.zero(dim)
        classes = quotient(cocycles, coboundaries, check=False)
        logger.debug("%r: dim A^%d = %d, dim H^%d = %d", a, n, dim, n, classes.dim)
        return CohomologySlice(a.generators, n, cocycles, coboundaries, classes)

    return a._cache.get(("H", n), compute)


def betti_numbers(a: CdgaPresentation, cutoff: int) -> list[int]:
    return [cohomology(a, n).dim for n in range(cutoff + 1)]


@dataclass(frozen=True)
class CdgaMorphism:
    """An algebra map given on generators; ``images[i]`` lives in the target."""

    source: CdgaPresentation
    target: CdgaPresentation
    images: tuple[GradedPoly, ...]
    name: str = ""
    validated: bool = False

    def __post_init__(self) -> None:
        if len(self.images) != len(self.source.generators):
            raise DimensionMismatch("One image per source generator is required")
        for gen, image_ in zip(self.source.generators, self.images):
            if image_.gens != self.target.generators:
                raise DimensionMismatch(f"Image of {gen.name} is not a polynomial over the target")

    def apply(self, p: GradedPoly) -> GradedPoly:
        return substitute(p, self.images, self.target.generators)

    def __repr__(self) -> str:
        return f"CdgaMorphism({self.name or 'phi'}: {self.source!r} -> {self.target!r})"


def make_morphism(
    source: CdgaPresentation,
    target: CdgaPresentation,
    images: Mapping[str, Union[str, GradedPoly]],
    name: str = "",
) -> CdgaMorphism:
    """Build and validate a morphism; unlisted generators map to zero."""
    polys = []
    for gen in source.generators:
        value = images.get(gen.name)
        if value is None:
            polys.append(GradedPoly.zero(target.generators))
        elif isinstance(value, GradedPoly):
            polys.append(value)
        else:
            polys.append(target.poly(value))
    return validate_morphism(CdgaMorphism(source, target, tuple(polys), name))


def identity_morphism(a: CdgaPresentation) -> CdgaMorphism:
    images = tuple(GradedPoly.generator(a.generators, g.index) for g in a.generators)
    return CdgaMorphism(a, a, images, "id", validated=True)


def compose(outer: CdgaMorphism, inner: CdgaMorphism) -> CdgaMorphism:
    """``outer . inner``."""
    if inner.target.generators != outer.source.generators:
        raise DimensionMismatch("Morphisms are not composable")
    images = tuple(outer.apply(p) for p in inner.images)
    return CdgaMorphism(
        inner.source,
        outer.target,
        images,
        f"{outer.name}.{inner.name}",
        validated=inner.validated and outer.validated,
    )


def validate_morphism(phi: CdgaMorphism) -> CdgaMorphism:
    """
    Check degrees and compatibility with the differentials.

    Raises:
        WrongDegree: If an image is not homogeneous of its generator's degree
        ValidationError: If phi(d s) differs from d(phi s) for some generator s
    """
    for gen, image_ in zip(phi.source.generators, phi.images):
        if not image_.is_zero() and image_.degree != gen.degree:
            raise WrongDegree(gen.degree, image_.degree)
    for gen, image_, d_gen in zip(phi.source.generators, phi.images, phi.source.differential):
        lhs = phi.apply(d_gen)
        rhs = phi.target.d(image_)
        if lhs != rhs:
            raise ValidationError(
                f"Morphism {phi.name or 'phi'} does not commute with d on {gen.name}: "
                f"{format_poly(lhs)} != {format_poly(rhs)}",
                gen.name,
            )
    return phi if phi.validated else replace(phi, validated=True)


def morphism_matrix(phi: CdgaMorphism, n: int) -> RationalMatrix:
    """Matrix of phi: A^n -> A'^n in monomial coordinates."""
    columns = [
        coordinates(phi.apply(GradedPoly.monomial(phi.source.generators, m)), n)
        for m in monomial_basis(phi.source.generators, n)
    ]
    return RationalMatrix.from_columns(columns, phi.target.slice_dim(n))


@dataclass(frozen=True)
class InducedMap:
    """H^n(phi) in class coordinates, with its kernel in source class coordinates."""

    degree: int
    matrix: RationalMatrix
    kernel: SubspaceBasis


def induced_map(phi: CdgaMorphism, n: int) -> InducedMap:
    if not phi.validated:
        raise NotValidated(f"{phi!r} must be validated first")
    source = cohomology(phi.source, n)
    target = cohomology(phi.target, n)
    on_cochains = morphism_matrix(phi, n)
    columns = []
    for rep in source.representatives:
        coords = target.class_coordinates(on_cochains.apply(rep), check=False)
        columns.append({i: c for i, c in enumerate(coords) if c})
    matrix = RationalMatrix.from_columns(columns, target.dim)
    return InducedMap(n, matrix, kernel(matrix) if source.dim else SubspaceBasis.zero(0))


@dataclass(frozen=True)
class CohomologyClass:
    """A class given by coordinates in the fixed representatives of H^degree."""

    degree: int
    coordinates: tuple[Any, ...]

    def is_zero(self) -> bool:
        return not any(self.coordinates)


def unit_class() -> CohomologyClass:
    return CohomologyClass(0, (QQ.one,))


def class_of(a: CdgaPresentation, cocycle: GradedPoly, n: Optional[int] = None) -> CohomologyClass:
    """Class of a homogeneous cocycle; ``n`` is required for the zero element."""
    degree = cocycle.degree if n is None else n
    if degree is None:
        raise WrongDegree(-1 if n is None else n, None)
    return CohomologyClass(degree, cohomology(a, degree).class_coordinates(cocycle))


def class_product(a: CdgaPresentation, classes: Sequence[CohomologyClass]) -> CohomologyClass:
    """Cup product of classes, reduced to class coordinates of the product degree."""
    _require_validated(a)
    product = GradedPoly.constant(a.generators, 1)
    degree = 0
    for cls in classes:
        product = mul(product, cohomology(a, cls.degree).representative_poly(cls.coordinates))
        degree += cls.degree
    target = cohomology(a, degree)
    if product.is_zero():
        return CohomologyClass(degree, tuple(QQ.zero for _ in range(target.dim)))
    return CohomologyClass(degree, target.class_coordinates(product))


class _ClassMultiplier:
    """Left multiplication by fixed classes, as columns over the class bases of H^m."""

    def __init__(self, a: CdgaPresentation):
        self.a = a
        self._columns: dict[tuple[int, int], list[Vector]] = {}

    def columns(self, key: int, factor: GradedPoly, factor_degree: int, m: int) -> list[Vector]:
        if (key, m) not in self._columns:
            target = cohomology(self.a, m + factor_degree)
            columns = []
            for rep in cohomology(self.a, m).representative_polys():
                product = mul(factor, rep)
                if product.is_zero():
                    columns.append({})
                    continue
                coords = target.class_coordinates(product, check=False)
                columns.append({i: c for i, c in enumerate(coords) if c})
            self._columns[(key, m)] = columns
        return self._columns[(key, m)]

    def apply(self, key: int, factor: GradedPoly, factor_degree: int, m: int, vector: Mapping[int, Any]) -> Vector:
        columns = self.columns(key, factor, factor_degree, m)
        result: Vector = {}
        for j, value in vector.items():
            axpy(result, value, columns[j])
        return result


@dataclass(frozen=True)
class NilpotencyResult:
    """
    Powers of a graded ideal of H^* inside a degree window.

    ``powers[k][n]`` is the degree-n part of the k-th power, in class
    coordinates of H^n; only nonzero parts are stored. ``generators`` maps
    each degree to the ideal generators found there.
    """

    nil: int
    cutoff: int
    powers: Mapping[int, Mapping[int, SubspaceBasis]]
    generators: Mapping[int, tuple[Vector, ...]] = field(default_factory=dict)


def ideal_nilpotency(
    a: CdgaPresentation,
    ideal: Mapping[int, SubspaceBasis],
    cutoff: int,
) -> NilpotencyResult:
    """
    Largest k with a nonzero k-fold product of ideal elements in degrees <= cutoff.

    ``ideal[n]`` is a subspace of H^n in class coordinates and must be an
    ideal of H^* in the window. A generating set is extracted degree by
    degree; the k-th power is then the span of the (k-1)-th power times the
    generators.
    """
    base = {n: s for n, s in ideal.items() if 1 <= n <= cutoff and not s.is_zero()}
    if not base:
        return NilpotencyResult(0, cutoff, {})
    multiplier = _ClassMultiplier(a)

    found: list[tuple[int, GradedPoly]] = []
    by_degree: dict[int, tuple[Vector, ...]] = {}
    for n in sorted(base):
        spans: list[Vector] = []
        for key, (degree, poly) in enumerate(found):
            if degree < n:
                spans.extend(c for c in multiplier.columns(key, poly, degree, n - degree) if c)
        generated = SubspaceBasis.span(spans, base[n].ambient_dim)
        fresh = quotient(base[n], generated, check=False).representatives
        if fresh:
            by_degree[n] = fresh
            slice_ = cohomology(a, n)
            for vector in fresh:
                found.append((n, slice_.representative_poly([vector.get(i, QQ.zero) for i in range(slice_.dim)])))
    logger.debug("%r: ideal generated in degrees %s", a, sorted(by_degree))

    powers: dict[int, dict[int, SubspaceBasis]] = {1: base}
    k = 1
    while True:
        spans_by_degree: dict[int, list[Vector]] = {}
        for m, part in powers[k].items():
            for key, (degree, poly) in enumerate(found):
                n = m + degree
                if n > cutoff:
                    continue
                for vector in part.basis:
                    product = multiplier.apply(key, poly, degree, m, vector)
                    if product:
                        spans_by_degree.setdefault(n, []).append(product)
        nxt = {}
        for n, vectors in spans_by_degree.items():
            span = SubspaceBasis.span(vectors, cohomology(a, n).dim)
            if not span.is_zero():
                nxt[n] = span
        if not nxt:
            break
        k += 1
        powers[k] = nxt
        logger.debug("%r: power %d nonzero in degrees %s", a, k, sorted(nxt))
    return NilpotencyResult(k, cutoff, powers, by_degree)


def positive_cohomology(a: CdgaPresentation, cutoff: int) -> dict[int, SubspaceBasis]:
    return {n: SubspaceBasis.full(cohomology(a, n).dim) for n in range(1, cutoff + 1)}


def vanishing_certificate(
    a: CdgaPresentation,
    assertions: Optional[AssertionSet] = None,
) -> Optional[VanishingCertificate]:
    """
    Best available degree above which H(a) vanishes, with its source.

    A finite algebra certifies itself unless it is truncated; otherwise
    ``declared_top`` or a ``cohomology_vanishes_above`` assertion is used.
    """
    if a.is_finite and a.truncated_above is None:
        return VanishingCertificate(a.algebra_top or 0, "finite_algebra")
    if a.declared_top is not None:
        return VanishingCertificate(a.declared_top, "declared_top")
    if assertions is not None and assertions.has("cohomology_vanishes_above"):
        assert assertions.vanishes_above is not None
        return VanishingCertificate(
            assertions.vanishes_above,
            "cohomology_vanishes_above",
            assertions.describe("cohomology_vanishes_above"),
        )
    return None


def elliptic_formal_dimension(generators: Iterable[Generator]) -> int:
    """Formal dimension of an elliptic Sullivan algebra: sum |odd| - sum (|even| - 1)."""
    odd = sum(g.degree for g in generators if g.is_odd)
    even = sum(g.degree - 1 for g in generators if not g.is_odd)
    return odd - even


def top_cohomology_degree(a: CdgaPresentation) -> Optional[int]:
    """Highest n with H^n != 0, for a finite algebra; ``None`` otherwise."""
    top = a.algebra_top
    if top is None:
        return None
    for n in range(top, -1, -1):
        if cohomology(a, n).dim:
            return n
    return 0


def cuplength(a: CdgaPresentation, cutoff: int, assertions: Optional[AssertionSet] = None) -> ComputedValue:
    """
    Nilpotency of the positive-degree cohomology ideal through ``cutoff``.

    Exact when cohomology is certified to vanish above a degree <= cutoff.
    """
    _require_validated(a)
    certificate = vanishing_certificate(a, assertions)
    window = cutoff
    if certificate is not None and certificate.degree < cutoff:
        window = certificate.degree
    result = ideal_nilpotency(a, positive_cohomology(a, window), window)
    certified = certificate is not None and certificate.degree <= cutoff
    if certified and certificate is not None and certificate.conditional:
        status = Status.CONDITIONAL
    elif certified:
        status = Status.EXACT
    else:
        status = Status.AT_LEAST
    detail = f"cup-length of H({a.name or 'A'}) through degree {window}"
    notes: tuple[str, ...] = ()
    if a.truncated_above is not None and window >= a.truncated_above:
        notes = (f"degrees >= {a.truncated_above} are modulo truncation",)
    return ComputedValue(
        result.nil,
        status,
        Provenance(
            "cup_length",
            detail,
            (("cutoff", str(window)), ("certificate", certificate.source if certificate else "none")),
            certificate.assertions if certificate else (),
        ),
        notes,
    )


def collapse(a: CdgaPresentation, kill: Iterable[int], name: str = "", strict: bool = False) -> CdgaPresentation:
    """
    Quotient by the ideal generated by the ``kill`` generators.

    Survivors are reindexed in order; killed letters are set to zero in
    their differentials. With ``strict`` the killed letters must not occur
    at all, so the result is a sub-CDGA rather than a quotient.

    Raises:
        ValidationError: In strict mode, if a surviving differential uses a killed generator
    """
    killed = set(kill)
    keep = [g for g in a.generators if g.index not in killed]
    new_gens = tuple(
        Generator(g.name, g.degree, position, g.block, g.copy) for position, g in enumerate(keep)
    )
    position_of = {g.index: position for position, g in enumerate(keep)}
    images = [
        GradedPoly.generator(new_gens, position_of[g.index]) if g.index in position_of else GradedPoly.zero(new_gens)
        for g in a.generators
    ]
    differential = []
    for g in keep:
        d_g = a.differential[g.index]
        if strict and not d_g.uses_only(position_of):
            raise ValidationError(f"d({g.name}) uses generators that are being removed", g.name)
        differential.append(substitute(d_g, images, new_gens))
    return CdgaPresentation(
        new_gens,
        tuple(differential),
        truncated_above=a.truncated_above,
        name=name or a.name,
    )


def projection_morphism(a: CdgaPresentation, quotient: CdgaPresentation) -> CdgaMorphism:
    """The quotient map a -> collapse(a, ...) matching generators by name."""
    names = quotient.names
    images = tuple(
        GradedPoly.generator(quotient.generators, names[g.name]) if g.name in names else GradedPoly.zero(quotient.generators)
        for g in a.generators
    )
    return CdgaMorphism(a, quotient, images, "proj")
