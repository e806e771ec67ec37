"""
Fiberwise products of relative Sullivan algebras.

This module builds the r-fold model C (x) (ΛV)^{(x) r} of a fibration, the
fiberwise diagonal ``id (x) mu_r`` back to C (x) ΛV, the copy injections, and
the kernel ideal of the diagonal together with its powers.

Besides the copy coordinates, every model carries an isomorphic
presentation in difference coordinates: generators ``v`` (the first copy)
and ``v^(l) - v^(l+1)``. There the kernel ideal is generated by the
difference letters, so its k-th power is the span of the monomials with at
least k difference letters.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Optional, Sequence

from sympy import QQ

from .cdga import (
    CdgaMorphism,
    CdgaPresentation,
    identity_morphism,
    morphism_matrix,
    validate,
    validate_morphism,
)
from .exceptions import DimensionMismatch, WindowTooSmall
from .fibration import FibrationPresentation, base_dimension, fiber_dimension
from .graded import GeneratorTuple, GradedPoly, coordinates, from_coordinates, monomial_basis, mul, substitute
from .interfaces import AssertionSet, Block, Generator, VanishingCertificate
from .linalg import SubspaceBasis, Vector, kernel

logger = logging.getLogger(__name__)


def copy_name(name: str, copy: int, taken: set[str]) -> str:
    """``x`` in copy 2 is ``x2``, or ``x_2`` when ``x2`` is already a name."""
    candidate = f"{name}{copy}"
    if candidate in taken:
        candidate = f"{name}_{copy}"
    while candidate in taken:
        candidate += "'"
    return candidate


@dataclass(frozen=True)
class RFoldModel:
    """
    The r-fold fiberwise product model with its structure maps.

    ``copies[(i, l)]`` is the index in ``presentation`` of copy ``l`` of the
    fiber generator with index ``i`` in the total presentation; base
    generators keep their position.
    """

    fibration: FibrationPresentation
    r: int
    presentation: CdgaPresentation
    diagonal: CdgaMorphism
    copy_injections: tuple[CdgaMorphism, ...]
    copies: Mapping[tuple[int, int], int] = field(default_factory=dict)

    @property
    def differences(self) -> tuple[GradedPoly, ...]:
        """v^(l) - v^(l+1) for every fiber generator v and 1 <= l < r."""
        gens = self.presentation.generators
        result = []
        for i in self.fibration.fiber_indices:
            for copy in range(1, self.r):
                result.append(
                    GradedPoly.generator(gens, self.copies[(i, copy)])
                    - GradedPoly.generator(gens, self.copies[(i, copy + 1)])
                )
        return tuple(result)

    @cached_property
    def difference_coordinates(self) -> "DifferenceCoordinates":
        return _difference_coordinates(self)

    def copy_of(self, name: str, copy: int) -> str:
        index = self.fibration.total.names[name]
        return self.presentation.generators[self.copies[(index, copy)]].name

    def __repr__(self) -> str:
        return f"RFoldModel(r={self.r}, {self.presentation!r})"


def rfold_model(f: FibrationPresentation, r: int) -> RFoldModel:
    """
    Build C (x) (ΛV)^{(x) r} with the diagonal and the copy injections.

    Raises:
        ValueError: If r < 1
    """
    if r < 1:
        raise ValueError("The number of copies r must be at least 1")
    return f._models.get(("rfold", r), lambda: _build_rfold_model(f, r))


def _build_rfold_model(f: FibrationPresentation, r: int) -> RFoldModel:
    total = f.total
    if r == 1:
        copies = {(i, 1): i for i in f.fiber_indices}
        ident = identity_morphism(total)
        return RFoldModel(f, 1, total, ident, (ident,), copies)

    taken = {g.name for g in total.generators}
    gens: list[Generator] = []
    for i in f.base_indices:
        g = total.generators[i]
        gens.append(Generator(g.name, g.degree, len(gens), Block.BASE))
    position_of_base = {i: position for position, i in enumerate(f.base_indices)}
    copies: dict[tuple[int, int], int] = {}
    for copy in range(1, r + 1):
        for i in f.fiber_indices:
            g = total.generators[i]
            name = copy_name(g.name, copy, taken)
            taken.add(name)
            copies[(i, copy)] = len(gens)
            gens.append(Generator(name, g.degree, len(gens), Block.FIBER, copy))
    new_gens = tuple(gens)

    def relabel(copy: int) -> list[GradedPoly]:
        images = []
        for g in total.generators:
            if g.block == Block.BASE:
                images.append(GradedPoly.generator(new_gens, position_of_base[g.index]))
            else:
                images.append(GradedPoly.generator(new_gens, copies[(g.index, copy)]))
        return images

    differential: list[Optional[GradedPoly]] = [None] * len(new_gens)
    base_images = relabel(1)
    for i in f.base_indices:
        differential[position_of_base[i]] = substitute(total.differential[i], base_images, new_gens)
    for copy in range(1, r + 1):
        images = relabel(copy)
        for i in f.fiber_indices:
            differential[copies[(i, copy)]] = substitute(total.differential[i], images, new_gens)
    presentation = CdgaPresentation(
        new_gens,
        tuple(p for p in differential if p is not None),
        truncated_above=total.truncated_above,
        name=f"{total.name}^{r}" if total.name else f"rfold^{r}",
    )
    presentation = validate(presentation).presentation

    diagonal_images = []
    total_names = total.names
    for g in new_gens:
        original = total_names[g.name] if g.block == Block.BASE else _original_index(copies, g.index)
        diagonal_images.append(GradedPoly.generator(total.generators, original))
    diagonal = validate_morphism(CdgaMorphism(presentation, total, tuple(diagonal_images), "diag"))

    injections = tuple(
        validate_morphism(CdgaMorphism(total, presentation, tuple(relabel(copy)), f"inj{copy}"))
        for copy in range(1, r + 1)
    )
    logger.info("Built %d-fold model of %r: %d generators", r, f, len(new_gens))
    return RFoldModel(f, r, presentation, diagonal, injections, copies)


def _original_index(copies: Mapping[tuple[int, int], int], position: int) -> int:
    for (i, _), p in copies.items():
        if p == position:
            return i
    raise DimensionMismatch(f"Generator {position} is not a fiber copy")


def copy_projection(larger: RFoldModel, smaller: RFoldModel) -> CdgaMorphism:
    """
    The map smaller -> larger sending each copy to the same copy.

    Models the projection X^{r+1}_B -> X^r_B forgetting the last factor.
    """
    if larger.fibration is not smaller.fibration and larger.fibration.total != smaller.fibration.total:
        raise DimensionMismatch("Copy projection needs models of the same fibration")
    if smaller.r > larger.r:
        raise DimensionMismatch("Copy projection goes from fewer copies to more")
    gens = larger.presentation.generators
    images = []
    for g in smaller.presentation.generators:
        if g.block == Block.BASE:
            images.append(GradedPoly.generator(gens, larger.presentation.names[g.name]))
        else:
            i = _original_index(smaller.copies, g.index)
            images.append(GradedPoly.generator(gens, larger.copies[(i, g.copy or 1)]))
    return validate_morphism(CdgaMorphism(smaller.presentation, larger.presentation, tuple(images), "proj"))


@dataclass(frozen=True)
class DifferenceCoordinates:
    """
    An isomorphic copy of the r-fold model in difference coordinates.

    ``to_copies`` maps the difference presentation onto the r-fold model and
    ``to_differences`` is its inverse. ``weights[i]`` is 1 for a difference
    letter and 0 otherwise.
    """

    presentation: CdgaPresentation
    to_copies: CdgaMorphism
    to_differences: CdgaMorphism
    weights: tuple[int, ...]

    def difference_length(self, monomial) -> int:
        return sum(self.weights[i] * e for i, e in monomial.exponents)

    def power_slice(self, k: int, n: int) -> SubspaceBasis:
        """Degree-n part of the k-th power of the kernel ideal, as a coordinate subspace."""
        basis = monomial_basis(self.presentation.generators, n)
        positions = tuple(j for j, m in enumerate(basis) if self.difference_length(m) >= k)
        return SubspaceBasis(len(basis), tuple({j: QQ.one} for j in positions), positions)

    def in_power(self, element: GradedPoly, k: int) -> bool:
        """Does an element of the r-fold model lie in the k-th power of the kernel ideal?"""
        image = self.to_differences.apply(element)
        return all(self.difference_length(m) >= k for m in image.terms)


def _difference_coordinates(m: RFoldModel) -> DifferenceCoordinates:
    f = m.fibration
    model = m.presentation
    taken = {g.name for g in model.generators}
    gens: list[Generator] = []
    weights: list[int] = []
    to_copies: list[GradedPoly] = []
    for g in model.generators:
        if g.block == Block.BASE or g.copy in (None, 1):
            gens.append(Generator(g.name, g.degree, len(gens), g.block, g.copy))
            weights.append(0)
            to_copies.append(GradedPoly.generator(model.generators, g.index))
    letter: dict[tuple[int, int], int] = {}
    for copy in range(1, m.r):
        for i in f.fiber_indices:
            upper = model.generators[m.copies[(i, copy)]]
            lower = model.generators[m.copies[(i, copy + 1)]]
            name = f"{upper.name}_{lower.name}"
            while name in taken:
                name += "'"
            taken.add(name)
            letter[(i, copy)] = len(gens)
            gens.append(Generator(name, upper.degree, len(gens), Block.FIBER, copy))
            weights.append(1)
            to_copies.append(
                GradedPoly.generator(model.generators, upper.index) - GradedPoly.generator(model.generators, lower.index)
            )
    new_gens = tuple(gens)
    first = {g.name: g.index for g in new_gens}
    inverse: list[GradedPoly] = []
    for g in model.generators:
        if g.block == Block.BASE or g.copy in (None, 1):
            inverse.append(GradedPoly.generator(new_gens, first[g.name]))
            continue
        i = _original_index(m.copies, g.index)
        image = GradedPoly.generator(new_gens, first[model.generators[m.copies[(i, 1)]].name])
        for copy in range(1, g.copy or 1):
            image = image - GradedPoly.generator(new_gens, letter[(i, copy)])
        inverse.append(image)
    differential = tuple(
        substitute(model.d(to_copies[g.index]), inverse, new_gens) for g in new_gens
    )
    presentation = validate(
        CdgaPresentation(new_gens, differential, truncated_above=model.truncated_above, name=f"{model.name}_diff")
    ).presentation
    forward = validate_morphism(CdgaMorphism(presentation, model, tuple(to_copies), "to_copies"))
    backward = validate_morphism(CdgaMorphism(model, presentation, tuple(inverse), "to_differences"))
    return DifferenceCoordinates(presentation, forward, backward, tuple(weights))


@dataclass(frozen=True)
class GradedIdeal:
    """
    Degreewise subspaces of an ideal of a presentation, through ``window``.

    ``generators`` lists ideal generators when they are known; ``power`` is
    the exponent k when the ideal is a power I^k.
    """

    gens: GeneratorTuple
    power: int
    window: int
    slices: Mapping[int, SubspaceBasis]
    generators: tuple[GradedPoly, ...] = ()

    def slice(self, n: int) -> SubspaceBasis:
        if n > self.window:
            raise WindowTooSmall(f"Degree {n} lies outside the computed window 0..{self.window}")
        if n < 0:
            return SubspaceBasis.zero(0)
        return self.slices.get(n) or SubspaceBasis.zero(len(monomial_basis(self.gens, n)))

    def dims(self) -> dict[int, int]:
        return {n: self.slice(n).dim for n in range(self.window + 1)}

    def contains(self, element: GradedPoly) -> bool:
        if element.is_zero():
            return True
        n = element.degree
        if n is None:
            raise DimensionMismatch("Ideal membership needs a homogeneous element")
        return self.slice(n).contains(coordinates(element, n))

    def is_zero(self) -> bool:
        return all(s.is_zero() for s in self.slices.values())

    def polys(self, n: int) -> list[GradedPoly]:
        return [from_coordinates(self.gens, n, v) for v in self.slice(n).basis]


def kernel_ideal(m: RFoldModel, window: int) -> GradedIdeal:
    """Ker(id (x) mu_r) degreewise through ``window``, from the diagonal's coordinate matrices."""
    slices = {}
    for n in range(window + 1):
        if m.presentation.slice_dim(n):
            slices[n] = kernel(morphism_matrix(m.diagonal, n))
    logger.debug("Kernel ideal of %r: dims %s", m, {n: s.dim for n, s in slices.items()})
    return GradedIdeal(m.presentation.generators, 1, window, slices, m.differences)


def ideal_generated_by(gens: GeneratorTuple, elements: Sequence[GradedPoly], window: int) -> GradedIdeal:
    """The ideal generated by homogeneous elements, degreewise through ``window``."""
    spans: dict[int, list[Vector]] = {}
    for element in elements:
        if element.is_zero():
            continue
        degree = element.degree
        if degree is None:
            raise DimensionMismatch("Ideal generators must be homogeneous")
        for n in range(degree, window + 1):
            for monomial in monomial_basis(gens, n - degree):
                product = mul(element, GradedPoly.monomial(gens, monomial))
                if not product.is_zero():
                    spans.setdefault(n, []).append(coordinates(product, n))
    slices = {n: SubspaceBasis.span(vectors, len(monomial_basis(gens, n))) for n, vectors in spans.items()}
    return GradedIdeal(gens, 1, window, slices, tuple(e for e in elements if not e.is_zero()))


def ideal_power(i: GradedIdeal, k: int, window: Optional[int] = None) -> GradedIdeal:
    """
    The k-th power of ``i`` degreewise.

    Built as I^k = I^{k-1} . D when ideal generators D are attached, and
    from pairwise products of the stored bases otherwise.

    Raises:
        WindowTooSmall: If ``window`` exceeds the window ``i`` was computed for
    """
    if k < 1:
        raise ValueError("Ideal powers start at k = 1")
    window = i.window if window is None else window
    if window > i.window:
        raise WindowTooSmall(f"Requested window {window} exceeds the computed window {i.window}")
    current = GradedIdeal(i.gens, i.power, window, {n: s for n, s in i.slices.items() if n <= window}, i.generators)
    for step in range(2, k + 1):
        spans: dict[int, list[Vector]] = {}
        if i.generators:
            factors: list[tuple[int, GradedPoly]] = [(g.degree or 0, g) for g in i.generators]
        else:
            factors = [(n, p) for n in range(window + 1) for p in i.polys(n)]
        for degree, factor in factors:
            for m in range(window + 1 - degree):
                for left in current.polys(m):
                    product = mul(left, factor)
                    if not product.is_zero():
                        spans.setdefault(m + degree, []).append(coordinates(product, m + degree))
        slices = {}
        for n, vectors in spans.items():
            span = SubspaceBasis.span(vectors, len(monomial_basis(i.gens, n)))
            if not span.is_zero():
                slices[n] = span
        if not slices:
            return GradedIdeal(i.gens, i.power * k, window, {}, i.generators)
        current = GradedIdeal(i.gens, i.power * step, window, slices, i.generators)
    return current


def rfold_vanishing_certificates(m: RFoldModel) -> list[VanishingCertificate]:
    """
    Degrees above which H of the r-fold model vanishes, with their sources.

    H(X^r_B) vanishes above dim B + r dim F; a finite untruncated model also
    certifies its own top degree; a ``cohomology_vanishes_above`` assertion
    is taken as stated.
    """
    certificates = []
    f = m.fibration
    model = m.presentation
    if model.is_finite and model.truncated_above is None:
        certificates.append(VanishingCertificate(model.algebra_top or 0, "finite_algebra"))
    base = base_dimension(f)
    fiber = fiber_dimension(f)
    if base is not None and fiber is not None:
        unconditional = not base.conditional and not fiber.conditional
        certificates.append(
            VanishingCertificate(
                base.degree + m.r * fiber.degree,
                "finite_algebra" if unconditional else f"formal_dimension({base.source}, {fiber.source})",
                base.assertions + fiber.assertions,
            )
        )
    assertions: AssertionSet = f.assertions
    if assertions.has("cohomology_vanishes_above"):
        assert assertions.vanishes_above is not None
        certificates.append(
            VanishingCertificate(
                assertions.vanishes_above,
                "cohomology_vanishes_above",
                assertions.describe("cohomology_vanishes_above"),
            )
        )
    return certificates


def best_certificate(certificates: Sequence[VanishingCertificate], cutoff: int) -> Optional[VanishingCertificate]:
    """Prefer an unconditional certificate within the cutoff, then the lowest conditional one."""
    within = [c for c in certificates if c.degree <= cutoff]
    unconditional = [c for c in within if not c.conditional]
    if unconditional:
        return min(unconditional, key=lambda c: c.degree)
    if within:
        return min(within, key=lambda c: c.degree)
    return None

