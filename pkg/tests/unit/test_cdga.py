"""
Unit tests for the CDGA engine.

This module tests validation, cohomology against a dense rank oracle,
morphisms and induced maps, cohomology products and cup-length.
"""

import itertools
import random

import pytest
from sympy import Matrix, Rational

from rational_ptc.cdga import (
    CdgaPresentation,
    betti_numbers,
    class_of,
    class_product,
    cohomology,
    collapse,
    compose,
    cuplength,
    differential_matrix,
    elliptic_formal_dimension,
    identity_morphism,
    induced_map,
    make_morphism,
    top_cohomology_degree,
    validate,
    vanishing_certificate,
)
from rational_ptc.exceptions import (
    DegreeMismatch,
    LeibnizSquareNonzero,
    NotACocycle,
    NotValidated,
    ValidationError,
)
from rational_ptc.interfaces import AssertionSet, Status


def ky() -> CdgaPresentation:
    return validate(CdgaPresentation.build([("x", 3), ("y", 3), ("z", 5)], {"z": "x*y"}, name="ky")).presentation


def s4() -> CdgaPresentation:
    return validate(CdgaPresentation.build([("x", 4), ("z", 7)], {"z": "x^2"}, name="s4")).presentation


def dense_rank(matrix) -> int:
    rows = [[Rational(int(v.numerator), int(v.denominator)) for v in row] for row in matrix.to_dense()]
    if not rows or not rows[0]:
        return 0
    return Matrix(rows).rank()


def random_odd_model(rng: random.Random) -> tuple[list[tuple[str, int]], dict[int, list[tuple[int, int, int]]]]:
    """
    Two to four closed odd generators plus up to two more killing products of them.

    Products of cocycles are cocycles, so every such differential squares to zero.
    """
    names = "abcfgh"
    closed = [rng.choice([1, 3, 5]) for _ in range(rng.randint(2, 4))]
    gens = [(names[i], degree) for i, degree in enumerate(closed)]
    images: dict[int, list[tuple[int, int, int]]] = {}
    for _ in range(rng.randint(0, min(2, 6 - len(closed)))):
        p, q = sorted(rng.sample(range(len(closed)), 2))
        degree = closed[p] + closed[q] - 1
        terms = []
        for i in range(len(closed)):
            for j in range(i + 1, len(closed)):
                if closed[i] + closed[j] == degree + 1:
                    c = rng.choice([-2, -1, 1, 2, 3]) if (i, j) == (p, q) else rng.randint(-2, 2)
                    if c:
                        terms.append((c, i, j))
        images[len(gens)] = terms
        gens.append((names[len(gens)], degree))
    return gens, images


def exterior_betti(degrees: list[int], images: dict[int, list[tuple[int, int, int]]]) -> list[int]:
    """Betti numbers of an exterior algebra on odd generators by dense elimination."""
    top = sum(degrees)
    slices: dict[int, list[tuple[int, ...]]] = {n: [] for n in range(top + 2)}
    for size in range(len(degrees) + 1):
        for subset in itertools.combinations(range(len(degrees)), size):
            slices[sum(degrees[i] for i in subset)].append(subset)

    def d(monomial: tuple[int, ...]) -> dict[tuple[int, ...], int]:
        result: dict[tuple[int, ...], int] = {}
        for position, gen in enumerate(monomial):
            for c, p, q in images.get(gen, []):
                factors = list(monomial[:position]) + [p, q] + list(monomial[position + 1 :])
                if len(set(factors)) < len(factors):
                    continue
                inversions = sum(1 for s in range(len(factors)) for t in range(s + 1, len(factors)) if factors[s] > factors[t])
                key = tuple(sorted(factors))
                result[key] = result.get(key, 0) + (-1) ** (position + inversions) * c
        return result

    def rank(n: int) -> int:
        if n < 0 or not slices[n] or not slices[n + 1]:
            return 0
        index = {m: i for i, m in enumerate(slices[n + 1])}
        columns = [[0] * len(slices[n + 1]) for _ in slices[n]]
        for j, monomial in enumerate(slices[n]):
            for key, value in d(monomial).items():
                columns[j][index[key]] += value
        return Matrix(columns).rank()

    return [len(slices[n]) - rank(n) - rank(n - 1) for n in range(top + 1)]


class TestValidation:
    """Test the CDGA axioms."""

    def test_valid_presentation(self):
        """Test validating the nonformal model Λ(x, y, z; dz = xy)."""
        report = validate(CdgaPresentation.build([("x", 3), ("y", 3), ("z", 5)], {"z": "x*y"}))
        assert report.presentation.validated
        assert report.checked == ("x", "y", "z")
        assert report.finite

    def test_wrong_degree(self):
        """Test a differential of the wrong degree."""
        a = CdgaPresentation.build([("x", 3), ("z", 5)], {"z": "x"})
        with pytest.raises(DegreeMismatch) as excinfo:
            validate(a, {"z": 4})
        assert excinfo.value.generator == "z"
        assert excinfo.value.line == 4

    def test_square_not_zero(self):
        """Test that d(d(w)) = x^3 is detected."""
        a = CdgaPresentation.build([("x", 2), ("y", 3), ("w", 4)], {"y": "x^2", "w": "x*y"})
        with pytest.raises(LeibnizSquareNonzero) as excinfo:
            validate(a)
        assert excinfo.value.generator == "w"
        assert excinfo.value.residue == "x^3"

    def test_unknown_generator_in_differential(self):
        """Test a differential for an undeclared generator."""
        with pytest.raises(ValidationError):
            CdgaPresentation.build([("x", 3)], {"q": "x"})

    def test_unvalidated_presentation(self):
        """Test that slices need a validated presentation."""
        a = CdgaPresentation.build([("x", 3)])
        with pytest.raises(NotValidated):
            differential_matrix(a, 3)


class TestCohomology:
    """Test degreewise cohomology."""

    def test_betti_numbers_of_nonformal_model(self):
        """Test H of Λ(x, y, z; dz = xy): classes x, y, xz, yz, xyz."""
        assert betti_numbers(ky(), 11) == [1, 0, 0, 2, 0, 0, 0, 0, 2, 0, 0, 1]

    def test_euler_characteristic(self):
        """Test that cochains and cohomology have the same Euler characteristic."""
        a = ky()
        chain = sum((-1) ** n * a.slice_dim(n) for n in range(12))
        betti = betti_numbers(a, 11)
        assert chain == sum((-1) ** n * b for n, b in enumerate(betti)) == 0

    def test_even_sphere(self):
        """Test H of Λ(x, z; dz = x^2) is that of S^4."""
        betti = betti_numbers(s4(), 20)
        assert betti[0] == betti[4] == 1
        assert sum(betti) == 2

    def test_dimensions_match_dense_rank_oracle(self):
        """Test dim H^n = dim A^n - rank d_n - rank d_(n-1) on random presentations."""
        rng = random.Random(11)
        for _ in range(6):
            c1, c2, c3, c4 = (rng.randint(1, 3) for _ in range(4))
            a = validate(
                CdgaPresentation.build(
                    [("a", 2), ("b", 2), ("u", 3), ("w", 3)],
                    {"u": f"{c1}*a^2 + {c2}*a*b", "w": f"{c3}*b^2 - {c4}*a*b"},
                )
            ).presentation
            for n in range(1, 12):
                expected = a.slice_dim(n) - dense_rank(differential_matrix(a, n)) - dense_rank(differential_matrix(a, n - 1))
                assert cohomology(a, n).dim == expected

    def test_all_odd_models_match_exterior_oracle(self):
        """Test Betti numbers and the Euler identity on 50 random all-odd presentations."""
        rng = random.Random(2024)
        for _ in range(50):
            gens, images = random_odd_model(rng)
            differential = {
                gens[k][0]: " ".join(
                    f"{'-' if c < 0 else '+'} {abs(c)}*{gens[i][0]}*{gens[j][0]}" for c, i, j in terms
                ).lstrip("+ ")
                for k, terms in images.items()
            }
            a = validate(CdgaPresentation.build(gens, differential)).presentation
            degrees = [degree for _, degree in gens]
            top = sum(degrees)
            expected = exterior_betti(degrees, images)
            assert betti_numbers(a, top) == expected
            chain = sum((-1) ** n * a.slice_dim(n) for n in range(top + 1))
            assert chain == sum((-1) ** n * b for n, b in enumerate(expected))

    def test_class_coordinates_require_cocycle(self):
        """Test that z is not a cocycle."""
        a = ky()
        with pytest.raises(NotACocycle):
            class_of(a, a.poly("z"))

    def test_exact_elements(self):
        """Test that xy is exact and x is not."""
        a = ky()
        assert cohomology(a, 6).is_exact(a.poly("x*y"))
        assert not cohomology(a, 3).is_exact(a.poly("x"))

    def test_top_degree(self):
        """Test the top cohomology degree of a finite algebra."""
        assert top_cohomology_degree(ky()) == 11
        assert top_cohomology_degree(s4()) is None


class TestProductsAndCupLength:
    """Test cohomology products and cup-length."""

    def test_class_product(self):
        """Test [x][yz] = [xyz] is nonzero."""
        a = ky()
        product = class_product(a, [class_of(a, a.poly("x")), class_of(a, a.poly("y*z"))])
        assert product.degree == 11
        assert not product.is_zero()

    def test_product_ignores_coboundaries(self):
        """Test class products do not depend on representatives in Λ(a, c, u; du = ac)."""
        a = validate(CdgaPresentation.build([("a", 2), ("c", 2), ("u", 3)], {"u": "a*c"})).presentation
        rng = random.Random(3)
        boundary = a.d(a.poly("u"))
        nonzero = 0
        for _ in range(10):
            p, q = (rng.randint(-3, 3) * a.poly("a^2") + rng.randint(-3, 3) * a.poly("c^2") for _ in range(2))
            if p.is_zero() or q.is_zero():
                continue
            shifted_p = p + rng.randint(-5, 5) * boundary
            shifted_q = q + rng.randint(-5, 5) * boundary
            expected = class_product(a, [class_of(a, p), class_of(a, q)])
            assert class_of(a, shifted_p * shifted_q) == expected
            assert class_of(a, p * q) == expected
            nonzero += not expected.is_zero()
        assert nonzero > 0

    def test_product_of_degree_three_classes_vanishes(self):
        """Test [x][y] = 0 because xy = dz."""
        a = ky()
        assert class_product(a, [class_of(a, a.poly("x")), class_of(a, a.poly("y"))]).is_zero()

    def test_cuplength_of_nonformal_model(self):
        """Test cupl(Λ(x, y, z; dz = xy)) = 2, certified by the finite algebra."""
        value = cuplength(ky(), 20)
        assert value.value == 2
        assert value.status == Status.EXACT

    def test_cuplength_below_certificate(self):
        """Test that a window below the top degree only gives a lower bound."""
        value = cuplength(ky(), 10)
        assert value.value == 1
        assert value.status == Status.AT_LEAST

    def test_cuplength_with_vanishing_assertion(self):
        """Test cupl(CP^2) = 2 under a vanishing assertion."""
        cp2 = validate(CdgaPresentation.build([("x", 2), ("z", 5)], {"z": "x^3"})).presentation
        assertions = AssertionSet({"cohomology_vanishes_above": "CP^2 has dimension 4"}, 4)
        value = cuplength(cp2, 30, assertions)
        assert value.value == 2
        assert value.status == Status.CONDITIONAL
        assert value.provenance.assertions == ("cohomology_vanishes_above: CP^2 has dimension 4",)


class TestMorphisms:
    """Test morphisms and induced maps."""

    def test_identity_induces_injection(self):
        """Test the identity has zero kernel on cohomology."""
        a = ky()
        assert induced_map(identity_morphism(a), 8).kernel.is_zero()

    def test_morphism_must_commute_with_d(self):
        """Test that x -> x, y -> 0, z -> z does not commute with d."""
        a = ky()
        with pytest.raises(ValidationError, match="does not commute"):
            make_morphism(a, a, {"x": "x", "z": "z"})

    def test_induced_map_kernel(self):
        """Test x -> x, y -> 0, z -> 0 kills the class of y."""
        a = ky()
        phi = make_morphism(a, a, {"x": "x"})
        assert induced_map(phi, 3).kernel.dim == 1

    def test_induced_map_is_functorial(self):
        """Test H(g . f) = H(g) H(f) for two automorphisms of Λ(x, y, z; dz = xy)."""
        a = ky()
        f = make_morphism(a, a, {"x": "x", "y": "2*y", "z": "2*z"}, name="f")
        g = make_morphism(a, a, {"x": "x + y", "y": "y", "z": "z"}, name="g")
        composite = compose(g, f)
        for n in (3, 8, 11):
            expected = induced_map(g, n).matrix @ induced_map(f, n).matrix
            assert induced_map(composite, n).matrix.to_dense() == expected.to_dense()
        assert induced_map(composite, 3).matrix.to_dense() != induced_map(f, 3).matrix.to_dense()


class TestCertificatesAndCollapse:
    """Test vanishing certificates, formal dimensions and quotients."""

    def test_finite_algebra_certificate(self):
        """Test the certificate of a finite untruncated algebra."""
        certificate = vanishing_certificate(ky())
        assert certificate.degree == 11
        assert not certificate.conditional

    def test_declared_top(self):
        """Test a declared top degree."""
        a = CdgaPresentation.build([("x", 4), ("z", 7)], {"z": "x^2"}, declared_top=4)
        certificate = vanishing_certificate(a)
        assert certificate.source == "declared_top"
        assert not certificate.conditional

    def test_no_certificate(self):
        """Test an infinite algebra without declarations."""
        assert vanishing_certificate(s4()) is None

    def test_elliptic_formal_dimension(self):
        """Test the formula on S^4 and CP^2."""
        assert elliptic_formal_dimension(s4().generators) == 4
        cp2 = CdgaPresentation.build([("x", 2), ("z", 5)], {"z": "x^3"})
        assert elliptic_formal_dimension(cp2.generators) == 4

    def test_collapse_quotient(self):
        """Test killing x sets it to zero in dz."""
        a = collapse(ky(), [0])
        assert [g.name for g in a.generators] == ["y", "z"]
        assert a.differential[1].is_zero()

    def test_collapse_strict(self):
        """Test that a strict collapse refuses to drop a letter still in use."""
        with pytest.raises(ValidationError):
            collapse(ky(), [0], strict=True)
