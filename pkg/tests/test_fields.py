import math
import random
from fractions import Fraction

import pytest

from arakelov.errors import ValidationError
from arakelov.field import (FractionalIdeal, dedekind_coefficients,
                            field_from_descriptor, ideal_contains_one,
                            ideal_inverse, ideal_mul, quadratic_field,
                            rational_field, trace_dual)
from oracles import gaussian_ideal_counts, poly_discriminant, real_quadratic_ideal_counts

ZETA5 = {"polynomial": [1, 1, 1, 1, 1], "w": 10, "name": "Q(zeta5)"}
ZETA7PLUS = {"polynomial": [-1, -2, 1, 1], "w": 2, "name": "Q(zeta7+)"}


class TestQuadraticConstruction:
    def test_disc_73(self):
        f = quadratic_field(73)
        assert f.discriminant == 73
        assert (f.r1, f.r2) == (2, 0)
        assert f.basis_power == ((Fraction(1), Fraction(0)),
                                 (Fraction(0), Fraction(1)))
        reg = f.regulator()
        assert abs(reg - math.log(1068 + 125 * math.sqrt(73))) < 1e-12

    def test_reg_41(self):
        f = quadratic_field(41)
        assert f.discriminant == 41
        assert abs(f.regulator() - 4.159127134626180) < 1e-12

    def test_gaussian(self):
        f = quadratic_field(-1)
        assert f.discriminant == -4
        assert (f.r1, f.r2) == (0, 1)
        assert f.roots_of_unity == 4
        assert f.class_number == 1

    def test_eisenstein(self):
        f = quadratic_field(-3)
        assert f.discriminant == -3
        assert f.roots_of_unity == 6

    def test_disc_convention(self):
        assert quadratic_field(2).discriminant == 8
        assert quadratic_field(5).discriminant == 5
        assert quadratic_field(-5).discriminant == -20

    def test_rejects_non_squarefree(self):
        with pytest.raises(ValidationError):
            quadratic_field(12)
        with pytest.raises(ValidationError):
            quadratic_field(1)
        with pytest.raises(ValidationError):
            quadratic_field(0)

    def test_class_numbers(self):
        assert quadratic_field(-5).class_number == 2
        assert quadratic_field(-23).class_number == 3
        assert quadratic_field(10).class_number == 2
        assert quadratic_field(79).class_number == 3
        assert quadratic_field(2).class_number == 1

    def test_trace_determinant_is_discriminant(self):
        from arakelov import exact
        for m in (73, 41, -1, -3, 2, 5, -5):
            f = quadratic_field(m)
            assert exact.det(f.trace_matrix) == f.discriminant


class TestUnits:
    def test_unit_norm_is_plus_minus_one(self):
        for m in (2, 5, 41, 73, 10, 79):
            f = quadratic_field(m)
            assert abs(f.unit_data.unit.norm()) == 1

    def test_regulator_matches_embedding(self):
        # read the regulator off the growing embedding; the shrinking one is
        # a float cancellation of large coordinates and only good to ~1e-10
        for m in (2, 5, 41, 73):
            f = quadratic_field(m)
            eps = f.unit_data.unit
            grow = max(math.log(abs(z)) for z in eps.embeddings())
            assert abs(grow - f.regulator()) < 1e-12


class TestDescriptorFields:
    def test_zeta5(self):
        f = field_from_descriptor(ZETA5)
        assert f.discriminant == 125
        assert (f.r1, f.r2) == (0, 2)
        assert poly_discriminant([1, 1, 1, 1, 1]) == 125

    def test_zeta7_plus(self):
        f = field_from_descriptor(ZETA7PLUS)
        assert f.discriminant == 49
        assert (f.r1, f.r2) == (3, 0)
        assert poly_discriminant([-1, -2, 1, 1]) == 49

    def test_x2_plus_1_matches_quadratic(self):
        f = field_from_descriptor({"polynomial": [1, 0, 1]})
        g = quadratic_field(-1)
        assert f.discriminant == g.discriminant
        assert (f.r1, f.r2) == (g.r1, g.r2)
        assert f.roots_of_unity == g.roots_of_unity

    def test_rejects_non_monic(self):
        with pytest.raises(ValidationError):
            field_from_descriptor({"polynomial": [1, 0, 2]})

    def test_rejects_reducible(self):
        with pytest.raises(ValidationError):
            field_from_descriptor({"polynomial": [-1, 0, 1]})   # x^2 - 1
        with pytest.raises(ValidationError):
            field_from_descriptor({"polynomial": [1, 2, 2, 2, 1], "w": 2})

    def test_requires_w_beyond_degree_two(self):
        with pytest.raises(ValidationError):
            field_from_descriptor({"polynomial": [-1, -2, 1, 1]})

    def test_integral_basis_strings(self):
        # Q(sqrt 5) presented on the power basis of x^2 - 5 with basis
        # {1, (1+x)/2}: the discriminant must come out 5, not 20
        f = field_from_descriptor({
            "polynomial": [-5, 0, 1],
            "integral_basis": ["1", "1/2 + 1/2*x"],
        })
        assert f.discriminant == 5

    def test_root_residuals(self):
        from arakelov.exact import poly_eval
        for descr in (ZETA5, ZETA7PLUS):
            f = field_from_descriptor(descr)
            p = f.defining_polynomial
            for z in f.embeddings:
                assert abs(poly_eval(p, complex(z))) < 1e-12 * (1 + abs(z)) ** f.degree


class TestElements:
    def test_inverse_and_norm(self):
        f = quadratic_field(73)
        el = f.element([4, 1])               # (9 + sqrt 73)/2
        assert el.norm() == 2
        assert el.trace() == 9
        assert (el * el.inverse()).coords == f.one_coords

    def test_embedding_consistency_with_norm(self):
        rng = random.Random(9)
        for fld in (quadratic_field(73), quadratic_field(-1),
                    field_from_descriptor(ZETA5)):
            for _ in range(10):
                coords = [rng.randint(-4, 4) for _ in range(fld.degree)]
                if all(c == 0 for c in coords):
                    coords[0] = 1
                el = fld.element(coords)
                prod = 1.0
                for i, z in enumerate(el.embeddings()):
                    mult = 1 if i < fld.r1 else 2
                    prod *= abs(z) ** mult
                assert abs(prod - abs(el.norm())) <= 1e-10 * max(1.0, prod)

    def test_mixed_field_rejected(self):
        f, g = quadratic_field(73), quadratic_field(41)
        with pytest.raises(ValidationError):
            f.element([1, 0]) + g.element([1, 0])


class TestIdeals:
    def test_identity_ideal(self):
        f = quadratic_field(73)
        a = f.principal_ideal(f.element([4, 1]))
        assert ideal_mul(a, f.ring_of_integers()) == a

    def test_gaussian_product(self):
        f = quadratic_field(-1)
        a = f.principal_ideal(f.element([1, 1]))
        b = f.principal_ideal(f.element([1, -1]))
        prod = ideal_mul(a, b)
        two = f.principal_ideal(f.element([2, 0]))
        assert prod == two
        assert prod.norm == 4

    def test_norm_multiplicativity_random(self):
        rng = random.Random(4)
        for fld in (quadratic_field(-1), quadratic_field(73),
                    field_from_descriptor(ZETA5)):
            for _ in range(8):
                c1 = [rng.randint(-3, 3) for _ in range(fld.degree)]
                c2 = [rng.randint(-3, 3) for _ in range(fld.degree)]
                if all(c == 0 for c in c1) or all(c == 0 for c in c2):
                    continue
                a = fld.principal_ideal(fld.element(c1))
                b = fld.principal_ideal(fld.element(c2))
                assert ideal_mul(a, b).norm == a.norm * b.norm
                assert a.norm == abs(fld.element(c1).norm())

    def test_mixed_fields_rejected(self):
        with pytest.raises(ValidationError):
            ideal_mul(quadratic_field(73).ring_of_integers(),
                      quadratic_field(41).ring_of_integers())

    def test_contains_one(self):
        q = rational_field()
        assert ideal_contains_one(q.ring_of_integers())
        half = FractionalIdeal(q, [[Fraction(1, 2)]])
        assert ideal_contains_one(half)
        two = FractionalIdeal(q, [[Fraction(2)]])
        assert not ideal_contains_one(two)

    def test_canonical_form_unique(self):
        f = quadratic_field(-1)
        a = f.principal_ideal(f.element([1, 1]))
        rows = list(a.basis_matrix)
        b = FractionalIdeal(f, [rows[1], rows[0],
                                [x + y for x, y in zip(rows[0], rows[1])]])
        assert a == b and a.basis_matrix == b.basis_matrix

    def test_ideal_inverse(self):
        rng = random.Random(6)
        for fld in (quadratic_field(-1), quadratic_field(73)):
            for _ in range(5):
                c = [rng.randint(-3, 3) for _ in range(fld.degree)]
                if all(x == 0 for x in c):
                    continue
                a = fld.principal_ideal(fld.element(c))
                assert ideal_mul(a, ideal_inverse(a)) == fld.ring_of_integers()


class TestCodifferent:
    def test_rational_field(self):
        q = rational_field()
        cod = q.codifferent()
        assert cod == q.ring_of_integers()
        assert cod.norm == 1

    def test_gaussian(self):
        f = quadratic_field(-1)
        cod = f.codifferent()
        assert cod.basis_matrix == ((Fraction(1, 2), Fraction(0)),
                                    (Fraction(0), Fraction(1, 2)))
        assert cod.norm == Fraction(1, 4)
        # the different is (2)
        assert ideal_inverse(cod) == f.principal_ideal(f.element([2, 0]))

    def test_norm_is_inverse_discriminant(self):
        for build in (lambda: quadratic_field(73), lambda: quadratic_field(-3),
                      lambda: field_from_descriptor(ZETA5)):
            f = build()
            assert f.codifferent().norm == Fraction(1, abs(f.discriminant))

    def test_module_property(self):
        # b_i * codifferent stays inside the codifferent
        for f in (quadratic_field(73), field_from_descriptor(ZETA7PLUS)):
            cod = f.codifferent()
            for i in range(f.degree):
                basis_el = f.element([int(j == i) for j in range(f.degree)])
                for row in cod.basis_matrix:
                    prod = basis_el * f.element(row)
                    assert cod.contains(prod)

    def test_trace_dual_involution(self):
        f = quadratic_field(73)
        a = f.principal_ideal(f.element([4, 1]))
        assert trace_dual(trace_dual(a)) == a


class TestDedekindCoefficients:
    def test_rationals(self):
        assert dedekind_coefficients(rational_field(), 5) == [1, 1, 1, 1, 1]

    def test_gaussian_matches_spec_example(self):
        assert dedekind_coefficients(quadratic_field(-1), 5) == [1, 1, 0, 1, 2]

    def test_gaussian_against_brute_force(self):
        limit = 500
        assert dedekind_coefficients(quadratic_field(-1), limit) == \
            gaussian_ideal_counts(limit)

    def test_73_against_unit_cone_count(self):
        f = quadratic_field(73)
        limit = 300
        eps = 1068 + 125 * math.sqrt(73)
        assert dedekind_coefficients(f, limit) == \
            real_quadratic_ideal_counts(73, limit, eps)

    def test_73_split_prime(self):
        assert dedekind_coefficients(quadratic_field(73), 2)[1] == 2

    def test_degree_guard(self):
        with pytest.raises(ValidationError):
            dedekind_coefficients(field_from_descriptor(ZETA5), 5)

    def test_descriptor_supplied_coefficients(self):
        descr = dict(ZETA5)
        descr["dedekind_coefficients"] = [1, 0, 0, 0, 1, 0]
        f = field_from_descriptor(descr)
        assert dedekind_coefficients(f, 5) == [1, 0, 0, 0, 1]
        with pytest.raises(ValidationError):
            dedekind_coefficients(f, 10)
