import math
import random

import numpy as np
import pytest

from arakelov.divisors import (ArakelovDivisor, dual_divisor, pic_point,
                               trivial_divisor)
from arakelov.errors import BudgetError, NumericError, ValidationError
from arakelov.field import field_from_descriptor, quadratic_field, rational_field
from arakelov.lattice import DivisorLattice, realize
from oracles import box_vectors, canonical_pair

ZETA5 = {"polynomial": [1, 1, 1, 1, 1], "w": 10, "name": "Q(zeta5)"}
OMEGA = 1.086434811213308014575316121


def random_divisor(fld, rng, spread=1.2):
    coords = [rng.randint(-3, 3) for _ in range(fld.degree)]
    if all(c == 0 for c in coords):
        coords[0] = 1
    ideal = fld.principal_ideal(fld.element(coords))
    xs = tuple(rng.uniform(-spread, spread) for _ in range(fld.r1 + fld.r2))
    return ArakelovDivisor(ideal, xs)


class TestRealize:
    def test_rational_trivial(self):
        lat = realize(pic_point(rational_field(), 0.0))
        assert lat.dimension == 1
        assert abs(lat.basis[0][0] - 1.0) < 1e-15
        assert abs(lat.covolume - 1.0) < 1e-15

    def test_gaussian_covolume(self):
        lat = realize(trivial_divisor(quadratic_field(-1)))
        assert abs(lat.covolume - 2.0) < 1e-12

    def test_family_covolume(self):
        fld = quadratic_field(73)
        for d in (-3.0, 0.0, 2.0):
            for x in (0.0, 1.1, 3.4):
                lat = realize(pic_point(fld, d, x))
                assert abs(lat.covolume - math.sqrt(73) * math.exp(-d)) \
                    <= 1e-10 * lat.covolume

    def test_covolume_identity_random(self):
        rng = random.Random(17)
        for fld in (quadratic_field(-1), quadratic_field(73),
                    field_from_descriptor(ZETA5)):
            for _ in range(6):
                div = random_divisor(fld, rng)
                lat = realize(div)
                from arakelov.divisors import divisor_norm
                expect = math.sqrt(abs(fld.discriminant)) / divisor_norm(div)
                assert abs(lat.covolume - expect) <= 1e-10 * expect

    def test_gram_consistency(self):
        rng = random.Random(23)
        for fld in (quadratic_field(73), field_from_descriptor(ZETA5)):
            div = random_divisor(fld, rng)
            lat = realize(div)
            assert np.allclose(lat.gram, lat.basis @ lat.basis.T, rtol=1e-12)
            assert np.allclose(lat.cholesky @ lat.cholesky.T, lat.gram,
                               rtol=1e-12, atol=1e-300)
            assert lat.covolume > 0

    def test_singular_basis_rejected(self):
        with pytest.raises(NumericError):
            DivisorLattice.from_basis([[1.0, 0.0], [1.0, 1e-9]])


class TestEnumeration:
    def test_z1(self):
        lat = DivisorLattice.from_basis([[1.0]])
        vecs = lat.enumerate_below(4.5)
        assert [(v, q) for v, q in vecs] == [((1,), 1.0), ((2,), 4.0)]

    def test_z2(self):
        lat = DivisorLattice.from_basis([[1.0, 0.0], [0.0, 1.0]])
        vecs = lat.enumerate_below(1.5)
        assert len(vecs) == 2
        assert {canonical_pair(v) for v, _ in vecs} == {(1, 0), (0, 1)}

    def test_073_vector_content(self):
        lat = realize(trivial_divisor(quadratic_field(73)))
        close = lat.enumerate_below(30.0)
        assert {canonical_pair(v) for v, _ in close} == {(1, 0), (2, 0), (3, 0)}
        # (9 + sqrt 73)/2 = 4 + omega has squared length 77
        wide = {canonical_pair(v): q for v, q in lat.enumerate_below(80.0)}
        el = next(k for k in wide if k in ((4, 1), (-4, -1)))
        assert abs(wide[el] - 77.0) < 1e-9

    def test_matches_box_oracle_random(self):
        rng = random.Random(31)
        np_rng = np.random.default_rng(31)
        for trial in range(20):
            n = rng.choice((2, 3, 4))
            while True:
                b = np_rng.uniform(-1.5, 1.5, (n, n))
                if abs(np.linalg.det(b)) > 0.3:
                    break
            lat = DivisorLattice.from_basis(b)
            r_sq = float(np.min(np.diag(lat.gram))) * rng.uniform(1.0, 3.0)
            mine = {}
            for v, q in lat.enumerate_below(r_sq):
                # map to the raw-basis coordinates for oracle comparison
                orig = tuple(int(x) for x in np.asarray(v) @ np.asarray(lat.reduction))
                mine[canonical_pair(orig)] = q
            oracle = box_vectors(b, r_sq)
            assert set(mine) == set(oracle)
            for k, q in mine.items():
                assert abs(q - oracle[k]) < 1e-9 * max(1.0, q)

    def test_matches_box_oracle_divisor_lattices(self):
        rng = random.Random(37)
        for fld in (quadratic_field(-1), quadratic_field(73)):
            for _ in range(3):
                lat = realize(random_divisor(fld, rng, spread=0.8))
                r_sq = lat.shortest_norm_sq() * 4.0
                mine = {canonical_pair(v): q for v, q in lat.enumerate_below(r_sq)}
                oracle = box_vectors(lat.basis, r_sq)
                assert set(mine) == set(oracle)

    def test_lexicographic_order(self):
        lat = realize(trivial_divisor(quadratic_field(-1)))
        vecs = lat.enumerate_below(9.5)
        assert [v for v, _ in vecs] == sorted(v for v, _ in vecs)

    def test_budget_error(self):
        lat = realize(trivial_divisor(field_from_descriptor(ZETA5)))
        with pytest.raises(BudgetError):
            lat.enumerate_below(5000.0, budget=10 ** 4)

    def test_r_sq_must_be_positive(self):
        lat = DivisorLattice.from_basis([[1.0]])
        with pytest.raises(ValidationError):
            lat.enumerate_below(-1.0)


class TestShortestVector:
    def test_zn(self):
        for n in (1, 2, 3, 4):
            lat = DivisorLattice.from_basis(np.eye(n))
            _, lam = lat.shortest_vector()
            assert abs(lam - 1.0) < 1e-12

    def test_073_trivial_metric(self):
        lat = realize(trivial_divisor(quadratic_field(73)))
        coords, lam = lat.shortest_vector()
        assert abs(lam - 2.0) < 1e-12
        assert canonical_pair(coords) == (1, 0)

    def test_unimodular_invariance(self):
        rng = np.random.default_rng(5)
        base = rng.uniform(-1, 1, (3, 3)) + 2 * np.eye(3)
        lam0 = DivisorLattice.from_basis(base).shortest_norm_sq()
        for _ in range(10):
            u = np.eye(3, dtype=int)
            for _ in range(6):
                i, j = rng.integers(0, 3, 2)
                if i != j:
                    u[i] += int(rng.integers(-2, 3)) * u[j]
            lam = DivisorLattice.from_basis(u @ base).shortest_norm_sq()
            assert abs(lam - lam0) <= 1e-10 * lam0

    def test_uniform_metric_shift_scales_minimum(self):
        fld = quadratic_field(73)
        lams = []
        for u in (0.0, 0.5, 1.0):
            div = ArakelovDivisor(fld.ring_of_integers(), (0.7 + u, -0.2 + u))
            lams.append(realize(div).shortest_norm_sq())
        assert lams[0] > lams[1] > lams[2]
        for i, u in enumerate((0.0, 0.5, 1.0)):
            assert abs(lams[i] - lams[0] * math.exp(-2 * u)) <= 1e-9 * lams[i]


class TestThetaSums:
    def test_golden_value(self):
        theta = realize(pic_point(rational_field(), 0.0)).theta_sum(1e-12)
        assert abs(theta.k0 - OMEGA) < 1e-12

    def test_deep_negative_log_space(self):
        theta = realize(pic_point(rational_field(), -3.0)).theta_sum(1e-12)
        expect = math.log(2.0) - math.pi * math.exp(6.0)
        assert abs(theta.log_k0_minus_1 - expect) < 1e-9 * abs(expect)
        assert theta.h0 == 0.0          # underflow is the documented behavior
        assert theta.log_h0 < -500 * math.log(10.0)

    def test_orthogonal_product_structure(self):
        for n in (2, 3):
            lat = DivisorLattice.from_basis(np.eye(n))
            k0 = lat.theta_sum(1e-12).k0
            assert abs(k0 - OMEGA ** n) <= 1e-10 * k0

    def test_block_sum_multiplicativity(self):
        rng = np.random.default_rng(12)
        for _ in range(5):
            b1 = rng.uniform(-1, 1, (2, 2)) + 1.5 * np.eye(2)
            b2 = rng.uniform(-1, 1, (2, 2)) + 1.5 * np.eye(2)
            block = np.block([[b1, np.zeros((2, 2))], [np.zeros((2, 2)), b2]])
            k0_prod = (DivisorLattice.from_basis(b1).theta_sum(1e-12).k0
                       * DivisorLattice.from_basis(b2).theta_sum(1e-12).k0)
            k0_block = DivisorLattice.from_basis(block).theta_sum(1e-12).k0
            assert abs(k0_block - k0_prod) <= 1e-10 * k0_prod

    def test_deterministic_bit_for_bit(self):
        fld = quadratic_field(73)
        div = pic_point(fld, 0.7, 1.3)
        a = realize(div).theta_sum(1e-10)
        b = realize(div).theta_sum(1e-10)
        assert a.log_k0_minus_1 == b.log_k0_minus_1
        assert a.tail_bound == b.tail_bound
        assert a.vectors_counted == b.vectors_counted

    def test_tail_bound_controls_radius_doubling(self):
        rng = random.Random(41)
        for fld in (quadratic_field(-1), quadratic_field(73)):
            for _ in range(3):
                lat = realize(random_divisor(fld, rng, spread=0.7))
                theta = lat.theta_sum(1e-8)
                bigger, _ = lat._log_mass(4.0 * theta.radius_sq, 10 ** 8)
                growth = math.exp(bigger) - math.exp(theta.log_k0_minus_1)
                assert growth <= theta.tail_bound * (1 + 1e-9) + 1e-300

    def test_tail_bound_below_tolerance(self):
        lat = realize(trivial_divisor(quadratic_field(41)))
        for tol in (1e-7, 1e-9, 1e-12):
            theta = lat.theta_sum(tol)
            assert theta.tail_bound <= tol * math.exp(theta.log_k0_minus_1)

    def test_tol_validation(self):
        lat = DivisorLattice.from_basis([[1.0]])
        with pytest.raises(ValidationError):
            lat.theta_sum(1e-3)
        with pytest.raises(ValidationError):
            lat.theta_sum(1e-9, precision="quad")

    def test_extended_precision_agrees(self):
        fld = field_from_descriptor(ZETA5)
        lat = realize(trivial_divisor(fld))
        std = lat.theta_sum(1e-12).log_k0_minus_1
        ext = lat.theta_sum(1e-12, precision="ext").log_k0_minus_1
        assert abs(std - ext) < 1e-12 * abs(std)

    def test_extended_needs_provenance(self):
        lat = DivisorLattice.from_basis([[1.0]])
        with pytest.raises(ValidationError):
            lat.theta_sum(1e-9, precision="ext")


class TestDualsAndPoisson:
    def test_z1_self_dual(self):
        lat = DivisorLattice.from_basis([[1.0]])
        dual = lat.dual_lattice()
        assert abs(dual.covolume - 1.0) < 1e-14

    def test_covolume_product(self):
        rng = np.random.default_rng(7)
        for _ in range(5):
            b = rng.uniform(-2, 2, (3, 3)) + 2 * np.eye(3)
            lat = DivisorLattice.from_basis(b)
            assert abs(lat.covolume * lat.dual_lattice().covolume - 1.0) < 1e-10

    def test_two_path_duality(self):
        for fld in (quadratic_field(-1), quadratic_field(73)):
            div = ArakelovDivisor(
                fld.principal_ideal(fld.element([2, 1])),
                tuple(0.3 for _ in range(fld.r1 + fld.r2)))
            via_divisor = realize(dual_divisor(div)).theta_sum(1e-12).k0
            via_lattice = realize(div).dual_lattice().theta_sum(1e-12).k0
            assert abs(via_divisor - via_lattice) <= 1e-10 * via_divisor

    def test_poisson_identity_random(self):
        rng = random.Random(53)
        fields = [quadratic_field(-1), quadratic_field(73), quadratic_field(-3),
                  field_from_descriptor(ZETA5)]
        for k in range(12):
            fld = fields[k % len(fields)]
            lat = realize(random_divisor(fld, rng))
            k0 = lat.theta_sum(1e-12).k0
            k0_dual = lat.dual_lattice().theta_sum(1e-12).k0
            assert abs(k0 - k0_dual / lat.covolume) <= 1e-10 * k0


class TestHermite:
    def test_zn_is_one(self):
        for n in (1, 2, 3):
            lat = DivisorLattice.from_basis(np.eye(n))
            assert abs(lat.hermite_constant() - 1.0) < 1e-12

    def test_073(self):
        lat = realize(trivial_divisor(quadratic_field(73)))
        assert abs(lat.hermite_constant() - 2.0 / math.sqrt(73)) < 1e-12
