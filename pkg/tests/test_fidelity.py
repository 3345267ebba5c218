import numpy as np
import pytest

from gqfi.errors import CutoffTooSmallError
from gqfi.fidelity import (
    bures_distance,
    fidelity,
    fidelity_one_mode,
    fidelity_two_mode,
    fock_fidelity_oracle,
    invariants,
)
from gqfi.gaussian_core import (
    apply_symplectic,
    k_matrix,
    one_mode_squeezed_thermal,
    two_mode_squeezed_thermal,
    vacuum_state,
)

from conftest import product_two_mode, random_mixed_state, random_symplectic


class TestInvariants:
    def test_vacuum_pair_one_mode(self):
        v = vacuum_state(1)
        inv = invariants(v, v)
        # independent evaluation of the defining determinants
        assert np.isclose(inv.delta, np.linalg.det(2 * np.eye(2)).real)
        assert inv.delta == pytest.approx(4.0)
        assert inv.gamma == pytest.approx(4.0)
        assert inv.lambda_ == pytest.approx(0.0, abs=1e-12)

    def test_identical_thermal_lambda(self):
        nu = 3.0
        s = one_mode_squeezed_thermal(nu, 0.0)
        inv = invariants(s, s)
        expected = np.linalg.det(s.sigma + k_matrix(1)).real ** 2
        assert np.isclose(inv.lambda_, expected)
        assert np.isclose(inv.lambda_, (nu**2 - 1) ** 2)

    def test_vacuum_pair_two_modes(self):
        v = vacuum_state(2)
        inv = invariants(v, v)
        assert inv.delta == pytest.approx(16.0)
        assert inv.lambda_ == pytest.approx(0.0, abs=1e-12)

    def test_mode_count_mismatch(self):
        with pytest.raises(ValueError):
            invariants(vacuum_state(1), vacuum_state(2))


class TestOneModeFidelity:
    def test_self_fidelity_vacuum(self):
        v = vacuum_state(1)
        assert fidelity_one_mode(v, v) == pytest.approx(1.0)

    def test_self_fidelity_thermal(self):
        s = one_mode_squeezed_thermal(3.0, 0.0)
        inv = invariants(s, s)
        # for identical states the denominator must collapse to 2
        assert np.sqrt(inv.delta + inv.lambda_) - np.sqrt(inv.lambda_) == pytest.approx(2.0)
        assert fidelity_one_mode(s, s) == pytest.approx(1.0)

    def test_vacuum_vs_thermal_matches_fock_oracle(self):
        v = vacuum_state(1)
        t = one_mode_squeezed_thermal(2.0, 0.0)
        f = fidelity_one_mode(v, t)
        assert abs(f - fock_fidelity_oracle(v, t)) < 1e-6
        # overlap of the vacuum with a thermal state is 2 / (nu + 1)
        assert f == pytest.approx(2.0 / 3.0)

    def test_displaced_pair(self):
        v = vacuum_state(1)
        d = np.array([0.5 + 0.1j, 0.5 - 0.1j])
        shifted = apply_symplectic(v, np.eye(2), b=d)
        f = fidelity_one_mode(v, shifted)
        # overlap of the vacuum with a coherent state: F = exp(-|alpha|^2)
        expected = np.exp(-abs(d[0]) ** 2)
        assert 0 < f < 1
        assert f == pytest.approx(expected, rel=1e-10)


class TestTwoModeFidelity:
    def test_self_fidelity_vacuum(self):
        v = vacuum_state(2)
        assert fidelity_two_mode(v, v) == pytest.approx(1.0)

    def test_self_fidelity_squeezed_thermal(self):
        s = two_mode_squeezed_thermal(2.0, 6.0, 0.3)
        assert fidelity_two_mode(s, s) == pytest.approx(1.0)

    def test_product_factorization(self):
        a1 = one_mode_squeezed_thermal(2.0, 0.0)
        a2 = one_mode_squeezed_thermal(2.0, 0.0)
        b1 = one_mode_squeezed_thermal(2.1, 0.0)
        b2 = one_mode_squeezed_thermal(2.0, 0.0)
        f2 = fidelity_two_mode(product_two_mode(a1, a2), product_two_mode(b1, b2))
        f1f1 = fidelity_one_mode(a1, b1) * fidelity_one_mode(a2, b2)
        assert abs(f2 - f1f1) < 1e-9

    def test_product_factorization_random(self, rng):
        for _ in range(10):
            a1, a2 = random_mixed_state(1, rng), random_mixed_state(1, rng)
            b1, b2 = random_mixed_state(1, rng), random_mixed_state(1, rng)
            f2 = fidelity_two_mode(product_two_mode(a1, a2), product_two_mode(b1, b2))
            f1f1 = fidelity_one_mode(a1, b1) * fidelity_one_mode(a2, b2)
            assert abs(f2 - f1f1) < 1e-9


class TestFidelityProperties:
    def test_symmetry(self, rng):
        for n in (1, 2):
            for _ in range(25):
                s1, s2 = random_mixed_state(n, rng), random_mixed_state(n, rng)
                assert abs(fidelity(s1, s2) - fidelity(s2, s1)) < 1e-10

    def test_bounds(self, rng):
        for n in (1, 2):
            for _ in range(25):
                s1, s2 = random_mixed_state(n, rng), random_mixed_state(n, rng)
                f = fidelity(s1, s2)
                assert -1e-10 <= f <= 1.0 + 1e-10

    def test_unitary_invariance(self, rng):
        for n in (1, 2):
            for _ in range(15):
                s1, s2 = random_mixed_state(n, rng), random_mixed_state(n, rng)
                u = random_symplectic(n, rng)
                f = fidelity(s1, s2)
                fu = fidelity(apply_symplectic(s1, u), apply_symplectic(s2, u))
                assert abs(f - fu) < 1e-9


class TestBuresDistance:
    def test_identical_states(self):
        # sqrt(1 - F) amplifies determinant noise to ~1e-8
        s = one_mode_squeezed_thermal(2.0, 0.1)
        assert bures_distance(s, s) == pytest.approx(0.0, abs=1e-7)

    def test_quarter_fidelity(self):
        # vacuum vs thermal nu = 7 has F = 2/8 = 1/4, so d_B = sqrt(2 (1 - 1/2)) = 1
        v, t = vacuum_state(1), one_mode_squeezed_thermal(7.0, 0.0)
        assert fidelity(v, t) == pytest.approx(0.25)
        assert bures_distance(v, t) == pytest.approx(1.0)

    def test_consistency_with_fidelity(self):
        v, t = vacuum_state(1), one_mode_squeezed_thermal(2.0, 0.0)
        f = fidelity(v, t)
        assert bures_distance(v, t) == pytest.approx(np.sqrt(2 * (1 - np.sqrt(f))))


class TestFockOracle:
    def test_identical_thermal(self):
        s = one_mode_squeezed_thermal(2.0, 0.0)
        assert abs(fock_fidelity_oracle(s, s) - 1.0) < 1e-8

    def test_thermal_pair(self):
        s1 = one_mode_squeezed_thermal(1.5, 0.0)
        s2 = one_mode_squeezed_thermal(2.5, 0.0)
        assert abs(fock_fidelity_oracle(s1, s2) - fidelity_one_mode(s1, s2)) < 1e-6

    def test_grid_agreement(self):
        for nu in (1.0, 1.5, 2.0, 3.0):
            for r in (0.0, 0.2, 0.5):
                s1 = one_mode_squeezed_thermal(nu, r)
                s2 = one_mode_squeezed_thermal(nu + 0.3, max(r - 0.1, 0.0))
                f = fidelity_one_mode(s1, s2)
                fo = fock_fidelity_oracle(s1, s2, cutoff=70)
                assert abs(f - fo) < 1e-6, (nu, r)

    def test_cutoff_too_small(self):
        s = one_mode_squeezed_thermal(3.0, 1.5)
        with pytest.raises(CutoffTooSmallError):
            fock_fidelity_oracle(s, s, cutoff=12)

    def test_rejects_displaced(self):
        v = vacuum_state(1)
        shifted = apply_symplectic(v, np.eye(2), b=np.array([1.0, 1.0]))
        with pytest.raises(ValueError):
            fock_fidelity_oracle(v, shifted)
