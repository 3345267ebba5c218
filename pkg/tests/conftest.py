import numpy as np
import pytest
from scipy.linalg import expm

from gqfi.bogoliubov import BogoliubovTransform
from gqfi.gaussian_core import GaussianState


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_generator(n_modes, rng, mode_entangling=False, scale=1.0):
    """Symplectic generator W = [[A, B], [conj B, conj A]] with A anti-Hermitian
    and B symmetric, so expm(t W) K expm(t W)^dag = K exactly."""
    a = rng.normal(size=(n_modes, n_modes)) + 1j * rng.normal(size=(n_modes, n_modes))
    a = (a - a.conj().T) / 2
    b = rng.normal(size=(n_modes, n_modes)) + 1j * rng.normal(size=(n_modes, n_modes))
    b = (b + b.T) / 2
    if mode_entangling:
        np.fill_diagonal(a, 0.0)
        np.fill_diagonal(b, 0.0)
    return scale * np.block([[a, b], [b.conj(), a.conj()]])


def random_symplectic(n_modes, rng, scale=0.5):
    return expm(random_generator(n_modes, rng, scale=scale))


def random_mixed_state(n_modes, rng, nu_max=4.0, displaced=False):
    """Random valid state: symplectic conjugation of a thermal product."""
    nus = rng.uniform(1.05, nu_max, size=n_modes)
    sigma0 = np.diag(np.concatenate([nus, nus])).astype(complex)
    s = random_symplectic(n_modes, rng)
    sigma = s @ sigma0 @ s.conj().T
    if displaced:
        da = rng.normal(size=n_modes) + 1j * rng.normal(size=n_modes)
        d = np.concatenate([da, da.conj()])
    else:
        d = np.zeros(2 * n_modes)
    return GaussianState(n_modes, d, sigma)


def generator_channel(n_modes, w, phases):
    """eps -> BogoliubovTransform from S(eps) = diag(phases +) expm(eps W)."""
    p = np.diag(np.concatenate([phases, phases.conj()]))

    def at(eps):
        s = p @ expm(eps * w)
        return BogoliubovTransform(s[:n_modes, :n_modes], s[:n_modes, n_modes:])

    return at


def product_two_mode(s1, s2):
    """Two-mode product state from two one-mode states."""
    x = np.zeros((2, 2), dtype=complex)
    y = np.zeros((2, 2), dtype=complex)
    x[0, 0], x[1, 1] = s1.X[0, 0], s2.X[0, 0]
    y[0, 0], y[1, 1] = s1.Y[0, 0], s2.Y[0, 0]
    sigma = np.block([[x, y], [y.conj(), x.conj()]])
    d = np.array([s1.d[0], s2.d[0], np.conj(s1.d[0]), np.conj(s2.d[0])])
    return GaussianState(2, d, sigma)
