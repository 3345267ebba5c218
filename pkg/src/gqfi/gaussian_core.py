"""Gaussian states over bosonic modes in the complex phase-space form.

Conventions used throughout the package:

* mode operators are stacked as ``A = (a_1..a_n, a_1^dag..a_n^dag)``, so the
  commutation matrix is ``K = diag(I_n, -I_n)``;
* first moments ``d`` have layout ``(d_a, conj(d_a))``;
* second moments form the 2n x 2n matrix ``sigma = [[X, Y], [conj(Y), conj(X)]]``
  with ``X`` Hermitian and ``Y`` symmetric;
* the vacuum covariance is the identity (quadrature variances equal 1).

A matrix ``sigma`` describes a physical state iff ``sigma + K >= 0``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import SymplecticError, UnphysicalStateError

DEFAULT_TOL = 1e-10


def k_matrix(n_modes):
    """Commutation matrix diag(I_n, -I_n) of the complex form."""
    if n_modes < 1:
        raise ValueError(f"n_modes must be >= 1, got {n_modes}")
    k = np.ones(2 * n_modes)
    k[n_modes:] = -1.0
    return np.diag(k).astype(complex)


def _as_complex_matrix(m):
    arr = np.array(m, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class GaussianState:
    """Immutable n-mode Gaussian state (complex-form first and second moments).

    Transformations return new states; the stored arrays are write-protected.
    """

    n_modes: int
    d: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        n = self.n_modes
        d = _as_complex_matrix(self.d).reshape(2 * n)
        sigma = _as_complex_matrix(self.sigma)
        if sigma.shape != (2 * n, 2 * n):
            raise ValueError(f"sigma must be {2*n}x{2*n}, got {sigma.shape}")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "sigma", sigma)

    # -- block accessors -------------------------------------------------
    @property
    def d_a(self):
        """Annihilation-operator part of the first moments."""
        return self.d[: self.n_modes]

    @property
    def X(self):
        return self.sigma[: self.n_modes, : self.n_modes]

    @property
    def Y(self):
        return self.sigma[: self.n_modes, self.n_modes:]

    # -- validation ------------------------------------------------------
    def layout_errors(self, tol=DEFAULT_TOL):
        """List of human-readable layout violations (empty if consistent)."""
        n = self.n_modes
        errs = []
        if np.abs(self.d[n:] - self.d[:n].conj()).max(initial=0.0) > tol:
            errs.append("lower half of d is not the conjugate of the upper half")
        X, Y = self.X, self.Y
        if np.abs(X - X.conj().T).max() > tol:
            errs.append("X block is not Hermitian")
        if np.abs(Y - Y.T).max() > tol:
            errs.append("Y block is not symmetric")
        if np.abs(self.sigma[n:, :n] - Y.conj()).max() > tol:
            errs.append("lower-left block is not conj(Y)")
        if np.abs(self.sigma[n:, n:] - X.conj()).max() > tol:
            errs.append("lower-right block is not conj(X)")
        return errs

    def min_physicality_eigenvalue(self):
        """Smallest eigenvalue of sigma + K (>= 0 for a physical state)."""
        m = self.sigma + k_matrix(self.n_modes)
        m = (m + m.conj().T) / 2
        return float(np.linalg.eigvalsh(m).min())

    def is_physical(self, tol=DEFAULT_TOL):
        return self.min_physicality_eigenvalue() >= -tol

    def validate(self, tol=DEFAULT_TOL):
        """Raise UnphysicalStateError on layout or physicality violations."""
        errs = self.layout_errors(tol)
        if errs:
            raise UnphysicalStateError("; ".join(errs))
        lam = self.min_physicality_eigenvalue()
        if lam < -tol:
            raise UnphysicalStateError(
                f"sigma + K has negative eigenvalue {lam:.3e} (tol {tol:.1e})"
            )
        return self

    # -- derived quantities ----------------------------------------------
    def symplectic_eigenvalues(self):
        """Williamson eigenvalues in decreasing order (|eigenvalues of K sigma|).

        The eigenvalues of K sigma come in +/- nu pairs; each pair is averaged.
        """
        ev = np.linalg.eigvals(k_matrix(self.n_modes) @ self.sigma)
        mags = np.sort(np.abs(ev))
        return np.sort(mags.reshape(-1, 2).mean(axis=1))[::-1]

    def reduce(self, modes):
        """Reduced state over the given mode indices (partial trace)."""
        modes = list(modes)
        n = self.n_modes
        idx = modes + [m + n for m in modes]
        sel = np.ix_(idx, idx)
        return GaussianState(len(modes), self.d[idx], self.sigma[sel])

    # -- serialization ---------------------------------------------------
    def to_json_dict(self):
        return {
            "n_modes": self.n_modes,
            "d_re": self.d.real.tolist(),
            "d_im": self.d.imag.tolist(),
            "sigma_re": self.sigma.real.tolist(),
            "sigma_im": self.sigma.imag.tolist(),
        }

    @classmethod
    def from_json_dict(cls, data):
        n = int(data["n_modes"])
        d = np.array(data["d_re"], dtype=float) + 1j * np.array(data["d_im"], dtype=float)
        sigma = (np.array(data["sigma_re"], dtype=float)
                 + 1j * np.array(data["sigma_im"], dtype=float))
        return cls(n, d, sigma)


@dataclass(frozen=True)
class ThermalSqueezedSpec:
    """Probe-state parameters: thermal parameter per mode plus squeezing.

    ``nu`` holds one value per probe mode (nu >= 1, nu = 1 at zero
    temperature); ``r`` is the squeezing parameter shared by the probe.
    """

    mode_indices: tuple
    nu: tuple
    r: float

    def __post_init__(self):
        object.__setattr__(self, "mode_indices", tuple(int(m) for m in self.mode_indices))
        object.__setattr__(self, "nu", tuple(float(v) for v in self.nu))
        if len(self.mode_indices) not in (1, 2):
            raise ValueError("probe must cover one or two modes")
        if len(self.nu) != len(self.mode_indices):
            raise ValueError("one thermal parameter per probe mode required")
        if any(v < 1.0 for v in self.nu):
            raise UnphysicalStateError(f"thermal parameters must be >= 1, got {self.nu}")

    def state(self):
        """The probe as a GaussianState over its own modes."""
        if len(self.mode_indices) == 1:
            return one_mode_squeezed_thermal(self.nu[0], self.r)
        return two_mode_squeezed_thermal(self.nu[0], self.nu[1], self.r)


def nu_from_temperature(energy, temperature):
    """Thermal parameter nu = coth(E / 2T); nu -> 1 as T -> 0."""
    if temperature == 0:
        return 1.0
    return 1.0 / np.tanh(energy / (2.0 * temperature))


def vacuum_state(n_modes):
    """All-mode vacuum: d = 0, sigma = identity."""
    if n_modes < 1:
        raise ValueError(f"n_modes must be >= 1, got {n_modes}")
    return GaussianState(n_modes, np.zeros(2 * n_modes), np.eye(2 * n_modes))


def one_mode_squeezed_thermal(nu, r):
    """Single-mode squeezed thermal state, sigma = nu [[cosh 2r, sinh 2r], ...]."""
    if nu < 1.0:
        raise UnphysicalStateError(f"thermal parameter must be >= 1, got {nu}")
    c, s = np.cosh(2 * r), np.sinh(2 * r)
    sigma = nu * np.array([[c, s], [s, c]], dtype=complex)
    return GaussianState(1, np.zeros(2), sigma)


def two_mode_squeezed_thermal(nu_m, nu_n, r):
    """Two-mode squeezed thermal state with non-degenerate thermal parameters.

    X = diag(D_mn, D_nm) and Y has C_mn on the anti-diagonal, where
    D_mn = nu_m cosh^2 r + nu_n sinh^2 r and C_mn = (nu_m + nu_n) cosh r sinh r.
    """
    if nu_m < 1.0 or nu_n < 1.0:
        raise UnphysicalStateError(f"thermal parameters must be >= 1, got ({nu_m}, {nu_n})")
    ch, sh = np.cosh(r), np.sinh(r)
    d_mn = nu_m * ch**2 + nu_n * sh**2
    d_nm = nu_n * ch**2 + nu_m * sh**2
    c_mn = (nu_m + nu_n) * ch * sh
    sigma = np.array(
        [
            [d_mn, 0.0, 0.0, c_mn],
            [0.0, d_nm, c_mn, 0.0],
            [0.0, c_mn, d_mn, 0.0],
            [c_mn, 0.0, 0.0, d_nm],
        ],
        dtype=complex,
    )
    return GaussianState(2, np.zeros(4), sigma)


def symplectic_residual(S, n_modes):
    """Max-entry norm of S K S^dag - K."""
    K = k_matrix(n_modes)
    return float(np.abs(S @ K @ S.conj().T - K).max())


def apply_symplectic(state, S, b=None, tol=1e-8):
    """Transform moments: d -> S d + b, sigma -> S sigma S^dag.

    Raises SymplecticError when S violates S K S^dag = K beyond ``tol``.
    """
    S = np.asarray(S, dtype=complex)
    res = symplectic_residual(S, state.n_modes)
    if res > tol:
        raise SymplecticError(
            f"matrix is not symplectic: residual {res:.3e} exceeds {tol:.1e}",
            residual=res,
        )
    d = S @ state.d
    if b is not None:
        d = d + np.asarray(b, dtype=complex)
    return GaussianState(state.n_modes, d, S @ state.sigma @ S.conj().T)


# -- real (x, p) quadrature form --------------------------------------------

@dataclass(frozen=True)
class RealFormState:
    """First/second moments over the quadrature stacking (x_1..x_n, p_1..p_n)."""

    n_modes: int
    d_R: np.ndarray
    sigma_R: np.ndarray

    def __post_init__(self):
        n = self.n_modes
        d = np.array(self.d_R, dtype=float).reshape(2 * n)
        s = np.array(self.sigma_R, dtype=float)
        if s.shape != (2 * n, 2 * n):
            raise ValueError(f"sigma_R must be {2*n}x{2*n}, got {s.shape}")
        if np.abs(s - s.T).max() > DEFAULT_TOL:
            raise ValueError("sigma_R must be symmetric")
        d.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "d_R", d)
        object.__setattr__(self, "sigma_R", s)


def l_matrix(n_modes):
    """Unitary change of basis from quadratures to the complex form."""
    eye = np.eye(n_modes)
    return np.block([[eye, 1j * eye], [eye, -1j * eye]]) / np.sqrt(2.0)


def real_to_complex(rf):
    """Map a RealFormState to the complex form: d = L d_R, sigma = L sigma_R L^dag."""
    L = l_matrix(rf.n_modes)
    return GaussianState(rf.n_modes, L @ rf.d_R, L @ rf.sigma_R @ L.conj().T)


def complex_to_real(state, tol=DEFAULT_TOL):
    """Inverse of real_to_complex; raises if the result carries imaginary residue."""
    L = l_matrix(state.n_modes)
    d = L.conj().T @ state.d
    sigma = L.conj().T @ state.sigma @ L
    if max(np.abs(d.imag).max(initial=0.0), np.abs(sigma.imag).max()) > tol:
        raise ValueError("state does not map to a real quadrature form")
    return RealFormState(state.n_modes, d.real, sigma.real)
