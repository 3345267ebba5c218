"""Bogoliubov transformations acting on Gaussian states as quantum channels.

A transformation over N truncated modes is stored through its coefficient
blocks ``alpha`` and ``beta`` which, for an exact transformation, satisfy

    alpha alpha^dag - beta beta^dag = I,      alpha beta^T - beta alpha^T = 0.

The operator-form matrix

    S_tilde = [[conj(alpha), -conj(beta)], [-beta, alpha]]

is symplectic and transports moments: the channel output is
``tr_E[S_tilde sigma_global S_tilde^dag]`` over the chosen system modes, with
the environment a thermal-diagonal block uncorrelated with the system.

Identity residuals are recorded, never enforced: transforms assembled from a
perturbative expansion violate the identities at the first dropped order, and
acceptable residual size is the caller's call.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import TruncationError, UnsupportedInitialStateError
from .gaussian_core import GaussianState, k_matrix

TAIL_TOL = 1e-10


class TruncationWarning(UserWarning):
    """Environment sums appear unconverged at the current mode truncation."""


@dataclass(frozen=True)
class BogoliubovTransform:
    """Coefficient blocks of a (possibly approximate) Bogoliubov transformation."""

    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        alpha = np.array(self.alpha, dtype=complex)
        beta = np.array(self.beta, dtype=complex)
        if alpha.shape != beta.shape or alpha.ndim != 2 or alpha.shape[0] != alpha.shape[1]:
            raise ValueError("alpha and beta must be square matrices of equal size")
        alpha.setflags(write=False)
        beta.setflags(write=False)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def n_modes(self):
        return self.alpha.shape[0]

    @classmethod
    def identity(cls, n_modes):
        return cls(np.eye(n_modes), np.zeros((n_modes, n_modes)))

    def check_identities(self):
        """Max-entry residuals of the two Bogoliubov identities."""
        a, b = self.alpha, self.beta
        r1 = np.abs(a @ a.conj().T - b @ b.conj().T - np.eye(self.n_modes)).max()
        r2 = np.abs(a @ b.T - b @ a.T).max()
        return float(r1), float(r2)


def operator_form(transform):
    """2N x 2N symplectic matrix acting on the mode-operator stacking."""
    a, b = transform.alpha, transform.beta
    return np.block([[a.conj(), -b.conj()], [-b, a]])


def mode_function_form(transform):
    """2N x 2N matrix acting on the mode-function stacking.

    For an exact transformation this equals K conj(S_tilde) K and
    (S_tilde^T)^-1.
    """
    a, b = transform.alpha, transform.beta
    return np.block([[a, b], [b.conj(), a.conj()]])


def real_form_s(transform):
    """Mode-function matrix in the quadrature (x, p) stacking."""
    a, b = transform.alpha, transform.beta
    return np.block([[(a + b).real, -(a - b).imag], [(a + b).imag, (a - b).real]])


def real_form_s_tilde(transform):
    """Operator-form matrix in the quadrature (x, p) stacking."""
    a, b = transform.alpha, transform.beta
    return np.block([[(a - b).real, (a + b).imag], [-(a - b).imag, (a + b).real]])


@dataclass(frozen=True)
class ChannelResult:
    reduced_state: GaussianState
    environment_nu: np.ndarray
    n_truncation: int


def _env_nu_array(env_nu, n_modes):
    arr = np.broadcast_to(np.asarray(env_nu, dtype=float), (n_modes,)).copy()
    if np.any(arr < 1.0):
        raise ValueError("environment thermal parameters must be >= 1")
    return arr


def global_moments(probe, system_modes, env_nu, n_modes):
    """Embed a probe state into N modes over a thermal-diagonal environment.

    Returns the global blocks (X0, Y0, d0).  The construction is separable by
    design: every system-environment and environment-environment coupling is
    zero.
    """
    system_modes = list(system_modes)
    if len(set(system_modes)) != len(system_modes):
        raise ValueError("system modes must be distinct")
    if probe.n_modes != len(system_modes):
        raise ValueError("probe mode count must match the system mode list")
    if any(m < 0 or m >= n_modes for m in system_modes):
        raise TruncationError(
            f"system modes {system_modes} fall outside the truncation N={n_modes}"
        )
    nu = _env_nu_array(env_nu, n_modes)
    X0 = np.diag(nu).astype(complex)
    Y0 = np.zeros((n_modes, n_modes), dtype=complex)
    d0 = np.zeros(2 * n_modes, dtype=complex)
    for i, mi in enumerate(system_modes):
        d0[mi] = probe.d[i]
        d0[n_modes + mi] = probe.d[probe.n_modes + i]
        for j, mj in enumerate(system_modes):
            X0[mi, mj] = probe.X[i, j]
            Y0[mi, mj] = probe.Y[i, j]
    return X0, Y0, d0


def check_environment_block_diagonal(X0, Y0, system_modes, tol=1e-12):
    """Reject global moments whose environment is correlated or non-diagonal."""
    n = X0.shape[0]
    env = [a for a in range(n) if a not in set(system_modes)]
    for a in env:
        for b in range(n):
            if b == a:
                continue
            if abs(X0[a, b]) > tol or abs(X0[b, a]) > tol:
                raise UnsupportedInitialStateError(
                    f"environment mode {a} carries X correlations"
                )
            if abs(Y0[a, b]) > tol or abs(Y0[b, a]) > tol:
                raise UnsupportedInitialStateError(
                    f"environment mode {a} carries Y correlations"
                )
        if abs(Y0[a, a]) > tol:
            raise UnsupportedInitialStateError(f"environment mode {a} is squeezed")


def apply_channel(probe, transform, system_modes, env_nu=1.0):
    """Channel output: conjugate the embedded global state by S_tilde and
    trace out the environment."""
    n = transform.n_modes
    X0, Y0, d0 = global_moments(probe, system_modes, env_nu, n)
    check_environment_block_diagonal(X0, Y0, system_modes)
    st = operator_form(transform)
    sigma0 = np.block([[X0, Y0], [Y0.conj(), X0.conj()]])
    sigma = st @ sigma0 @ st.conj().T
    d = st @ d0
    k = len(system_modes)
    idx = list(system_modes) + [n + m for m in system_modes]
    sel = np.ix_(idx, idx)
    reduced = GaussianState(k, d[idx], sigma[sel])
    return ChannelResult(reduced_state=reduced,
                         environment_nu=_env_nu_array(env_nu, n),
                         n_truncation=n)


def covariance_elements_general(X0, Y0, transform):
    """Element-wise evaluation of the post-channel blocks for arbitrary input.

    Equivalent to conjugation by the operator form; kept as an independent
    code path (double sums over input mode pairs).
    """
    a, b = transform.alpha, transform.beta
    if X0.shape != a.shape or Y0.shape != a.shape:
        raise ValueError("initial blocks must match the transform dimension")
    ac, bc = a.conj(), b.conj()
    X = (np.einsum("ia,ab,jb->ij", ac, X0, a)
         - np.einsum("ia,ab,jb->ij", bc, Y0.conj(), a)
         - np.einsum("ia,ab,jb->ij", ac, Y0, b)
         + np.einsum("ia,ab,jb->ij", bc, X0.conj(), b))
    Y = (-np.einsum("ia,ab,jb->ij", ac, X0, bc)
         + np.einsum("ia,ab,jb->ij", bc, Y0.conj(), bc)
         + np.einsum("ia,ab,jb->ij", ac, Y0, ac)
         - np.einsum("ia,ab,jb->ij", bc, X0.conj(), ac))
    return X, Y


def _tail_check(transform, modes):
    a, b = transform.alpha, transform.beta
    last = transform.n_modes - 1
    for m in modes:
        tail = abs(a[m, last]) ** 2 + abs(b[m, last]) ** 2
        if tail > TAIL_TOL:
            warnings.warn(
                f"environment sum for mode {m} has tail weight {tail:.2e} at the "
                f"truncation edge; increase N",
                TruncationWarning,
                stacklevel=3,
            )


def covariance_elements_one_mode(spec, env_nu, transform, m):
    """Exact post-channel (X_mm, Y_mm) for a one-mode squeezed thermal probe.

    Closed-form specialization of the channel: the probe contributes through
    cosh/sinh terms of its own coefficients, the thermal environment through
    sums over all other modes.
    """
    n = transform.n_modes
    if m >= n:
        raise TruncationError(f"mode {m} outside truncation N={n}")
    nu_m = spec.nu[0]
    r = spec.r
    nu = _env_nu_array(env_nu, n)
    _tail_check(transform, [m])
    a, b = transform.alpha, transform.beta
    c2, s2 = np.cosh(2 * r), np.sinh(2 * r)
    amm, bmm = a[m, m], b[m, m]
    env = np.ones(n, dtype=bool)
    env[m] = False
    x_env = np.sum(nu[env] * (np.abs(a[m, env]) ** 2 + np.abs(b[m, env]) ** 2))
    X_mm = nu_m * (c2 * (abs(amm) ** 2 + abs(bmm) ** 2)
                   - 2.0 * (amm * np.conj(bmm)).real * s2) + x_env
    y_env = -2.0 * np.sum(nu[env] * np.conj(a[m, env]) * np.conj(b[m, env]))
    Y_mm = nu_m * (-2.0 * c2 * np.conj(amm) * np.conj(bmm)
                   + (np.conj(amm) ** 2 + np.conj(bmm) ** 2) * s2) + y_env
    return complex(X_mm), complex(Y_mm)


def covariance_elements_two_mode(spec, env_nu, transform, m, n_idx):
    """Exact post-channel blocks over probe modes (m, n) for a two-mode
    squeezed thermal probe.

    Returns 2x2 arrays (X, Y) indexed by the probe modes in order (m, n).
    """
    n = transform.n_modes
    if m == n_idx:
        raise ValueError("probe modes must differ")
    if m >= n or n_idx >= n:
        raise TruncationError(f"modes ({m}, {n_idx}) outside truncation N={n}")
    nu_m, nu_n = spec.nu
    r = spec.r
    ch, sh = np.cosh(r), np.sinh(r)
    d_mn = nu_m * ch**2 + nu_n * sh**2
    d_nm = nu_n * ch**2 + nu_m * sh**2
    c_mn = (nu_m + nu_n) * ch * sh
    nu = _env_nu_array(env_nu, n)
    _tail_check(transform, [m, n_idx])
    a, b = transform.alpha, transform.beta
    env = np.ones(n, dtype=bool)
    env[m] = env[n_idx] = False
    X = np.zeros((2, 2), dtype=complex)
    Y = np.zeros((2, 2), dtype=complex)
    modes = (m, n_idx)
    for ii, i in enumerate(modes):
        for jj, j in enumerate(modes):
            X[ii, jj] = (
                d_mn * (np.conj(a[i, m]) * a[j, m] + np.conj(b[i, m]) * b[j, m])
                + d_nm * (np.conj(a[i, n_idx]) * a[j, n_idx] + np.conj(b[i, n_idx]) * b[j, n_idx])
                - c_mn * (np.conj(b[i, m]) * a[j, n_idx] + np.conj(a[i, m]) * b[j, n_idx]
                          + np.conj(b[i, n_idx]) * a[j, m] + np.conj(a[i, n_idx]) * b[j, m])
                + np.sum(nu[env] * (np.conj(a[i, env]) * a[j, env]
                                    + np.conj(b[i, env]) * b[j, env]))
            )
            Y[ii, jj] = (
                -d_mn * (np.conj(a[i, m]) * np.conj(b[j, m]) + np.conj(b[i, m]) * np.conj(a[j, m]))
                - d_nm * (np.conj(a[i, n_idx]) * np.conj(b[j, n_idx])
                          + np.conj(b[i, n_idx]) * np.conj(a[j, n_idx]))
                + c_mn * (np.conj(a[i, m]) * np.conj(a[j, n_idx])
                          + np.conj(a[i, n_idx]) * np.conj(a[j, m])
                          + np.conj(b[i, m]) * np.conj(b[j, n_idx])
                          + np.conj(b[i, n_idx]) * np.conj(b[j, m]))
                - np.sum(nu[env] * (np.conj(a[i, env]) * np.conj(b[j, env])
                                    + np.conj(b[i, env]) * np.conj(a[j, env])))
            )
    return X, Y


def symplectic_residual_operator_form(transform):
    """Max-entry norm of S_tilde K S_tilde^dag - K."""
    st = operator_form(transform)
    K = k_matrix(transform.n_modes)
    return float(np.abs(st @ K @ st.conj().T - K).max())
