"""Uhlmann fidelity between one- and two-mode Gaussian states.

The fidelity is evaluated from three determinant quantities of the pair
(complex form, vacuum covariance = identity):

    Delta  = det[sigma_1 + sigma_2]
    Gamma  = det[K sigma_1 K sigma_2 + I]
    Lambda = det[sigma_1 + K] det[sigma_2 + K]

    F_1 = 2 exp(-delta_d^dag (sigma_1+sigma_2)^{-1} delta_d)
            / (sqrt(Delta + Lambda) - sqrt(Lambda))
    F_2 = 4 exp(-delta_d^dag (sigma_1+sigma_2)^{-1} delta_d)
            / (sqrt(Gamma) + sqrt(Lambda) - sqrt((sqrt(Gamma)+sqrt(Lambda))^2 - Delta))

A truncated Fock-space computation of tr sqrt(sqrt(rho1) rho2 sqrt(rho1))
squared serves as an independent oracle for the one-mode formula.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm, sqrtm

from .errors import (
    CutoffTooSmallError,
    DegeneratePairError,
    NumericalInstabilityError,
)
from .gaussian_core import k_matrix

IMAG_RESIDUE_TOL = 1e-10
LAMBDA_CLAMP = 1e-12
RADICAND_CLAMP = 1e-10


@dataclass(frozen=True)
class FidelityInvariants:
    delta: float
    gamma: float
    lambda_: float


def _realify(value, rel_scale, what):
    """Drop an imaginary residue after checking it is numerical noise."""
    if abs(value.imag) > IMAG_RESIDUE_TOL * max(1.0, rel_scale):
        raise NumericalInstabilityError(
            f"{what} carries imaginary residue {value.imag:.3e}"
        )
    return float(value.real)


def invariants(s1, s2, tol=IMAG_RESIDUE_TOL):
    """Determinant quantities (Delta, Gamma, Lambda) for a state pair."""
    if s1.n_modes != s2.n_modes:
        raise ValueError(
            f"mode counts differ: {s1.n_modes} vs {s2.n_modes}"
        )
    n = s1.n_modes
    if n not in (1, 2):
        raise ValueError("fidelity invariants are implemented for 1 or 2 modes")
    K = k_matrix(n)
    eye = np.eye(2 * n)
    delta = np.linalg.det(s1.sigma + s2.sigma)
    gamma = np.linalg.det(K @ s1.sigma @ K @ s2.sigma + eye)
    scale = float(np.abs(delta))
    delta = _realify(delta, scale, "Delta")
    gamma = _realify(gamma, scale, "Gamma")
    # det[sigma + K] vanishes exactly for pure states; clamp the determinant
    # noise factor by factor so that a genuinely small product of two mixed
    # factors (near-pure pairs have Lambda ~ mixedness^2) survives
    factors = []
    for s in (s1, s2):
        det_k = _realify(np.linalg.det(s.sigma + K),
                         float(abs(np.linalg.det(s.sigma))) + 1.0, "det[sigma + K]")
        if abs(det_k) < LAMBDA_CLAMP * max(1.0, abs(np.linalg.det(s.sigma))):
            det_k = 0.0
        factors.append(det_k)
    lam = factors[0] * factors[1]
    if lam < 0:
        if lam > -tol * max(1.0, scale):
            lam = 0.0
        else:
            raise NumericalInstabilityError(f"Lambda is negative: {lam:.3e}")
    if delta <= 0:
        raise NumericalInstabilityError(f"Delta must be positive, got {delta:.3e}")
    return FidelityInvariants(delta=delta, gamma=gamma, lambda_=lam)


def _displacement_factor(s1, s2):
    dd = s1.d - s2.d
    if not np.any(dd):
        return 1.0
    m = s1.sigma + s2.sigma
    try:
        sol = np.linalg.solve(m, dd)
    except np.linalg.LinAlgError as exc:
        raise DegeneratePairError("sigma_1 + sigma_2 is singular") from exc
    expo = dd.conj() @ sol
    return float(np.exp(-_realify(expo, float(np.abs(expo)) + 1.0, "displacement exponent")))


def fidelity_one_mode(s1, s2):
    """Uhlmann fidelity of two one-mode Gaussian states."""
    if s1.n_modes != 1 or s2.n_modes != 1:
        raise ValueError("fidelity_one_mode requires one-mode states")
    inv = invariants(s1, s2)
    denom = np.sqrt(inv.delta + inv.lambda_) - np.sqrt(inv.lambda_)
    if denom <= 0:
        raise DegeneratePairError("vanishing fidelity denominator")
    return 2.0 * _displacement_factor(s1, s2) / denom


def fidelity_two_mode(s1, s2):
    """Uhlmann fidelity of two two-mode Gaussian states."""
    if s1.n_modes != 2 or s2.n_modes != 2:
        raise ValueError("fidelity_two_mode requires two-mode states")
    inv = invariants(s1, s2)
    if inv.gamma < 0:
        raise NumericalInstabilityError(f"Gamma is negative: {inv.gamma:.3e}")
    sg = np.sqrt(inv.gamma)
    sl = np.sqrt(inv.lambda_)
    radicand = (sg + sl) ** 2 - inv.delta
    if radicand < 0:
        if radicand < -RADICAND_CLAMP * max(1.0, inv.delta):
            raise NumericalInstabilityError(
                f"negative radicand {radicand:.3e} in two-mode fidelity"
            )
        radicand = 0.0
    denom = sg + sl - np.sqrt(radicand)
    if denom <= 0:
        raise DegeneratePairError("vanishing fidelity denominator")
    return 4.0 * _displacement_factor(s1, s2) / denom


def fidelity(s1, s2):
    """Dispatch on the (shared) mode count."""
    if s1.n_modes != s2.n_modes:
        raise ValueError(f"mode counts differ: {s1.n_modes} vs {s2.n_modes}")
    if s1.n_modes == 1:
        return fidelity_one_mode(s1, s2)
    if s1.n_modes == 2:
        return fidelity_two_mode(s1, s2)
    raise ValueError("fidelity is implemented for 1 or 2 modes")


def bures_distance(s1, s2):
    """sqrt(2 (1 - sqrt(F))); zero iff the states coincide."""
    f = min(fidelity(s1, s2), 1.0)
    return float(np.sqrt(2.0 * (1.0 - np.sqrt(f))))


# -- independent Fock-space oracle -------------------------------------------

def _squeezed_thermal_fock(nu, r, phase, cutoff):
    """Truncated density matrix of a (rotated) squeezed thermal state.

    nu = 2 nbar + 1 fixes the thermal occupation; the squeeze operator is
    exp(r/2 (e^{-i phase} a^2 - e^{i phase} a^dag^2)), matching Y = nu sinh(2r) e^{i phase}.
    """
    nbar = (nu - 1.0) / 2.0
    if nbar > 0:
        q = nbar / (nbar + 1.0)
        pops = (1.0 - q) * q ** np.arange(cutoff)
    else:
        pops = np.zeros(cutoff)
        pops[0] = 1.0
    tail = 1.0 - pops.sum()
    rho = np.diag(pops).astype(complex)
    a = np.diag(np.sqrt(np.arange(1, cutoff)), 1).astype(complex)
    xi = r * np.exp(1j * phase)
    S = expm(0.5 * (np.conj(xi) * (a @ a) - xi * (a.conj().T @ a.conj().T)))
    return S @ rho @ S.conj().T, tail


def _one_mode_parameters(state):
    """Extract (nu, r, squeeze phase) from a one-mode covariance matrix."""
    x = state.X[0, 0].real
    y = state.Y[0, 0]
    nu_sq = x * x - abs(y) ** 2
    if nu_sq < 1.0 - 1e-9:
        raise NumericalInstabilityError(f"det sigma = {nu_sq:.6f} < 1")
    nu = np.sqrt(max(nu_sq, 1.0))
    r = 0.5 * np.arccosh(max(x / nu, 1.0))
    phase = float(np.angle(y)) if abs(y) > 0 else 0.0
    return nu, r, phase


def fock_fidelity_oracle(s1, s2, cutoff=60, tail_tol=1e-8):
    """One-mode Uhlmann fidelity via truncated Fock-space density matrices.

    Independent of the determinant formula: both states are rebuilt as
    squeezed thermal density matrices and tr sqrt(sqrt(rho1) rho2 sqrt(rho1))
    is evaluated numerically.  Only undisplaced states are supported.
    """
    if s1.n_modes != 1 or s2.n_modes != 1:
        raise ValueError("the Fock oracle handles one-mode states only")
    if np.abs(s1.d).max(initial=0.0) > 0 or np.abs(s2.d).max(initial=0.0) > 0:
        raise ValueError("the Fock oracle requires zero first moments")
    rhos = []
    for s in (s1, s2):
        nu, r, phase = _one_mode_parameters(s)
        rho, tail = _squeezed_thermal_fock(nu, r, phase, cutoff)
        # squeezing moves population toward higher Fock states; account for it
        trace_loss = abs(1.0 - np.trace(rho).real)
        if tail > tail_tol or trace_loss > tail_tol:
            raise CutoffTooSmallError(
                f"truncation tail mass {max(tail, trace_loss):.3e} exceeds {tail_tol:.1e} "
                f"at cutoff {cutoff}"
            )
        rhos.append(rho)
    s = sqrtm(rhos[0])
    inner = sqrtm(s @ rhos[1] @ s)
    val = np.trace(inner).real ** 2
    return float(val)
