"""Quantum Fisher information for one- and two-mode Gaussian states.

Exact closed forms in terms of Xi = K sigma and its parameter derivative,
plus a finite-difference estimator of the defining fidelity limit

    H = lim_{de -> 0} 8 (1 - sqrt(F(rho_eps, rho_{eps+de}))) / de^2

used as an internal cross-check oracle.

One-mode closed form (det sigma, not det Xi, enters the denominators; for a
single mode det Xi = -det sigma and the sign matters):

    H_1 = tr[(Xi^-1 Xi')^2] / (2 (1 + 1/det sigma))
        + tr[Xi^-1 Xi']^2 / (2 det sigma (1 - 1/det sigma^2))

The two-mode form uses det Xi directly (equal to det sigma there).  States
that are pure at the evaluation point make the denominators vanish; those are
handled by scaling regularization sigma -> (1 + delta) sigma with a stability
check, which reproduces the mixed-side limit of the Bures metric.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateSpectrumError,
    LimitUndefinedError,
    NumericalInstabilityError,
    SingularStateError,
)
from .fidelity import fidelity
from .gaussian_core import GaussianState, k_matrix

# Purity dispatch threshold on |det sigma| - 1.  Weak channels leave the
# mixedness as low as ~1e-10 at eps = 1e-3 and the mixed branch must still be
# used there; 1e-12 keeps three decades of margin above determinant noise.
PURITY_DET_TOL = 1e-12
REGULARIZATION_DELTA = 1e-6
IMAG_TOL = 1e-9


@dataclass(frozen=True)
class QfiResult:
    """QFI value with branch/validity bookkeeping."""

    value: float
    pure_branch: bool = False
    displacement_included: bool = False
    regularization_delta: float = 0.0
    stability_drift: float = 0.0
    notes: tuple = field(default_factory=tuple)


@dataclass(frozen=True)
class NumericQfiResult:
    value: float
    error_estimate: float


def _coerce_sigma(sigma):
    if isinstance(sigma, GaussianState):
        return sigma.sigma, sigma.n_modes
    arr = np.asarray(sigma, dtype=complex)
    return arr, arr.shape[0] // 2


def _realify(value, what, scale=1.0):
    if abs(value.imag) > IMAG_TOL * max(1.0, scale):
        raise NumericalInstabilityError(f"{what} has imaginary residue {value.imag:.3e}")
    return float(value.real)


def _project_tangent(m):
    """Project a derivative matrix onto the complex-form block structure.

    Valid covariance derivatives have a Hermitian X-block and symmetric
    Y-block; finite-difference noise off that subspace would otherwise leak
    imaginary parts into traces that are exactly real.
    """
    n = m.shape[0] // 2
    x = (m[:n, :n] + m[n:, n:].conj()) / 2.0
    x = (x + x.conj().T) / 2.0
    y = (m[:n, n:] + m[n:, :n].conj()) / 2.0
    y = (y + y.T) / 2.0
    return np.block([[x, y], [y.conj(), x.conj()]])


def _h1_mixed(sigma, sigma_dot):
    det_sigma = np.linalg.det(sigma).real
    try:
        m = np.linalg.solve(sigma, sigma_dot)  # sigma^-1 sigma_dot = Xi^-1 Xi_dot
    except np.linalg.LinAlgError as exc:
        raise SingularStateError("sigma is singular") from exc
    t_sq = np.trace(m @ m)
    t_lin = np.trace(m)
    scale = float(np.abs(t_sq)) + float(np.abs(t_lin)) ** 2 + 1.0
    first = _realify(t_sq, "tr[(Xi^-1 Xi')^2]", scale) / (2.0 * (1.0 + 1.0 / det_sigma))
    second = (_realify(t_lin, "tr[Xi^-1 Xi']", scale) ** 2
              / (2.0 * det_sigma * (1.0 - det_sigma ** -2)))
    return first + second


def _h2_mixed(sigma, sigma_dot):
    K = k_matrix(2)
    xi = K @ sigma
    xi_dot = K @ sigma_dot
    det_xi = _realify(np.linalg.det(xi), "det Xi", 1.0)
    try:
        m = np.linalg.solve(xi, xi_dot)
    except np.linalg.LinAlgError as exc:
        raise SingularStateError("Xi is singular") from exc
    eye = np.eye(4)
    xi_sq = xi @ xi
    t_inv2 = np.trace(m @ m)
    t_inv1 = np.trace(m)
    t_mix = np.trace(xi @ xi_dot)
    t_xi2 = np.trace(xi_sq)
    w = np.linalg.solve(eye + xi_sq, xi_dot)
    t_w2 = np.trace(w @ w)
    det_ixi2 = np.linalg.det(eye + xi_sq)
    scale = max(abs(det_xi), 1.0)
    t_inv2 = _realify(t_inv2, "tr[(Xi^-1 Xi')^2]", scale)
    t_inv1 = _realify(t_inv1, "tr[Xi^-1 Xi']", scale)
    t_mix = _realify(t_mix, "tr[Xi Xi']", scale)
    t_xi2 = _realify(t_xi2, "tr[Xi^2]", scale)
    t_w2 = _realify(t_w2, "tr[((I+Xi^2)^-1 Xi')^2]", scale)
    det_ixi2 = _realify(det_ixi2, "det[I + Xi^2]", scale)

    numer = (4.0 * (1.0 + det_xi) * (t_mix ** 2 - det_xi * t_inv1 ** 2)
             + det_xi * t_inv1 * t_xi2 * (t_inv1 * t_xi2 - 4.0 * t_mix))
    # 4 (1 + det Xi)^2 - tr[Xi^2]^2 equals 2 (nu_1^2 - 1)(nu_2^2 - 1)
    # (2 (1 + det Xi) + tr[Xi^2]): a double cancellation in the per-mode
    # mixednesses.  Close to the purity boundary the whole expression is a
    # removable 0/0 that double precision cannot resolve; switch to
    # high-precision arithmetic there.
    mags = np.sort(np.abs(np.linalg.eigvals(xi)))
    nu1, nu2 = mags[:2].mean(), mags[2:].mean()
    u1, u2 = nu1 * nu1 - 1.0, nu2 * nu2 - 1.0
    if min(abs(u1), abs(u2)) < 1e-13 and not (abs(u1) < 1e-13 and abs(u2) < 1e-13):
        raise DegenerateSpectrumError(
            f"a symplectic eigenvalue sits at the purity boundary "
            f"(nu^2 - 1 = {u1:.3e}, {u2:.3e}); the rational term is singular"
        )
    if min(abs(u1), abs(u2)) < 1e-4:
        return _h2_mixed_highprec(sigma, sigma_dot)
    denom = 4.0 * (1.0 + det_xi) ** 2 - t_xi2 ** 2
    return (det_xi * t_inv2 + np.sqrt(det_ixi2) * t_w2 + numer / denom) / (2.0 * (det_xi - 1.0))


def _h2_mixed_highprec(sigma, sigma_dot, dps=60):
    """Two-mode closed form in 60-digit arithmetic (near-pure states)."""
    import mpmath
    from mpmath import mp

    with mp.workdps(dps):
        def to_mp(a):
            m = mp.matrix(4, 4)
            for i in range(4):
                for j in range(4):
                    m[i, j] = mp.mpc(a[i, j])
            return m

        k_signs = (1, 1, -1, -1)
        xi = to_mp(sigma)
        xi_dot = to_mp(sigma_dot)
        for i in range(4):
            for j in range(4):
                xi[i, j] *= k_signs[i]
                xi_dot[i, j] *= k_signs[i]
        eye = mp.eye(4)
        trace = lambda a: a[0, 0] + a[1, 1] + a[2, 2] + a[3, 3]
        xi_inv = xi ** -1
        m = xi_inv * xi_dot
        xi_sq = xi * xi
        d = mpmath.det(xi)
        t_inv2 = trace(m * m)
        t_inv1 = trace(m)
        t_mix = trace(xi * xi_dot)
        t_xi2 = trace(xi_sq)
        w = (eye + xi_sq) ** -1 * xi_dot
        t_w2 = trace(w * w)
        det_ixi2 = mpmath.det(eye + xi_sq)
        numer = (4 * (1 + d) * (t_mix ** 2 - d * t_inv1 ** 2)
                 + d * t_inv1 * t_xi2 * (t_inv1 * t_xi2 - 4 * t_mix))
        denom = 4 * (1 + d) ** 2 - t_xi2 ** 2
        if abs(denom) < mp.mpf(10) ** (-2 * dps + 20):
            raise DegenerateSpectrumError("two-mode QFI denominator vanishes")
        h = (d * t_inv2 + mp.sqrt(det_ixi2) * t_w2 + numer / denom) / (2 * (d - 1))
        return float(mp.re(h))


def _regularized(h_mixed, sigma, sigma_dot, delta=REGULARIZATION_DELTA):
    """Evaluate at sigma (1 + delta) and delta/10; report the drift."""
    vals = [h_mixed((1.0 + d) * sigma, sigma_dot) for d in (delta, delta / 10.0)]
    drift = abs(vals[1] - vals[0]) / max(abs(vals[1]), 1e-30)
    return vals[1], delta / 10.0, drift


def qfi_one_mode_exact(sigma, sigma_dot, d_dot=None):
    """Closed-form one-mode QFI; dispatches pure states to regularization."""
    sig, n = _coerce_sigma(sigma)
    if n != 1:
        raise ValueError("qfi_one_mode_exact requires a one-mode state")
    sigma_dot = _project_tangent(np.asarray(sigma_dot, dtype=complex))
    det_sigma = np.linalg.det(sig).real
    pure = bool(abs(abs(det_sigma) - 1.0) <= PURITY_DET_TOL)
    if pure:
        value, delta, drift = _regularized(_h1_mixed, sig, sigma_dot)
    else:
        value, delta, drift = _h1_mixed(sig, sigma_dot), 0.0, 0.0
    if d_dot is not None:
        value += qfi_displacement_term(d_dot, sig)
    return QfiResult(value=value, pure_branch=pure, displacement_included=d_dot is not None,
                     regularization_delta=delta, stability_drift=drift)


def qfi_two_mode_exact(sigma, sigma_dot, d_dot=None):
    """Closed-form two-mode QFI; dispatches pure states to regularization."""
    sig, n = _coerce_sigma(sigma)
    if n != 2:
        raise ValueError("qfi_two_mode_exact requires a two-mode state")
    sigma_dot = _project_tangent(np.asarray(sigma_dot, dtype=complex))
    det_xi = np.linalg.det(k_matrix(2) @ sig).real
    pure = bool(abs(det_xi - 1.0) <= PURITY_DET_TOL)
    if pure:
        value, delta, drift = _regularized(_h2_mixed, sig, sigma_dot)
    else:
        value, delta, drift = _h2_mixed(sig, sigma_dot), 0.0, 0.0
    if d_dot is not None:
        value += qfi_displacement_term(d_dot, sig)
    return QfiResult(value=value, pure_branch=pure, displacement_included=d_dot is not None,
                     regularization_delta=delta, stability_drift=drift)


def qfi_exact(sigma, sigma_dot, d_dot=None):
    _, n = _coerce_sigma(sigma)
    if n == 1:
        return qfi_one_mode_exact(sigma, sigma_dot, d_dot)
    if n == 2:
        return qfi_two_mode_exact(sigma, sigma_dot, d_dot)
    raise ValueError("exact QFI is implemented for 1 or 2 modes")


def qfi_displacement_term(d_dot, sigma):
    """First-moment contribution 2 d'^dag sigma^-1 d'."""
    sig, _ = _coerce_sigma(sigma)
    d_dot = np.asarray(d_dot, dtype=complex)
    try:
        sol = np.linalg.solve(sig, d_dot)
    except np.linalg.LinAlgError as exc:
        raise SingularStateError("sigma is singular") from exc
    val = 2.0 * (d_dot.conj() @ sol)
    return _realify(val, "displacement term", float(np.abs(val)) + 1.0)


class StateCurve:
    """A one-parameter family eps -> GaussianState with a derivative policy.

    ``sigma_dot_fn`` supplies the analytic derivative when available;
    otherwise Richardson-extrapolated central differences with step ``h``.
    Evaluators must be re-entrant: the curve keeps no mutable state.
    """

    def __init__(self, evaluator, sigma_dot_fn=None, h=1e-5):
        self._evaluator = evaluator
        self._sigma_dot_fn = sigma_dot_fn
        self.h = float(h)

    def state(self, eps):
        return self._evaluator(eps)

    def sigma(self, eps):
        return self._evaluator(eps).sigma

    def sigma_dot(self, eps):
        if self._sigma_dot_fn is not None:
            return np.asarray(self._sigma_dot_fn(eps), dtype=complex)
        h = self.h
        d1 = (self.sigma(eps + h) - self.sigma(eps - h)) / (2.0 * h)
        d2 = (self.sigma(eps + h / 2) - self.sigma(eps - h / 2)) / h
        return (4.0 * d2 - d1) / 3.0

    def d_dot(self, eps):
        if self._sigma_dot_fn is not None:
            return None
        h = self.h
        s_plus, s_minus = self.state(eps + h), self.state(eps - h)
        dd = (s_plus.d - s_minus.d) / (2.0 * h)
        return dd if np.abs(dd).max(initial=0.0) > 1e-12 else None


def qfi_numeric(curve, eps0, d_eps=1e-3, mode_count=None):
    """Finite-difference estimate of the Bures-limit QFI at eps0.

    Uses symmetric fidelity pairs F(eps0 - h/2, eps0 + h/2) at steps d_eps and
    d_eps / 2 with Richardson extrapolation; the spread of the two estimates
    gives the reported truncation-error estimate.  Raises LimitUndefinedError
    when 1 - F scales like h instead of h^2 (non-vanishing first fidelity
    derivative, so the defining limit does not exist).
    """
    if not 1e-5 <= d_eps <= 1e-2:
        raise ValueError(f"d_eps must lie in [1e-5, 1e-2], got {d_eps:g}")
    state0 = curve.state(eps0)
    if mode_count is not None and state0.n_modes != mode_count:
        raise ValueError(f"curve produces {state0.n_modes}-mode states, expected {mode_count}")

    def one_minus_f(h):
        f = fidelity(curve.state(eps0 - h / 2), curve.state(eps0 + h / 2))
        return 1.0 - f

    g1 = one_minus_f(d_eps)
    g2 = one_minus_f(d_eps / 2)
    noise_floor = 1e-14
    if abs(g1) < noise_floor and abs(g2) < noise_floor:
        return NumericQfiResult(value=0.0, error_estimate=noise_floor)
    if g2 > noise_floor * 10:
        ratio = g1 / g2
        if ratio < 3.0:
            raise LimitUndefinedError(
                f"1 - F scales with ratio {ratio:.2f} per step halving (expected ~4): "
                "either the first fidelity derivative does not vanish here, or d_eps "
                "is too large for this point (e.g. next to a purity crossing)"
            )

    def estimate(h, g):
        # 8 (1 - sqrt(F)) / h^2 with 1 - sqrt(F) = g / (1 + sqrt(1 - g))
        return 8.0 * g / ((1.0 + np.sqrt(max(1.0 - g, 0.0))) * h * h)

    e1 = estimate(d_eps, g1)
    e2 = estimate(d_eps / 2, g2)
    value = (4.0 * e2 - e1) / 3.0
    return NumericQfiResult(value=value, error_estimate=abs(e2 - e1) / 3.0)
