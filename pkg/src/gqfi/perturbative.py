"""Series expansions of the QFI around eps = 0 for squeezed thermal probes.

The channel enters through per-order coefficient matrices

    alpha(eps) = sum_k alpha^(k) eps^k,   beta(eps) = sum_k beta^(k) eps^k

with alpha^(0) = diag(G) (free-evolution phases), beta^(0) = 0 and vanishing
diagonal first-order coefficients (the mode-entangling condition).  The
post-channel covariance over the probe modes is expanded to the same orders;
all series containers in this module hold plain Taylor coefficients
(f(eps) = sum_k f_k eps^k).

The regime results below were cross-validated against the exact one- and
two-mode QFI and against finite differences of the defining fidelity limit;
see the tests for the numeric evidence.  The expansions assume the generic
mode-entangling situation in which the probe purity degrades quadratically in
eps (environment coupling present); strictly unitary probe-only channels fall
outside their scope.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .bogoliubov import BogoliubovTransform, global_moments
from .errors import InsufficientTaylorDataError, RegimeError
from .gaussian_core import ThermalSqueezedSpec

VALIDITY_THRESHOLD = 0.1


@dataclass(frozen=True)
class TaylorChannel:
    """Per-order Bogoliubov coefficients of a polynomial channel family.

    ``alpha_orders[k]`` and ``beta_orders[k]`` are the k-th Taylor coefficient
    matrices; the family is exactly the polynomial they define.  Orders beyond
    the stored ones are zero by construction.
    """

    alpha_orders: tuple
    beta_orders: tuple
    tau: float = 0.0

    def __post_init__(self):
        alphas = tuple(np.array(a, dtype=complex) for a in self.alpha_orders)
        betas = tuple(np.array(b, dtype=complex) for b in self.beta_orders)
        if len(alphas) != len(betas) or not alphas:
            raise InsufficientTaylorDataError("alpha and beta need the same order count")
        if len(alphas) < 2:
            raise InsufficientTaylorDataError("at least orders 0 and 1 are required")
        n = alphas[0].shape[0]
        for m in alphas + betas:
            if m.shape != (n, n):
                raise ValueError("all coefficient matrices must share one shape")
            m.setflags(write=False)
        a0, b0 = alphas[0], betas[0]
        off = a0 - np.diag(np.diag(a0))
        if np.abs(off).max() > 1e-12:
            raise ValueError("alpha^(0) must be diagonal (free phases only)")
        if np.abs(np.abs(np.diag(a0)) - 1.0).max() > 1e-10:
            raise ValueError("alpha^(0) entries must have unit modulus")
        if np.abs(b0).max() > 1e-12:
            raise ValueError("beta^(0) must vanish")
        if np.abs(np.diag(alphas[1])).max() > 1e-12 or np.abs(np.diag(betas[1])).max() > 1e-12:
            raise ValueError(
                "diagonal first-order coefficients must vanish (mode-entangling condition)"
            )
        object.__setattr__(self, "alpha_orders", alphas)
        object.__setattr__(self, "beta_orders", betas)

    @property
    def n_modes(self):
        return self.alpha_orders[0].shape[0]

    @property
    def order(self):
        return len(self.alpha_orders) - 1

    @property
    def phases(self):
        """Free-evolution phase G_m per mode (diagonal of alpha^(0))."""
        return np.diag(self.alpha_orders[0]).copy()

    def alpha(self, k):
        if k <= self.order:
            return self.alpha_orders[k]
        return np.zeros((self.n_modes, self.n_modes), dtype=complex)

    def beta(self, k):
        if k <= self.order:
            return self.beta_orders[k]
        return np.zeros((self.n_modes, self.n_modes), dtype=complex)

    def transform_at(self, eps):
        """Assembled finite-eps transform (the polynomial evaluated at eps)."""
        a = sum(self.alpha(k) * eps**k for k in range(self.order + 1))
        b = sum(self.beta(k) * eps**k for k in range(self.order + 1))
        return BogoliubovTransform(a, b)

    def identity_residuals_by_order(self):
        """Max-entry residual of both Bogoliubov identities at each order."""
        out = []
        eye = np.eye(self.n_modes)
        for k in range(self.order + 1):
            first = sum(self.alpha(p) @ self.alpha(k - p).conj().T
                        - self.beta(p) @ self.beta(k - p).conj().T
                        for p in range(k + 1))
            second = sum(self.alpha(p) @ self.beta(k - p).T
                         - self.beta(p) @ self.alpha(k - p).T
                         for p in range(k + 1))
            if k == 0:
                first = first - eye
            out.append((float(np.abs(first).max()), float(np.abs(second).max())))
        return out


def taylor_from_callable(fn, n_modes, order=2, h=1e-3):
    """Extract Taylor coefficient matrices from eps -> (alpha, beta) numerically.

    Central differences with Richardson extrapolation over steps {h, h/2}.
    """
    def stack(eps):
        a, b = fn(eps)
        return np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)

    def coeffs(step):
        f = {k: stack(k * step) for k in (-2, -1, 0, 1, 2)}
        out = [f[0]]
        if order >= 1:
            out.append(tuple((f[1][i] - f[-1][i]) / (2 * step) for i in range(2)))
        if order >= 2:
            out.append(tuple((f[1][i] - 2 * f[0][i] + f[-1][i]) / (2 * step**2)
                             for i in range(2)))
        if order >= 3:
            out.append(tuple((f[2][i] - 2 * f[1][i] + 2 * f[-1][i] - f[-2][i])
                             / (12 * step**3) for i in range(2)))
        return out

    c_h = coeffs(h)
    c_h2 = coeffs(h / 2)
    alphas, betas = [], []
    for k in range(order + 1):
        if k == 0:
            a, b = c_h2[0]
        else:
            # error of the central stencils is O(step^2)
            a = (4 * c_h2[k][0] - c_h[k][0]) / 3
            b = (4 * c_h2[k][1] - c_h[k][1]) / 3
        alphas.append(a)
        betas.append(b)
    return TaylorChannel(tuple(alphas), tuple(betas))


@dataclass(frozen=True)
class CovarianceSeries:
    """Taylor coefficients of the post-channel probe covariance blocks."""

    X: tuple   # X[k]: k-th order block over the probe modes
    Y: tuple
    modes: tuple

    def x_diag(self, order, which):
        return float(self.X[order][which, which].real)

    def x_off(self, order):
        return complex(self.X[order][0, 1])

    def y_elem(self, order, i, j):
        return complex(self.Y[order][i, j])


def expand_covariance(spec, env_nu, channel, modes, orders=3):
    """Expand the post-channel covariance of the probe in powers of eps.

    Substitutes the per-order coefficients into the channel element formulas
    and collects powers through ``orders`` (default 3).  The probe is defined
    by ``spec`` on ``modes``; every other mode is thermal with ``env_nu``.
    """
    modes = tuple(modes)
    n = channel.n_modes
    probe = spec.state()
    X0, Y0, d0 = global_moments(probe, modes, env_nu, n)
    sel = np.ix_(modes, modes)
    xs, ys = [], []
    for k in range(orders + 1):
        Xk = np.zeros((n, n), dtype=complex)
        Yk = np.zeros((n, n), dtype=complex)
        # element formulas are bilinear in (alpha, beta) pairs of orders (p, k-p)
        for p in range(k + 1):
            ap, bp = channel.alpha(p), channel.beta(p)
            aq, bq = channel.alpha(k - p), channel.beta(k - p)
            Xk += (np.einsum("ia,ab,jb->ij", ap.conj(), X0, aq)
                   - np.einsum("ia,ab,jb->ij", bp.conj(), Y0.conj(), aq)
                   - np.einsum("ia,ab,jb->ij", ap.conj(), Y0, bq)
                   + np.einsum("ia,ab,jb->ij", bp.conj(), X0.conj(), bq))
            Yk += (-np.einsum("ia,ab,jb->ij", ap.conj(), X0, bq.conj())
                   + np.einsum("ia,ab,jb->ij", bp.conj(), Y0.conj(), bq.conj())
                   + np.einsum("ia,ab,jb->ij", ap.conj(), Y0, aq.conj())
                   - np.einsum("ia,ab,jb->ij", bp.conj(), X0.conj(), aq.conj()))
        xs.append(Xk[sel])
        ys.append(Yk[sel])
    return CovarianceSeries(X=tuple(xs), Y=tuple(ys), modes=modes)


# -- regime containers --------------------------------------------------------

@dataclass(frozen=True)
class RegimeQfi:
    """Regime-tagged QFI coefficients with a validity window.

    ``value(eps)`` refuses evaluation outside the window unless forced, in
    which case it warns and proceeds.
    """

    regime: str
    coefficients: dict
    validity: str
    _window: object = field(repr=False, default=None)
    _evaluate: object = field(repr=False, default=None)

    def validity_ratio(self, eps):
        return self._window(eps) if self._window is not None else 0.0

    def value(self, eps, force=False):
        ratio = self.validity_ratio(eps)
        if ratio > VALIDITY_THRESHOLD:
            msg = (f"{self.regime}: eps = {eps:g} violates the validity window "
                   f"({self.validity}; ratio {ratio:.3g} > {VALIDITY_THRESHOLD})")
            if not force:
                raise RegimeError(msg, ratio=ratio)
            warnings.warn(msg, stacklevel=2)
        return self._evaluate(eps)


def _channel_pair_data(channel, m, n):
    g = channel.phases
    return channel.alpha(1)[m, n], channel.beta(1)[m, n], g[m], g[n]


def one_mode_zero_temp(series, g_m, r):
    """Zero-temperature one-mode QFI through first order in eps.

    H(eps) = H0 + H1 eps with

        H0 = 2 X2 cosh 2r - 2 Re[G^2 Y2] sinh 2r
        H1 = 4 X3 cosh 2r - 4 Re[G^2 Y3] sinh 2r

    (series entries are Taylor coefficients; valid while e^{2r} eps << 1).
    """
    c2, s2 = np.cosh(2 * r), np.sinh(2 * r)
    g2 = g_m * g_m
    x2, y2 = series.x_diag(2, 0), series.y_elem(2, 0, 0)
    x3, y3 = series.x_diag(3, 0), series.y_elem(3, 0, 0)
    h0 = 2.0 * x2 * c2 - 2.0 * (g2 * y2).real * s2
    h1 = 4.0 * x3 * c2 - 4.0 * (g2 * y3).real * s2
    return RegimeQfi(
        regime="one_mode_zero_temp",
        coefficients={"H0": h0, "H1": h1},
        validity="exp(2r) |eps| << 1",
        _window=lambda eps: np.exp(2 * r) * abs(eps),
        _evaluate=lambda eps: h0 + h1 * eps,
    )


def one_mode_small_temp(h_zero, z):
    """Small-temperature correction H(eps) = H0 - 4 Z^2 / eps^2.

    ``h_zero`` is the zero-temperature zeroth-order value; Z = exp(-E/2T)
    with nu = 1 + 2 Z^2 + O(Z^3).  Valid while Z^2 << eps^2 and while the
    correction stays small next to H0 (it is the first term of an expansion
    in 4 Z^2 / (H0 eps^2), so a correction comparable to H0 signals the
    finite-temperature regime instead).
    """
    h0 = h_zero.coefficients["H0"] if isinstance(h_zero, RegimeQfi) else float(h_zero)

    def window(eps):
        if eps == 0:
            return np.inf
        base = (z * z) / (eps * eps)
        rel = 4.0 * base / abs(h0) if h0 != 0 else (np.inf if z else 0.0)
        return max(base, rel)

    return RegimeQfi(
        regime="one_mode_small_temp",
        coefficients={"H0": h0, "Z": z},
        validity="Z^2 << eps^2 and 4 Z^2 << H0 eps^2",
        _window=window,
        _evaluate=lambda eps: h0 - 4.0 * z * z / (eps * eps),
    )


def one_mode_large_temp(series, g_m, nu, r):
    """Finite-temperature one-mode QFI: H(0) = 0, H(eps) ~ H2 eps^2.

    H2 = |Y2|^2/(nu^2+1) + X2^2/(nu^2-1)
         - 2 nu^2 X2 Re[G^2 Y2] sinh 4r / (nu^4-1)
         + 2 nu^2 (X2^2 + Re[G^2 Y2]^2) sinh^2 2r / (nu^4-1)

    with X2 = 2 x series X-coefficient, Y2 = 2 x series Y-coefficient (second
    derivatives of the state elements).  The last term carries the squared
    real part Re[G^2 Y2]^2: writing it as Re[G^4 Y2^2] instead drops an
    Im[G^2 Y2]^2 piece and fails against the exact QFI whenever the diagonal
    second-order coefficients carry a phase.  Valid while eps^2 << nu - 1.
    """
    if nu <= 1.0:
        raise RegimeError("large-temperature regime needs nu > 1 (use zero_temp at nu = 1)")
    x2 = 2.0 * series.x_diag(2, 0)
    y2 = 2.0 * series.y_elem(2, 0, 0)
    g2 = g_m * g_m
    h2 = (abs(y2) ** 2 / (nu**2 + 1.0)
          + x2**2 / (nu**2 - 1.0)
          - 2.0 * nu**2 * x2 * (g2 * y2).real / (nu**4 - 1.0) * np.sinh(4 * r)
          + 2.0 * nu**2 * (x2**2 + (g2 * y2).real ** 2) / (nu**4 - 1.0)
          * np.sinh(2 * r) ** 2)
    return RegimeQfi(
        regime="one_mode_large_temp",
        coefficients={"H0": 0.0, "H2": h2},
        validity="eps^2 << nu - 1",
        _window=lambda eps: eps * eps / (nu - 1.0),
        _evaluate=lambda eps: h2 * eps * eps,
    )


def two_mode_zero_temp(series, channel, r, m, n):
    """Zero-temperature two-mode QFI through first order.

    H0 = 2 (X2_mm + X2_nn) cosh 2r - 4 |beta1_mn|^2
         - 4 Re[G_m G_n Y2_mn] sinh 2r
         - 4 (|alpha1_mn|^2 + Im[G_m conj(beta1_mn)]^2) sinh^2 2r

    The first-order coefficient is available only at r = 0:
    H1 = 8 Re[G_n beta1_mn Y2_mn] + 4 (X3_mm + X3_nn).
    """
    a1, b1, g_m, g_n = _channel_pair_data(channel, m, n)
    c2, s2 = np.cosh(2 * r), np.sinh(2 * r)
    x2_sum = series.x_diag(2, 0) + series.x_diag(2, 1)
    y2_mn = series.y_elem(2, 0, 1)
    h0 = (2.0 * x2_sum * c2
          - 4.0 * abs(b1) ** 2
          - 4.0 * (g_m * g_n * y2_mn).real * s2
          - 4.0 * (abs(a1) ** 2 + (g_m * np.conj(b1)).imag ** 2) * s2**2)
    coeffs = {"H0": h0}
    if abs(r) < 1e-12:
        x3_sum = series.x_diag(3, 0) + series.x_diag(3, 1)
        coeffs["H1"] = 8.0 * (g_n * b1 * y2_mn).real + 4.0 * x3_sum
        evaluate = lambda eps: coeffs["H0"] + coeffs["H1"] * eps
    else:
        evaluate = lambda eps: coeffs["H0"]
    return RegimeQfi(
        regime="two_mode_zero_temp",
        coefficients=coeffs,
        validity="exp(2r) |eps| << 1",
        _window=lambda eps: np.exp(2 * r) * abs(eps),
        _evaluate=evaluate,
    )


def two_mode_zero_temp_first_order(series, channel, r, m, n):
    """First-order coefficient of the zero-temperature two-mode QFI (r = 0 only)."""
    if abs(r) >= 1e-12:
        raise RegimeError(
            "the first-order zero-temperature coefficient is only available at r = 0"
        )
    return two_mode_zero_temp(series, channel, 0.0, m, n).coefficients["H1"]


def two_mode_small_temp(h_zero, q_m, q_n, z, r=0.0, force=False):
    """Small-temperature two-mode correction H(eps) = H0 - 4 (q_m + q_n) Z^2/eps^2.

    Thermal parameters enter as nu_j = 1 + 2 q_j Z^2.  Verified only for zero
    squeezing; pass force=True to apply it at r != 0 anyway.
    """
    if abs(r) >= 1e-12:
        msg = "the small-temperature correction is only verified at r = 0"
        if not force:
            raise RegimeError(msg)
        warnings.warn(msg, stacklevel=2)
    h0 = h_zero.coefficients["H0"] if isinstance(h_zero, RegimeQfi) else float(h_zero)
    qsum = q_m + q_n

    def window(eps):
        if eps == 0:
            return np.inf
        base = (z * z) / (eps * eps)
        rel = 4.0 * qsum * base / abs(h0) if h0 != 0 else (np.inf if z else 0.0)
        return max(base, rel)

    return RegimeQfi(
        regime="two_mode_small_temp",
        coefficients={"H0": h0, "q_m": q_m, "q_n": q_n, "Z": z},
        validity="Z^2 << eps^2 and 4 (q_m + q_n) Z^2 << H0 eps^2",
        _window=window,
        _evaluate=lambda eps: h0 - 4.0 * qsum * z * z / (eps * eps),
    )


def two_mode_large_temp(series, channel, nu_m, nu_n, r, m, n):
    """Finite-temperature two-mode QFI through first order in eps.

    Zeroth order (exact at eps = 0):

        H0  = h00 + h02 sinh^2 2r
        h00 = 2 (nu_m - nu_n)^2 |a1|^2 / (nu_m nu_n - 1)
            + 2 (nu_m + nu_n)^2 |b1|^2 / (nu_m nu_n + 1)
        h02 = 2 (nu_m + nu_n)^2 ((nu_m nu_n - 1)^2 + nu_m^2 + nu_n^2 - 2) |a1|^2
              / ((nu_m^2+1)(nu_n^2+1)(nu_m nu_n - 1))
            + 2 (nu_m + nu_n)^2 Im[G_m conj(b1)]^2 / (nu_m nu_n + 1)

    First order, with derivative-scaled elements X2 = 2 x2 etc.:

        H1  = h10 + h11 sinh 2r + h12 sinh^2 2r

    h10/h12 weigh Re[G_n conj(a1) conj(X2_mn)] and Re[G_n b1 Y2_mn]; h11
    combines the diagonal X2 elements, an |a1|^2 Re[G_m conj(b1)] piece and
    Re[G_n conj(a1) (conj(G_m G_n Y2_mm) -/+ G_m G_n Y2_nn)] pieces.  All
    coefficients below were validated against the exact QFI.
    """
    if nu_m <= 1.0 or nu_n <= 1.0:
        raise RegimeError("large-temperature regime needs nu > 1 on both modes")
    a1, b1, g_m, g_n = _channel_pair_data(channel, m, n)
    s2, c2 = np.sinh(2 * r), np.cosh(2 * r)
    h00_alpha = 2.0 * (nu_m - nu_n) ** 2 * abs(a1) ** 2 / (nu_m * nu_n - 1.0)
    h00_beta = 2.0 * (nu_m + nu_n) ** 2 * abs(b1) ** 2 / (nu_m * nu_n + 1.0)
    h00 = h00_alpha + h00_beta
    h02 = (2.0 * (nu_m + nu_n) ** 2
           * ((nu_m * nu_n - 1.0) ** 2 + nu_m**2 + nu_n**2 - 2.0) * abs(a1) ** 2
           / ((nu_m**2 + 1.0) * (nu_n**2 + 1.0) * (nu_m * nu_n - 1.0))
           + 2.0 * (nu_m + nu_n) ** 2 * (g_m * np.conj(b1)).imag ** 2
           / (nu_m * nu_n + 1.0))

    x2_mm = 2.0 * series.x_diag(2, 0)
    x2_nn = 2.0 * series.x_diag(2, 1)
    x2_mn = 2.0 * series.x_off(2)
    y2_mm = 2.0 * series.y_elem(2, 0, 0)
    y2_nn = 2.0 * series.y_elem(2, 1, 1)
    y2_mn = 2.0 * series.y_elem(2, 0, 1)

    h10 = 4.0 * ((nu_n - nu_m) / (nu_m * nu_n - 1.0)
                 * (g_n * np.conj(a1) * np.conj(x2_mn)).real
                 - (nu_m + nu_n) / (nu_m * nu_n + 1.0)
                 * (g_n * b1 * y2_mn).real * c2)
    rb = (g_m * np.conj(b1)).real
    w_mm = np.conj(g_m) * np.conj(g_n) * np.conj(y2_mm)
    w_nn = g_m * g_n * y2_nn
    h11 = (2.0 * (nu_m + nu_n) * rb / (nu_m * nu_n + 1.0) * (x2_mm + x2_nn)
           - 16.0 * nu_m * nu_n * (nu_m**2 - nu_n**2) ** 2 * abs(a1) ** 2 * rb
           / ((nu_m**2 + 1.0) * (nu_n**2 + 1.0) * (nu_m**2 * nu_n**2 - 1.0)) * c2
           + 2.0 * (nu_m + nu_n) * (nu_m * nu_n + 1.0)
           / ((nu_m**2 + 1.0) * (nu_n**2 + 1.0))
           * (g_n * np.conj(a1) * (w_mm - w_nn)).real
           + 2.0 * (nu_m - nu_n) * (nu_m + nu_n) ** 2
           / ((nu_m**2 + 1.0) * (nu_n**2 + 1.0) * (nu_m * nu_n - 1.0))
           * (g_n * np.conj(a1) * (w_mm + w_nn)).real * c2)
    h12 = (4.0 * (nu_n - nu_m) * (nu_n + nu_m) ** 2
           * (g_n * np.conj(a1) * np.conj(x2_mn)).real
           / ((1.0 + nu_m**2) * (1.0 + nu_n**2) * (nu_m * nu_n - 1.0)))

    h0 = h00 + h02 * s2**2
    h1 = h10 + h11 * s2 + h12 * s2**2
    nu_gap = min(nu_m, nu_n) - 1.0
    return RegimeQfi(
        regime="two_mode_large_temp",
        coefficients={"H0": h0, "H1": h1, "h00": h00, "h00_alpha": h00_alpha,
                      "h00_beta": h00_beta, "h02": h02, "h10": h10, "h11": h11,
                      "h12": h12},
        validity="eps^2 << min(nu) - 1",
        _window=lambda eps: eps * eps / nu_gap,
        _evaluate=lambda eps: h0 + h1 * eps,
    )


def two_mode_squeezed_vacuum_baseline(channel, r, m, n):
    """Pure limit (nu -> 1+) of the finite-temperature two-mode zeroth order:

        H = 4 |beta1_mn|^2 + 4 (|alpha1_mn|^2 + Im[G_m conj(beta1_mn)]^2) sinh^2 2r

    The equal-temperature zeroth order approaches exactly twice this value as
    nu grows.  Note this is not the zero-temperature Bures-limit QFI, which
    additionally sees the second-order environment couplings (the QFI is
    discontinuous across the purity boundary).
    """
    a1, b1, g_m, _ = _channel_pair_data(channel, m, n)
    s2 = np.sinh(2 * r)
    return 4.0 * abs(b1) ** 2 + 4.0 * (abs(a1) ** 2 + (g_m * np.conj(b1)).imag ** 2) * s2**2


def probe_spec(mode_indices, nu, r):
    """Convenience constructor for the probe parameter bundle."""
    nu_tuple = (nu,) if np.isscalar(nu) else tuple(nu)
    return ThermalSqueezedSpec(mode_indices=tuple(mode_indices), nu=nu_tuple, r=r)
