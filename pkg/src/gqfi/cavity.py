"""Accelerated-cavity channel: perturbative Bogoliubov coefficients and the
precision-bound sweep generators.

Scenario: a cavity of unit proper length is uniformly accelerated for proper
time tau and decelerated for another tau; the proper acceleration ``a`` is the
parameter to estimate.  Mode frequencies are omega_n = n pi, the free phases
over the full protocol are G_n = exp(i omega_n 2 tau), and the first-order
coefficients decay cubically with mode distance:

    alpha1_mn = -8i sqrt(mn) / ((m-n)^3 pi^2) e^{i pi (m+n-2m tau+6n tau)/2}
                sin((m+n) pi/2) sin^2((m-n) pi tau/2)        (m != n)
    beta1_mn  = -8i sqrt(mn) / ((m+n)^3 pi^2) e^{i pi (m+n+2m tau-2n tau)/2}
                sin((m+n) pi/2) sin^2((m+n) pi tau/2)

The tau-dependent part of the beta phase is chosen so that the Bogoliubov
identities hold at first order for every tau (the combination with the
opposite sign satisfies them only at integer tau).  Both coefficients vanish
for even m + n.

Second-order coefficients are not known at this order; only the diagonal
combination 2 Re[conj(G_m) alpha2_mm] is fixed by the first identity at
second order, and that closure is applied (imaginary part set to zero).
Sweep outputs built on this channel are therefore exact at eps = 0 and
qualitative beyond.
"""

from dataclasses import dataclass

import numpy as np

from .bogoliubov import BogoliubovTransform
from .errors import RegimeError
from .perturbative import (
    TaylorChannel,
    expand_covariance,
    one_mode_zero_temp,
    probe_spec,
    two_mode_large_temp,
    two_mode_zero_temp,
)

DEFAULT_N = 10
CSV_HEADER = ("tau", "r", "nu1", "nu2", "H", "regime", "N_trunc")


@dataclass(frozen=True)
class CavityScenario:
    """Protocol parameters; the cavity length is fixed to 1."""

    tau: float
    a: float = 0.0
    n_trunc: int = DEFAULT_N

    def __post_init__(self):
        if self.n_trunc < 3:
            raise ValueError("the mode truncation must keep at least 3 modes")

    @property
    def omega(self):
        """Mode frequencies n pi for n = 1..N."""
        return np.pi * np.arange(1, self.n_trunc + 1)

    @property
    def phases(self):
        """Free-evolution phases over the total elapsed time 2 tau."""
        return np.exp(1j * self.omega * 2.0 * self.tau)


def first_order_coefficients(tau, n_trunc=DEFAULT_N):
    """First-order coefficient matrices (per unit acceleration), modes 1..N."""
    m = np.arange(1, n_trunc + 1)[:, None].astype(float)
    n = np.arange(1, n_trunc + 1)[None, :].astype(float)
    # sin((m + n) pi / 2) is exactly zero for even m + n and +/-1 otherwise
    s_plus = np.where((m + n) % 2 == 0, 0.0, np.sign(np.sin((m + n) * np.pi / 2.0)))
    root = np.sqrt(m * n)
    with np.errstate(divide="ignore", invalid="ignore"):
        alpha1 = (-8j * root / ((m - n) ** 3 * np.pi**2)
                  * np.exp(0.5j * np.pi * (m + n - 2 * m * tau + 6 * n * tau))
                  * s_plus * np.sin((m - n) * np.pi * tau / 2.0) ** 2)
    np.fill_diagonal(alpha1, 0.0)
    beta1 = (-8j * root / ((m + n) ** 3 * np.pi**2)
             * np.exp(0.5j * np.pi * (m + n + 2 * m * tau - 2 * n * tau))
             * s_plus * np.sin((m + n) * np.pi * tau / 2.0) ** 2)
    return alpha1, beta1


def cavity_channel(scenario):
    """TaylorChannel of the scenario, closed through second order.

    The second-order coefficients are not known from the printed data; the
    parts of alpha2 and beta2 that the Bogoliubov identities determine at
    O(eps^2) are reconstructed from the first-order coefficients:

        alpha^(0) alpha^(2)^dag + h.c. = beta1 beta1^dag - alpha1 alpha1^dag
        alpha^(0) beta^(2)^T - beta^(2) alpha^(0)^T
                                       = beta1 alpha1^T - alpha1 beta1^T

    fix the Hermitian part of diag(conj G) alpha2 and the antisymmetric part
    of diag(conj G) beta2; the undetermined parts are set to zero.  The
    resulting polynomial satisfies both identities through O(eps^2), so it is
    exact at eps = 0 and qualitative at the next orders.
    """
    n_tr = scenario.n_trunc
    alpha1, beta1 = first_order_coefficients(scenario.tau, n_tr)
    g = scenario.phases
    m_def = beta1 @ beta1.conj().T - alpha1 @ alpha1.conj().T
    alpha2 = np.diag(g) @ (g.conj()[:, None] * m_def * g[None, :]) / 2.0
    n_def = beta1 @ alpha1.T - alpha1 @ beta1.T
    beta2 = np.diag(g) @ (-(g.conj()[:, None] * n_def * g.conj()[None, :]) / 2.0)
    return TaylorChannel(
        alpha_orders=(np.diag(g), alpha1, alpha2),
        beta_orders=(np.zeros((n_tr, n_tr), dtype=complex), beta1, beta2),
        tau=scenario.tau,
    )


def cavity_transform(scenario):
    """Assembled finite-acceleration transform (polynomial at eps = a)."""
    return cavity_channel(scenario).transform_at(scenario.a)


def first_order_transform(scenario):
    """Transform assembled from the first-order data alone.

    Its identity residuals scale as O(a^2), reflecting the truncation of the
    printed coefficients; the closed channel from cavity_channel pushes the
    defect one order further.
    """
    alpha1, beta1 = first_order_coefficients(scenario.tau, scenario.n_trunc)
    return BogoliubovTransform(np.diag(scenario.phases) + scenario.a * alpha1,
                               scenario.a * beta1)


def _require_probe_mode(mode, n_trunc):
    """Cubic coefficient decay needs ~8 modes of headroom above the probe."""
    if not 1 <= mode <= n_trunc - 8:
        raise ValueError(
            f"probe mode {mode} needs at least 8 modes of headroom below the "
            f"truncation N={n_trunc}"
        )


def fig1_sweep(r_values=(0.0, 0.5, 1.0, 1.5, 2.0), tau_grid=None, m=1,
               n_trunc=DEFAULT_N):
    """Zero-temperature one-mode precision sweep: rows of (tau, r, H0).

    ``m`` is the physical probe mode number (1-based).
    """
    if tau_grid is None:
        tau_grid = np.arange(0.0, 6.0 + 1e-12, 0.01)
    _require_probe_mode(m, n_trunc)
    rows = []
    for tau in tau_grid:
        channel = cavity_channel(CavityScenario(tau=float(tau), n_trunc=n_trunc))
        g_m = channel.phases[m - 1]
        for r in r_values:
            spec = probe_spec((m - 1,), 1.0, float(r))
            series = expand_covariance(spec, 1.0, channel, (m - 1,))
            reg = one_mode_zero_temp(series, g_m, float(r))
            rows.append((float(tau), float(r), 1.0, None, reg.coefficients["H0"],
                         reg.regime, n_trunc))
    return rows


def fig2_sweep(nu_pairs=((1.0, 1.0), (2.0, 2.0), (2.0, 6.0), (2.0, 10.0),
                         (6.0, 6.0), (6.0, 10.0), (10.0, 10.0)),
               r_values=(0.0, 0.5, 1.0, 1.5, 2.0), tau_grid=None, m=1, n=2,
               n_trunc=DEFAULT_N):
    """Two-mode precision sweep over temperature pairs: rows of
    (tau, r, nu1, nu2, H0).

    Pairs with both nu = 1 go through the zero-temperature expression, pairs
    with both nu > 1 through the finite-temperature one; mixed pairs are not
    covered by either regime.
    """
    if tau_grid is None:
        tau_grid = np.arange(0.0, 6.0 + 1e-12, 0.01)
    if m == n:
        raise ValueError("probe modes must differ")
    _require_probe_mode(max(m, n), n_trunc)
    for nu1, nu2 in nu_pairs:
        if (nu1 == 1.0) != (nu2 == 1.0):
            raise RegimeError(
                f"pair ({nu1}, {nu2}) mixes zero- and finite-temperature modes"
            )
    rows = []
    for tau in tau_grid:
        channel = cavity_channel(CavityScenario(tau=float(tau), n_trunc=n_trunc))
        for nu1, nu2 in nu_pairs:
            for r in r_values:
                spec = probe_spec((m - 1, n - 1), (float(nu1), float(nu2)), float(r))
                series = expand_covariance(spec, 1.0, channel, (m - 1, n - 1))
                if nu1 == 1.0 and nu2 == 1.0:
                    reg = two_mode_zero_temp(series, channel, float(r), m - 1, n - 1)
                else:
                    reg = two_mode_large_temp(series, channel, float(nu1), float(nu2),
                                              float(r), m - 1, n - 1)
                rows.append((float(tau), float(r), float(nu1), float(nu2),
                             reg.coefficients["H0"], reg.regime, n_trunc))
    return rows


def format_csv_value(value):
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".12g")


def write_sweep_csv(rows, path):
    """Write sweep rows with the fixed 7-column header, 12 significant digits."""
    lines = [",".join(CSV_HEADER)]
    for row in rows:
        lines.append(",".join(format_csv_value(v) for v in row))
    text = "\n".join(lines) + "\n"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return text
