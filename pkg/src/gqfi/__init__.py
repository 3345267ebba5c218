"""Precision bounds for mixed Gaussian probes under Bogoliubov channels."""

from .bogoliubov import (
    BogoliubovTransform,
    ChannelResult,
    apply_channel,
    covariance_elements_general,
    covariance_elements_one_mode,
    covariance_elements_two_mode,
    mode_function_form,
    operator_form,
)
from .cavity import (
    CavityScenario,
    cavity_channel,
    cavity_transform,
    fig1_sweep,
    fig2_sweep,
    first_order_transform,
    write_sweep_csv,
)
from .fidelity import (
    FidelityInvariants,
    bures_distance,
    fidelity,
    fidelity_one_mode,
    fidelity_two_mode,
    fock_fidelity_oracle,
    invariants,
)
from .gaussian_core import (
    GaussianState,
    RealFormState,
    ThermalSqueezedSpec,
    apply_symplectic,
    complex_to_real,
    k_matrix,
    nu_from_temperature,
    one_mode_squeezed_thermal,
    real_to_complex,
    two_mode_squeezed_thermal,
    vacuum_state,
)
from .perturbative import (
    CovarianceSeries,
    RegimeQfi,
    TaylorChannel,
    expand_covariance,
    one_mode_large_temp,
    one_mode_small_temp,
    one_mode_zero_temp,
    probe_spec,
    taylor_from_callable,
    two_mode_large_temp,
    two_mode_small_temp,
    two_mode_squeezed_vacuum_baseline,
    two_mode_zero_temp,
    two_mode_zero_temp_first_order,
)
from .qfi import (
    NumericQfiResult,
    QfiResult,
    StateCurve,
    qfi_displacement_term,
    qfi_exact,
    qfi_numeric,
    qfi_one_mode_exact,
    qfi_two_mode_exact,
)

__version__ = "0.1.0"

__all__ = [
    "BogoliubovTransform",
    "CavityScenario",
    "ChannelResult",
    "CovarianceSeries",
    "FidelityInvariants",
    "GaussianState",
    "NumericQfiResult",
    "QfiResult",
    "RealFormState",
    "RegimeQfi",
    "StateCurve",
    "TaylorChannel",
    "ThermalSqueezedSpec",
    "apply_channel",
    "apply_symplectic",
    "bures_distance",
    "cavity_channel",
    "cavity_transform",
    "complex_to_real",
    "covariance_elements_general",
    "covariance_elements_one_mode",
    "covariance_elements_two_mode",
    "expand_covariance",
    "fidelity",
    "fidelity_one_mode",
    "fidelity_two_mode",
    "fig1_sweep",
    "fig2_sweep",
    "first_order_transform",
    "fock_fidelity_oracle",
    "invariants",
    "k_matrix",
    "mode_function_form",
    "nu_from_temperature",
    "one_mode_large_temp",
    "one_mode_small_temp",
    "one_mode_squeezed_thermal",
    "one_mode_zero_temp",
    "operator_form",
    "probe_spec",
    "qfi_displacement_term",
    "qfi_exact",
    "qfi_numeric",
    "qfi_one_mode_exact",
    "qfi_two_mode_exact",
    "real_to_complex",
    "taylor_from_callable",
    "two_mode_large_temp",
    "two_mode_small_temp",
    "two_mode_squeezed_thermal",
    "two_mode_squeezed_vacuum_baseline",
    "two_mode_zero_temp",
    "two_mode_zero_temp_first_order",
    "vacuum_state",
    "write_sweep_csv",
]
