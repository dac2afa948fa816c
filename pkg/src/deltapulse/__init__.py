"""Vacuum energy of a massless 1+1D scalar field near a switched-off delta potential."""
from .energy import (
    DensitySample,
    EnergyReport,
    pulse_density,
    pulse_mode_density,
    quasistatic_mode_energy_change,
    quasistatic_total,
    radiated_energy,
    static_density_continuum,
    static_mode_density,
    static_regularized_mode_density,
    static_total_energy,
    step_mode_energy_change,
    step_mode_energy_change_exact,
)
from .modes import (
    BoxSpectrum,
    IntegrationError,
    c_ode,
    c_rational,
    c_static,
    c_step,
    g_rational,
    mode_amplitude,
    mode_function,
    post_switch_c,
    quantized_frequencies,
)
from .potential import (
    PotentialProfile,
    ProfileError,
    ProfileKind,
    accumulated_F,
    lambda_at,
    switch_off_duration,
)
from .quadrature import (
    QuadratureError,
    QuadratureSpec,
    integrate_1d,
    integrate_2d,
    integrate_semi_infinite,
)

__version__ = "0.1.0"
