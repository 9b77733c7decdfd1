"""uniscat: momentum-space scattering and one-way-invisible potentials.

The package splits along the physics pipeline:

* :mod:`uniscat.grids` for wavenumber bookkeeping and the momentum grid,
* :mod:`uniscat.envelopes` and :mod:`uniscat.potentials` for potential
  specifications and their Fourier transforms,
* :mod:`uniscat.construct` for the three-harmonic one-way-invisible family,
* :mod:`uniscat.born` for first-order amplitudes (numeric and closed form),
* :mod:`uniscat.xfermat` for the full transfer matrix, its conservation
  laws, and scattering classification,
* :mod:`uniscat.empower` for power observables and the screen benchmark,
* :mod:`uniscat.cli` for the command-line front end.
"""

from .born import (
    AmplitudeTable,
    TransferTable,
    amplitude_from_t,
    amplitude_table,
    born_f_2d,
    born_f_3d,
    born_t_2d,
    born_t_3d,
    born_t_values,
    closed_form_f_left,
    closed_form_t_left,
)
from .construct import (
    ConstructionParams,
    build_potential_2d,
    build_potential_3d,
    constructed_ft_2d,
    constructed_ft_3d,
    fourier_coeff_ft,
    phase_over_offset,
    potential_value_2d,
    potential_value_3d,
    series_ft_2d,
)
from .empower import (
    EXTINCTION_FACTOR,
    PowerCurve,
    PowerSummary,
    ScreenSpec,
    SparseArcWarning,
    delta_u_S,
    fig2_curves,
    screen_power,
    screen_power_oracle,
    total_power_changes,
    xi,
)
from .envelopes import (
    Envelope,
    envelope_ft,
    gaussian_envelope,
    quartic_envelope,
    tabulated_envelope,
)
from .grids import MomentumGrid, WaveContext, delta_vector, gauss_grid, omega, p_plus_minus
from .potentials import (
    PotentialSpec,
    SeparableTerm,
    potential_from_samples,
    potential_ft,
    random_smooth_potential,
    sample_potential,
)
from .xfermat import (
    AsymptoticCoeffs,
    CurrentSample,
    IntegrationError,
    SpectralSingularityWarning,
    TransferOperator,
    amplitude_table_from_operator,
    born_operator,
    check_symplectic,
    conserved_current,
    default_slices,
    effective_hamiltonian,
    evolve_transfer,
    extract_t,
    operator_to_dict,
    predicates,
    scattering_coeffs,
    transfer_tables,
)

__version__ = "0.1.0"

__all__ = [
    "AmplitudeTable",
    "AsymptoticCoeffs",
    "ConstructionParams",
    "CurrentSample",
    "EXTINCTION_FACTOR",
    "Envelope",
    "IntegrationError",
    "MomentumGrid",
    "PotentialSpec",
    "PowerCurve",
    "PowerSummary",
    "ScreenSpec",
    "SeparableTerm",
    "SparseArcWarning",
    "SpectralSingularityWarning",
    "TransferOperator",
    "TransferTable",
    "WaveContext",
    "amplitude_from_t",
    "amplitude_table",
    "amplitude_table_from_operator",
    "born_f_2d",
    "born_f_3d",
    "born_operator",
    "born_t_2d",
    "born_t_3d",
    "born_t_values",
    "build_potential_2d",
    "build_potential_3d",
    "check_symplectic",
    "closed_form_f_left",
    "closed_form_t_left",
    "conserved_current",
    "constructed_ft_2d",
    "constructed_ft_3d",
    "default_slices",
    "delta_u_S",
    "delta_vector",
    "effective_hamiltonian",
    "envelope_ft",
    "evolve_transfer",
    "extract_t",
    "fig2_curves",
    "fourier_coeff_ft",
    "gauss_grid",
    "gaussian_envelope",
    "omega",
    "operator_to_dict",
    "p_plus_minus",
    "phase_over_offset",
    "potential_from_samples",
    "potential_ft",
    "potential_value_2d",
    "potential_value_3d",
    "predicates",
    "quartic_envelope",
    "random_smooth_potential",
    "sample_potential",
    "scattering_coeffs",
    "screen_power",
    "screen_power_oracle",
    "series_ft_2d",
    "tabulated_envelope",
    "total_power_changes",
    "transfer_tables",
    "xi",
]
