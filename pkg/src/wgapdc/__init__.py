"""Spatio-spectral simulator for photon-pair generation in waveguide arrays."""

from .correlations import (
    BranchPoint,
    CorrelationMaps,
    SpatioSpectralMap,
    branch_analysis,
    correlation_maps,
    gamma_k,
    gamma_k_omega,
    gamma_n,
    phase_matching_curve,
    smooth_spectral,
    spatial_marginal,
    spatio_spectral_intensity,
    spectral_marginal,
)
from .jsa import (
    ArrayGeometry,
    Grid,
    JsaTensor,
    KWindow,
    PerChannel,
    PumpSpec,
    apply_spectral_filter,
    build_jsa,
    delta_beta_array,
    normalize,
    phase_match_factor,
    pump_bloch_distribution,
    pump_spectral_amplitude,
    total_power,
    wrap_to_zone,
)
from .material import (
    MaterialModel,
    beta0,
    coupling,
    delta_beta_omega,
    fit_qpm_period,
    refractive_index,
)

__version__ = "0.1.0"
