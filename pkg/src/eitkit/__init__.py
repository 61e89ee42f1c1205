"""Simulation and fitting toolkit for Doppler-broadened transparency resonances.

The package models a three-level lambda atom driven by a strong pump and a
weak signal, averages its response over the thermal velocity distribution,
propagates the fields through an optically thick vapor cell, and extracts
decoherence rates from measured or synthetic linewidth data.
"""

__version__ = "0.1.0"

from .atom import (
    DensityMatrix3,
    LambdaSystem,
    bloch_steady_state,
    extrapolated_coherence_ratio,
    linear_coherence,
    steady_coherence_ab,
)
from .doppler import (
    DopplerProfile,
    MediumConfig,
    ProfileShape,
    average_susceptibility_closed,
    average_susceptibility_numeric,
    doppler_width,
    profile_density,
)
from .errors import (
    Ambiguous,
    ConfigError,
    DataError,
    DegenerateData,
    EitkitError,
    NoConvergence,
    NoDip,
    PoleError,
    QuadratureFailure,
    RangeError,
    RankDeficient,
    SingularLiouvillian,
    ValidityError,
)
from .config import RunConfig, default_config, load_config, with_overrides
from .fitting import (
    FitResult,
    LinewidthSeries,
    ModelComparison,
    compare_models,
    fit_linear,
    fit_lorentzian,
    fit_popexchange,
    least_squares_lm,
    lorentzian_model,
)
from .lineshape import (
    LineshapeParams,
    ResonanceScan,
    absorption_coefficient,
    dephasing_scan,
    fwhm_dephasing,
    fwhm_numeric,
    fwhm_popexchange_asymptote,
    lineshape_params,
    popexchange_scan_numeric,
)
from .propagation import (
    ALCOCK_RB,
    CellModel,
    PowerSweep,
    VaporPressureCoefficients,
    linewidth_vs_power,
    pump_profile,
    rabi_from_power,
    rb_number_density,
    slope_vs_temperature,
    thick_cell_scan,
)
from .quadrature import QuadratureConfig, integrate_adaptive
