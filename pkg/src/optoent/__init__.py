"""Sideband entanglement of a three-mode optomechanical cavity.

Frequency-domain noise spectra of the two output sidebands of a pumped
membrane-in-cavity system: optimal EPR-type combinations and the sum
entanglement criterion, two-carrier (synodyne) detection, a parametric-
amplifier reference, a back-action-evading force sensor, and the classical
mean-field stability map against pump detuning.
"""

__version__ = "0.1.0"

from .entanglement import (
    CombinationWeights,
    DuanSimonVerdict,
    EprSpectrum,
    cooled_occupation,
    duan_simon_check,
    duan_simon_minimum,
    entanglement_bandwidth,
    epr_psd,
    optimal_spectrum,
    optimize_weights,
    phase_partner_psd,
    thermal_floor,
    zero_frequency_minimum,
)
from .errors import (
    BandwidthUndefinedError,
    InfeasibleTargetError,
    InvalidParameterError,
    NonStationaryError,
    NormalizationError,
    NoSignalError,
    OptoentError,
    PreconditionError,
    SingularResponseError,
    ThresholdError,
)
from .linear_response import (
    QuadratureScattering,
    TransferCoefficients,
    check_commutators,
    default_grid,
    scattering_from_formulas,
    single_mode_psd,
    solve_fluctuations,
    susceptibilities,
)
from .params import (
    DerivedParams,
    PhysicalParams,
    couplings_for_target,
    derive,
    fig_spectrum,
    fig_stability,
    load_params_file,
    params_from_targets,
    preset,
    table1,
)
from .parametric_ref import OpaParams, match_gain_for_depth, opa_bandwidth, opa_minimum, opa_psd
from .stability import (
    MeanFieldState,
    StabilityPoint,
    detuning_sweep,
    integrate_mean_field,
    jacobian_eigenvalues,
    steady_state,
)
from .synodyne import (
    LocalOscillator,
    photocurrent_weights,
    synodyne_bandwidth,
    synodyne_psd,
    synodyne_psd_formula,
)
from .variational_sensor import (
    SensorParams,
    back_action_evading,
    force_noise_psd,
    sensor_from_system,
    sensor_transfer,
)
