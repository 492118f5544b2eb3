"""Driven finite-level quantum systems: deterministic propagation in the
interaction picture, extraction of the complex sub-phase (log-amplitude and
unwrapped phase) of each coefficient, resonance-shift prediction, and
stability classification of initial states.
"""

from .analysis import (
    ExtractionConfig,
    classify_stability,
    density_matrix,
    dephase,
    effective_shift,
    expectation,
    extract,
    predicted_resonance,
    samuel_bhandari_phase,
    von_neumann_entropy,
)
from .core import (
    CRITICAL,
    STABLE,
    UNDETERMINED,
    UNSTABLE,
    CoefficientTrajectory,
    ConfigurationError,
    Constant,
    DensityMatrixSnapshot,
    DivergenceError,
    DriveSpec,
    DriveTerm,
    EnergySpectrum,
    EnvelopeOverflowError,
    Exponential,
    PoleError,
    SlowGauge,
    StabilityVerdict,
    SubPhaseTrajectory,
    TimeGrid,
    UndefinedPhaseError,
    drive_stack,
    evaluate_drive,
    is_hermitian,
)
from .models import (
    PerturbationScenario,
    TwoLevelScenario,
    a21_closed_form,
    a21_quadrature,
    a21_rate,
    default_floor,
    perturbation_drive_spec,
    perturbative_c_exact,
    perturbative_c_markov,
    phi21_closed_form,
    phi21_quadrature,
    phi21_rate,
    transition_probability_from_a,
    two_level_drive_spec,
    two_level_markov_c21,
)
from .propagator import (
    IntegratorConfig,
    convergence_report,
    propagate,
    propagate_with_initial,
)
from .scan import (
    BoundaryPeakWarning,
    FlatPeakWarning,
    ScanRequest,
    ScanResult,
    find_peak,
    resonance_scan,
)
from .scenario import Scenario, load_scenario, parse_scenario

__version__ = "0.1.0"

__all__ = [
    "BoundaryPeakWarning",
    "CRITICAL",
    "CoefficientTrajectory",
    "ConfigurationError",
    "Constant",
    "DensityMatrixSnapshot",
    "DivergenceError",
    "DriveSpec",
    "DriveTerm",
    "EnergySpectrum",
    "EnvelopeOverflowError",
    "Exponential",
    "ExtractionConfig",
    "FlatPeakWarning",
    "IntegratorConfig",
    "PerturbationScenario",
    "PoleError",
    "STABLE",
    "ScanRequest",
    "ScanResult",
    "Scenario",
    "SlowGauge",
    "StabilityVerdict",
    "SubPhaseTrajectory",
    "TimeGrid",
    "TwoLevelScenario",
    "UNDETERMINED",
    "UNSTABLE",
    "UndefinedPhaseError",
    "a21_closed_form",
    "a21_quadrature",
    "a21_rate",
    "classify_stability",
    "convergence_report",
    "default_floor",
    "density_matrix",
    "dephase",
    "drive_stack",
    "effective_shift",
    "evaluate_drive",
    "expectation",
    "extract",
    "find_peak",
    "is_hermitian",
    "load_scenario",
    "parse_scenario",
    "perturbation_drive_spec",
    "perturbative_c_exact",
    "perturbative_c_markov",
    "phi21_closed_form",
    "phi21_quadrature",
    "phi21_rate",
    "predicted_resonance",
    "propagate",
    "propagate_with_initial",
    "resonance_scan",
    "samuel_bhandari_phase",
    "transition_probability_from_a",
    "two_level_drive_spec",
    "two_level_markov_c21",
    "von_neumann_entropy",
]
