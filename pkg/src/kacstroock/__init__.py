"""Kac-Stroock approximations of complex Brownian motion driven by Levy processes."""

from .approximation import (
    ComplexPath,
    Ensemble,
    ExperimentConfig,
    build_approximation,
    build_approximation_md,
    integrate_exact,
    integrate_grid,
    sample_driver,
    simulate,
)
from .config import load_config, load_preset
from .errors import (
    AdmissibilityFailure,
    ConfigError,
    DegenerateTheta,
    GridMismatch,
    HorizonTooShort,
    InvalidTriplet,
    KacStroockError,
    ParseError,
    PartitionTooFine,
    QuadratureFailure,
    StepTooCoarse,
    TooFewSamples,
    UnsampleableFamily,
    ValidationError,
)
from .hypotheses import h1_value, h2_value, h3_value, hbar_cross_value, hypothesis_scan
from .levy import (
    LevyMeasure,
    LevyTriplet,
    ThetaClass,
    admissible_vector,
    classify_theta,
    levy_exponent,
    normalization_constant,
)
from .sampler import PathSample, SamplerSeed, sample_exact_jump, sample_grid, sample_path
from .verify import LadderReport, StatReport, ks_normal, ladder_study, verify_limit

__version__ = "0.1.0"
