"""Anyonic topological entropy from classical anyon-occupation distributions."""

__version__ = "0.1.0"

from .entropy import (
    GammaValue,
    JointClassDistribution,
    Pmf,
    confusion_information,
    entropy_of_pmf,
    gamma_from_joint,
    gamma_lower_bound,
    mutual_information_bound,
    shannon_binary,
)
from .noise import NoiseModel, SeededStream, sample_error
from .planar import (
    ErrorPattern,
    LogicalClass,
    PlanarLayout,
    Syndrome,
    build_layout,
    is_equivalent,
    logical_class_of,
    syndrome_of,
)
from .decoders import Correction, decode_matching, decode_ml_exact
from .planar_gamma import GammaEstimate, estimate_gamma_mc, gamma_exact_enum, sweep
from .thermal import ThermalParams, occupation_probability, thermal_curve, thermal_gamma, vacuum_parity_probability
from .tfim import ChainSpec, FifthsPartition, GroundStateDistribution, gamma_tfim, ground_state, tfim_curve
