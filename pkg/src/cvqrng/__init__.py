"""Security workbench for a vacuum-noise homodyne randomness source.

Models an imbalanced homodyne detection chain with a noisy local
oscillator, bounds the conditional min-entropy of its quantized output,
simulates acquisitions, calibrates entropy budgets from monitored
measurements, and extracts near-uniform bits by seeded Toeplitz hashing.
"""

from .adc import AdcConfig, QuantizationPolicy
from .calibration import CalibrationReport, MeasuredVariances, MonitorTap, calibrate
from .entropy import (
    ClassicalBound,
    MinEntropyResult,
    conditional_min_entropy,
    practical_min_entropy,
)
from .errors import CalibrationError, ConfigError, ResourceLimitError
from .extractor import ExtractorConfig, SecurityParameter, ToeplitzExtractor
from .optics import ImbalanceCoefficients, NoiseBudget, OpticalChain
from .randtests import TestResult
from .simulator import SampleBatch, SimConfig

__all__ = [
    "AdcConfig",
    "QuantizationPolicy",
    "CalibrationReport",
    "MeasuredVariances",
    "MonitorTap",
    "calibrate",
    "ClassicalBound",
    "MinEntropyResult",
    "conditional_min_entropy",
    "practical_min_entropy",
    "CalibrationError",
    "ConfigError",
    "ResourceLimitError",
    "ExtractorConfig",
    "SecurityParameter",
    "ToeplitzExtractor",
    "ImbalanceCoefficients",
    "NoiseBudget",
    "OpticalChain",
    "TestResult",
    "SampleBatch",
    "SimConfig",
]

__version__ = "0.1.0"
