"""Frequency, block-frequency, runs and cumulative-sums tests.

Each test maps a bit sequence to a p-value under the null hypothesis of an
ideal uniform source; a sequence passes a test when 0.01 <= p <= 0.99.
Definitions follow the standard statistical test suite conventions for
these four tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc, ndtr

__all__ = [
    "TestResult",
    "monobit_frequency",
    "block_frequency",
    "runs",
    "cumulative_sums",
    "run_all",
]

P_LOW = 0.01
P_HIGH = 0.99

_MIN_BITS = 100


@dataclass(frozen=True)
class TestResult:
    test_name: str
    p_value: float
    passed: bool


def _result(name: str, p_value: float) -> TestResult:
    return TestResult(
        test_name=name, p_value=p_value, passed=P_LOW <= p_value <= P_HIGH
    )


def _as_bits(bits) -> np.ndarray:
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1:
        raise ValueError("bit sequence must be one-dimensional")
    if arr.size and arr.max() > 1:
        raise ValueError("bit sequence entries must be 0 or 1")
    return arr


def monobit_frequency(bits) -> TestResult:
    """Excess of ones over zeros against the sqrt(n) scale."""
    b = _as_bits(bits)
    n = b.size
    if n < _MIN_BITS:
        raise ValueError(f"monobit test needs at least {_MIN_BITS} bits, got {n}")
    s = abs(2.0 * int(b.sum()) - n) / math.sqrt(n)
    return _result("monobit_frequency", math.erfc(s / math.sqrt(2.0)))


def block_frequency(bits, block_len: int = 128) -> TestResult:
    """Chi-square of per-block one-fractions around one half."""
    b = _as_bits(bits)
    if block_len < 1:
        raise ValueError("block_len must be >= 1")
    n_blocks = b.size // block_len
    if b.size < _MIN_BITS or n_blocks < 1:
        raise ValueError(
            f"block-frequency test needs at least {max(_MIN_BITS, block_len)} bits"
        )
    pi = b[: n_blocks * block_len].reshape(n_blocks, block_len).mean(axis=1)
    chi_sq = 4.0 * block_len * float(((pi - 0.5) ** 2).sum())
    return _result("block_frequency", float(gammaincc(n_blocks / 2.0, chi_sq / 2.0)))


def runs(bits) -> TestResult:
    """Total number of runs against the expectation for the observed bias.

    The prerequisite |pi - 1/2| < 2 / sqrt(n) failing means the monobit
    statistic is already degenerate; the p-value is then 0 by convention.
    """
    b = _as_bits(bits)
    n = b.size
    if n < _MIN_BITS:
        raise ValueError(f"runs test needs at least {_MIN_BITS} bits, got {n}")
    pi = float(b.mean())
    if abs(pi - 0.5) >= 2.0 / math.sqrt(n):
        return _result("runs", 0.0)
    v = 1 + int(np.count_nonzero(np.diff(b)))
    num = abs(v - 2.0 * n * pi * (1.0 - pi))
    den = 2.0 * math.sqrt(2.0 * n) * pi * (1.0 - pi)
    return _result("runs", math.erfc(num / den))


def cumulative_sums(bits) -> TestResult:
    """Maximum excursion of the forward +-1 random walk."""
    b = _as_bits(bits)
    n = b.size
    if n < _MIN_BITS:
        raise ValueError(f"cumulative-sums test needs at least {_MIN_BITS} bits")
    walk = np.cumsum(2.0 * b.astype(np.int64) - 1)
    z = float(np.abs(walk).max())
    if z == 0.0:
        return _result("cumulative_sums", 0.0)
    sqrt_n = math.sqrt(n)

    k1 = np.arange(math.floor((-n / z + 1) / 4), math.floor((n / z - 1) / 4) + 1)
    term1 = ndtr((4 * k1 + 1) * z / sqrt_n) - ndtr((4 * k1 - 1) * z / sqrt_n)
    k2 = np.arange(math.floor((-n / z - 3) / 4), math.floor((n / z - 1) / 4) + 1)
    term2 = ndtr((4 * k2 + 3) * z / sqrt_n) - ndtr((4 * k2 + 1) * z / sqrt_n)
    p = 1.0 - float(term1.sum()) + float(term2.sum())
    return _result("cumulative_sums", min(max(p, 0.0), 1.0))


def run_all(bits) -> list[TestResult]:
    """Run the four tests in a fixed order."""
    b = _as_bits(bits)
    return [monobit_frequency(b), block_frequency(b), runs(b), cumulative_sums(b)]
