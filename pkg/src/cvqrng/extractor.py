"""Seeded Toeplitz hashing over GF(2) and its security arithmetic.

The extractor multiplies each n_in-bit input block by a fixed m_out x n_in
binary Toeplitz matrix T defined by a seed of n_in + m_out - 1 bits:

    T[i][j] = seed[m_out - 1 - i + j]

so the first column (top to bottom) is seed[m_out-1], ..., seed[0] and the
first row is seed[m_out-1], ..., seed[n_in+m_out-2].  By the leftover hash
lemma, extracting m_out bits from a block carrying k bits of min-entropy
leaves a statistical distance of at most epsilon = 2^(-(k - m_out) / 2)
from uniform.

Bit order conventions, used consistently by the stream packer and the file
formats: a quantized sample contributes its code bits least-significant
first; stream bit s*bits_per_sample + r is bit r of sample s.  Packed bytes
hold stream bit 8*i + j in bit j of byte i.

The multiply is table-driven: input bits are grouped into bytes and the
XOR of any byte's eight matrix columns is precomputed, so one block costs
one table row lookup plus an XOR fold per input byte.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CalibrationError

__all__ = [
    "ExtractorConfig",
    "SecurityParameter",
    "ToeplitzExtractor",
    "extract",
    "extract_stream",
    "codes_to_bits",
    "security_parameter",
    "output_rate",
]

# Blocks multiplied per batch in the streaming path; bounds transient
# gather buffers to a few tens of MB at the reference dimensions.
_BATCH_BLOCKS = 256


@dataclass(frozen=True, eq=False)
class ExtractorConfig:
    """Toeplitz dimensions, seed bits and the calibrated entropy claim.

    seed is a vector of n_in + m_out - 1 bits (uint8 zeros and ones).
    When h_min_per_sample and bits_per_sample are given, the extraction
    ratio m_out / n_in must not exceed h_min_per_sample / bits_per_sample;
    a config that claims more output than the calibrated entropy allows is
    rejected as a security violation.
    """

    n_in: int
    m_out: int
    seed: np.ndarray
    h_min_per_sample: float | None = None
    bits_per_sample: int | None = None

    def __post_init__(self) -> None:
        if not 0 < self.m_out < self.n_in:
            raise ValueError(
                f"need 0 < m_out < n_in, got m_out={self.m_out}, n_in={self.n_in}"
            )
        seed = np.asarray(self.seed, dtype=np.uint8)
        object.__setattr__(self, "seed", seed)
        if seed.ndim != 1 or seed.size != self.n_in + self.m_out - 1:
            raise ValueError(
                f"seed must hold n_in + m_out - 1 = {self.n_in + self.m_out - 1} "
                f"bits, got {seed.size}"
            )
        if np.any(seed > 1):
            raise ValueError("seed entries must be 0 or 1")
        if self.h_min_per_sample is not None:
            if self.bits_per_sample is None or self.bits_per_sample < 1:
                raise ValueError(
                    "bits_per_sample is required alongside h_min_per_sample"
                )
            if self.h_min_per_sample <= 0.0:
                raise ValueError("h_min_per_sample must be positive")
            allowed = self.h_min_per_sample / self.bits_per_sample
            if self.extraction_ratio > allowed + 1e-12:
                raise CalibrationError(
                    f"extraction ratio {self.extraction_ratio:.6f} exceeds the "
                    f"calibrated bound h_min/bits = {allowed:.6f}"
                )

    @property
    def extraction_ratio(self) -> float:
        return self.m_out / self.n_in


@dataclass(frozen=True)
class SecurityParameter:
    """Leftover-hash statistical distance epsilon = 2^log2_epsilon."""

    epsilon: float
    log2_epsilon: float

    def __post_init__(self) -> None:
        if not math.isclose(self.epsilon, 2.0**self.log2_epsilon, rel_tol=1e-12):
            raise ValueError("epsilon must equal 2**log2_epsilon")


class ToeplitzExtractor:
    """Precomputed byte tables for repeated multiplies with one seed."""

    def __init__(self, cfg: ExtractorConfig) -> None:
        self.cfg = cfg
        n, m = cfg.n_in, cfg.m_out
        self._groups = -(-n // 8)
        self._out_bytes = -(-m // 8)
        # Column j of T is seed[j : j + m] reversed, which is a plain window
        # of the reversed seed; packing those windows row-wise keeps the
        # packbits pass on contiguous memory.  Bit i of column j is T[i][j].
        rev = cfg.seed[::-1].copy()
        col_bytes = np.packbits(
            np.lib.stride_tricks.sliding_window_view(rev, m), axis=1, bitorder="little"
        )[::-1]
        # Pad the column set to a whole number of byte groups; the padding
        # columns are zero, matching the zero-padded input bits.
        padded = np.zeros((self._groups * 8, self._out_bytes), dtype=np.uint8)
        padded[:n] = col_bytes
        by_bit = np.ascontiguousarray(
            padded.reshape(self._groups, 8, self._out_bytes).transpose(1, 0, 2)
        )
        # tables[v][p] = XOR of the columns of group p selected by byte v,
        # built by peeling the lowest set bit of v; byte value first so each
        # step reads and writes one contiguous slab.
        tables = np.zeros((256, self._groups, self._out_bytes), dtype=np.uint8)
        for v in range(1, 256):
            low = v & -v
            tables[v] = tables[v ^ low] ^ by_bit[low.bit_length() - 1]
        self._tables = tables
        self._group_index = np.arange(self._groups)

    def multiply_packed(self, block_bytes: np.ndarray) -> np.ndarray:
        """Multiply packed input blocks; (B, groups) bytes -> (B, out) bytes."""
        selected = self._tables[block_bytes, self._group_index]
        return np.bitwise_xor.reduce(selected, axis=-2)

    def extract(self, input_bits: np.ndarray) -> np.ndarray:
        """Multiply one block of n_in bits; returns m_out bits."""
        bits = np.asarray(input_bits, dtype=np.uint8)
        if bits.shape != (self.cfg.n_in,):
            raise ValueError(
                f"input must hold exactly n_in={self.cfg.n_in} bits, "
                f"got shape {bits.shape}"
            )
        packed = np.packbits(bits, bitorder="little")
        block = np.zeros(self._groups, dtype=np.uint8)
        block[: packed.size] = packed
        out = self.multiply_packed(block[None, :])[0]
        return np.unpackbits(out, bitorder="little")[: self.cfg.m_out]

    def extract_stream(self, codes: np.ndarray, bits_per_sample: int) -> np.ndarray:
        """Extract from a stream of quantized samples.

        Codes are unpacked least-significant bit first, concatenated in
        sample order, split into n_in-bit blocks (a trailing partial block
        is discarded) and multiplied block by block.  Returns the
        concatenated m_out-bit outputs as a bit vector.
        """
        if bits_per_sample < 1:
            raise ValueError("bits_per_sample must be >= 1")
        bits = codes_to_bits(codes, bits_per_sample)
        n_blocks = bits.size // self.cfg.n_in
        if n_blocks == 0:
            return np.zeros(0, dtype=np.uint8)
        blocks = bits[: n_blocks * self.cfg.n_in].reshape(n_blocks, self.cfg.n_in)
        packed = np.packbits(blocks, axis=1, bitorder="little")
        if packed.shape[1] < self._groups:
            pad = np.zeros((n_blocks, self._groups - packed.shape[1]), dtype=np.uint8)
            packed = np.hstack([packed, pad])
        out_bits = np.empty((n_blocks, self.cfg.m_out), dtype=np.uint8)
        for start in range(0, n_blocks, _BATCH_BLOCKS):
            chunk = packed[start : start + _BATCH_BLOCKS]
            out_bytes = self.multiply_packed(chunk)
            out_bits[start : start + chunk.shape[0]] = np.unpackbits(
                out_bytes, axis=1, bitorder="little"
            )[:, : self.cfg.m_out]
        return out_bits.reshape(-1)


def extract(cfg: ExtractorConfig, input_bits: np.ndarray) -> np.ndarray:
    """One-shot block extraction (builds the tables; loop via the class)."""
    return ToeplitzExtractor(cfg).extract(input_bits)


def extract_stream(
    cfg: ExtractorConfig, codes: np.ndarray, bits_per_sample: int
) -> np.ndarray:
    """One-shot stream extraction (builds the tables; loop via the class)."""
    return ToeplitzExtractor(cfg).extract_stream(codes, bits_per_sample)


def codes_to_bits(codes: np.ndarray, bits_per_sample: int) -> np.ndarray:
    """Unpack sample codes to the stream bit order (LSB first per sample)."""
    arr = np.asarray(codes)
    if arr.ndim != 1:
        raise ValueError("codes must be a one-dimensional array")
    if not np.issubdtype(arr.dtype, np.integer):
        raise ValueError("codes must be integers")
    if arr.size and (arr.min() < 0 or arr.max() >= 2**bits_per_sample):
        raise ValueError(f"codes must fit in {bits_per_sample} bits")
    shifts = np.arange(bits_per_sample, dtype=np.uint32)
    bits = (arr.astype(np.uint32)[:, None] >> shifts) & 1
    return bits.astype(np.uint8).reshape(-1)


def security_parameter(total_min_entropy: float, m_out: int) -> SecurityParameter:
    """Leftover-hash epsilon for extracting m_out bits from a block that
    carries total_min_entropy bits."""
    if m_out < 1:
        raise ValueError("m_out must be >= 1")
    if not total_min_entropy > m_out:
        raise ValueError(
            f"total min-entropy {total_min_entropy} must exceed the output "
            f"length {m_out}; the claim is vacuous otherwise"
        )
    log2_eps = -(total_min_entropy - m_out) / 2.0
    return SecurityParameter(epsilon=2.0**log2_eps, log2_epsilon=log2_eps)


def output_rate(sampling_rate_hz: float, bits_per_sample: int, ratio: float) -> float:
    """Extracted bit rate (bits/s) at a given sampling rate and ratio."""
    if sampling_rate_hz <= 0.0:
        raise ValueError("sampling_rate_hz must be positive")
    if bits_per_sample < 1:
        raise ValueError("bits_per_sample must be >= 1")
    if not 0.0 < ratio <= 1.0:
        raise ValueError("ratio must lie in (0, 1]")
    return sampling_rate_hz * bits_per_sample * ratio
