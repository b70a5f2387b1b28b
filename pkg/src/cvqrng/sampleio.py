"""File formats: binary samples with sidecar, packed bits, hex seeds, CSV.

Quantized samples are stored as consecutive 16-bit little-endian unsigned
words with only the low n bits significant; the converter parameters travel
in a sidecar text file (key = value lines: bits, range_volts, offset_volts,
count) next to the data file.  Extracted bits are raw bytes, stream bit
8*i + j in bit j of byte i.  Extractor seeds are hex-string text files.
All writers go through a temp file in the target directory followed by an
atomic rename.
"""

from __future__ import annotations

import csv
import os
import tempfile
from pathlib import Path

import numpy as np

from .adc import AdcConfig

__all__ = [
    "atomic_write_bytes",
    "atomic_write_text",
    "sidecar_path",
    "write_sample_file",
    "read_sample_file",
    "write_csv",
    "write_analog_csv",
    "write_bits_file",
    "read_bits_file",
    "write_seed_hex",
    "read_seed_hex",
]

ANALOG_CSV_COLUMNS = ("index", "analog[V]", "code")


def atomic_write_bytes(path: str | Path, data: bytes) -> None:
    """Write bytes via a temp file and rename, never leaving partial output."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=path.name + ".")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path: str | Path, text: str) -> None:
    atomic_write_bytes(path, text.encode())


def sidecar_path(path: str | Path) -> Path:
    return Path(str(path) + ".meta")


def write_sample_file(path: str | Path, codes: np.ndarray, cfg: AdcConfig) -> None:
    """Write quantized codes plus the sidecar describing them."""
    arr = np.asarray(codes)
    if arr.ndim != 1:
        raise ValueError("codes must be one-dimensional")
    if arr.size and (arr.min() < 0 or arr.max() >= cfg.code_count):
        raise ValueError(f"codes must fit in {cfg.n} bits")
    words = arr.astype("<u2")
    atomic_write_bytes(path, words.tobytes())
    sidecar = (
        f"bits = {cfg.n}\n"
        f"range_volts = {cfg.range_r!r}\n"
        f"offset_volts = {cfg.offset!r}\n"
        f"count = {arr.size}\n"
    )
    atomic_write_text(sidecar_path(path), sidecar)


def read_sample_file(path: str | Path) -> tuple[np.ndarray, AdcConfig]:
    """Read a sample file and its sidecar; masks each word to the low n bits."""
    meta: dict[str, str] = {}
    for line in Path(sidecar_path(path)).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        meta[key.strip()] = value.strip()
    missing = [k for k in ("bits", "range_volts", "offset_volts", "count") if k not in meta]
    if missing:
        raise ValueError(f"sample sidecar is missing fields: {missing}")
    cfg = AdcConfig(
        n=int(meta["bits"]),
        range_r=float(meta["range_volts"]),
        offset=float(meta["offset_volts"]),
    )
    count = int(meta["count"])
    words = np.frombuffer(Path(path).read_bytes(), dtype="<u2")
    if words.size != count:
        raise ValueError(
            f"sample file holds {words.size} words but the sidecar says {count}"
        )
    return (words & np.uint16(cfg.code_count - 1)).astype(np.uint16), cfg


def write_csv(path: str | Path, columns, rows) -> None:
    """Write a CSV with a single header row naming the columns."""
    import io

    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(columns)
    writer.writerows(rows)
    atomic_write_text(path, buf.getvalue())


def write_analog_csv(path: str | Path, analog: np.ndarray, codes: np.ndarray) -> None:
    """CSV export of (index, analog voltage, code) for small batches."""
    if len(analog) != len(codes):
        raise ValueError("analog and code arrays must have equal length")
    rows = (
        (i, repr(float(v)), int(c)) for i, (v, c) in enumerate(zip(analog, codes))
    )
    write_csv(path, ANALOG_CSV_COLUMNS, rows)


def write_bits_file(path: str | Path, bits: np.ndarray) -> None:
    """Pack a 0/1 bit vector into raw bytes (bit j of byte i = bit 8i + j)."""
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1:
        raise ValueError("bits must be one-dimensional")
    if arr.size and arr.max() > 1:
        raise ValueError("bit entries must be 0 or 1")
    atomic_write_bytes(path, np.packbits(arr, bitorder="little").tobytes())


def read_bits_file(path: str | Path, count: int | None = None) -> np.ndarray:
    """Unpack a raw bit file; count trims the trailing padding if given."""
    data = np.frombuffer(Path(path).read_bytes(), dtype=np.uint8)
    bits = np.unpackbits(data, bitorder="little")
    if count is not None:
        if count > bits.size:
            raise ValueError(f"file holds {bits.size} bits, {count} requested")
        bits = bits[:count]
    return bits


def write_seed_hex(path: str | Path, bits: np.ndarray) -> None:
    """Store seed bits as a hex string (whole bytes, zero-padded tail)."""
    arr = np.asarray(bits, dtype=np.uint8)
    atomic_write_text(path, np.packbits(arr, bitorder="little").tobytes().hex() + "\n")


def read_seed_hex(path: str | Path, n_bits: int) -> np.ndarray:
    """Read the first n_bits seed bits from a hex-string file."""
    text = "".join(Path(path).read_text().split())
    try:
        data = bytes.fromhex(text)
    except ValueError as exc:
        raise ValueError(f"seed file {path} is not a hex string: {exc}") from exc
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8), bitorder="little")
    if bits.size < n_bits:
        raise ValueError(
            f"seed file {path} holds {bits.size} bits, {n_bits} required"
        )
    return bits[:n_bits]
