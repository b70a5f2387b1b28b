"""Command-line workbench.

Subcommands: simulate, calibrate, sweep, extract, test.  Exit codes: 0 on
success, 2 for configuration problems, 3 for I/O failures, 4 for security
violations (no positive residual quadrature variance, or an extraction
ratio above the calibrated entropy bound).  Output paths are taken as
given; a relative --out can be redirected with the CVQRNG_OUT_DIR
environment variable.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import calibration, extractor, randtests, sampleio
from .adc import quantize_array
from .config import WorkbenchConfig, load_config
from .errors import CalibrationError, ConfigError
from .optics import reference_chain
from .simulator import iter_sample_blocks

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_SECURITY = 4

OUT_DIR_ENV = "CVQRNG_OUT_DIR"


def _out_path(raw: str) -> Path:
    path = Path(raw)
    base = os.environ.get(OUT_DIR_ENV)
    if base and not path.is_absolute():
        return Path(base) / path
    return path


def _require(cfg: WorkbenchConfig, command: str, *sections: str) -> None:
    for name in sections:
        if getattr(cfg, name) is None:
            raise ConfigError(f"the {command} command needs a [{name}] section")


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    _require(cfg, "simulate", "simulation", "adc")
    sim = cfg.simulation
    if args.count is not None:
        if args.count < 1:
            raise ConfigError("--count must be >= 1")
        sim = dataclasses.replace(sim, sample_count=args.count)
    if args.seed is not None:
        sim = dataclasses.replace(sim, seed=args.seed)

    keep_analog = args.csv is not None
    code_chunks = []
    analog_chunks = []
    for block in iter_sample_blocks(sim):
        code_chunks.append(quantize_array(block, cfg.adc))
        if keep_analog:
            analog_chunks.append(block)
    codes = np.concatenate(code_chunks)
    out = _out_path(args.out)
    sampleio.write_sample_file(out, codes, cfg.adc)
    if keep_analog:
        sampleio.write_analog_csv(
            _out_path(args.csv), np.concatenate(analog_chunks), codes
        )
    print(f"simulated {codes.size} samples (seed {sim.seed}) -> {out}")
    return EXIT_OK


def _read_measured(path: Path) -> tuple[calibration.MeasuredVariances, float | None]:
    values: dict[str, float] = {}
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"measured-variance line is not key = value: {line!r}")
        try:
            values[key.strip()] = float(value.strip())
        except ValueError:
            raise ConfigError(f"measured value {key.strip()!r} is not a number") from None
    required = {"sigma_m_sq", "sigma_e_sq", "sigma_mon_sq"}
    missing = required - set(values)
    if missing:
        raise ConfigError(f"measured-variance file is missing: {sorted(missing)}")
    unknown = set(values) - required - {"q_correction"}
    if unknown:
        raise ConfigError(f"unknown measured-variance key(s): {sorted(unknown)}")
    try:
        measured = calibration.MeasuredVariances(
            sigma_m_sq=values["sigma_m_sq"],
            sigma_e_sq=values["sigma_e_sq"],
            sigma_mon_sq=values["sigma_mon_sq"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return measured, values.get("q_correction")


def cmd_calibrate(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    _require(cfg, "calibrate", "chain", "adc", "monitor")
    measured, q_correction = _read_measured(Path(args.measured))
    report = calibration.calibrate(
        measured, cfg.chain, cfg.monitor, cfg.adc, cfg.policy, q_correction
    )
    out = _out_path(args.out)
    sampleio.atomic_write_text(out, calibration.report_to_text(report))
    print(
        f"h_with_monitoring = {report.h_with_monitoring:.6f} bits, "
        f"h_without_monitoring = {report.h_without_monitoring:.6f} bits, "
        f"cmrr = {report.cmrr_db:.2f} dB -> {out}"
    )
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    _require(cfg, "sweep", "simulation")
    sim = cfg.simulation
    out = _out_path(args.out)
    if args.kind == "transmittance":
        rows = calibration.sweep_transmittance(
            cfg.sweep.transmittances,
            sim.sigma_lo_sq,
            sim.sigma_q_sq,
            g=sim.chain.g,
            power=sim.chain.power,
            sigma_e_sq=sim.sigma_e_sq,
        )
        sampleio.write_csv(out, calibration.TRANSMITTANCE_SWEEP_COLUMNS, rows)
    elif args.kind == "power":
        rows = calibration.sweep_power(
            cfg.sweep.powers,
            sim.chain,
            sim.sigma_lo_sq,
            sim.sigma_q_sq,
            sim.sigma_e_sq,
        )
        sampleio.write_csv(out, calibration.POWER_SWEEP_COLUMNS, rows)
    else:  # cmrr
        _require(cfg, "sweep --kind cmrr", "adc")
        chains = [
            reference_chain(
                label,
                g=sim.chain.g,
                power=sim.chain.power,
                phase=sim.chain.phase,
                eta1=sim.chain.eta1,
                eta2=sim.chain.eta2,
            )
            for label in cfg.sweep.splitters
        ]
        rows = calibration.sweep_cmrr(
            chains,
            sim.sigma_lo_sq,
            sim.sigma_q_sq,
            sim.sigma_e_sq,
            cfg.adc,
            cfg.policy,
        )
        sampleio.write_csv(out, calibration.CMRR_SWEEP_COLUMNS, rows)
    print(f"{args.kind} sweep: {len(rows)} rows -> {out}")
    return EXIT_OK


def cmd_extract(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    _require(cfg, "extract", "extractor")
    settings = cfg.extractor
    codes, adc_cfg = sampleio.read_sample_file(args.infile)
    bits_per_sample = adc_cfg.n
    if settings.bits_per_sample is not None and settings.bits_per_sample != bits_per_sample:
        raise ConfigError(
            f"[extractor] bits_per_sample = {settings.bits_per_sample} does not "
            f"match the sample file ({bits_per_sample} bits)"
        )

    n_in = settings.input_bits
    m_out = settings.output_bits
    if args.ratio is not None:
        if not 0.0 < args.ratio < 1.0:
            raise ConfigError("--ratio must lie strictly in (0, 1)")
        m_out = math.floor(n_in * args.ratio)
        if m_out < 1:
            raise ConfigError(f"--ratio {args.ratio} yields an empty output block")
    ratio = m_out / n_in
    if settings.h_min_per_sample is not None:
        allowed = settings.h_min_per_sample / bits_per_sample
        if ratio > allowed + 1e-12:
            raise CalibrationError(
                f"extraction ratio {ratio:.6f} exceeds the calibrated bound "
                f"h_min/bits = {allowed:.6f}; refusing to extract"
            )

    seed_bits = sampleio.read_seed_hex(args.seed, n_in + m_out - 1)
    ext_cfg = extractor.ExtractorConfig(
        n_in=n_in,
        m_out=m_out,
        seed=seed_bits,
        h_min_per_sample=settings.h_min_per_sample,
        bits_per_sample=bits_per_sample if settings.h_min_per_sample is not None else None,
    )
    out_bits = extractor.extract_stream(ext_cfg, codes, bits_per_sample)
    out = _out_path(args.out)
    sampleio.write_bits_file(out, out_bits)
    print(
        f"extracted {out_bits.size} bits from {codes.size} samples "
        f"(ratio {ratio:.4f}) -> {out}"
    )
    return EXIT_OK


def cmd_test(args: argparse.Namespace) -> int:
    bits = sampleio.read_bits_file(args.infile, args.count)
    results = randtests.run_all(bits)
    for result in results:
        verdict = "PASS" if result.passed else "FAIL"
        print(f"{result.test_name} p={result.p_value:.6f} {verdict}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvqrng",
        description=(
            "model, simulate and calibrate the practical security of a "
            "vacuum-noise homodyne randomness source"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate and quantize a sample run")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="binary sample output (with .meta sidecar)")
    p.add_argument("--count", type=int, help="override [simulation] sample_count")
    p.add_argument("--seed", type=int, help="override [simulation] seed")
    p.add_argument("--csv", help="also export index/analog/code CSV (small runs)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("calibrate", help="derive the entropy report from measured variances")
    p.add_argument("--config", required=True)
    p.add_argument("--measured", required=True, help="key = value file: sigma_m_sq, sigma_e_sq, sigma_mon_sq")
    p.add_argument("--out", required=True, help="report output path")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("sweep", help="write a parameter-sweep CSV")
    p.add_argument("--kind", required=True, choices=("transmittance", "power", "cmrr"))
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="CSV output path")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("extract", help="Toeplitz-extract a quantized sample file")
    p.add_argument("--config", required=True)
    p.add_argument("--in", dest="infile", required=True, help="binary sample input")
    p.add_argument("--seed", required=True, help="hex seed file")
    p.add_argument("--out", required=True, help="raw packed output bits")
    p.add_argument("--ratio", type=float, help="override the extraction ratio m_out/n_in")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("test", help="run the statistical battery on a bit file")
    p.add_argument("--in", dest="infile", required=True, help="raw packed bit file")
    p.add_argument("--count", type=int, help="number of bits to test (default: whole file)")
    p.set_defaults(func=cmd_test)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CalibrationError as exc:
        print(f"security violation: {exc}", file=sys.stderr)
        return EXIT_SECURITY
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
