"""Full pipeline demo: simulate, calibrate, extract, test.

Simulates a homodyne acquisition from the config, estimates the measured
variances the way a bench calibration would (total from the trace, LO from
the monitor tap), derives the certified min-entropy, extracts at a
guard-compliant ratio and runs the statistical battery on the output.

Usage: python scripts/run_pipeline.py [--config configs/example.toml]
       [--blocks 130] [--seed 1] [--out-dir pipeline]
"""

import argparse
import math
from pathlib import Path

import numpy as np

from cvqrng.adc import quantize_array
from cvqrng.calibration import MeasuredVariances, calibrate, report_to_text
from cvqrng.config import load_config
from cvqrng.extractor import (
    ExtractorConfig,
    ToeplitzExtractor,
    output_rate,
    security_parameter,
)
from cvqrng.randtests import run_all
from cvqrng.sampleio import atomic_write_text, write_bits_file, write_sample_file
from cvqrng.simulator import SimConfig, empirical_variance, iter_sample_blocks

REPO_ROOT = Path(__file__).resolve().parents[1]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--config", default=str(REPO_ROOT / "configs" / "example.toml"))
    parser.add_argument("--blocks", type=int, default=130,
                        help="extractor input blocks to generate")
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--out-dir", default="pipeline")
    args = parser.parse_args()

    cfg = load_config(args.config)
    for name in ("simulation", "adc", "monitor", "extractor"):
        if getattr(cfg, name) is None:
            raise SystemExit(f"config needs a [{name}] section")
    sim, adc, ext_set = cfg.simulation, cfg.adc, cfg.extractor

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    samples_per_block = ext_set.input_bits // adc.n
    count = args.blocks * samples_per_block
    sim = SimConfig(
        chain=sim.chain, sigma_lo_sq=sim.sigma_lo_sq, sigma_q_sq=sim.sigma_q_sq,
        sigma_e_sq=sim.sigma_e_sq, dc_offset=sim.dc_offset,
        sample_count=count, seed=args.seed,
    )

    analog = np.concatenate(list(iter_sample_blocks(sim)))
    codes = quantize_array(analog, adc)
    write_sample_file(out_dir / "samples.bin", codes, adc)
    print(f"simulated {count} samples, "
          f"codes {int(codes.min())}..{int(codes.max())} of {adc.code_count}")

    # bench-style measured inputs: the trace variance, the configured
    # electronic noise, and the monitor reading implied by the LO variance
    measured = MeasuredVariances(
        sigma_m_sq=empirical_variance(analog).variance,
        sigma_e_sq=sim.sigma_e_sq,
        sigma_mon_sq=sim.sigma_lo_sq / cfg.monitor.multiple_k,
    )
    report = calibrate(measured, sim.chain, cfg.monitor, adc, cfg.policy)
    atomic_write_text(out_dir / "report.txt", report_to_text(report))
    print(f"cmrr {report.cmrr_db:.2f} dB, "
          f"h {report.h_with_monitoring:.4f} bits/sample with monitoring "
          f"({report.h_without_monitoring:.4f} without), "
          f"sampling range {'appropriate' if report.c1_le_c2 else 'TOO NARROW'}")

    n_in = ext_set.input_bits
    bound = report.h_with_monitoring / adc.n
    m_out = min(ext_set.output_bits, math.floor(n_in * bound))
    rng = np.random.default_rng(args.seed)
    toeplitz_seed = rng.integers(0, 2, size=n_in + m_out - 1, dtype=np.uint8)
    ext_cfg = ExtractorConfig(
        n_in=n_in, m_out=m_out, seed=toeplitz_seed,
        h_min_per_sample=report.h_with_monitoring, bits_per_sample=adc.n,
    )
    bits = ToeplitzExtractor(ext_cfg).extract_stream(codes, adc.n)
    write_bits_file(out_dir / "random.bin", bits)

    sec = security_parameter(samples_per_block * report.h_with_monitoring, m_out)
    rate = output_rate(300e6, adc.n, ext_cfg.extraction_ratio)
    print(f"extracted {bits.size} bits at ratio {ext_cfg.extraction_ratio:.4f} "
          f"(epsilon 2^{sec.log2_epsilon:.1f}, {rate/1e6:.0f} Mbit/s at 300 MHz)")

    for result in run_all(bits):
        verdict = "PASS" if result.passed else "FAIL"
        print(f"  {result.test_name:20s} p={result.p_value:.6f} {verdict}")
    print(f"artifacts in {out_dir}/")


if __name__ == "__main__":
    main()
