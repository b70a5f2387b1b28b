"""Produce the three workbench sweep CSVs from one config file.

Usage: python scripts/run_sweeps.py [--config configs/example.toml] [--out-dir sweeps]
"""

import argparse
from pathlib import Path

from cvqrng.calibration import (
    CMRR_SWEEP_COLUMNS,
    POWER_SWEEP_COLUMNS,
    TRANSMITTANCE_SWEEP_COLUMNS,
    sweep_cmrr,
    sweep_power,
    sweep_transmittance,
)
from cvqrng.config import load_config
from cvqrng.optics import reference_chain
from cvqrng.sampleio import write_csv

REPO_ROOT = Path(__file__).resolve().parents[1]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--config", default=str(REPO_ROOT / "configs" / "example.toml"))
    parser.add_argument("--out-dir", default="sweeps")
    args = parser.parse_args()

    cfg = load_config(args.config)
    if cfg.simulation is None or cfg.adc is None:
        raise SystemExit("config needs [chain], [simulation] and [adc] sections")
    sim = cfg.simulation

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    rows = sweep_transmittance(
        cfg.sweep.transmittances,
        sim.sigma_lo_sq,
        sim.sigma_q_sq,
        g=sim.chain.g,
        power=sim.chain.power,
        sigma_e_sq=sim.sigma_e_sq,
    )
    write_csv(out_dir / "transmittance.csv", TRANSMITTANCE_SWEEP_COLUMNS, rows)
    for t, a, b, lo_amp, q_amp, m_sq in rows:
        print(f"t={t:.2f}  a={a:.4f}  b={b:.4f}  sigma_m_sq={m_sq:.4f} V^2")

    rows = sweep_power(
        cfg.sweep.powers, sim.chain, sim.sigma_lo_sq, sim.sigma_q_sq, sim.sigma_e_sq
    )
    write_csv(out_dir / "power.csv", POWER_SWEEP_COLUMNS, rows)
    print(f"power sweep: {len(rows)} rows, "
          f"sigma_m_sq {rows[0][1]:.4f} .. {rows[-1][1]:.4f} V^2")

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
    rows = sweep_cmrr(
        chains, sim.sigma_lo_sq, sim.sigma_q_sq, sim.sigma_e_sq, cfg.adc, cfg.policy
    )
    write_csv(out_dir / "cmrr.csv", CMRR_SWEEP_COLUMNS, rows)
    for label, (cmrr, fraction, h_with, h_without) in zip(cfg.sweep.splitters, rows):
        print(f"{label}: cmrr={cmrr:6.2f} dB  classical={fraction:.4f}  "
              f"h={h_with:.4f}/{h_without:.4f} bits (with/without monitoring)")

    print(f"wrote transmittance.csv, power.csv, cmrr.csv to {out_dir}/")


if __name__ == "__main__":
    main()
