"""Shared fixtures: reference chains and a config-file writer."""

from __future__ import annotations

from pathlib import Path

import pytest

from cvqrng.optics import OpticalChain, reference_chain

REPO_ROOT = Path(__file__).resolve().parents[1]


@pytest.fixture
def balanced_chain() -> OpticalChain:
    """Ideal balanced homodyne chain: alpha = 0, beta = 1."""
    return OpticalChain(
        t13=0.5, t24=0.5, r23=0.5, r14=0.5, eta1=1.0, eta2=1.0, g=1.0, power=1.0
    )


@pytest.fixture
def fifty_chain() -> OpticalChain:
    """Bundled 50/50 splitter with the reference detector pair."""
    return reference_chain("50/50")


@pytest.fixture
def write_config(tmp_path):
    """Write TOML text to a file in tmp_path and return its path."""

    def _write(text: str, name: str = "config.toml") -> Path:
        path = tmp_path / name
        path.write_text(text)
        return path

    return _write
