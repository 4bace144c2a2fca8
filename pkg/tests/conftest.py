"""Pytest configuration and fixtures for meanfield tests."""

import tempfile
from pathlib import Path

import numpy as np
import pytest


@pytest.fixture
def temp_dir():
    """Provide a temporary directory for test files."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    """Keep MEANFIELD_* variables from the host out of the tests."""
    for name in ("MEANFIELD_SEED", "MEANFIELD_JOBS", "MEANFIELD_LOG_LEVEL", "MEANFIELD_LOG_FORMAT",
                 "MEANFIELD_LOG_DIR"):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture(autouse=True)
def fresh_law_cache():
    """Solved laws must not leak between tests."""
    from meanfield.limitlaw import clear_law_cache

    clear_law_cache()
    yield
    clear_law_cache()


@pytest.fixture
def rng():
    """Provide a seeded generator."""
    from meanfield.engine import make_rng

    return make_rng(12345, "philox")


@pytest.fixture
def tanh_model():
    """TanhVol with r0 = 1."""
    from meanfield.models import tanh_vol

    return tanh_vol(r0=1.0)


@pytest.fixture
def driftless_tanh_model():
    """TanhVol with r0 = 0, so sigma stays at sigma(0) = 1."""
    from meanfield.models import tanh_vol

    return tanh_vol(r0=0.0)


@pytest.fixture
def bank_model():
    """Bank model with kappa = 1, unit initial variance."""
    from meanfield.models import bank

    return bank()


@pytest.fixture
def hybrid_model():
    """Hybrid bank model with kappa = 1."""
    from meanfield.models import hybrid_bank

    return hybrid_bank()


@pytest.fixture
def constant_model():
    """Bounded-class model with sigma identically 2."""
    from meanfield.models import constant_vol

    return constant_vol(2.0)


@pytest.fixture
def uniform_sample():
    """Build a MaximaSample from given PIT values."""
    from meanfield.diagnostics import ExperimentMode, MaximaSample

    def _build(pit, particle_count=200, mode=ExperimentMode.INTERACTING):
        pit = np.asarray(pit, dtype=float)
        return MaximaSample(
            particle_count=particle_count,
            mode=mode,
            seeds=list(range(pit.size)),
            maxima=np.zeros(pit.size),
            normalized=np.zeros(pit.size),
            pit=pit,
        )

    return _build


@pytest.fixture
def write_config(temp_dir):
    """Write a config file into the temporary directory and return its path."""

    def _write(text, name="experiment.cfg"):
        path = temp_dir / name
        path.write_text(text)
        return path

    return _write


@pytest.fixture
def small_bank_config():
    """Config text for a quick bank run."""
    return """\
[experiment]
name = quick_bank
mode = interacting
N = 20
R = 12
t_star = 0.2
dt = 0.01
seed = 7

[model]
id = bank
kappa = 1
"""
