"""Shared test fixtures for hermburg tests."""

import sys
import tempfile
from pathlib import Path

import pytest

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))


@pytest.fixture
def temp_dir():
    """Create a temporary directory."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def params():
    """Admissible Gaussian model on one spatial dimension."""
    from hermburg.kernels.params import HermiteParams

    return HermiteParams(q=1, hurst=(0.75, 0.75), d=1, nu=0.1)


@pytest.fixture
def unit_grid():
    """4 x 4 cells on [0, 1]^2."""
    from hermburg.noise.grid import GridSpec

    return GridSpec(t_max=1.0, n_t=4, L=1.0, n_x=4, d=1)


@pytest.fixture
def sample_config_yaml():
    """Small but complete experiment."""
    return """
version: "1.0"
model:
  q: 1
  hurst: [0.75, 0.75]
  d: 1
  nu: 0.1
grid:
  t_max: 1.0
  n_t: 4
  L: 1.0
  n_x: 4
  d: 1
solver:
  picard_tol: 1.0e-10
  max_iters: 60
  domain:
    L: 6.283185307179586
    n_x: 16
    t_max: 0.25
    n_t: 32
sigma:
  kind: constant
  value: 0.1
initial_condition:
  kind: sine
  amplitude: 0.5
seed:
  master_seed: 7
verify:
  n_samples: 400
  horizons: [0.125, 0.25, 0.5]
output:
  path: ./results
  format: bin
"""


@pytest.fixture
def config_file(temp_dir, sample_config_yaml):
    """Create a config file in temp directory."""
    config_path = temp_dir / "hermburg.yaml"
    config_path.write_text(sample_config_yaml)
    return config_path


@pytest.fixture
def quiet_config_yaml():
    """No noise, zero initial profile."""
    return """
model:
  q: 1
  hurst: [0.75, 0.75]
solver:
  domain:
    n_x: 16
    n_t: 16
initial_condition:
  kind: zero
"""


@pytest.fixture
def quiet_config_file(temp_dir, quiet_config_yaml):
    """Create a noiseless config file."""
    config_path = temp_dir / "quiet.yaml"
    config_path.write_text(quiet_config_yaml)
    return config_path
