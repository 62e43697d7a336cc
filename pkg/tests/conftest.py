"""
Shared fixtures and markers.
"""

import sys
from pathlib import Path

import pytest
import yaml

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

CONFIG_PATH = Path(__file__).parent.parent / "config" / "config.yaml"


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: acceptance runs (tables, multistart comparisons)")


@pytest.fixture
def config_file(tmp_path):
    """Copy of config/config.yaml whose outputs and log file live in tmp_path."""
    with open(CONFIG_PATH, "r", encoding="utf-8") as f:
        config = yaml.safe_load(f)
    config["output"]["directory"] = str(tmp_path / "outputs")
    config["logging"]["log_file"] = str(tmp_path / "logs" / "benchmark.log")
    path = tmp_path / "config.yaml"
    with open(path, "w", encoding="utf-8") as f:
        yaml.safe_dump(config, f)
    return path
