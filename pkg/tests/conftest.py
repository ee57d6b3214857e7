"""
Pytest configuration and fixtures for trimarker tests.
"""

import os
from pathlib import Path

import numpy as np
import pytest
from typer.testing import CliRunner

from trimarker.models import ThreeClassSample


@pytest.fixture
def runner():
    """Create a CLI test runner."""
    return CliRunner()


@pytest.fixture
def rng():
    """Seeded generator so every test draws the same data."""
    return np.random.default_rng(20240517)


@pytest.fixture
def location_sample(rng) -> ThreeClassSample:
    """N(0,1), N(0.5,1), N(1,1) with 40 values per class."""
    return ThreeClassSample.from_arrays(rng.normal(0.0, 1.0, 40), rng.normal(0.5, 1.0, 40), rng.normal(1.0, 1.0, 40))


@pytest.fixture
def separated_sample(rng) -> ThreeClassSample:
    """Three classes far apart: every class-1 value < every class-2 value < every class-3 value."""
    return ThreeClassSample.from_arrays(
        rng.normal(0.0, 1.0, 25), rng.normal(50.0, 1.0, 25), rng.normal(100.0, 1.0, 25)
    )


def write_marker_csv(path: Path, groups: dict[str, np.ndarray], extra_rows: list[str] = ()) -> Path:
    """CSV with columns id, marker, group, site; ``extra_rows`` are appended verbatim."""
    lines = ["id,marker,group,site"]
    counter = 0
    for label, values in groups.items():
        for value in values:
            counter += 1
            lines.append(f"p{counter},{float(value)!r},{label},A")
    lines.extend(extra_rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def marker_csv(tmp_path, rng) -> Path:
    """A marker whose class means decrease from D- to D+ (sizes 30, 25, 20)."""
    return write_marker_csv(
        tmp_path / "markers.csv",
        {
            "D-": rng.normal(3.0, 1.0, 30),
            "D0": rng.normal(0.5, 1.0, 25),
            "D+": rng.normal(-2.5, 1.0, 20),
        },
    )


@pytest.fixture
def temp_workdir(tmp_path):
    """Run the test inside an empty working directory (for .env handling)."""
    original_cwd = os.getcwd()
    os.chdir(tmp_path)
    yield tmp_path
    os.chdir(original_cwd)
