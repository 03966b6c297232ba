import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SRC = os.path.join(ROOT, "src")
if SRC not in sys.path:
    sys.path.insert(0, SRC)

from driftqec.power_law import PowerLawFit
from driftqec.surface import build_rotated_code

CONFIG_DIR = os.path.join(SRC, "driftqec", "configs")


@pytest.fixture(scope="session")
def layout_d3():
    return build_rotated_code(3)


@pytest.fixture(scope="session")
def layout_d5():
    return build_rotated_code(5)


@pytest.fixture(scope="session")
def shipped_fit() -> PowerLawFit:
    with open(os.path.join(CONFIG_DIR, "fit_d3.json"), encoding="utf-8") as fh:
        return PowerLawFit.from_json(fh.read())


@pytest.fixture(scope="session")
def config_dir() -> str:
    return CONFIG_DIR
