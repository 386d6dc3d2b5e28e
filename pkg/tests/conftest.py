"""Shared fixtures: models, labels and an isolated log directory."""
import cmath
import math
import os

import numpy as np
import pytest

from bargmann.core.states import Label
from bargmann.models.symbols import harmonic_oscillator, quartic_number
from bargmann.utils.emoji_logger import EmojiLogger

FIG1_Z = 1 / (2 * math.sqrt(2))
CAUSTIC_T = 1.0
CAUSTIC_Z0 = 0.4
# zf* = (i / (2 T_c)) exp(-1 + 2 i T_c) / z0 puts a caustic of the continued root at T_c
CAUSTIC_ZF_STAR = 0.5j / CAUSTIC_T * cmath.exp(-1 + 2j * CAUSTIC_T) / CAUSTIC_Z0


def relative_error(a: complex, b: complex) -> float:
    return abs(a - b) / abs(b)


@pytest.fixture(scope="session", autouse=True)
def log_dir(tmp_path_factory):
    """Send the rotating logs to a temporary directory."""
    path = tmp_path_factory.mktemp("logs")
    os.environ["BARGMANN_LOG_DIR"] = str(path)
    EmojiLogger._logging_setup_done = False
    yield path
    os.environ.pop("BARGMANN_LOG_DIR", None)


@pytest.fixture
def ho():
    return harmonic_oscillator(omega=1.0)


@pytest.fixture
def quartic():
    return quartic_number()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def fig1_labels():
    z = Label.from_complex(FIG1_Z)
    return z, z


@pytest.fixture
def caustic_labels():
    return Label.from_complex(CAUSTIC_Z0), Label.from_complex(CAUSTIC_ZF_STAR.conjugate())
