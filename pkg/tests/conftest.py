import sys
from pathlib import Path

import numpy as np
import pytest

SRC = Path(__file__).resolve().parents[1] / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from trajmine.model import TrajectoryMatrix, make_dataset  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def build_matrix(attack_id, label, coords, rate=5.0):
    return TrajectoryMatrix(
        attack_id=attack_id, label=label, coords=np.asarray(coords, float),
        sample_rate_hz=rate,
    )


@pytest.fixture
def tiny_dataset():
    """Two K=1 attacks: m2 is m1 shifted by +0.1 in y."""
    walk = np.linspace(0.0, 9.0, 10)
    c1 = np.stack([walk, np.zeros(10)], axis=1)[:, None, :]
    c2 = np.stack([walk, np.full(10, 0.1)], axis=1)[:, None, :]
    return make_dataset(
        [build_matrix("a", 1, c1), build_matrix("b", -1, c2)]
    )
