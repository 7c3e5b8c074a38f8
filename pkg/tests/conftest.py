"""Shared fixtures: group models, seeded generators and stock charts."""
from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.data.loader import load_pattern  # noqa: E402
from src.lie.models import sl2r, su2, torus2  # noqa: E402
from src.moduli.chart import build_chart  # noqa: E402

SEED = 0xC0FFEE


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(SEED)


@pytest.fixture(scope="session")
def su2_model():
    return su2()


@pytest.fixture(scope="session")
def sl2r_model():
    return sl2r()


@pytest.fixture(scope="session")
def t2_model():
    return torus2()


@pytest.fixture(scope="session", params=["SU2", "SL2R", "T2"])
def model(request):
    return {"SU2": su2, "SL2R": sl2r, "T2": torus2}[request.param]()


@pytest.fixture(scope="session")
def chart_factory():
    cache = {}

    def make(pattern_name: str, model):
        key = (pattern_name, model.name)
        if key not in cache:
            cache[key] = build_chart(load_pattern(pattern_name), model)
        return cache[key]

    return make
