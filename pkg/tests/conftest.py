from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from liftgap import (
    build_cgk_loop,
    build_frame_family,
    build_cgk_matrix,
    build_sym_pair,
    metric_closure,
)


@pytest.fixture(scope="session")
def loop23():
    return build_cgk_loop(2, 3)


@pytest.fixture(scope="session")
def family23(loop23):
    return build_frame_family(loop23)


@pytest.fixture(scope="session")
def certificate23(loop23, family23):
    return build_cgk_matrix(loop23, family23)


@pytest.fixture(scope="session")
def metric23(loop23):
    return metric_closure(loop23)


@pytest.fixture(scope="session")
def sympath30():
    return build_sym_pair(3, 0)


@pytest.fixture(scope="session")
def metric30(sympath30):
    return metric_closure(sympath30[0])


@pytest.fixture(scope="session")
def two_thirds23(loop23):
    return tuple(Fraction(2, 3) for _ in range(loop23.m))
