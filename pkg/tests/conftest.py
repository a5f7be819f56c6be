from pathlib import Path

import pytest

from src.helpers.cubic.curve import CubicForm, ProjPoint

CURVES_DIR = Path(__file__).resolve().parent.parent / "curves"

FERMAT = (1, 0, 0, 0, 0, 0, 1, 0, 0, 1)
F6 = (1, 0, 0, 0, 0, 0, 1, 0, 0, -6)
SELMER = (3, 0, 0, 0, 0, 0, 4, 0, 0, 5)
NODAL = (-1, 0, -1, 0, 0, 0, 0, 1, 0, 0)
RANK_ONE_37 = (-1, 0, 0, 0, 0, 1, 0, 1, 1, 0)


@pytest.fixture
def curves_dir() -> Path:
    return CURVES_DIR


@pytest.fixture
def fermat() -> CubicForm:
    return CubicForm(FERMAT, "fermat")


@pytest.fixture
def f6() -> CubicForm:
    return CubicForm(F6, "f6")


@pytest.fixture
def selmer() -> CubicForm:
    return CubicForm(SELMER, "selmer")


@pytest.fixture
def nodal() -> CubicForm:
    return CubicForm(NODAL, "nodal")


@pytest.fixture
def rank_one_37() -> CubicForm:
    return CubicForm(RANK_ONE_37, "rank_one_37")


@pytest.fixture
def origin() -> ProjPoint:
    """[1:-1:0], a flex on both the Fermat cubic and F6"""
    return ProjPoint((1, -1, 0))


@pytest.fixture
def generator() -> ProjPoint:
    return ProjPoint((17, 37, 21))
