import os
import sys

import pytest

# Adiciona o diretório raiz do projeto ao Python path
project_root = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, project_root)

from src.fca.formal_context import FormalContext
from src.measures.catalog import load_catalog
from src.properties.sampling_grid import SamplingGrid


def make_context(rows: dict[str, str], attributes: str | None = None) -> FormalContext:
    """Contexto a partir de {objeto: "ab"} com atributos de uma letra."""
    letters = attributes or "".join(sorted({letter for row in rows.values() for letter in row}))
    incidence = [[letter in row for letter in letters] for row in rows.values()]
    return FormalContext.from_incidence(list(rows), list(letters), incidence)


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


@pytest.fixture(scope="session")
def grid():
    return SamplingGrid()


@pytest.fixture
def identity_context():
    return FormalContext.from_incidence(
        ["g1", "g2", "g3"], ["m1", "m2", "m3"], [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    )


@pytest.fixture
def contranominal_context():
    return FormalContext.from_incidence(["g1", "g2"], ["m1", "m2"], [[0, 1], [1, 0]])


@pytest.fixture
def chain_context():
    return FormalContext.from_incidence(
        ["g1", "g2", "g3"], ["m1", "m2", "m3"], [[1, 0, 0], [1, 1, 0], [1, 1, 1]]
    )
