import os
import pytest

from pn2sc.fileio import dump_document, read_petri_net, read_statechart
from pn2sc.generate import generate_known_corpus

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data')


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def net_bytes():
    """Bytes of tests/data/nets/<name>.json."""

    def _read(name):
        with open(os.path.join(DATA_DIR, 'nets', f'{name}.json'), 'rb') as f:
            return f.read()

    return _read


@pytest.fixture
def golden_bytes():
    """Bytes of tests/data/golden/<name>.json."""

    def _read(name):
        with open(os.path.join(DATA_DIR, 'golden', f'{name}.json'), 'rb') as f:
            return f.read()

    return _read


@pytest.fixture
def load_net(net_bytes):
    return lambda name: read_petri_net(net_bytes(name))


@pytest.fixture
def load_golden(golden_bytes):
    return lambda name: read_statechart(golden_bytes(name))


@pytest.fixture
def corpus():
    return {fixture.name: fixture for fixture in generate_known_corpus()}


@pytest.fixture
def net_of(corpus):
    """Fresh Petri net store of a corpus fixture."""
    return lambda name: read_petri_net(dump_document(corpus[name].net))
