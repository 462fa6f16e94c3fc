import pytest

from ncnet import fixtures as F
from ncnet.bracket import BracketParams, Engine, NetworkSystem


@pytest.fixture(scope="session")
def fig1():
    return F.fig1()


@pytest.fixture(scope="session")
def gamma_white():
    return F.gamma_white()


@pytest.fixture(scope="session")
def gamma_black():
    return F.gamma_black()


@pytest.fixture(scope="session")
def gamma_black_cut():
    return F.gamma_black_cut()


@pytest.fixture(scope="session")
def glued_pair():
    return F.glued_pair()


@pytest.fixture(scope="session")
def torus():
    return F.torus_fixture()


@pytest.fixture(scope="session")
def named_fixtures(fig1, gamma_white, gamma_black, gamma_black_cut, glued_pair):
    return {
        "fig1": fig1,
        "gamma_white": gamma_white,
        "gamma_black": gamma_black,
        "gamma_black_cut": gamma_black_cut,
        "glued_pair": glued_pair,
    }


def engine_for(net, params=None):
    return Engine(NetworkSystem(net), params or BracketParams.standard())


def boundary_words(net, max_len=5):
    """All boundary-to-boundary path words of the measurement matrix, short ones."""
    out = []
    m = net.boundary_matrix()
    for row in m.entries:
        for e in row:
            for w in e.terms:
                if 0 < len(w) <= max_len:
                    out.append(w)
    return out
