import pytest

from mpvar.fields import GF
from mpvar.polyring import make_ring
from mpvar.ratmaps import MultiRationalMap
from mpvar.varieties import ambient_space, make_variety

# cubic fourfold containing the planes t=u=v=0 and x=y=z=0
CUBIC = ("t*u*x-u^2*x+u*v*x-v^2*x+t*x^2-u*x^2+t^2*y-t*u*y-t*v*y-t*x*y-v*x*y-t*y^2"
         "+t*u*z+v^2*z-t*x*z-u*y*z-v*y*z-t*z^2+u*z^2")

P_DEFAULT = 65537

_ACCEPTANCE_LINES: list = []


def record_criterion(line: str):
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def build_cubic_example(field):
    """(X, Phi) with Phi = (projection from one plane, projection from the other) restricted to X."""
    R = make_ring(field, [5], names="t u v x y z".split())
    t, u, v, x, y, z = R.gens()
    X = make_variety(R, [R.parse(CUBIC)], "X")
    target = ambient_space(make_ring(field, [2, 2]))
    phi = MultiRationalMap(ambient_space(R), target, [[[t, u, v]], [[x, y, z]]]).restrict(X)
    return X, phi


@pytest.fixture(scope="session")
def cubic_example():
    return build_cubic_example(GF(P_DEFAULT))


@pytest.fixture(scope="session")
def cubic_graph(cubic_example):
    _, phi = cubic_example
    return phi.graph()
