import os

import pytest

from koszulity.presentation import Quiver, Arrow, Relation, build_algebra
from koszulity.algebra import trivial_extension
from koszulity import modules as mo

DATA = os.path.join(os.path.dirname(__file__), "data")


def data_path(name):
    return os.path.join(DATA, name)


def rel(*paths):
    """Zero relation from one or more (coeff, path) terms given as strings."""
    terms = []
    for p in paths:
        if isinstance(p, tuple):
            terms.append((p[0], tuple(p[1].split("*"))))
        else:
            terms.append((1, tuple(p.split("*"))))
    return Relation(tuple(terms))


@pytest.fixture(scope="session")
def a4():
    q = Quiver(4, (Arrow("a1", 1, 2, 0), Arrow("a2", 1, 3, 0),
                   Arrow("a3", 2, 4, 0), Arrow("a4", 3, 4, 0)))
    return build_algebra(q, [rel("a1*a3"), rel("a2*a4")], 3, name="a4")


@pytest.fixture(scope="session")
def delta_a4(a4):
    return trivial_extension(a4)


@pytest.fixture(scope="session")
def a2():
    q = Quiver(2, (Arrow("al", 1, 2, 0),))
    return build_algebra(q, [], 2, name="a2")


@pytest.fixture(scope="session")
def delta_a2(a2):
    return trivial_extension(a2)


@pytest.fixture(scope="session")
def kron():
    q = Quiver(2, (Arrow("a", 1, 2, 0), Arrow("b", 1, 2, 0)))
    return build_algebra(q, [], 2, name="kron")


@pytest.fixture(scope="session")
def delta_kron(kron):
    return trivial_extension(kron)


@pytest.fixture(scope="session")
def dualnum():
    q = Quiver(1, (Arrow("x", 1, 1, 1),))
    return build_algebra(q, [rel("x*x")], 2, name="dualnum")


@pytest.fixture(scope="session")
def x3():
    q = Quiver(1, (Arrow("x", 1, 1, 1),))
    return build_algebra(q, [rel("x*x*x")], 3, name="x3")


@pytest.fixture(scope="session")
def nak2():
    q = Quiver(2, (Arrow("a", 1, 2, 1), Arrow("b", 2, 1, 1)))
    return build_algebra(q, [rel("a*b"), rel("b*a")], 2, name="nak2")


@pytest.fixture(scope="session")
def point():
    return build_algebra(Quiver(1, ()), [], 1, name="point")


@pytest.fixture(scope="session")
def t_summands(a4, delta_a4):
    parts = (mo.projective_module(a4, 1), mo.simple_module(a4, 2),
             mo.simple_module(a4, 3), mo.dual_of_left_projective(a4, 4))
    return [mo.inflate_module(p, delta_a4) for p in parts]


@pytest.fixture(scope="session")
def a2_summands(a2, delta_a2):
    return [mo.inflate_module(mo.projective_module(a2, v), delta_a2)
            for v in a2.vertices]


@pytest.fixture(scope="session")
def kron_summands(kron, delta_kron):
    return [mo.inflate_module(mo.projective_module(kron, v), delta_kron)
            for v in kron.vertices]
