import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from quasilie.brackets import BracketTable
from quasilie.exterior import Multivector, dual, primal
from quasilie.quasi import QuasiLieBialgebra, from_r_matrix

SL2_ENTRIES = [(0, 1, 1, 2), (0, 2, 2, -2), (1, 2, 0, 1)]


@pytest.fixture(scope="session")
def sl2_table():
    return BracketTable.from_entries(primal(3), SL2_ENTRIES)


@pytest.fixture(scope="session")
def heisenberg_table():
    return BracketTable.from_entries(primal(3), [(0, 1, 2, 1)])


@pytest.fixture(scope="session")
def sl2_exact(sl2_table):
    e = Multivector.basis(primal(3), 1)
    f = Multivector.basis(primal(3), 2)
    return from_r_matrix(sl2_table, e.wedge(f), ("h", "e", "f"))


@pytest.fixture(scope="session")
def sl2_bialgebra(sl2_table):
    gamma = BracketTable.from_entries(dual(3), [(0, 1, 1, 1), (0, 2, 2, 1)])
    return QuasiLieBialgebra(
        3, ("h", "e", "f"), sl2_table, gamma, Multivector.zero(primal(3))
    )


@pytest.fixture(scope="session")
def heisenberg_exact(heisenberg_table):
    x = Multivector.basis(primal(3), 0)
    y = Multivector.basis(primal(3), 1)
    return from_r_matrix(heisenberg_table, x.wedge(y), ("x", "y", "z"))


@pytest.fixture(scope="session")
def abelian2():
    return QuasiLieBialgebra(
        2,
        ("e1", "e2"),
        BracketTable.zero(primal(2)),
        BracketTable.zero(dual(2)),
        Multivector.zero(primal(2)),
    )


@pytest.fixture(scope="session")
def aff4_table():
    # [a, b] = b with two central directions: the smallest structure whose
    # grade-3 space carries non-invariant elements.
    return BracketTable.from_entries(primal(4), [(0, 1, 1, 1)])


@pytest.fixture(scope="session")
def aff4_exact(aff4_table):
    a = Multivector.basis(primal(4), 0)
    b = Multivector.basis(primal(4), 1)
    z1 = Multivector.basis(primal(4), 2)
    return from_r_matrix(aff4_table, a.wedge(b) + a.wedge(z1), ("a", "b", "z1", "z2"))
