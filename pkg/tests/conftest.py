"""Shared fixture graphs and brute-force oracles.

The oracles here deliberately avoid the library's own algorithms: strong
connectivity via all-pairs reachability, ranks via plain Gaussian
elimination over Fractions, characteristic polynomials via sympy.
"""

from fractions import Fraction

import pytest

from compident import CompartmentGraph


@pytest.fixture
def chain4() -> CompartmentGraph:
    """Four compartments: exchange at 2, 2-cycle (2,3), 3-cycle (2,4,3)."""
    return CompartmentGraph(4, ((2, 1), (1, 2), (3, 2), (2, 3), (4, 3), (2, 4)))


@pytest.fixture
def broken4() -> CompartmentGraph:
    """Four compartments, six edges, image dimension stuck at 6."""
    return CompartmentGraph(4, ((2, 1), (1, 2), (3, 2), (4, 3), (2, 4), (3, 4)))


@pytest.fixture
def wheel5() -> CompartmentGraph:
    """Five compartments, eight edges, inductively strongly connected."""
    return CompartmentGraph(
        5, ((3, 1), (5, 1), (1, 2), (1, 3), (2, 3), (4, 3), (3, 4), (4, 5))
    )


@pytest.fixture
def exchange2() -> CompartmentGraph:
    return CompartmentGraph(2, ((1, 2), (2, 1)))


@pytest.fixture
def single() -> CompartmentGraph:
    return CompartmentGraph(1, ())


def directed_cycle_graph(n: int) -> CompartmentGraph:
    return CompartmentGraph(n, tuple([(v, v + 1) for v in range(1, n)] + [(n, 1)]))


@pytest.fixture
def cycle3() -> CompartmentGraph:
    return directed_cycle_graph(3)


def oracle_reachable(graph: CompartmentGraph, start: int) -> set:
    """Reachability by repeated relaxation (no DFS machinery shared with
    the implementation)."""
    reach = {start}
    changed = True
    while changed:
        changed = False
        for j, i in graph.edges:
            if j in reach and i not in reach:
                reach.add(i)
                changed = True
    return reach


def oracle_strongly_connected(graph: CompartmentGraph) -> bool:
    vertices = range(1, graph.n + 1)
    return all(oracle_reachable(graph, v) == set(vertices) for v in vertices)


def oracle_rank(rows) -> int:
    """Gaussian elimination over Fractions."""
    mat = [[Fraction(x) for x in row] for row in rows]
    if not mat or not mat[0]:
        return 0
    nrows, ncols = len(mat), len(mat[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if mat[r][col] != 0), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        pv = mat[rank][col]
        mat[rank] = [x / pv for x in mat[rank]]
        for r in range(nrows):
            if r != rank and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [x - f * y for x, y in zip(mat[r], mat[rank])]
        rank += 1
    return rank


def sympy_double_charpoly(graph: CompartmentGraph):
    """Symbolic (c, d) coefficient lists straight from sympy determinants."""
    import sympy

    lam = sympy.Symbol("lam")
    n = graph.n
    A = sympy.zeros(n, n)
    for v in range(1, n + 1):
        A[v - 1, v - 1] = sympy.Symbol(f"a{v}{v}")
    for j, i in graph.edges:
        A[i - 1, j - 1] = sympy.Symbol(f"a{i}{j}")
    poly = (lam * sympy.eye(n) - A).det().expand()
    cs = [sympy.expand(poly.coeff(lam, n - k)) for k in range(1, n + 1)]
    if n == 1:
        return cs, []
    A1 = A[1:, 1:]
    poly1 = (lam * sympy.eye(n - 1) - A1).det().expand()
    ds = [sympy.expand(poly1.coeff(lam, n - 1 - k)) for k in range(1, n)]
    return cs, ds
