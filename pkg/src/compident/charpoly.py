"""The double characteristic polynomial map and its image dimension.

For a graph G the map sends the n+m model parameters to the coefficients
(c_1..c_n) of det(lambda*I - A) and (d_1..d_{n-1}) of det(lambda*I - A_1),
where A_1 deletes row and column 1. These are exactly the coefficients of the
input-output equation when G is strongly connected. The image dimension is
computed as the rank of the exact Jacobian at random points; the graph "has
the expected dimension" when that rank is m+1, the number of independent
monomial cycles.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from typing import Sequence

from . import exact
from .errors import NotExpectedDimension, NotStronglyConnected
from .exact import PRIME_MODE, field_for_mode, jet_space
from .graphs import (
    CompartmentGraph,
    Cycle,
    canonical_form,
    elementary_cycles,
    is_strongly_connected,
)
from .monomial import MonomialPolynomial, signed_parts


def parameter_count(graph: CompartmentGraph) -> int:
    return graph.n + graph.m


def diagonal_slot(vertex: int) -> int:
    return vertex - 1


def edge_slot(graph: CompartmentGraph, edge_index: int) -> int:
    return graph.n + edge_index


def _cycle_param_exponent(graph: CompartmentGraph, cycle: Cycle) -> tuple[int, ...]:
    expo = [0] * parameter_count(graph)
    if cycle.length == 1:
        expo[diagonal_slot(cycle.vertices[0])] = 1
    else:
        for e in cycle.edge_indices:
            expo[edge_slot(graph, e)] = 1
    return tuple(expo)


def symbolic_coefficients(
    graph: CompartmentGraph,
) -> tuple[list[MonomialPolynomial], list[MonomialPolynomial]]:
    """Expand every coefficient as a polynomial in the monomial cycles.

    c_i sums (-1)^i * prod(sign) over all collections of vertex-disjoint
    cycles with exactly i edges, a one-cycle counting as one edge; the sign
    of a cycle is +1 for odd length and -1 for even. d_i does the same on
    the subgraph with vertex 1 removed.
    """
    nvars = parameter_count(graph)
    cycles = elementary_cycles(graph)
    enriched = [
        (
            frozenset(c.vertices),
            c.length,  # edge count: a one-cycle contributes one edge
            c.sign,
            _cycle_param_exponent(graph, c),
            1 in c.vertices,
        )
        for c in cycles
    ]

    def expand(skip_vertex_one: bool, max_edges: int) -> list[MonomialPolynomial]:
        polys = [MonomialPolynomial(nvars) for _ in range(max_edges)]
        pool = [e for e in enriched if not (skip_vertex_one and e[4])]

        def recurse(start: int, used_vertices: frozenset, edges: int, sign: int, expo: tuple):
            for idx in range(start, len(pool)):
                verts, weight, csign, cexpo, _ = pool[idx]
                total = edges + weight
                if total > max_edges or used_vertices & verts:
                    continue
                merged = tuple(a + b for a, b in zip(expo, cexpo))
                s = sign * csign
                polys[total - 1].add_term(merged, (-1) ** total * s)
                recurse(idx + 1, used_vertices | verts, total, s, merged)

        recurse(0, frozenset(), 0, 1, (0,) * nvars)
        return polys

    cs = expand(skip_vertex_one=False, max_edges=graph.n)
    ds = expand(skip_vertex_one=True, max_edges=graph.n - 1) if graph.n > 1 else []
    return cs, ds


def _sparse_rows(graph: CompartmentGraph, values: Sequence, ring, skip_vertex_one: bool):
    """Matrix of the model as sparse rows [(col, value), ...], 0-indexed."""
    offset = 1 if skip_vertex_one else 0
    size = graph.n - offset
    rows = [[] for _ in range(size)]
    for v in range(1 + offset, graph.n + 1):
        rows[v - 1 - offset].append((v - 1 - offset, values[diagonal_slot(v)]))
    for k, (j, i) in enumerate(graph.edges):
        if skip_vertex_one and (j == 1 or i == 1):
            continue
        rows[i - 1 - offset].append((j - 1 - offset, values[edge_slot(graph, k)]))
    return rows


def char_poly_coefficients(sparse_rows, size: int, ring) -> list:
    """Coefficients c_1..c_n of det(lambda*I - A) by the Faddeev-LeVerrier
    recurrence, valid over any ring where dividing by 1..n is exact."""
    exact.check_characteristic(ring, size)
    if size == 0:
        return []
    zero = ring.zero
    # M_1 = I; at step k: c_k = -tr(A M_k)/k, M_{k+1} = A M_k + c_k I.
    M = [[ring.one if r == c else zero for c in range(size)] for r in range(size)]
    coeffs = []
    for k in range(1, size + 1):
        AM = [[zero] * size for _ in range(size)]
        for r in range(size):
            out = AM[r]
            for col, a in sparse_rows[r]:
                mrow = M[col]
                for c in range(size):
                    x = mrow[c]
                    if x is not zero:
                        out[c] = ring.add(out[c], ring.mul(a, x))
        trace = zero
        for r in range(size):
            trace = ring.add(trace, AM[r][r])
        ck = ring.neg(ring.div_int(trace, k))
        coeffs.append(ck)
        if k < size:
            for r in range(size):
                AM[r][r] = ring.add(AM[r][r], ck)
            M = AM
    return coeffs


def numeric_coefficients(
    graph: CompartmentGraph, values: Sequence, ring
) -> tuple[list, list]:
    """Evaluate (c_1..c_n, d_1..d_{n-1}) at a point.

    `values` holds one ring element per parameter in canonical order
    (diagonals first, then edges); jets are fine, in which case the
    coefficients come back as jets carrying exact gradients.
    """
    if len(values) != parameter_count(graph):
        raise ValueError(
            f"expected {parameter_count(graph)} parameter values, got {len(values)}"
        )
    cs = char_poly_coefficients(
        _sparse_rows(graph, values, ring, skip_vertex_one=False), graph.n, ring
    )
    ds = char_poly_coefficients(
        _sparse_rows(graph, values, ring, skip_vertex_one=True), graph.n - 1, ring
    )
    return cs, ds


def jacobian(graph: CompartmentGraph, point: Sequence[int], mode: str = PRIME_MODE):
    """Exact (2n-1) x (n+m) Jacobian of the coefficient map at `point`.

    One jet-valued evaluation produces every gradient; row k is the gradient
    of the k-th coordinate (c's then d's).
    """
    nvars = parameter_count(graph)
    jets = jet_space(mode, nvars)
    base = jets.base
    values = [
        jets.variable(base.from_int(x), idx) for idx, x in enumerate(point)
    ]
    cs, ds = numeric_coefficients(graph, values, jets)
    return [list(jets.gradient(c)) for c in cs] + [list(jets.gradient(d)) for d in ds]


@dataclass(frozen=True)
class DimensionReport:
    """Computed generic dimension of the coefficient map image."""

    n: int
    m: int
    d: int
    expected: int
    verdict: bool
    trials: int
    seed: int
    mode: str

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "d": self.d,
            "expected": self.expected,
            "verdict": self.verdict,
            "trials": self.trials,
            "seed": self.seed,
            "mode": self.mode,
        }


def derived_rng(seed: int, graph: CompartmentGraph, label: str = "") -> random.Random:
    """RNG stream derived from (seed, canonical form), so results do not
    depend on evaluation order and relabeled graphs share a stream."""
    digest = hashlib.sha256(
        f"{label}|{seed}|".encode("ascii") + canonical_form(graph)
    ).digest()
    return random.Random(int.from_bytes(digest[:16], "big"))


def sample_point(rng: random.Random, count: int, p: int = exact.MERSENNE61) -> list[int]:
    """Uniform nonzero field elements, one per parameter."""
    return [rng.randrange(1, p) for _ in range(count)]


def image_dimension(
    graph: CompartmentGraph,
    trials: int = 2,
    seed: int = 0,
    mode: str = PRIME_MODE,
) -> DimensionReport:
    """Dimension of the image as the maximal Jacobian rank over random points.

    Randomized rank can only under-report; two independent points (the
    default) make a miss negligible, and more trials never decrease the
    answer for a fixed seed.
    """
    if not is_strongly_connected(graph):
        raise NotStronglyConnected(
            "image dimension is defined for strongly connected graphs; "
            "reduce with io_strong_component first"
        )
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = derived_rng(seed, graph)
    nvars = parameter_count(graph)
    best = 0
    for _ in range(trials):
        point = sample_point(rng, nvars)
        jac = jacobian(graph, point, mode)
        best = max(best, exact.rank(jac, mode))
    return DimensionReport(
        n=graph.n,
        m=graph.m,
        d=best,
        expected=graph.m + 1,
        verdict=best == graph.m + 1,
        trials=trials,
        seed=seed,
        mode=mode,
    )


def has_expected_dimension(
    graph: CompartmentGraph,
    trials: int = 2,
    seed: int = 0,
    mode: str = PRIME_MODE,
) -> bool:
    """True iff the image dimension attains its maximum m+1.

    Short-circuits to False when m > 2n-2, since the image lives in
    dimension 2n-1; no rank computation happens in that case.
    """
    if not is_strongly_connected(graph):
        raise NotStronglyConnected("expected dimension needs a strongly connected graph")
    if graph.m > 2 * graph.n - 2:
        return False
    return image_dimension(graph, trials=trials, seed=seed, mode=mode).verdict


def _derivative_name(base: str, order: int) -> str:
    if order == 0:
        return base
    if order <= 3:
        return base + "'" * order
    return f"{base}^({order})"


def io_equation_text(graph: CompartmentGraph) -> str:
    """Render the input-output equation with fully expanded coefficients."""
    if not is_strongly_connected(graph):
        raise NotStronglyConnected(
            "the coefficient form of the input-output equation needs a "
            "strongly connected graph (otherwise the two characteristic "
            "polynomials share a factor)"
        )
    cs, ds = symbolic_coefficients(graph)
    names = graph.param_names()

    def side(base: str, top_order: int, polys: list[MonomialPolynomial]) -> str:
        text = _derivative_name(base, top_order)
        for k, poly in enumerate(polys, start=1):
            if poly.is_zero():
                continue
            sign, body = signed_parts(poly, names)
            if len(poly.terms) > 1:
                body = f"({body})"
            text += (" - " if sign < 0 else " + ") + f"{body}*{_derivative_name(base, top_order - k)}"
        return text

    return side("y", graph.n, cs) + " = " + side("u1", graph.n - 1, ds)


def identifiable_cycle_functions(
    graph: CompartmentGraph,
    trials: int = 2,
    seed: int = 0,
    mode: str = PRIME_MODE,
) -> list[Cycle]:
    """m+1 algebraically independent identifiable cycle monomials.

    The n diagonal one-cycles plus the m-n+1 basis cycles used by the
    reparametrization. Only defined for graphs with the expected dimension.
    """
    if not has_expected_dimension(graph, trials=trials, seed=seed, mode=mode):
        raise NotExpectedDimension(
            "graph does not have the expected dimension; no independent "
            "identifiable cycle set of size m+1 exists"
        )
    from .reparam import cycle_basis, spanning_tree  # cycle selection lives there

    ones = [c for c in elementary_cycles(graph) if c.length == 1]
    if graph.n == 1:
        return ones
    basis = cycle_basis(graph, spanning_tree(graph))
    return ones + list(basis.cycles)


def evaluate_symbolic(
    graph: CompartmentGraph, values: Sequence[int], mode: str = PRIME_MODE
) -> tuple[list, list]:
    """Evaluate the symbolic expansion at a point (oracle counterpart of
    numeric_coefficients)."""
    field = field_for_mode(mode)
    cs, ds = symbolic_coefficients(graph)
    vals = [field.from_int(v) for v in values]
    return (
        [c.evaluate(vals, field) for c in cs],
        [d.evaluate(vals, field) for d in ds],
    )
