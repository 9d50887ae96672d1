import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from compident import (
    InconsistentSystem,
    NotSquare,
    NotUnimodular,
    incidence_matrix,
)
from compident.exact import (
    MERSENNE61,
    PRIME_FIELD,
    PRIME_MODE,
    RATIONAL_FIELD,
    RATIONAL_MODE,
    JetSpace,
    PrimeJetSpace,
    det_int,
    integer_solve_in_lattice,
    inverse_unimodular,
    rank,
    rank_bareiss,
    rank_mod_p,
)

from conftest import oracle_rank


class TestRank:
    def test_identity(self):
        eye = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        assert rank(eye) == 3
        assert rank(eye, PRIME_MODE) == 3

    def test_chain4_incidence(self, chain4):
        E = incidence_matrix(chain4)
        assert rank(E) == 3
        assert rank(E, PRIME_MODE) == 3

    def test_zero_matrix(self):
        assert rank([[0, 0], [0, 0]]) == 0

    def test_empty(self):
        assert rank([]) == 0

    def test_fraction_entries(self):
        rows = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), Fraction(1, 1)]]
        assert rank(rows, RATIONAL_MODE) == oracle_rank(rows)

    def test_random_matches_gauss_oracle(self):
        rng = random.Random(17)
        for _ in range(300):
            nr = rng.randrange(1, 6)
            nc = rng.randrange(1, 6)
            rows = [[rng.randrange(-4, 5) for _ in range(nc)] for _ in range(nr)]
            expected = oracle_rank(rows)
            assert rank_bareiss(rows) == expected
            assert rank_mod_p(rows) == expected  # entries tiny, no wraparound

    def test_modes_agree_on_integer_fixtures(self):
        rng = random.Random(3)
        for _ in range(100):
            rows = [[rng.randrange(0, 1000) for _ in range(4)] for _ in range(4)]
            assert rank_bareiss(rows) == rank_mod_p(rows)


def random_unimodular(rng: random.Random, size: int, steps: int = 12):
    """Product of elementary row operations applied to the identity."""
    mat = [[1 if r == c else 0 for c in range(size)] for r in range(size)]
    for _ in range(steps):
        a, b = rng.randrange(size), rng.randrange(size)
        if a == b:
            continue
        k = rng.randrange(-3, 4)
        for c in range(size):
            mat[a][c] += k * mat[b][c]
    if rng.random() < 0.5 and size > 1:
        mat[0], mat[1] = mat[1], mat[0]
    return mat


class TestInverseUnimodular:
    def test_tree_block_fixture(self, chain4):
        E = incidence_matrix(chain4)
        tree_cols = [0, 2, 4]  # a12, a23, a34
        block = [[E[r][c] for c in tree_cols] for r in range(1, 4)]
        assert inverse_unimodular(block) == [[1, 1, 1], [0, 1, 1], [0, 0, 1]]

    def test_identity(self):
        eye = [[1, 0], [0, 1]]
        assert inverse_unimodular(eye) == eye

    def test_rejects_det_two(self):
        with pytest.raises(NotUnimodular):
            inverse_unimodular([[2]])

    def test_rejects_non_square(self):
        with pytest.raises(NotSquare):
            inverse_unimodular([[1, 0]])

    @given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=1, max_value=5))
    @settings(max_examples=60, deadline=None)
    def test_inverse_times_matrix_is_identity(self, seed, size):
        rng = random.Random(seed)
        mat = random_unimodular(rng, size)
        assert det_int(mat) in (1, -1)
        inv = inverse_unimodular(mat)
        prod = [
            [sum(inv[r][k] * mat[k][c] for k in range(size)) for c in range(size)]
            for r in range(size)
        ]
        assert prod == [[1 if r == c else 0 for c in range(size)] for r in range(size)]


class TestLatticeSolve:
    def test_identity_block(self):
        M = [[1, 0], [0, 1], [1, 1]]
        z = integer_solve_in_lattice(M, [1, 0, 1], (0, 1))
        assert z == [1, 0]

    def test_zero_target(self):
        M = [[1, 0], [0, 1], [1, 1]]
        assert integer_solve_in_lattice(M, [0, 0, 0], (0, 1)) == [0, 0]

    def test_non_unimodular_block(self):
        with pytest.raises(NotUnimodular):
            integer_solve_in_lattice([[2]], [2], (0,))

    def test_inconsistent_target(self):
        M = [[1, 0], [0, 1], [1, 1]]
        with pytest.raises(InconsistentSystem):
            integer_solve_in_lattice(M, [1, 0, 7], (0, 1))


def _sympy_gradient(expr, symbols, point):
    import sympy

    subs = dict(zip(symbols, point))
    value = expr.subs(subs)
    grads = [sympy.diff(expr, s).subs(subs) for s in symbols]
    return value, grads


@st.composite
def rational_expressions(draw):
    """A random arithmetic expression tree over x0, x1, x2."""
    import sympy

    symbols = sympy.symbols("x0 x1 x2")

    def build(depth):
        if depth == 0 or draw(st.booleans()):
            choice = draw(st.integers(min_value=0, max_value=3))
            if choice == 3:
                return sympy.Integer(draw(st.integers(min_value=-5, max_value=5)))
            return symbols[choice]
        op = draw(st.sampled_from(["+", "-", "*", "/"]))
        left = build(depth - 1)
        right = build(depth - 1)
        if op == "+":
            return left + right
        if op == "-":
            return left - right
        if op == "*":
            return left * right
        return left / right

    return symbols, build(3)


class TestJets:
    @given(rational_expressions(), st.tuples(*[st.integers(min_value=1, max_value=9)] * 3))
    @settings(max_examples=80, deadline=None)
    def test_partials_match_symbolic_differentiation(self, sym_expr, point):
        import sympy

        symbols, expr = sym_expr
        assume(not expr.has(sympy.zoo, sympy.nan, sympy.oo))
        jets = JetSpace(RATIONAL_FIELD, 3)
        values = [jets.variable(Fraction(x), i) for i, x in enumerate(point)]
        env = dict(zip((str(s) for s in symbols), values))

        def evaluate(node):
            if node.is_Rational:
                return jets.constant(Fraction(node.p, node.q))
            if node.is_Symbol:
                return env[str(node)]
            if node.is_Add:
                acc = jets.zero
                for arg in node.args:
                    acc = jets.add(acc, evaluate(arg))
                return acc
            if node.is_Mul:
                acc = jets.one
                for arg in node.args:
                    acc = jets.mul(acc, evaluate(arg))
                return acc
            if node.is_Pow:
                base, expo = node.args
                assert expo.is_Integer
                e = int(expo)
                b = evaluate(base)
                if e < 0:
                    b = jets.inv(b)
                    e = -e
                acc = jets.one
                for _ in range(e):
                    acc = jets.mul(acc, b)
                return acc
            raise AssertionError(f"unexpected node {node}")

        try:
            got = evaluate(expr)
        except ZeroDivisionError:
            # expression has a pole at the sample point; sympy would too
            return
        value, grads = _sympy_gradient(expr, symbols, point)
        assert Fraction(got[0]) == Fraction(value.p, value.q)
        for g, s in zip(got[1], grads):
            assert Fraction(g) == Fraction(s.p, s.q)

    def test_prime_jets_match_generic_jets(self):
        rng = random.Random(8)
        generic = JetSpace(PRIME_FIELD, 4)
        fast = PrimeJetSpace(4)
        for _ in range(100):
            a = (rng.randrange(MERSENNE61), tuple(rng.randrange(MERSENNE61) for _ in range(4)))
            b = (rng.randrange(MERSENNE61), tuple(rng.randrange(MERSENNE61) for _ in range(4)))
            assert generic.add(a, b) == fast.add(a, b)
            assert generic.sub(a, b) == fast.sub(a, b)
            assert generic.mul(a, b) == fast.mul(a, b)

    def test_constants_have_zero_partials(self):
        jets = PrimeJetSpace(3)
        c = jets.from_int(42)
        assert c[1] == (0, 0, 0)

    def test_inverse_of_variable(self):
        jets = JetSpace(RATIONAL_FIELD, 1)
        x = jets.variable(Fraction(5), 0)
        inv = jets.inv(x)
        assert inv[0] == Fraction(1, 5)
        assert inv[1][0] == Fraction(-1, 25)  # d(1/x)/dx = -1/x^2
