import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gasketpile import group
from gasketpile.gasket import build_gasket, reduced_laplacian

from test_gasket import cofactor_det

LEVEL3_FACTORS = [2, 2, 6, 6, 6, 6, 6, 6, 6, 6, 30, 90, 29790, 148950]


def random_matrix(rng, rows, cols, span=9):
    return [[rng.randint(-span, span) for _ in range(cols)] for _ in range(rows)]


def random_nonsingular(rng, n, span=9):
    while True:
        m = random_matrix(rng, n, n, span)
        if group.determinant(m) != 0:
            return m


# ---------------------------------------------------------------------------
# Determinants.
# ---------------------------------------------------------------------------


def test_determinant_small_cases():
    assert group.determinant([[7]]) == 7
    assert group.determinant([[1, 2], [3, 4]]) == -2
    assert group.determinant([[1, 2], [2, 4]]) == 0
    assert group.determinant(reduced_laplacian(build_gasket(0))) == 50
    assert group.determinant(reduced_laplacian(build_gasket(1))) == 1444


def test_determinant_matches_cofactor_oracle_on_randoms():
    rng = random.Random(1)
    for _ in range(30):
        m = random_matrix(rng, rng.randint(1, 5), 0)
        n = len(m)
        m = random_matrix(rng, n, n)
        assert group.determinant(m) == cofactor_det(m)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=4, max_size=4), min_size=4, max_size=4))
def test_determinant_matches_cofactor_oracle(rows):
    assert group.determinant(rows) == cofactor_det(rows)


def test_determinant_transpose_invariance():
    rng = random.Random(2)
    for _ in range(20):
        m = random_matrix(rng, 5, 5)
        t = [list(col) for col in zip(*m)]
        assert group.determinant(m) == group.determinant(t)


# ---------------------------------------------------------------------------
# Smith normal form (dense transform variant).
# ---------------------------------------------------------------------------


def test_snf_textbook_example():
    original = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    dec = group.smith_normal_form(original)
    assert dec.diag == [2, 6, 12]
    assert dec.verify(original)


def test_snf_diagonal_gets_chained():
    assert group.smith_normal_form([[2, 0], [0, 3]]).diag == [1, 6]
    assert group.invariant_factors([[2, 0], [0, 3]]) == [6]


def test_snf_zero_and_identity():
    assert group.smith_normal_form([[0, 0], [0, 0]]).diag == [0, 0]
    assert group.invariant_factors([[0, 0], [0, 0]]) == []
    assert group.smith_normal_form([[1, 0], [0, 1]]).diag == [1, 1]


def test_snf_rectangular_shapes():
    wide = group.smith_normal_form([[2, 4, 6]])
    assert wide.diag == [2]
    assert wide.verify([[2, 4, 6]])
    tall = group.smith_normal_form([[3], [6], [9]])
    assert tall.diag == [3]
    assert tall.verify([[3], [6], [9]])


def test_snf_random_matrices_verify():
    rng = random.Random(3)
    for _ in range(60):
        rows, cols = rng.randint(1, 5), rng.randint(1, 5)
        m = random_matrix(rng, rows, cols)
        dec = group.smith_normal_form(m)
        assert dec.verify(m)
        positive = [d for d in dec.diag if d]
        for a, b in zip(positive, positive[1:]):
            assert b % a == 0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=3, max_size=3))
def test_snf_verifies_and_preserves_determinant(rows):
    dec = group.smith_normal_form(rows)
    assert dec.verify(rows)
    assert abs(math.prod(dec.diag)) == abs(group.determinant(rows))


# ---------------------------------------------------------------------------
# Bounded-entry Smith reduction modulo the group order.
# ---------------------------------------------------------------------------


def test_smith_mod_matches_dense_snf_on_randoms():
    rng = random.Random(4)
    for _ in range(60):
        n = rng.randint(1, 5)
        m = random_nonsingular(rng, n)
        det = abs(group.determinant(m))
        full = [d for d in group.smith_normal_form(m).diag]
        assert group.smith_mod(m, det).diag == full


def test_smith_mod_accepts_any_multiple_of_the_determinant():
    rng = random.Random(5)
    for _ in range(20):
        m = random_nonsingular(rng, 4)
        det = abs(group.determinant(m))
        base = group.smith_mod(m, det).diag
        assert group.smith_mod(m, 3 * det).diag == base


def test_smith_mod_transforms_give_an_adapted_basis():
    rng = random.Random(6)
    for _ in range(25):
        n = rng.randint(1, 5)
        m = random_nonsingular(rng, n)
        det = abs(group.determinant(m))
        basis = group.smith_mod(m, det, transforms=True)
        assert abs(group.determinant(basis.U)) == 1
        assert group.mat_mul(basis.U, basis.Uinv) == group.mat_identity(n)
        for a, b in zip(basis.diag, basis.diag[1:]):
            assert b % a == 0
        # Every column of the input lies in U diag(d) Z^n.
        cols = [[m[i][j] for i in range(n)] for j in range(n)]
        for col in cols:
            coords = group.mat_vec(basis.Uinv, col)
            assert all(c % d == 0 for c, d in zip(coords, basis.diag))
        # Every adapted generator lies in col(m) + det * Z^n.
        adj, scale = group.scaled_inverse(m)
        for j in range(n):
            gen = [basis.U[i][j] * basis.diag[j] for i in range(n)]
            assert all(v % scale == 0 for v in group.mat_vec(adj, gen))


def test_smith_mod_entries_stay_bounded():
    lap = reduced_laplacian(build_gasket(3))
    order = abs(group.determinant(lap))
    basis = group.smith_mod(lap, order)
    assert math.prod(basis.diag) == order


# ---------------------------------------------------------------------------
# Exact scaled inverse.
# ---------------------------------------------------------------------------


def test_scaled_inverse_small_case():
    b, scale = group.scaled_inverse([[2, 1], [1, 1]])
    assert scale == 1
    assert b == [[1, -1], [-1, 2]]


def test_scaled_inverse_is_the_positive_adjugate():
    rng = random.Random(7)
    ident = group.mat_identity(4)
    for _ in range(40):
        m = random_nonsingular(rng, 4)
        b, scale = group.scaled_inverse(m)
        assert scale == abs(group.determinant(m))
        product = group.mat_mul(m, b)
        assert product == [[scale * ident[i][j] for j in range(4)] for i in range(4)]


def test_scaled_inverse_rejects_singular():
    with pytest.raises(ArithmeticError):
        group.scaled_inverse([[1, 2], [2, 4]])


# ---------------------------------------------------------------------------
# Sandpile group structure.
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "level,factors",
    [
        (0, [5, 10]),
        (1, [38, 38]),
        (2, [2, 2, 6, 462, 2310]),
        (3, LEVEL3_FACTORS),
    ],
)
def test_group_invariant_factors(level, factors):
    assert group.sandpile_group_invariants(build_gasket(level)) == factors


@pytest.mark.parametrize("level,order", [(0, 50), (1, 1444), (2, 25_613_280)])
def test_group_orders(level, order):
    graph = build_gasket(level)
    assert group.sandpile_group_order(graph) == order
    assert math.prod(group.sandpile_group_invariants(graph)) == order


def test_lattice_data_round_trips_coordinates():
    rng = random.Random(8)
    for level in (0, 1):
        data = group.lattice_data(build_gasket(level))
        assert math.prod(data.diag) == data.order
        for _ in range(20):
            coords = [rng.randrange(d) for d in data.nontrivial]
            vec = data.from_coordinates(coords)
            assert list(data.coordinates(vec)) == coords


def test_in_lattice_accepts_laplacian_columns():
    for level in (0, 1, 2):
        graph = build_gasket(level)
        lap = reduced_laplacian(graph)
        n = graph.n_vertices
        for v in range(n):
            assert group.in_lattice(graph, [lap[i][v] for i in range(n)])
        assert group.in_lattice(graph, [0] * n)
        assert not group.in_lattice(graph, group.delta_vector(graph, 0))


def test_element_orders_on_level0():
    graph = build_gasket(0)
    orders = [group.element_order(graph, group.delta_vector(graph, v)) for v in range(3)]
    assert all(group.sandpile_group_order(graph) % o == 0 for o in orders)
    assert math.lcm(*orders) == 10  # the group exponent of Z5 + Z10
    lap = reduced_laplacian(graph)
    assert group.element_order(graph, [lap[i][0] for i in range(3)]) == 1


def test_element_order_is_the_minimal_multiplier():
    graph = build_gasket(1)
    rng = random.Random(9)
    for _ in range(10):
        vec = [rng.randrange(-5, 6) for _ in range(6)]
        k = group.element_order(graph, vec)
        assert group.in_lattice(graph, [k * v for v in vec])
        for p in {p for p in (2, 19) if k % p == 0}:
            assert not group.in_lattice(graph, [(k // p) * v for v in vec])


def test_quotient_by_nothing_is_the_full_group():
    graph = build_gasket(1)
    assert group.quotient_invariants(graph, []) == [38, 38]


def test_quotient_by_one_generator_divides_out_its_order():
    rng = random.Random(10)
    for level in (0, 1):
        graph = build_gasket(level)
        order = group.sandpile_group_order(graph)
        for _ in range(5):
            vec = [rng.randrange(-4, 5) for _ in range(graph.n_vertices)]
            assert group.quotient_order(graph, [vec]) * group.element_order(graph, vec) == order


def test_quotient_by_the_standard_basis_is_trivial():
    graph = build_gasket(0)
    gens = [group.delta_vector(graph, v) for v in range(3)]
    assert group.quotient_invariants(graph, gens) == []
    assert group.quotient_order(graph, gens) == 1


def test_direct_sum_invariants():
    assert group.direct_sum_invariants([[2, 4], [6]]) == [2, 2, 12]
    assert group.direct_sum_invariants([[5, 10], [2]]) == [10, 10]
    assert group.direct_sum_invariants([[], []]) == []
    lists = [[5, 10], [38, 38], [2, 2, 6]]
    combined = group.direct_sum_invariants(lists)
    assert math.prod(combined) == math.prod(math.prod(fs) for fs in lists)
    for a, b in zip(combined, combined[1:]):
        assert b % a == 0


@pytest.mark.parametrize(
    "level,factors",
    [(1, []), (2, [2, 2, 2]), (3, [2, 2, 2, 6, 6, 6, 6, 6, 6, 30, 30, 30])],
)
def test_three_copy_quotient_matches_junction_pair_sum(level, factors):
    report = group.check_group_theorem(level)
    assert report.passed
    assert report.convention == "primary"
    assert report.lhs_factors == report.rhs_factors == factors
    assert report.lhs_order == report.rhs_order


# ---------------------------------------------------------------------------
# Spanning tree counts.
# ---------------------------------------------------------------------------


def test_tau_base_values():
    assert [group.tau_recursion(n) for n in range(3)] == [3, 54, 524880]


@pytest.mark.parametrize("level", range(4))
def test_tau_matrix_tree_agrees_with_recursion(level):
    assert group.tau_matrix_tree(level) == group.tau_recursion(level)


@pytest.mark.parametrize("level", range(4))
def test_tau_fourth_power_identity(level):
    assert group.tau_fourth_power_identity(level)
