"""End-to-end acceptance checks, one test per headline claim.

Each test prints a single summary line (visible with -s or in failure
output); the pytest verdict per test is the pass/fail record.
"""

import math
import time
from fractions import Fraction

from scipy.stats import chi2

from gasketpile import group, markov, sandpile
from gasketpile.gasket import build_gasket, reduced_laplacian
from gasketpile.render import BACKGROUND, PALETTE, render_ppm
from gasketpile.sandpile import (
    config,
    identity,
    is_recurrent_burning,
    max_config,
    oplus,
    recurrent_rep,
    stabilize,
)
from gasketpile.selfsim import identity_from_tiles, verify_doubling
from gasketpile.spectral import (
    cell_harmonic,
    eigenvalue,
    exact_distance,
    l2_bound_check,
    product_harmonic,
)

GROUP_ORDERS = {
    0: 50,
    1: 1444,
    2: 25_613_280,
    3: 80_490_526_711_142_400_000,
    4: 1_087_319_734_941_243_708_384_148_063_837_747_150_848_000_000_000_000_000_000,
}


def recurrent_closure(graph):
    """Every configuration reachable from the maximal one by single-chip
    additions followed by stabilization."""
    seen = {max_config(graph).chips}
    frontier = list(seen)
    while frontier:
        chips = frontier.pop()
        for v in range(graph.n_vertices):
            bumped = list(chips)
            bumped[v] += 1
            result, _ = stabilize(config(graph, bumped))
            if result.chips not in seen:
                seen.add(result.chips)
                frontier.append(result.chips)
    return sorted(seen)


def test_criterion_1_identity_theorem():
    start = time.monotonic()
    for level in (2, 3, 4, 5):
        graph = build_gasket(level)
        glued = identity_from_tiles(level)
        assert glued == identity(graph), f"tile identity mismatch at level {level}"
        assert set(glued.chips) == {2, 3}
        header, _, body = render_ppm(glued).partition(b"\n255\n")
        colors = {tuple(body[i : i + 3]) for i in range(0, len(body), 3)}
        assert colors == {BACKGROUND, PALETTE[2], PALETTE[3]}
    elapsed = time.monotonic() - start
    assert elapsed < 60.0
    print(f"criterion 1 PASS: tile identity equals stabilized identity for "
          f"levels 2..5, renders use chips {{2,3}} only ({elapsed:.2f}s)")


def test_criterion_2_doubling_identity():
    gains = []
    for level in (1, 2, 3, 4):
        report = verify_doubling(level)
        assert report.passed, report.first_mismatch
        assert report.gain == 4 * 3**level - 2
        gains.append(report.gain)
    assert gains == [10, 34, 106, 322]
    print(f"criterion 2 PASS: frozen-corner doubling gains {gains} exact for levels 1..4")


def test_criterion_3_spanning_trees():
    values = []
    for level in range(6):
        rec = group.tau_recursion(level)
        assert group.tau_matrix_tree(level) == rec
        values.append(rec)
    assert values[:3] == [3, 54, 524880]
    for level in range(5):
        assert group.tau_fourth_power_identity(level)
    print("criterion 3 PASS: matrix-tree == recursion for levels 0..5 "
          f"(3, 54, 524880, ...), fourth-power identity holds for levels 0..4")


def test_criterion_4_group_order():
    for level in range(5):
        graph = build_gasket(level)
        det = abs(group.determinant(reduced_laplacian(graph)))
        assert det == GROUP_ORDERS[level]
        assert math.prod(group.sandpile_group_invariants(graph)) == det
    closure = recurrent_closure(build_gasket(0))
    assert len(closure) == 50
    assert all(is_recurrent_burning(config(build_gasket(0), c)) for c in closure)
    print("criterion 4 PASS: determinant == product of invariant factors for "
          "levels 0..4; brute-force closure on the level-0 graph has 50 elements")


def test_criterion_5_group_decomposition():
    start = time.monotonic()
    for level in (1, 2, 3):
        report = group.check_group_theorem(level)
        assert report.passed
        assert report.lhs_factors == report.rhs_factors
        assert report.lhs_order == report.rhs_order
    elapsed = time.monotonic() - start
    assert elapsed < 600.0
    print(f"criterion 5 PASS: quotient and direct-sum invariant factors agree "
          f"for levels 1..3 under the primary corner assignment ({elapsed:.2f}s)")


def test_criterion_6_spectral_eigenvalues_and_variance():
    for level in (1, 2, 3, 4):
        n = build_gasket(level).n_vertices
        cells = 3 ** (level - 1)
        harmonics = [cell_harmonic(level, i) for i in range(1, cells + 1)]
        for h in harmonics:
            assert eigenvalue(h) == 1 - Fraction(6, n + 1)
        trivial_pairs = 0
        for i in range(cells):
            for j in range(cells):
                prod = product_harmonic(harmonics[i], harmonics[j])
                if prod.is_trivial:
                    trivial_pairs += 1
                elif i != j:
                    assert eigenvalue(prod) == 1 - Fraction(12, n + 1)
                else:
                    raise AssertionError(f"square of cell character {i} is not trivial")
        # Each summand is a nontrivial character, so it averages to zero under
        # the stationary measure and the variance collapses by orthogonality:
        # Var = (number of trivial pairwise products) / cells**2.
        assert not any(h.is_trivial for h in harmonics)
        assert Fraction(trivial_pairs, cells**2) == Fraction(1, 3 ** (level - 1))
    print("criterion 6 PASS: cell eigenvalue 1-6/(n+1) and pair eigenvalue "
          "1-12/(n+1) exact for levels 1..4; orthogonality gives Var = 3**(1-level)")


def test_criterion_7_exact_distances():
    graph = build_gasket(0)
    classes = recurrent_closure(graph)
    index = {chips: i for i, chips in enumerate(classes)}
    start = index[identity(graph).chips]
    # One lazy-walk step: uniformly add a chip at one of the 3 vertices or do
    # nothing (the sink move), then restabilize.
    moves = []
    for chips in classes:
        row = [index[chips]]
        for v in range(3):
            bumped = list(chips)
            bumped[v] += 1
            result, _ = stabilize(config(graph, bumped))
            row.append(index[result.chips])
        moves.append(row)
    dist = [0.0] * len(classes)
    dist[start] = 1.0
    uniform = 1.0 / len(classes)
    worst = 0.0
    for t in range(21):
        direct = math.sqrt(sum((p - uniform) ** 2 for p in dist))
        plancherel = exact_distance(graph, t).l2
        worst = max(worst, abs(direct - plancherel))
        assert abs(direct - plancherel) <= 1e-12
        fresh = [0.0] * len(classes)
        for i, p in enumerate(dist):
            if p:
                for target in moves[i]:
                    fresh[target] += p / 4.0
        dist = fresh
    check = l2_bound_check(graph)
    assert check.t_star == 24
    assert check.passed and check.l2 <= 0.25
    print(f"criterion 7 PASS: character sum matches direct evolution within "
          f"{worst:.2e} for t <= 20; l2 = {check.l2:.4f} <= 1/4 at t* = {check.t_star}")


def test_criterion_8_monte_carlo():
    for level in (2, 3):
        for t in (1, 5, 10, 25):
            est = markov.estimate_chi_decay(level, t, trials=10_000)
            assert abs(est.mean - est.expected) <= 3 * est.stderr, (
                f"level {level} t {t}: mean {est.mean} expected {est.expected} "
                f"stderr {est.stderr}"
            )
    graph = build_gasket(0)
    rng = markov.trajectory_rng(markov.master_seed(None), 0)
    counts = {}
    draws = 10_000
    for _ in range(draws):
        chips = markov.sample_stationary(graph, rng).chips
        counts[chips] = counts.get(chips, 0) + 1
    assert len(counts) == 50
    expected = draws / 50
    stat = sum((c - expected) ** 2 / expected for c in counts.values())
    critical = chi2.ppf(0.99, 49)
    assert stat <= critical, f"chi-square {stat:.2f} over critical {critical:.2f}"
    samples = markov.stationary_chi_samples(3, 10_000)
    var = samples.var(ddof=1)
    centered = samples - samples.mean()
    se = math.sqrt((float((centered**4).mean()) - var**2) / len(samples))
    assert abs(var - 1 / 9) <= 3 * se
    print(f"criterion 8 PASS: decay mean within 3 stderr at levels 2..3 for "
          f"t in (1,5,10,25); uniformity chi-square {stat:.1f} <= {critical:.1f}; "
          f"Var = {var:.4f} within 3 stderr of 1/9")


def test_criterion_9_property_suites():
    import random

    assert sandpile.CHECK_CONSERVATION, "conservation checking must be active for the suite"
    # Re-verify the exchange identity independently of the built-in check.
    rng = random.Random(0)
    for level in (0, 1, 2):
        graph = build_gasket(level)
        lap = reduced_laplacian(graph)
        n = graph.n_vertices
        for _ in range(7):
            chips = [rng.randrange(2 * graph.degrees[v]) for v in range(n)]
            result, odometer = stabilize(config(graph, chips))
            for v in range(n):
                flux = sum(lap[v][w] * odometer[w] for w in range(n))
                assert result.chips[v] == chips[v] - flux
    # Abelian property: the stable result never depends on firing order.
    checked = 0
    for level in (0, 1, 2, 3):
        graph = build_gasket(level)
        for _ in range(25):
            chips = [rng.randrange(3 * graph.degrees[v]) for v in range(graph.n_vertices)]
            conf = config(graph, chips)
            base, base_odo = stabilize(conf)
            for order_seed in (1, 2):
                other, other_odo = stabilize(conf, rng=random.Random(order_seed))
                assert other == base and other_odo == base_odo
            checked += 1
    assert checked == 100
    # Burning test == recurrent-representative test, exhaustively at level 0.
    graph = build_gasket(0)
    recurrent_count = 0
    for a in range(4):
        for b in range(4):
            for c in range(4):
                conf = config(graph, (a, b, c))
                burns = is_recurrent_burning(conf)
                assert burns == (recurrent_rep(graph, [a, b, c]) == conf)
                recurrent_count += burns
    assert recurrent_count == 50
    print("criterion 9 PASS: conservation identity re-verified, firing order "
          "irrelevant on 100 random configs, burning matches representative "
          "equality on all 64 stable level-0 configs")
