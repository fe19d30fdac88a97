import math
from fractions import Fraction

import pytest

from gasketpile import group, markov
from gasketpile.gasket import build_gasket
from gasketpile.sandpile import identity, is_recurrent_burning, recurrent_rep
from gasketpile.spectral import distinguishing_statistic

G1 = build_gasket(1)


def test_master_seed_resolution(monkeypatch):
    monkeypatch.delenv(markov.SEED_ENV_VAR, raising=False)
    assert markov.master_seed(None) == 0
    assert markov.master_seed(17) == 17
    monkeypatch.setenv(markov.SEED_ENV_VAR, "123")
    assert markov.master_seed(None) == 123
    assert markov.master_seed(4) == 4


def test_trajectory_rng_is_reproducible():
    a = markov.trajectory_rng(5, 2)
    b = markov.trajectory_rng(5, 2)
    assert [a.randrange(100) for _ in range(10)] == [b.randrange(100) for _ in range(10)]
    c = markov.trajectory_rng(5, 3)
    assert [markov.trajectory_rng(5, 2).randrange(100) for _ in range(5)] != [
        c.randrange(100) for _ in range(5)
    ]


def test_new_chain_starts_at_the_identity():
    state = markov.new_chain(G1, seed=0)
    assert state.t == 0
    assert state.config == identity(G1)


def test_step_advances_time_and_stays_recurrent():
    state = markov.new_chain(G1, seed=1)
    for expected_t in range(1, 30):
        state = markov.step(state)
        assert state.t == expected_t
        assert state.config.is_stable
    assert is_recurrent_burning(state.config)


def test_run_chain_matches_iterated_step():
    for steps in (0, 1, 13):
        direct = markov.run_chain(G1, steps, seed=9, index=4)
        state = markov.new_chain(G1, seed=9, index=4)
        for _ in range(steps):
            state = markov.step(state)
        assert direct.t == state.t == steps
        assert direct.config == state.config


@pytest.mark.parametrize("level", [1, 2])
def test_long_chains_preserve_recurrence(level):
    graph = build_gasket(level)
    state = markov.new_chain(graph, seed=level)
    for _ in range(8):
        for _ in range(250):
            state = markov.step(state)
        assert is_recurrent_burning(state.config)


def test_expected_chi_formula():
    assert markov.expected_chi(2, 0) == 1.0
    n = build_gasket(3).n_vertices
    assert markov.expected_chi(3, 7) == pytest.approx((1 - 6 / (n + 1)) ** 7)


def test_chi_decay_at_time_zero_is_exactly_one():
    est = markov.estimate_chi_decay(1, 0, trials=20, seed=0)
    assert est.mean == 1.0
    assert est.stderr == 0.0
    assert est.expected == 1.0


def test_chi_decay_estimates_are_reproducible():
    a = markov.estimate_chi_decay(1, 3, trials=200, seed=7)
    b = markov.estimate_chi_decay(1, 3, trials=200, seed=7)
    assert (a.mean, a.stderr) == (b.mean, b.stderr)
    c = markov.estimate_chi_decay(1, 3, trials=200, seed=8)
    assert (a.mean, a.stderr) != (c.mean, c.stderr)
    doc = a.to_json()
    assert doc == {
        "level": 1,
        "t": 3,
        "trials": 200,
        "mean": a.mean,
        "stderr": a.stderr,
        "expected": a.expected,
    }


def test_chi_decay_tracks_the_spectral_prediction():
    est = markov.estimate_chi_decay(2, 4, trials=2_000, seed=0)
    assert abs(est.mean - est.expected) <= 3 * est.stderr


def test_stationary_sampler_yields_recurrent_configs():
    graph = build_gasket(0)
    rng = markov.trajectory_rng(0, 0)
    seen = set()
    for _ in range(400):
        conf = markov.sample_stationary(graph, rng)
        seen.add(conf.chips)
        assert conf.is_stable
    assert len(seen) == 50
    assert all(is_recurrent_burning(recurrent_rep(graph, list(chips))) for chips in list(seen)[:5])


def test_stationary_chi_samples_match_direct_evaluation():
    level, count, seed = 2, 150, 5
    samples = markov.stationary_chi_samples(level, count, seed=seed)
    graph = build_gasket(level)
    data = group.lattice_data(graph)
    rng = markov.trajectory_rng(markov.master_seed(seed), 0)
    for j in range(count):
        coords = [rng.randrange(d) for d in data.nontrivial]
        vec = data.from_coordinates(coords)
        assert samples[j] == distinguishing_statistic(graph, vec)


def test_stationary_chi_samples_have_the_right_moments():
    samples = markov.stationary_chi_samples(2, 4_000, seed=0)
    assert set(samples).issubset({-1.0, -1 / 3, 1 / 3, 1.0})
    assert abs(samples.mean()) < 4 / math.sqrt(len(samples))
    assert samples.var(ddof=1) == pytest.approx(1 / 3, rel=0.15)


def test_exact_tv_curve_level0():
    curve = markov.exact_tv_curve(build_gasket(0), 5)
    assert len(curve) == 6
    assert curve[0] == pytest.approx(49 / 50, abs=1e-12)
    assert all(0 <= v <= 1 for v in curve)
    assert all(a >= b - 1e-12 for a, b in zip(curve, curve[1:]))


def test_exact_tv_curve_respects_the_cap():
    assert markov.exact_tv_curve(build_gasket(2), 3, cap=1000) is None
    assert markov.exact_tv_curve(build_gasket(2), 3) is None


def test_lower_bound_is_below_the_exact_curve():
    curve = markov.exact_tv_curve(G1, 20)
    for t in range(21):
        assert markov.tv_lower_bound(1, t) <= curve[t] + 1e-12


def test_r_statistic_values():
    assert markov.r_statistic(3, 0) == 9
    assert markov.tv_lower_bound_exact(3, 0) == Fraction(9, 13)
    assert markov.tv_lower_bound(3, 0) == pytest.approx(9 / 13)
    n = build_gasket(2).n_vertices
    assert markov.r_statistic(2, 1) == 3 * Fraction(n - 5, n + 1) ** 2


def test_r_statistic_decays():
    values = [markov.tv_lower_bound(2, t) for t in range(8)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_gasket_size():
    assert [markov.gasket_size(n) for n in range(6)] == [3, 6, 15, 42, 123, 366]


def test_bound_times_at_level2():
    assert markov.upper_bound_t(2) == 125
    assert markov.lower_bound_raw(2) == pytest.approx(
        (15 / 12) * math.log(15) - markov.LOWER_BOUND_C * 15
    )
    assert markov.lower_bound_raw(2) < 0
    assert markov.lower_bound_t(2) == 0


def test_bounds_order_and_clamping():
    for level in range(1, 15):
        low, high = markov.lower_bound_t(level), markov.upper_bound_t(level)
        assert 0 <= low < high
    # The raw formula goes positive once the graph tops a million vertices.
    assert markov.lower_bound_t(12) == 0
    assert markov.lower_bound_t(13) > 0


def test_mixing_report_analytic_fields():
    report = markov.mixing_report(2)
    assert report.level == 2 and report.n_vertices == 15
    assert report.spectral_gap_upper == pytest.approx(6 / 16)
    assert report.upper_bound_t == 125
    assert report.lower_bound_t == 0
    assert report.group_order is None
    assert report.chi_decay == []
    by_t = {t: (r, tv) for t, r, tv in report.r_curve}
    assert by_t[0][0] == pytest.approx(3.0)
    assert by_t[0][1] == pytest.approx(3 / 7)
    assert 125 in by_t


def test_mixing_report_optional_parts():
    report = markov.mixing_report(1, chi_trials=50, chi_times=(1, 2), seed=0, with_group_order=True)
    assert report.group_order == 1444
    assert [e.t for e in report.chi_decay] == [1, 2]
    assert all(e.trials == 50 for e in report.chi_decay)
    doc = report.to_json()
    assert doc["group_order"] == "1444"
    assert {"t", "r", "tv_lower"} == set(doc["r_curve"][0])
    assert doc["chi_decay"][0]["trials"] == 50
    with pytest.raises(ValueError):
        markov.mixing_report(0)
