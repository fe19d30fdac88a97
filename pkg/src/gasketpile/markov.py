"""The chip-adding random walk on recurrent configurations and its mixing.

Each step draws uniformly from the non-sink vertices plus the sink: a vertex
draw adds one chip there and stabilizes, the sink draw does nothing (the lazy
move that makes the walk aperiodic with step weight 1/(n+1) everywhere).
The walk is a random walk on the sandpile group, so its distance from the
uniform stationary distribution is controlled exactly by the character
eigenvalues; the distinguishing statistic (average cell parity) gives a
matching lower bound on mixing.
"""

from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .gasket import GasketGraph, build_gasket, reduced_laplacian
from .sandpile import Configuration, identity, recurrent_rep, stabilize_list
from .spectral import distinguishing_statistic, level1_cells
from . import group

SEED_ENV_VAR = "GASKETPILE_SEED"
DEFAULT_SEED = 0


def master_seed(explicit: int | None = None) -> int:
    """Explicit seed if given, else the GASKETPILE_SEED environment variable,
    else 0."""
    if explicit is not None:
        return explicit
    env = os.environ.get(SEED_ENV_VAR)
    return int(env) if env else DEFAULT_SEED


def trajectory_rng(seed: int, index: int) -> random.Random:
    """Deterministic per-trajectory generator: seeds the stdlib Mersenne
    twister with the string "<seed>:<index>", which Python hashes stably."""
    return random.Random(f"{seed}:{index}")


@dataclass
class ChainState:
    """A walk trajectory: current configuration, steps taken, and the
    generator owned by this trajectory."""

    config: Configuration
    t: int
    rng: random.Random


def new_chain(graph: GasketGraph, seed: int | None = None, index: int = 0) -> ChainState:
    return ChainState(config=identity(graph), t=0, rng=trajectory_rng(master_seed(seed), index))


def step(state: ChainState) -> ChainState:
    """One walk step (mutates nothing; returns the advanced state)."""
    graph = state.config.graph
    n = graph.n_vertices
    v = state.rng.randrange(n + 1)
    if v == n:
        return ChainState(state.config, state.t + 1, state.rng)
    chips = list(state.config.chips)
    chips[v] += 1
    if chips[v] >= graph.degrees[v]:
        stabilize_list(graph, chips)
    return ChainState(Configuration(graph, tuple(chips)), state.t + 1, state.rng)


def run_chain(graph: GasketGraph, steps: int, seed: int | None = None, index: int = 0) -> ChainState:
    state = new_chain(graph, seed, index)
    chips = list(state.config.chips)
    _advance(graph, chips, steps, state.rng)
    return ChainState(Configuration(graph, tuple(chips)), steps, state.rng)


def _advance(graph: GasketGraph, chips: list[int], steps: int, rng: random.Random):
    """Hot loop: advance a chip list in place."""
    n = graph.n_vertices
    degrees = graph.degrees
    randrange = rng.randrange
    for _ in range(steps):
        v = randrange(n + 1)
        if v == n:
            continue
        chips[v] += 1
        if chips[v] >= degrees[v]:
            stabilize_list(graph, chips)


@dataclass
class ChiDecayEstimate:
    level: int
    t: int
    trials: int
    mean: float
    stderr: float
    expected: float

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "t": self.t,
            "trials": self.trials,
            "mean": self.mean,
            "stderr": self.stderr,
            "expected": self.expected,
        }


def expected_chi(level: int, t: int) -> float:
    """E[statistic] after t steps from the identity: (1 - 6/(n+1))**t."""
    n = build_gasket(level).n_vertices
    return (1 - 6 / (n + 1)) ** t


def estimate_chi_decay(level: int, t: int, trials: int, seed: int | None = None) -> ChiDecayEstimate:
    """Monte Carlo estimate of E[statistic] after t steps from the identity.

    Each trial runs an independent trajectory with its own derived seed, so
    the estimate is reproducible given (seed, trials, t).
    """
    graph = build_gasket(level)
    base = identity(graph).chips
    cells = level1_cells(level)
    mids = [c.midpoint_indices for c in cells]
    seed_val = master_seed(seed)
    values = np.empty(trials)
    for i in range(trials):
        chips = list(base)
        _advance(graph, chips, t, trajectory_rng(seed_val, i))
        total = 0
        for m in mids:
            total += -1 if (chips[m[0]] + chips[m[1]] + chips[m[2]]) % 2 else 1
        values[i] = total / len(mids)
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(trials)) if trials > 1 else float("inf")
    return ChiDecayEstimate(
        level=level, t=t, trials=trials, mean=mean, stderr=stderr,
        expected=expected_chi(level, t),
    )


# ---------------------------------------------------------------------------
# Exact stationary sampling through the Smith basis.
# ---------------------------------------------------------------------------


def sample_stationary(graph: GasketGraph, rng: random.Random) -> Configuration:
    """A uniformly random recurrent configuration: uniform Smith coordinates
    pick a uniform group class, whose recurrent representative is returned."""
    data = group.lattice_data(graph)
    coords = [rng.randrange(d) for d in data.nontrivial]
    return recurrent_rep(graph, data.from_coordinates(coords))


def stationary_chi_samples(level: int, count: int, seed: int | None = None) -> np.ndarray:
    """Values of the distinguishing statistic under the stationary measure.

    The statistic is a class function, so it is evaluated directly on the
    uniformly drawn group class (through parities of Smith basis columns)
    without materializing recurrent representatives; the distribution is
    identical to evaluating on sample_stationary output.
    """
    graph = build_gasket(level)
    data = group.lattice_data(graph)
    cells = level1_cells(level)
    factors = data.nontrivial
    positions = [i for i, d in enumerate(data.diag) if d > 1]
    # Bitmask per cell: parity contribution of each Smith coordinate.
    masks = []
    for cell in cells:
        mask = 0
        for bit, col in enumerate(positions):
            s = sum(data.U[v][col] for v in cell.midpoint_indices)
            if s % 2:
                mask |= 1 << bit
        masks.append(mask)
    rng = trajectory_rng(master_seed(seed), 0)
    n_cells = len(cells)
    out = np.empty(count)
    for j in range(count):
        cbits = 0
        for bit, d in enumerate(factors):
            if rng.randrange(d) % 2:
                cbits |= 1 << bit
        total = 0
        for mask in masks:
            total += -1 if (mask & cbits).bit_count() % 2 else 1
        out[j] = total / n_cells
    return out


# ---------------------------------------------------------------------------
# Exact total variation by distribution evolution over group classes.
# ---------------------------------------------------------------------------


def exact_tv_curve(graph: GasketGraph, t_max: int, cap: int = 2_000_000) -> list[float] | None:
    """TV distance from uniform after 0..t_max steps, computed by evolving
    the full distribution over group classes in Smith coordinates.

    Returns None when the group order exceeds `cap`.
    """
    data = group.lattice_data(graph)
    if data.order > cap:
        return None
    dims = data.nontrivial
    shape = tuple(dims) if dims else (1,)
    n = graph.n_vertices
    dist = np.zeros(shape)
    dist[(0,) * len(shape)] = 1.0  # the identity class has zero coordinates
    shifts = []
    for v in range(n):
        delta = [0] * n
        delta[v] = 1
        shifts.append(data.coordinates(delta))
    axes = tuple(range(len(shape)))
    uniform = 1.0 / dist.size
    curve = [0.5 * float(np.abs(dist - uniform).sum())]
    for _ in range(t_max):
        acc = dist.copy()  # the lazy sink move
        for shift in shifts:
            acc += np.roll(dist, shift, axis=axes) if dims else dist
        dist = acc / (n + 1)
        curve.append(0.5 * float(np.abs(dist - uniform).sum()))
    return curve


# ---------------------------------------------------------------------------
# Mixing-time bounds.
# ---------------------------------------------------------------------------

LOWER_BOUND_C = math.log(10**6) / 12


def r_statistic(level: int, t: int) -> Fraction:
    """R(t) = 3**(n-1) * (1 - 6/(n+1))**(2t), exactly."""
    if level < 1:
        raise ValueError("the statistic needs level >= 1")
    n = build_gasket(level).n_vertices
    return Fraction(3) ** (level - 1) * Fraction(n - 5, n + 1) ** (2 * t)


def tv_lower_bound_exact(level: int, t: int) -> Fraction:
    """TV(t) >= 1 - 4/(4 + R(t)), exactly (sensible for small t)."""
    r = r_statistic(level, t)
    return 1 - Fraction(4) / (4 + r)


def tv_lower_bound(level: int, t: int) -> float:
    if level < 1:
        raise ValueError("the statistic needs level >= 1")
    n = build_gasket(level).n_vertices
    r = 3 ** (level - 1) * (1 - 6 / (n + 1)) ** (2 * t)
    return 1 - 4 / (4 + r)


def gasket_size(level: int) -> int:
    return 3 * (3**level + 1) // 2


def lower_bound_raw(level: int) -> float:
    """(n/12) log n - c n with c = log(10**6)/12; negative for small gaskets
    (it only turns positive once n exceeds a million vertices)."""
    n = gasket_size(level)
    return (n / 12) * math.log(n) - LOWER_BOUND_C * n


def lower_bound_t(level: int) -> int:
    return max(0, math.floor(lower_bound_raw(level)))


def upper_bound_t(level: int) -> int:
    """The spectral upper bound threshold (5/4) (n+1) log(34 n)."""
    n = gasket_size(level)
    return math.ceil(1.25 * (n + 1) * math.log(34 * n))


@dataclass
class MixingReport:
    """Analytic mixing summary for one level, with optional Monte Carlo
    decay estimates attached."""

    level: int
    n_vertices: int
    spectral_gap_upper: float
    lower_bound_raw: float
    lower_bound_t: int
    upper_bound_t: int
    r_curve: list[tuple[int, float, float]]
    group_order: int | None = None
    chi_decay: list[ChiDecayEstimate] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "n_vertices": self.n_vertices,
            "spectral_gap_upper": self.spectral_gap_upper,
            "lower_bound_raw": self.lower_bound_raw,
            "lower_bound_t": self.lower_bound_t,
            "upper_bound_t": self.upper_bound_t,
            "group_order": str(self.group_order) if self.group_order is not None else None,
            "r_curve": [
                {"t": t, "r": r, "tv_lower": tv} for t, r, tv in self.r_curve
            ],
            "chi_decay": [e.to_json() for e in self.chi_decay],
        }


def mixing_report(
    level: int,
    chi_trials: int = 0,
    chi_times: tuple[int, ...] = (1, 5, 10, 25),
    seed: int | None = None,
    with_group_order: bool = False,
) -> MixingReport:
    """Analytic bounds (always) plus Monte Carlo decay estimates (optional).

    The group order is only computed on request since it needs an exact
    determinant of the full reduced Laplacian.
    """
    if level < 1:
        raise ValueError("mixing report needs level >= 1")
    n = gasket_size(level)
    upper_t = upper_bound_t(level)
    sample_ts = sorted({0, 1, 2, 5, 10, 25, 50, upper_t})
    r_curve = []
    for t in sample_ts:
        r = 3 ** (level - 1) * (1 - 6 / (n + 1)) ** (2 * t)
        r_curve.append((t, r, 1 - 4 / (4 + r)))
    order = None
    if with_group_order:
        order = abs(group.determinant(reduced_laplacian(build_gasket(level))))
    report = MixingReport(
        level=level,
        n_vertices=n,
        spectral_gap_upper=6 / (n + 1),
        lower_bound_raw=lower_bound_raw(level),
        lower_bound_t=lower_bound_t(level),
        upper_bound_t=upper_t,
        r_curve=r_curve,
        group_order=order,
    )
    if chi_trials > 0:
        for t in chi_times:
            report.chi_decay.append(estimate_chi_decay(level, t, chi_trials, seed=seed))
    return report
