"""Abelian sandpile dynamics on gasket graphs.

A configuration assigns a non-negative chip count to every non-sink vertex.
A vertex with at least as many chips as its degree can topple, sending one
chip along every incident edge (chips crossing sink edges vanish).  The
stabilization operator topples until no vertex can fire; by the abelian
property the result and the firing counts (odometer) are order-independent.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .gasket import GasketGraph, build_gasket, parse_boundary
from . import group

# When set (the test suite turns it on), every stabilization re-checks the
# conservation identity result = start - Laplacian @ odometer exactly.
CHECK_CONSERVATION = False


@dataclass(frozen=True)
class Configuration:
    """Chip counts over the non-sink vertices of a gasket graph, in canonical
    vertex order.  Instances are immutable; all dynamics return new ones."""

    graph: GasketGraph
    chips: tuple[int, ...]

    def __post_init__(self):
        if len(self.chips) != self.graph.n_vertices:
            raise ValueError("chip vector length must match vertex count")
        if any(c < 0 for c in self.chips):
            raise ValueError("chip counts must be non-negative")

    @property
    def is_stable(self) -> bool:
        return all(c < d for c, d in zip(self.chips, self.graph.degrees))

    @property
    def total(self) -> int:
        return sum(self.chips)

    def add(self, other: "Configuration") -> "Configuration":
        if other.graph is not self.graph:
            raise ValueError("configurations live on different graphs")
        return Configuration(self.graph, tuple(a + b for a, b in zip(self.chips, other.chips)))

    def scale(self, k: int) -> "Configuration":
        if k < 0:
            raise ValueError("negative multiple of a configuration")
        return Configuration(self.graph, tuple(k * c for c in self.chips))

    def add_chips(self, vertex: int, count: int = 1) -> "Configuration":
        chips = list(self.chips)
        chips[vertex] += count
        return Configuration(self.graph, tuple(chips))

    def value_at(self, coord: tuple[int, int]) -> int:
        return self.chips[self.graph.index(coord)]


def config(graph: GasketGraph, entries) -> Configuration:
    return Configuration(graph, tuple(int(v) for v in entries))


def zero_config(graph: GasketGraph) -> Configuration:
    return Configuration(graph, (0,) * graph.n_vertices)


def max_config(graph: GasketGraph) -> Configuration:
    """The maximal stable configuration: degree - 1 chips everywhere."""
    return Configuration(graph, tuple(d - 1 for d in graph.degrees))


def _stabilize_raw(graph: GasketGraph, chips: list[int], frozen=(), rng=None):
    """Topple in place until stable; returns the odometer.

    Work-queue with batch firing: a popped vertex fires floor(chips/degree)
    times at once.  Default order is FIFO; passing an rng pops in random
    order instead, which the tests use to exercise order-independence.
    Frozen vertices never fire and simply accumulate chips.
    """
    degrees = graph.degrees
    neighbors = graph.neighbors
    n = len(chips)
    odometer = [0] * n
    is_frozen = bytearray(n)
    for v in frozen:
        is_frozen[v] = 1
    queued = bytearray(n)
    if rng is None:
        queue = deque()
        push, pop = queue.append, queue.popleft
    else:
        queue = []
        push = queue.append

        def pop():
            i = rng.randrange(len(queue))
            queue[i], queue[-1] = queue[-1], queue[i]
            return queue.pop()

    for v in range(n):
        if chips[v] >= degrees[v] and not is_frozen[v]:
            push(v)
            queued[v] = 1
    while queue:
        v = pop()
        queued[v] = 0
        d = degrees[v]
        c = chips[v]
        if c < d:
            continue
        fires = c // d
        chips[v] = c - fires * d
        odometer[v] += fires
        for w in neighbors[v]:
            cw = chips[w] + fires
            chips[w] = cw
            if not queued[w] and not is_frozen[w] and cw >= degrees[w]:
                push(w)
                queued[w] = 1
    return odometer


def _check_conservation(graph, before, after, odometer):
    degrees, neighbors = graph.degrees, graph.neighbors
    for v in range(len(before)):
        received = sum(odometer[w] for w in neighbors[v])
        if after[v] != before[v] - degrees[v] * odometer[v] + received:
            raise AssertionError(f"conservation identity violated at vertex {v}")


def stabilize(conf: Configuration, frozen=(), rng=None):
    """Stabilize a configuration; returns (stable configuration, odometer).

    With a frozen vertex set, those vertices are excluded from toppling, so
    the result is stable off the frozen set and the odometer is zero on it.
    """
    chips = list(conf.chips)
    odometer = _stabilize_raw(conf.graph, chips, frozen=frozen, rng=rng)
    if CHECK_CONSERVATION:
        _check_conservation(conf.graph, conf.chips, chips, odometer)
    return Configuration(conf.graph, tuple(chips)), tuple(odometer)


def stabilize_list(graph: GasketGraph, chips: list[int]):
    """In-place stabilization of a raw chip list with the same optional
    conservation checking as `stabilize`; returns the odometer."""
    if CHECK_CONSERVATION:
        before = list(chips)
        odometer = _stabilize_raw(graph, chips)
        _check_conservation(graph, before, chips, odometer)
        return odometer
    return _stabilize_raw(graph, chips)


def oplus(a: Configuration, b: Configuration) -> Configuration:
    """Sandpile addition: pointwise sum, then stabilize."""
    result, _ = stabilize(a.add(b))
    return result


def burning_odometer(conf: Configuration):
    """Dhar burning test: add one chip per sink edge and stabilize.

    Returns (recurrent, odometer): the configuration is recurrent exactly
    when every vertex fired once and the chips came back unchanged.
    """
    if not conf.is_stable:
        raise ValueError("burning test needs a stable configuration")
    chips = [c + b for c, b in zip(conf.chips, conf.graph.beta)]
    odometer = _stabilize_raw(conf.graph, chips)
    if CHECK_CONSERVATION:
        before = [c + b for c, b in zip(conf.chips, conf.graph.beta)]
        _check_conservation(conf.graph, before, chips, odometer)
    recurrent = tuple(chips) == conf.chips and all(u == 1 for u in odometer)
    return recurrent, tuple(odometer)


def is_recurrent_burning(conf: Configuration) -> bool:
    return burning_odometer(conf)[0]


@lru_cache(maxsize=None)
def _recurrent_kicker(graph: GasketGraph) -> tuple[int, ...]:
    """The vector 2*m - (2*m)degreewise-stabilized, where m is the maximal
    stable configuration.  It is >= m pointwise and lies in the Laplacian
    lattice, so adding it to anything and stabilizing lands on the recurrent
    representative of the same group class."""
    m = [d - 1 for d in graph.degrees]
    doubled = [2 * v for v in m]
    stabilize_list(graph, doubled)
    return tuple(2 * mv - sv for mv, sv in zip(m, doubled))


@lru_cache(maxsize=None)
def identity(graph: GasketGraph) -> Configuration:
    """The neutral element of the sandpile group on recurrent configurations."""
    chips = list(_recurrent_kicker(graph))
    stabilize_list(graph, chips)
    return Configuration(graph, tuple(chips))


def recurrent_rep(graph: GasketGraph, entries) -> Configuration:
    """The unique recurrent configuration whose difference from `entries`
    lies in the reduced-Laplacian lattice.

    The input is any integer vector (negative entries allowed).  It is first
    reduced modulo the lattice to keep the chip counts small, lifted to
    non-negativity by adding a positive lattice vector, then pushed onto the
    recurrent class representative by adding the kicker and stabilizing.
    """
    n = graph.n_vertices
    x = [int(v) for v in entries]
    if len(x) != n:
        raise ValueError("entry vector length must match vertex count")
    degrees, neighbors = graph.degrees, graph.neighbors
    if any(abs(v) >= 2 * degrees[i] for i, v in enumerate(x)):
        # x <- x - Delta @ floor(Delta^{-1} x): same class, entries bounded
        # by twice the degree.
        data = group.lattice_data(graph)
        adj, det = data.adjugate, data.order
        y = [sum(row[k] * x[k] for k in range(n)) // det for row in adj]
        x = [
            x[v] - degrees[v] * y[v] + sum(y[w] for w in neighbors[v])
            for v in range(n)
        ]
    low = min(x)
    if low < 0:
        w, scale = group.lattice_data(graph).lift
        k = (-low + scale - 1) // scale
        x = [c + k * scale for c in x]  # adds k * Delta @ w
    chips = [c + kick for c, kick in zip(x, _recurrent_kicker(graph))]
    stabilize_list(graph, chips)
    return Configuration(graph, tuple(chips))


# ---------------------------------------------------------------------------
# Serialization.
# ---------------------------------------------------------------------------


def config_to_json(conf: Configuration) -> dict:
    return {
        "level": conf.graph.level,
        "boundary": conf.graph.boundary.token(),
        "chips": list(conf.chips),
    }


def config_from_json(data: dict) -> Configuration:
    graph = build_gasket(int(data["level"]), parse_boundary(data["boundary"]))
    return config(graph, data["chips"])


def config_to_text(conf: Configuration) -> str:
    """One-line form `level boundary c0 c1 ...` for piping between tools."""
    parts = [str(conf.graph.level), conf.graph.boundary.token()]
    parts.extend(str(c) for c in conf.chips)
    return " ".join(parts)


def config_from_text(text: str) -> Configuration:
    parts = text.split()
    if len(parts) < 2:
        raise ValueError("expected `level boundary c0 c1 ...`")
    graph = build_gasket(int(parts[0]), parse_boundary(parts[1]))
    return config(graph, [int(p) for p in parts[2:]])
