"""Self-similar structure of recurrent configurations on gasket graphs.

The central object is a family of configurations parameterized by the three
corner values: at level 1 the interior is fixed at 3 chips on the bottom and
left midpoints and 2 on the right midpoint, and at level n+1 the family is
assembled from three level-n members whose corner arguments agree across the
junctions.  Doubling such a configuration and stabilizing with one corner
frozen reproduces the family with a shifted corner argument, and gluing the
all-2-corner member with its two rotations yields the group identity.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gasket import (
    CORNER_NAMES,
    LOWER_LEFT,
    LOWER_RIGHT,
    TOP,
    GasketGraph,
    build_gasket,
    corner_sink,
    junction_coords,
    rotation_ccw,
    rotation_cw,
    subcopy_embedding,
)
from .sandpile import Configuration, config, identity, is_recurrent_burning, stabilize
from . import group

# Fixed interior of the level-1 family member, keyed by local coordinate:
# bottom and left midpoints carry 3 chips, the right midpoint carries 2.
_LEVEL1_INTERIOR = {(1, 0): 3, (0, 1): 3, (1, 1): 2}


def _tile_chips(level: int, x: int, y: int, z: int) -> list[int]:
    if level == 1:
        values = {(0, 0): x, (2, 0): y, (0, 2): z, **_LEVEL1_INTERIOR}
        graph = build_gasket(1)
        return [values[c] for c in graph.coords]
    parts = {
        LOWER_LEFT: _tile_chips(level - 1, x, 3, 3),
        LOWER_RIGHT: _tile_chips(level - 1, 3, y, 2),
        TOP: _tile_chips(level - 1, 3, 2, z),
    }
    return assemble_from_copies(level, parts)


def assemble_from_copies(level: int, parts: dict[str, list[int]]) -> list[int]:
    """Glue three level-(n-1) chip vectors into a level-n one, requiring the
    copies to agree at the shared junction vertices."""
    n_parent = build_gasket(level).n_vertices
    out: list[int | None] = [None] * n_parent
    for name in (LOWER_LEFT, LOWER_RIGHT, TOP):
        chips = parts[name]
        for child_i, parent_i in enumerate(subcopy_embedding(level, name)):
            if out[parent_i] is None:
                out[parent_i] = chips[child_i]
            elif out[parent_i] != chips[child_i]:
                raise ValueError(f"junction mismatch at parent vertex {parent_i}")
    return out  # type: ignore[return-value]


def build_tile(level: int, x: int, y: int, z: int) -> Configuration:
    """The corner-parameterized self-similar configuration with corner values
    x (lower left), y (lower right), z (top)."""
    if level < 1:
        raise ValueError("tiles are defined for level >= 1")
    for v in (x, y, z):
        if v < 0:
            raise ValueError("corner values must be non-negative")
    graph = build_gasket(level)
    return config(graph, _tile_chips(level, x, y, z))


def rotate_config(conf: Configuration, direction: str = "ccw") -> Configuration:
    """Rotate a configuration with the gasket: chips travel with their
    vertices, so the new value at the image of v is the old value at v."""
    if direction == "ccw":
        perm = rotation_ccw(conf.graph)
    elif direction == "cw":
        perm = rotation_cw(conf.graph)
    else:
        raise ValueError("direction must be 'ccw' or 'cw'")
    chips = [0] * len(perm)
    for i, target in enumerate(perm):
        chips[target] = conf.chips[i]
    return Configuration(conf.graph, tuple(chips))


def identity_from_tiles(level: int) -> Configuration:
    """The sandpile identity assembled without any toppling: the all-2-corner
    tile in the lower-left copy, its counterclockwise rotation in the lower
    right, its clockwise rotation on top.  Defined for level >= 2; the level-1
    identity is only available through stabilization."""
    if level < 2:
        raise ValueError("the tile construction of the identity needs level >= 2")
    base = build_tile(level - 1, 2, 2, 2)
    parts = {
        LOWER_LEFT: list(base.chips),
        LOWER_RIGHT: list(rotate_config(base, "ccw").chips),
        TOP: list(rotate_config(base, "cw").chips),
    }
    return config(build_gasket(level), assemble_from_copies(level, parts))


# ---------------------------------------------------------------------------
# Verification routines.  Each returns a small report object; preconditions
# raise ValueError.
# ---------------------------------------------------------------------------


@dataclass
class DoublingReport:
    level: int
    passed: bool
    corner_start: int
    corner_final: int
    corner_expected: int
    gain: int
    expected_gain: int
    first_mismatch: str | None

    def to_json(self) -> dict:
        return {
            "check": "doubling",
            "level": self.level,
            "pass": self.passed,
            "details": {
                "corner_start": self.corner_start,
                "corner_final": self.corner_final,
                "corner_expected": self.corner_expected,
                "gain": self.gain,
                "expected_gain": self.expected_gain,
                "first_mismatch": self.first_mismatch,
            },
        }


def _redistribute_without_sink(graph: GasketGraph, chips: list[int], frozen: int) -> tuple[int, ...]:
    """Batch-topple along the gasket edges only, never moving chips off the
    graph: every vertex fires at its bare degree (2 at the corners), except the
    frozen vertex, which only collects.  Terminates because the frozen vertex
    strictly gains whenever its neighbors fire and the rest is a finite
    chip-firing game drained by that absorption."""
    neighbors: list[list[int]] = [[] for _ in chips]
    for a, b in graph.edges:
        neighbors[a].append(b)
        neighbors[b].append(a)
    degrees = [len(ns) for ns in neighbors]
    chips = list(chips)
    active = [v for v in range(len(chips)) if v != frozen and chips[v] >= degrees[v]]
    while active:
        next_active = []
        for v in active:
            rounds = chips[v] // degrees[v]
            if rounds == 0:
                continue
            chips[v] -= rounds * degrees[v]
            for w in neighbors[v]:
                chips[w] += rounds
        for v in range(len(chips)):
            if v != frozen and chips[v] >= degrees[v]:
                next_active.append(v)
        active = next_active
    return tuple(chips)


def verify_doubling(level: int) -> DoublingReport:
    """Double the (2,1,1)-corner tile and redistribute the excess along the
    gasket edges with the lower-left corner frozen: the result must be the
    (2+4*3**n,1,1) tile, i.e. the frozen corner collects exactly 4*3**n - 2
    extra chips.  No chips leave the graph, so the corner arguments topple at
    their bare degree 2 here."""
    doubled = build_tile(level, 2, 1, 1).scale(2)
    graph = doubled.graph
    corner = graph.corner_index(LOWER_LEFT)
    result_chips = _redistribute_without_sink(graph, list(doubled.chips), corner)
    result = config(graph, result_chips)
    expected = build_tile(level, 2 + 4 * 3**level, 1, 1)
    mismatch = None
    for i, (got, want) in enumerate(zip(result.chips, expected.chips)):
        if got != want:
            mismatch = f"vertex {i} at {graph.coords[i]}: got {got}, expected {want}"
            break
    return DoublingReport(
        level=level,
        passed=(result == expected),
        corner_start=doubled.chips[corner],
        corner_final=result.chips[corner],
        corner_expected=expected.chips[corner],
        gain=result.chips[corner] - doubled.chips[corner],
        expected_gain=4 * 3**level - 2,
        first_mismatch=mismatch,
    )


@dataclass
class TransportReport:
    level: int
    corner: str
    passed: bool
    dynamic_ok: bool
    lattice_ok: bool

    def to_json(self) -> dict:
        return {
            "check": "corner_transport",
            "level": self.level,
            "pass": self.passed,
            "details": {
                "sunk_corner": self.corner,
                "returned_to_input": self.dynamic_ok,
                "class_is_trivial": self.lattice_ok,
            },
        }


def verify_corner_transport(
    level: int, conf: Configuration | None = None, corner: str = LOWER_LEFT
) -> TransportReport:
    """On the gasket with one corner sunk, adding 3**n chips at each of the
    other two corners is neutral: any recurrent configuration stabilizes back
    to itself, equivalently the class of that chip vector is trivial."""
    graph = build_gasket(level, corner_sink(corner))
    if conf is None:
        conf = identity(graph)
    if conf.graph is not graph:
        raise ValueError("configuration must live on the corner-sunk gasket")
    if not is_recurrent_burning(conf):
        raise ValueError("corner transport needs a recurrent configuration")
    amount = 3**level
    others = [graph.corner_index(name) for name in CORNER_NAMES if name != corner]
    added = [0] * graph.n_vertices
    for idx in others:
        added[idx] = amount
    bumped = config(graph, [c + a for c, a in zip(conf.chips, added)])
    result, _ = stabilize(bumped)
    dynamic_ok = result == conf
    lattice_ok = group.in_lattice(graph, added)
    return TransportReport(
        level=level,
        corner=corner,
        passed=dynamic_ok and lattice_ok,
        dynamic_ok=dynamic_ok,
        lattice_ok=lattice_ok,
    )


@dataclass
class JunctionReport:
    level: int
    passed: bool
    assembled_recurrent: bool
    junction_add_neutral: bool

    def to_json(self) -> dict:
        return {
            "check": "junction_invariance",
            "level": self.level,
            "pass": self.passed,
            "details": {
                "assembled_recurrent": self.assembled_recurrent,
                "junction_add_neutral": self.junction_add_neutral,
            },
        }


def verify_junction_invariance(level: int, conf: Configuration) -> JunctionReport:
    """Glue a recurrent configuration with 2-chip lower-right and top corners
    together with its two rotations into a level-(n+1) configuration: the
    result must be recurrent, and adding 2*3**n chips at each of the three
    junctions must stabilize back to it."""
    graph = build_gasket(level)
    if conf.graph is not graph:
        raise ValueError("configuration must live on the normally wired gasket")
    y = graph.corner_index(LOWER_RIGHT)
    z = graph.corner_index(TOP)
    if conf.chips[y] != 2 or conf.chips[z] != 2:
        raise ValueError("lower-right and top corner values must equal 2")
    if not is_recurrent_burning(conf):
        raise ValueError("junction invariance needs a recurrent configuration")
    parts = {
        LOWER_LEFT: list(conf.chips),
        LOWER_RIGHT: list(rotate_config(conf, "ccw").chips),
        TOP: list(rotate_config(conf, "cw").chips),
    }
    parent = build_gasket(level + 1)
    assembled = config(parent, assemble_from_copies(level + 1, parts))
    recurrent_ok = is_recurrent_burning(assembled)
    amount = 2 * 3**level
    chips = list(assembled.chips)
    for coord in junction_coords(level + 1).values():
        chips[parent.index(coord)] += amount
    result, _ = stabilize(config(parent, chips))
    neutral_ok = result == assembled
    return JunctionReport(
        level=level,
        passed=recurrent_ok and neutral_ok,
        assembled_recurrent=recurrent_ok,
        junction_add_neutral=neutral_ok,
    )
