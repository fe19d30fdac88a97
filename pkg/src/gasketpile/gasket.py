"""Sierpinski gasket graphs wired to a sink, in integer triangular coordinates.

A vertex is a pair (a, b) of non-negative integers sitting at the planar point
a*(1, 0) + b*(1/2, sqrt(3)/2).  Level 0 is the triangle {(0,0), (1,0), (0,1)};
level k+1 is the union of three level-k copies translated by (0,0), (2**k, 0)
and (0, 2**k), glued at the three junction vertices.  The canonical vertex
order everywhere in this package is lexicographic ascending in (b, a).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

LOWER_LEFT = "lower_left"
LOWER_RIGHT = "lower_right"
TOP = "top"
CORNER_NAMES = (LOWER_LEFT, LOWER_RIGHT, TOP)

# Copy labels for the three-piece recursive decomposition reuse corner names:
# each sub-gasket is named after the corner of the big triangle it contains.
COPY_OFFSETS = {LOWER_LEFT: (0, 0), LOWER_RIGHT: (1, 0), TOP: (0, 1)}


@dataclass(frozen=True)
class Boundary:
    """Sink wiring: either two extra sink edges at every corner ("normal"),
    or one corner vertex declared to be the sink itself ("corner_sink")."""

    kind: str
    corner: str | None = None

    def __post_init__(self):
        if self.kind == "normal":
            if self.corner is not None:
                raise ValueError("normal boundary takes no corner")
        elif self.kind == "corner_sink":
            if self.corner not in CORNER_NAMES:
                raise ValueError(f"corner_sink needs a corner in {CORNER_NAMES}")
        else:
            raise ValueError(f"unknown boundary kind {self.kind!r}")

    def token(self) -> str:
        """Serialized form, e.g. "normal" or "corner_sink:lower_left"."""
        if self.kind == "normal":
            return "normal"
        return f"corner_sink:{self.corner}"


NORMAL = Boundary("normal")


def corner_sink(corner: str) -> Boundary:
    return Boundary("corner_sink", corner)


def parse_boundary(token: str) -> Boundary:
    if token == "normal":
        return NORMAL
    if token.startswith("corner_sink:"):
        return corner_sink(token.split(":", 1)[1])
    raise ValueError(f"bad boundary token {token!r}")


@lru_cache(maxsize=None)
def gasket_cells(level: int) -> tuple[tuple[tuple[int, int], ...], tuple[tuple[tuple[int, int], tuple[int, int]], ...]]:
    """Vertex coordinates and undirected edges (as coordinate pairs) of the
    bare level-`level` gasket, both in canonical order."""
    if level < 0:
        raise ValueError("level must be >= 0")
    if level == 0:
        verts = {(0, 0), (1, 0), (0, 1)}
        edges = {((0, 0), (1, 0)), ((0, 0), (0, 1)), ((1, 0), (0, 1))}
    else:
        sub_verts, sub_edges = gasket_cells(level - 1)
        half = 1 << (level - 1)
        verts = set()
        edges = set()
        for name in (LOWER_LEFT, LOWER_RIGHT, TOP):
            da, db = COPY_OFFSETS[name]
            da, db = da * half, db * half
            verts.update((a + da, b + db) for a, b in sub_verts)
            edges.update(
                tuple(sorted(((ua + da, ub + db), (va + da, vb + db)), key=lambda p: (p[1], p[0])))
                for (ua, ub), (va, vb) in sub_edges
            )
    order = sorted(verts, key=lambda p: (p[1], p[0]))
    canonical_edges = tuple(sorted(edges, key=lambda e: (e[0][1], e[0][0], e[1][1], e[1][0])))
    return tuple(order), canonical_edges


def corner_coords(level: int) -> dict[str, tuple[int, int]]:
    side = 1 << level
    return {LOWER_LEFT: (0, 0), LOWER_RIGHT: (side, 0), TOP: (0, side)}


def junction_coords(level: int) -> dict[str, tuple[int, int]]:
    """The three vertices shared by two sub-copies (defined for level >= 1),
    keyed by the side of the big triangle they sit on."""
    if level < 1:
        raise ValueError("junctions exist for level >= 1")
    half = 1 << (level - 1)
    return {"left": (0, half), "right": (half, half), "bottom": (half, 0)}


@dataclass(frozen=True, eq=False)
class GasketGraph:
    """A gasket of some level plus its sink wiring.

    `coords` lists the non-sink vertices in canonical (b, a) order; `neighbors`
    is the gasket adjacency restricted to them; `beta[i]` counts edges from
    vertex i to the sink; `degrees[i]` is the full degree including sink edges.
    """

    level: int
    boundary: Boundary
    coords: tuple[tuple[int, int], ...]
    neighbors: tuple[tuple[int, ...], ...]
    beta: tuple[int, ...]
    degrees: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def n_vertices(self) -> int:
        return len(self.coords)

    def index(self, coord: tuple[int, int]) -> int:
        return self._index[coord]

    def __contains__(self, coord: tuple[int, int]) -> bool:
        return coord in self._index

    @property
    def _index(self) -> dict[tuple[int, int], int]:
        d = self.__dict__.get("_index_cache")
        if d is None:
            d = {c: i for i, c in enumerate(self.coords)}
            object.__setattr__(self, "_index_cache", d)
        return d

    def corner_index(self, name: str) -> int | None:
        """Canonical index of a corner, or None when that corner is the sink."""
        coord = corner_coords(self.level)[name]
        return self._index.get(coord)

    def junction_index(self, side: str) -> int:
        return self._index[junction_coords(self.level)[side]]

    @property
    def sink_degree(self) -> int:
        return sum(self.beta)


def build_gasket(level: int, boundary: Boundary = NORMAL) -> GasketGraph:
    """Build the level-`level` gasket with the requested sink wiring.

    Normal boundary: every corner gets two extra edges to an external sink,
    which makes every gasket vertex degree 4 and the sink degree 6.
    Corner sink: the chosen corner vertex is the sink; no edges are added.

    Graphs are interned: the same (level, boundary) always returns the same
    instance, so configurations can compare graphs by identity.
    """
    return _build_gasket(level, boundary)


@lru_cache(maxsize=None)
def _build_gasket(level: int, boundary: Boundary) -> GasketGraph:
    coords, coord_edges = gasket_cells(level)
    corners = corner_coords(level)
    if boundary.kind == "corner_sink":
        sunk = corners[boundary.corner]
        kept = tuple(c for c in coords if c != sunk)
    else:
        sunk = None
        kept = coords
    index = {c: i for i, c in enumerate(kept)}
    nbrs: list[list[int]] = [[] for _ in kept]
    beta = [0] * len(kept)
    edges: list[tuple[int, int]] = []
    for u, v in coord_edges:
        if sunk is not None and (u == sunk or v == sunk):
            other = v if u == sunk else u
            beta[index[other]] += 1
            continue
        i, j = index[u], index[v]
        nbrs[i].append(j)
        nbrs[j].append(i)
        edges.append((i, j) if i < j else (j, i))
    if boundary.kind == "normal":
        for c in corners.values():
            beta[index[c]] += 2
    degrees = tuple(len(nbrs[i]) + beta[i] for i in range(len(kept)))
    return GasketGraph(
        level=level,
        boundary=boundary,
        coords=kept,
        neighbors=tuple(tuple(sorted(n)) for n in nbrs),
        beta=tuple(beta),
        degrees=degrees,
        edges=tuple(sorted(edges)),
    )


def rotation_ccw(graph: GasketGraph) -> tuple[int, ...]:
    """Permutation perm with perm[i] = index of the counterclockwise rotation
    of vertex i.  The rotation (a, b) -> (2**n - a - b, a) cycles the corners
    lower-left -> lower-right -> top and fixes the external sink, so it is
    only an automorphism of normally wired gaskets."""
    if graph.boundary.kind != "normal":
        raise ValueError("rotation is an automorphism of the normal boundary only")
    side = 1 << graph.level
    return tuple(graph.index((side - a - b, a)) for a, b in graph.coords)


def rotation_cw(graph: GasketGraph) -> tuple[int, ...]:
    perm = rotation_ccw(graph)
    return tuple(perm[perm[i]] for i in range(len(perm)))


def subcopy_embedding(level: int, copy: str) -> tuple[int, ...]:
    """Map canonical vertex indices of the bare level-(level-1) gasket to the
    indices of its image inside the level-`level` gasket.

    `copy` names which of the three translated sub-gaskets: the one containing
    the lower-left, lower-right, or top corner of the big triangle.
    """
    if level < 1:
        raise ValueError("level must be >= 1")
    if copy not in COPY_OFFSETS:
        raise ValueError(f"copy must be one of {CORNER_NAMES}")
    half = 1 << (level - 1)
    da, db = COPY_OFFSETS[copy]
    da, db = da * half, db * half
    child_coords, _ = gasket_cells(level - 1)
    parent_coords, _ = gasket_cells(level)
    parent_index = {c: i for i, c in enumerate(parent_coords)}
    return tuple(parent_index[(a + da, b + db)] for a, b in child_coords)


def reduced_laplacian(graph: GasketGraph) -> list[list[int]]:
    """Graph Laplacian of gasket + sink with the sink row and column deleted:
    full degree on the diagonal, -1 per gasket edge off the diagonal."""
    n = graph.n_vertices
    mat = [[0] * n for _ in range(n)]
    for i in range(n):
        mat[i][i] = graph.degrees[i]
        for j in graph.neighbors[i]:
            mat[i][j] -= 1
    return mat


def bare_laplacian(level: int) -> list[list[int]]:
    """Laplacian of the gasket alone (no sink): corners have degree 2."""
    coords, coord_edges = gasket_cells(level)
    index = {c: i for i, c in enumerate(coords)}
    n = len(coords)
    mat = [[0] * n for _ in range(n)]
    for u, v in coord_edges:
        i, j = index[u], index[v]
        mat[i][i] += 1
        mat[j][j] += 1
        mat[i][j] -= 1
        mat[j][i] -= 1
    return mat


def graph_to_json(graph: GasketGraph) -> dict:
    """JSON-ready description: vertices in canonical order, edges as sorted
    index pairs, per-vertex sink edge counts."""
    return {
        "level": graph.level,
        "boundary": graph.boundary.token(),
        "vertices": [list(c) for c in graph.coords],
        "edges": [list(e) for e in graph.edges],
        "beta": list(graph.beta),
    }
