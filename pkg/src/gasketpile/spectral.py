"""Multiplicative harmonic functions and walk eigenvalues on gasket graphs.

A multiplicative harmonic function assigns a unit-circle value h(v) to every
vertex (h(sink) = 1) with h(v)**deg(v) equal to the product of h over the
neighbors.  Writing h = exp(2*pi*i*q), harmonicity is the exact integer
congruence deg(v)*q(v) = sum of neighbor q's (mod 1), so everything here is
checked in rational arithmetic.  These functions are exactly the characters
of the sandpile group, and each one is an eigenfunction of the chip-adding
walk with eigenvalue (1 + sum_v h(v)) / (n_vertices + 1).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .gasket import (
    COPY_OFFSETS,
    LOWER_LEFT,
    LOWER_RIGHT,
    TOP,
    GasketGraph,
    build_gasket,
    gasket_cells,
)
from . import group

DEFAULT_CHARACTER_CAP = 10**6

_CELL_LOCAL_MIDPOINTS = ((1, 0), (0, 1), (1, 1))


class GroupTooLargeError(ValueError):
    """Raised when full character enumeration would exceed the cap."""

    def __init__(self, order: int, cap: int):
        self.order = order
        self.cap = cap
        super().__init__(f"group order {order} exceeds enumeration cap {cap}")


@dataclass(frozen=True)
class HarmonicFunction:
    """Rotation numbers q(v) in [0, 1) over the non-sink vertices; the sink
    carries q = 0 implicitly."""

    graph: GasketGraph
    rotation: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.rotation) != self.graph.n_vertices:
            raise ValueError("rotation vector length must match vertex count")

    def is_harmonic(self) -> bool:
        q = self.rotation
        for v, nbrs in enumerate(self.graph.neighbors):
            residue = self.graph.degrees[v] * q[v] - sum(q[w] for w in nbrs)
            if residue.denominator != 1:
                return False
        return True

    @property
    def is_real(self) -> bool:
        """True when every value is +-1, i.e. all q in {0, 1/2}."""
        return all(q.denominator in (1, 2) for q in self.rotation)

    @property
    def is_trivial(self) -> bool:
        return all(q == 0 for q in self.rotation)

    def values(self) -> list[complex]:
        return [cmath.exp(2j * math.pi * float(q)) for q in self.rotation]

    def character_rotation(self, entries) -> Fraction:
        """Rotation number of the character value on an integer vector:
        sum_v q(v) * entries[v] mod 1.  Depends only on the group class."""
        total = sum(q * e for q, e in zip(self.rotation, entries))
        return total % 1

    def character_value(self, entries) -> complex:
        rot = self.character_rotation(entries)
        if rot == 0:
            return 1.0
        if 2 * rot == 1:
            return -1.0
        return cmath.exp(2j * math.pi * float(rot))


def product_harmonic(a: HarmonicFunction, b: HarmonicFunction) -> HarmonicFunction:
    if a.graph is not b.graph:
        raise ValueError("harmonic functions live on different graphs")
    return HarmonicFunction(a.graph, tuple((x + y) % 1 for x, y in zip(a.rotation, b.rotation)))


def trivial_character(graph: GasketGraph) -> HarmonicFunction:
    return HarmonicFunction(graph, (Fraction(0),) * graph.n_vertices)


def eigenvalue(h: HarmonicFunction):
    """Walk eigenvalue (1 + sum_v h(v)) / (n + 1).

    Exact Fraction when all values are +-1, complex float otherwise.
    Rejects non-harmonic input.
    """
    if not h.is_harmonic():
        raise ValueError("not a multiplicative harmonic function")
    n = h.graph.n_vertices
    if h.is_real:
        minus = sum(1 for q in h.rotation if q != 0)
        return Fraction(1 + (n - minus) - minus, n + 1)
    total = sum(h.values())
    return (1 + total) / (n + 1)


# ---------------------------------------------------------------------------
# Level-1 cells and the cell-supported harmonic functions.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Level1Cell:
    origin: tuple[int, int]
    vertex_indices: tuple[int, ...]
    midpoint_indices: tuple[int, ...]


@lru_cache(maxsize=None)
def _cell_origins(level: int) -> tuple[tuple[int, int], ...]:
    """Origins of the 3**(level-1) level-1 cells, enumerated depth-first in
    copy order lower-left, lower-right, top."""
    if level < 1:
        raise ValueError("cells exist for level >= 1")
    if level == 1:
        return ((0, 0),)
    half = 1 << (level - 1)
    out = []
    for name in (LOWER_LEFT, LOWER_RIGHT, TOP):
        da, db = COPY_OFFSETS[name]
        out.extend((a + da * half, b + db * half) for a, b in _cell_origins(level - 1))
    return tuple(out)


@lru_cache(maxsize=None)
def level1_cells(level: int) -> tuple[Level1Cell, ...]:
    coords, _ = gasket_cells(level)
    index = {c: i for i, c in enumerate(coords)}
    locals_all = ((0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (0, 2))
    cells = []
    for a0, b0 in _cell_origins(level):
        verts = tuple(index[(a0 + da, b0 + db)] for da, db in locals_all)
        mids = tuple(index[(a0 + da, b0 + db)] for da, db in _CELL_LOCAL_MIDPOINTS)
        cells.append(Level1Cell((a0, b0), verts, mids))
    return tuple(cells)


def cell_harmonic(level: int, cell: int) -> HarmonicFunction:
    """The +-1 harmonic function that is -1 exactly on the three midpoints of
    one level-1 cell (cells are 1-indexed in enumeration order)."""
    cells = level1_cells(level)
    if not 1 <= cell <= len(cells):
        raise ValueError(f"cell index must be in 1..{len(cells)}")
    graph = build_gasket(level)
    half = Fraction(1, 2)
    rotation = [Fraction(0)] * graph.n_vertices
    for v in cells[cell - 1].midpoint_indices:
        rotation[v] = half
    return HarmonicFunction(graph, tuple(rotation))


def distinguishing_statistic(graph: GasketGraph, entries) -> float:
    """Average over all level-1 cells of the parity character
    (-1)**(chips on the cell midpoints).  A class function on the group."""
    if graph.boundary.kind != "normal":
        raise ValueError("statistic defined on normally wired gaskets")
    cells = level1_cells(graph.level)
    total = 0
    for cell in cells:
        s = sum(entries[v] for v in cell.midpoint_indices)
        total += -1 if s % 2 else 1
    return total / len(cells)


# ---------------------------------------------------------------------------
# Full character enumeration through the Smith basis.
# ---------------------------------------------------------------------------


def enumerate_characters(
    graph: GasketGraph, cap: int = DEFAULT_CHARACTER_CAP
) -> list[HarmonicFunction]:
    """All |group| multiplicative harmonic functions, trivial one first.

    The rotation vectors are the classes of Delta^{-1} Z^V modulo Z^V,
    enumerated from the Smith basis of the reduced Laplacian.  Refuses with
    GroupTooLargeError when the group order exceeds `cap`.
    """
    data = group.lattice_data(graph)
    if data.order > cap:
        raise GroupTooLargeError(data.order, cap)
    n = graph.n_vertices
    nontrivial = [(i, d) for i, d in enumerate(data.diag) if d > 1]
    common = math.lcm(*(d for _, d in nontrivial)) if nontrivial else 1
    # The Laplacian is symmetric, so Delta^{-1} Z^V = Uinv^T D^{-1} Z^V: row i
    # of Uinv divided by d_i generates the d_i-torsion of the dual group.
    # Scale by common/d_i and reduce mod common; the rotation vector of the
    # coordinate tuple (m_i) is then sum_i m_i * row_i / common mod 1.
    columns = [
        [(v * (common // d)) % common for v in data.Uinv[i]] for i, d in nontrivial
    ]
    out = []
    for counts in product(*(range(d) for _, d in nontrivial)):
        acc = [0] * n
        for m, col in zip(counts, columns):
            if m:
                for v in range(n):
                    acc[v] += m * col[v]
        rotation = tuple(Fraction(a % common, common) for a in acc)
        out.append(HarmonicFunction(graph, rotation))
    return out


@dataclass(frozen=True)
class DistanceResult:
    level: int
    t: int
    group_order: int
    l2: float
    tv_upper: float


def exact_distance(
    graph: GasketGraph, t: int, cap: int = DEFAULT_CHARACTER_CAP
) -> DistanceResult:
    """Exact l2 distance of the walk started at the group identity from
    uniform after t steps, by Plancherel over all nontrivial characters:

        l2**2 = (1/|G|) * sum |lambda_chi|**(2t)

    `tv_upper` reports l2/2.
    """
    chars = enumerate_characters(graph, cap=cap)
    order = len(chars)
    total = 0.0
    for h in chars:
        if h.is_trivial:
            continue
        lam = eigenvalue(h)
        mag2 = float(lam) ** 2 if isinstance(lam, Fraction) else abs(lam) ** 2
        total += mag2**t
    l2 = math.sqrt(total / order)
    return DistanceResult(level=graph.level, t=t, group_order=order, l2=l2, tv_upper=l2 / 2)


@dataclass(frozen=True)
class L2BoundCheck:
    level: int
    t_star: int
    l2: float
    passed: bool


def l2_bound_check(graph: GasketGraph, cap: int = DEFAULT_CHARACTER_CAP) -> L2BoundCheck:
    """Check l2 <= 1/4 at t* = ceil((5/4) (n+1) log(34 n))."""
    n = graph.n_vertices
    t_star = math.ceil(1.25 * (n + 1) * math.log(34 * n))
    result = exact_distance(graph, t_star, cap=cap)
    return L2BoundCheck(level=graph.level, t_star=t_star, l2=result.l2, passed=result.l2 <= 0.25)
