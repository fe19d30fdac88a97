"""Exact integer linear algebra for sandpile groups on gasket graphs.

Everything here works over Python integers (arbitrary precision): Bareiss
fraction-free determinants, Smith normal form with unimodular transforms,
a bounded-entry Smith variant that reduces modulo the group order, quotient
group invariants, and the recursive / matrix-tree spanning tree counts.  The
sandpile group of a graph is Z^V modulo the column lattice of the reduced
Laplacian; its order equals det(reduced Laplacian).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .gasket import (
    CORNER_NAMES,
    LOWER_LEFT,
    LOWER_RIGHT,
    TOP,
    GasketGraph,
    bare_laplacian,
    build_gasket,
    reduced_laplacian,
    subcopy_embedding,
)

Matrix = list[list[int]]


def mat_identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    inner = len(b)
    bt = [list(col) for col in zip(*b)] if b else []
    return [[sum(ra[k] * cb[k] for k in range(inner)) for cb in bt] for ra in a]


def mat_vec(a: Matrix, x: list[int]) -> list[int]:
    return [sum(r[k] * x[k] for k in range(len(x))) for r in a]


def determinant(matrix: Matrix) -> int:
    """Exact determinant by Bareiss fraction-free elimination.

    Independent of the Smith normal form code path on purpose: the two are
    cross-checked against each other in the tests.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("determinant needs a square matrix")
    a = [[int(v) for v in row] for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        piv = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            a[i] = rowi[: k + 1] + [
                (rowi[j] * piv - aik * rowk[j]) // prev for j in range(k + 1, n)
            ]
        prev = piv
    return sign * a[n - 1][n - 1] if n else 1


@dataclass
class SmithDecomposition:
    """A = U @ D @ V with U, V unimodular and D diagonal, d1 | d2 | ... >= 0.

    `diag` holds the diagonal of D (length min(rows, cols)).  The transforms
    and their inverses are None when the decomposition was computed in
    diagonal-only mode.
    """

    rows: int
    cols: int
    diag: list[int]
    U: Matrix | None = None
    V: Matrix | None = None
    Uinv: Matrix | None = None
    Vinv: Matrix | None = None

    @property
    def invariant_factors(self) -> list[int]:
        return [d for d in self.diag if d > 1]

    def d_matrix(self) -> Matrix:
        d = [[0] * self.cols for _ in range(self.rows)]
        for i, v in enumerate(self.diag):
            d[i][i] = v
        return d

    def group_order(self) -> int:
        """Order of coker(A) = Z^rows / col-span(A); requires full row rank."""
        if self.rows > self.cols or any(d == 0 for d in self.diag):
            raise ValueError("cokernel is infinite")
        return math.prod(self.diag)

    def verify(self, original: Matrix) -> bool:
        """Recheck A = U D V, unimodularity, and the divisibility chain."""
        for i in range(len(self.diag) - 1):
            a, b = self.diag[i], self.diag[i + 1]
            if a < 0 or b < 0:
                return False
            if a == 0 and b != 0:
                return False
            if a > 0 and b % a != 0:
                return False
        if self.U is None:
            return True
        if abs(determinant(self.U)) != 1 or abs(determinant(self.V)) != 1:
            return False
        if mat_mul(self.U, self.Uinv) != mat_identity(self.rows):
            return False
        if mat_mul(self.V, self.Vinv) != mat_identity(self.cols):
            return False
        return mat_mul(mat_mul(self.U, self.d_matrix()), self.V) == [
            [int(v) for v in row] for row in original
        ]


def smith_normal_form(matrix: Matrix, transforms: bool = True) -> SmithDecomposition:
    """Smith normal form over the integers.

    Diagonalizes with minimal-absolute-value pivots first, then restores the
    divisibility chain by gcd/lcm steps on diagonal pairs.  Every elementary
    operation is mirrored into U, V and their inverses so that
    A = U @ D @ V exactly.
    """
    s = [[int(v) for v in row] for row in matrix]
    m = len(s)
    n = len(s[0]) if m else 0
    if any(len(row) != n for row in s):
        raise ValueError("ragged matrix")
    if transforms:
        u, uinv = mat_identity(m), mat_identity(m)
        v, vinv = mat_identity(n), mat_identity(n)
    else:
        u = uinv = v = vinv = None

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        if transforms:
            uinv[i], uinv[j] = uinv[j], uinv[i]
            for row in u:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        if transforms:
            v[i], v[j] = v[j], v[i]
            for row in vinv:
                row[i], row[j] = row[j], row[i]

    def row_sub(i, j, q):
        # row_i -= q * row_j
        si, sj = s[i], s[j]
        for col in range(n):
            si[col] -= q * sj[col]
        if transforms:
            ui, uj = uinv[i], uinv[j]
            for col in range(m):
                ui[col] -= q * uj[col]
            for row in u:
                row[j] += q * row[i]

    def col_sub(i, j, q):
        # col_i -= q * col_j
        for row in s:
            row[i] -= q * row[j]
        if transforms:
            vj, vi = v[j], v[i]
            for col in range(n):
                vj[col] += q * vi[col]
            for row in vinv:
                row[i] -= q * row[j]

    def negate_row(i):
        s[i] = [-x for x in s[i]]
        if transforms:
            uinv[i] = [-x for x in uinv[i]]
            for row in u:
                row[i] = -row[i]

    def clear_cross(t: int) -> None:
        # Clear row and column t against the pivot, shrinking it via
        # remainder swaps (Euclid); terminates because the pivot strictly
        # decreases on every swap.
        changed = True
        while changed:
            changed = False
            piv = s[t][t]
            for i in range(t + 1, m):
                val = s[i][t]
                if val:
                    q = val // piv
                    if q:
                        row_sub(i, t, q)
                    if s[i][t]:
                        swap_rows(i, t)
                        if s[t][t] < 0:
                            negate_row(t)
                        piv = s[t][t]
                        changed = True
            piv = s[t][t]
            for j in range(t + 1, n):
                val = s[t][j]
                if val:
                    q = val // piv
                    if q:
                        col_sub(j, t, q)
                    if s[t][j]:
                        swap_cols(j, t)
                        piv = s[t][t]
                        changed = True

    # Phase 1: diagonalize with minimal-|value| pivots.  Divisibility between
    # diagonal entries is restored afterwards; interleaving it here lets the
    # trailing block blow up (each fold-and-reclear round multiplies entries
    # by roughly entry/pivot).
    rank = min(m, n)
    actual = 0
    for t in range(rank):
        best = None
        for i in range(t, m):
            row = s[i]
            for j in range(t, n):
                val = row[j]
                if val:
                    a = -val if val < 0 else val
                    if best is None or a < best[0]:
                        best = (a, i, j)
                        if a == 1:
                            break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        if best[1] != t:
            swap_rows(t, best[1])
        if best[2] != t:
            swap_cols(t, best[2])
        if s[t][t] < 0:
            negate_row(t)
        clear_cross(t)
        actual = t + 1

    # Phase 2: enforce d_i | d_j pairwise on the diagonal.  All off-diagonal
    # entries in rows/cols i and j are zero, so coupling the pair and
    # re-clearing runs Euclid on two entries and lands on (gcd, +-lcm)
    # without touching the rest of the matrix.
    for i in range(actual):
        if s[i][i] < 0:
            negate_row(i)
        for j in range(i + 1, actual):
            if s[j][j] < 0:
                negate_row(j)
            if s[i][i] == 0:
                # Zero divides only zero; pull a nonzero later entry forward.
                if s[j][j] != 0:
                    swap_rows(i, j)
                    swap_cols(i, j)
                continue
            if s[j][j] % s[i][i]:
                col_sub(i, j, -1)
                clear_cross(i)
    if actual and s[actual - 1][actual - 1] < 0:
        negate_row(actual - 1)

    diag = [s[i][i] for i in range(rank)]
    return SmithDecomposition(rows=m, cols=n, diag=diag, U=u, V=v, Uinv=uinv, Vinv=vinv)


def invariant_factors(matrix: Matrix) -> list[int]:
    """Nontrivial invariant factors (> 1) of the cokernel of `matrix`."""
    return smith_normal_form(matrix, transforms=False).invariant_factors


def _canonical_chain(orders: list[int]) -> list[int]:
    """Divisibility chain d1 | d2 | ... with the same direct sum of cyclic
    groups as the given positive orders.  Each fix replaces a bad pair by
    (gcd, lcm); the smaller entry strictly shrinks, so this terminates."""
    d = sorted(int(v) for v in orders)
    if any(v <= 0 for v in d):
        raise ValueError("cyclic orders must be positive")
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                if d[j] % d[i]:
                    g = math.gcd(d[i], d[j])
                    d[i], d[j] = g, d[i] // g * d[j]
                    changed = True
        d.sort()
    return d


@dataclass
class AdaptedBasis:
    """Invariant factors d1 | ... | dm of Z^m modulo a full-rank lattice,
    optionally with a unimodular U whose i-th column generates the Z/d_i
    summand: the lattice is U @ diag(d) @ Z^m and Uinv maps a vector to its
    cyclic coordinates."""

    diag: list[int]
    U: Matrix | None = None
    Uinv: Matrix | None = None


def smith_mod(matrix: Matrix, modulus: int, transforms: bool = False) -> AdaptedBasis:
    """Invariant factors of Z^m / (column lattice of `matrix` + R * Z^m) for a
    positive modulus R.  When R * Z^m already lies inside the column lattice
    (R a multiple of the determinant, say), this is just coker(matrix).

    Working modulo R keeps every intermediate entry inside [0, R), which is
    what makes the larger gasket Laplacians tractable: the plain Smith
    reduction grows million-bit entries on the 42-vertex graph.  Conceptually
    the reduction runs on the augmented matrix [A | R*I]; those extra columns
    are never stored, they just license reducing any entry mod R and turning
    a cleared pivot p into gcd(p, R), both being column operations.  Column
    operations do not disturb cokernel coordinates, so with `transforms` only
    row operations get tracked, giving the adapted basis U (square input
    only).  Coordinates beyond the column rank are killed by the phantom
    columns alone and contribute a factor of R.
    """
    big = int(modulus)
    if big <= 0:
        raise ValueError("modulus must be positive")
    s = [[int(v) % big for v in row] for row in matrix]
    m = len(s)
    n = len(s[0]) if m else 0
    if any(len(row) != n for row in s):
        raise ValueError("ragged matrix")
    if transforms and m != n:
        raise ValueError("adapted basis needs a square matrix")
    u = mat_identity(m) if transforms else None
    uinv = mat_identity(m) if transforms else None

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        if transforms:
            uinv[i], uinv[j] = uinv[j], uinv[i]
            for row in u:
                row[i], row[j] = row[j], row[i]

    def row_sub(i, j, q):
        # row_i -= q * row_j, entries re-reduced mod R.
        si, sj = s[i], s[j]
        for col in range(n):
            si[col] = (si[col] - q * sj[col]) % big
        if transforms:
            ui, uj = uinv[i], uinv[j]
            for col in range(m):
                ui[col] -= q * uj[col]
            for row in u:
                row[j] += q * row[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]

    def col_sub(i, j, q):
        # col_i -= q * col_j, entries re-reduced mod R; never tracked.
        for row in s:
            row[i] = (row[i] - q * row[j]) % big

    def clear_cross(t: int) -> None:
        # Euclid against the pivot with remainder swaps; all entries are
        # canonical residues in [0, R), and the pivot strictly decreases on
        # every swap, so this terminates.
        changed = True
        while changed:
            changed = False
            piv = s[t][t]
            for i in range(t + 1, m):
                val = s[i][t]
                if val:
                    q = val // piv
                    if q:
                        row_sub(i, t, q)
                    if s[i][t]:
                        swap_rows(i, t)
                        piv = s[t][t]
                        changed = True
            piv = s[t][t]
            for j in range(t + 1, n):
                val = s[t][j]
                if val:
                    q = val // piv
                    if q:
                        col_sub(j, t, q)
                    if s[t][j]:
                        swap_cols(j, t)
                        piv = s[t][t]
                        changed = True

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            row = s[i]
            for j in range(t, n):
                val = row[j]
                if val and (best is None or val < best[0]):
                    best = (val, i, j)
                    if val == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        if best[1] != t:
            swap_rows(t, best[1])
        if best[2] != t:
            swap_cols(t, best[2])
        clear_cross(t)
        # Fold the phantom column for this row into the cleared pivot.  A
        # residue of 0 stands for the factor R itself.
        s[t][t] = math.gcd(s[t][t], big) % big

    if not transforms:
        raw = [math.gcd(s[i][i], big) if i < n else big for i in range(m)]
        return AdaptedBasis(diag=_canonical_chain(raw))

    # Restore the divisibility chain with real (tracked) operations so that U
    # stays aligned with the factors.  Diagonal residues all divide R here,
    # hence so do their pairwise gcds and lcms, and nothing wraps around.
    for i in range(m):
        for j in range(i + 1, m):
            if s[i][i] == 0:
                if s[j][j] != 0:
                    swap_rows(i, j)
                    swap_cols(i, j)
                else:
                    continue
            if s[j][j] % s[i][i]:
                col_sub(i, j, -1)
                clear_cross(i)
                s[j][j] = math.gcd(s[j][j], big) % big
    diag = [math.gcd(s[i][i], big) for i in range(m)]
    return AdaptedBasis(diag=diag, U=u, Uinv=uinv)


def _exact_div(num: int, den: int) -> int:
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError("fraction-free elimination produced a remainder")
    return q


def scaled_inverse(matrix: Matrix) -> tuple[Matrix, int]:
    """Integer matrix B and D = |det| > 0 with matrix @ B == D * identity.

    B is the adjugate up to the determinant's sign.  Fraction-free
    Gauss-Jordan on [A | I]: each step updates every off-pivot row and
    divides by the previous pivot, which is exact; entries stay polynomially
    bounded instead of exploding the way Smith transforms do."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("scaled_inverse needs a square matrix")
    a = [
        [int(v) for v in row] + [1 if i == j else 0 for j in range(n)]
        for i, row in enumerate(matrix)
    ]
    prev = 1
    for k in range(n):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    break
            else:
                raise ArithmeticError("matrix is singular")
        piv = a[k][k]
        rowk = a[k]
        for i in range(n):
            if i == k:
                continue
            rowi = a[i]
            aik = rowi[k]
            a[i] = [
                _exact_div(rowi[j] * piv - aik * rowk[j], prev) for j in range(2 * n)
            ]
        prev = piv
    det = a[n - 1][n - 1] if n else 1
    if det < 0:
        return [[-v for v in row[n:]] for row in a], -det
    return [row[n:] for row in a], det


def sandpile_group_invariants(graph: GasketGraph) -> list[int]:
    return list(lattice_data(graph).nontrivial)


def sandpile_group_order(graph: GasketGraph) -> int:
    return lattice_data(graph).order


# ---------------------------------------------------------------------------
# Cached lattice data per graph: Smith basis of the reduced Laplacian plus the
# integer adjugate, reused by the recurrent-representative computation, the
# character enumeration, and the stationary sampler.
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class LatticeData:
    """Exact data for Z^V modulo the column lattice of Delta: group order,
    invariant factors, an adapted basis, the integer adjugate, and the
    all-ones lift used to raise heights without changing the class.

    Everything past the order is lazy and uses a bounded-entry algorithm:
    `diag` reduces modulo the order, the adapted basis tracks row transforms
    on top of that, and the adjugate comes from fraction-free Gauss-Jordan.
    The plain Smith transforms are avoided on purpose; they blow up on the
    level-3 graph."""

    graph: GasketGraph
    order: int
    _diag: tuple[int, ...] | None = None
    _U: Matrix | None = None
    _Uinv: Matrix | None = None
    _adjugate: Matrix | None = None
    _lift: tuple[list[int], int] | None = None

    @property
    def diag(self) -> tuple[int, ...]:
        if self._diag is None:
            dec = smith_mod(reduced_laplacian(self.graph), self.order)
            if math.prod(dec.diag) != self.order:
                raise ArithmeticError("invariant factors disagree with the determinant")
            self._diag = tuple(dec.diag)
        return self._diag

    @property
    def nontrivial(self) -> tuple[int, ...]:
        return tuple(d for d in self.diag if d > 1)

    def _adapted(self) -> None:
        dec = smith_mod(reduced_laplacian(self.graph), self.order, transforms=True)
        if math.prod(dec.diag) != self.order:
            raise ArithmeticError("invariant factors disagree with the determinant")
        self._diag = tuple(dec.diag)
        self._U = dec.U
        self._Uinv = dec.Uinv

    @property
    def U(self) -> Matrix:
        if self._U is None:
            self._adapted()
        return self._U

    @property
    def Uinv(self) -> Matrix:
        if self._Uinv is None:
            self._adapted()
        return self._Uinv

    @property
    def adjugate(self) -> Matrix:
        """adj(Delta) = det * Delta^{-1}: Delta @ adj == order * identity."""
        if self._adjugate is None:
            adj, scale = scaled_inverse(reduced_laplacian(self.graph))
            if scale != self.order:
                raise ArithmeticError("adjugate scale disagrees with the determinant")
            self._adjugate = adj
        return self._adjugate

    @property
    def lift(self) -> tuple[list[int], int]:
        """Positive integer vector w and scale L with Delta @ w == L * ones.

        Exists with w > 0 because Delta^{-1} is entrywise non-negative for
        these sink-connected Laplacians; adding k * (Delta @ w) to a vector
        raises every entry by k * L without changing its class.
        """
        if self._lift is None:
            raw = [sum(row) for row in self.adjugate]
            g = math.gcd(self.order, *raw)
            w = [x // g for x in raw]
            if any(x <= 0 for x in w):
                raise ArithmeticError("lift vector must be positive")
            self._lift = (w, self.order // g)
        return self._lift

    def coordinates(self, entries: list[int]) -> tuple[int, ...]:
        """Canonical label of the class of `entries`: adapted-basis
        coordinates reduced modulo the invariant factors (trivial factors
        drop out)."""
        coords = mat_vec(self.Uinv, list(entries))
        return tuple(c % d for c, d in zip(coords, self.diag) if d > 1)

    def from_coordinates(self, coords: list[int]) -> list[int]:
        """A class representative x = U @ c for coordinates over the
        nontrivial invariant factors."""
        full = []
        it = iter(coords)
        for d in self.diag:
            full.append(next(it) if d > 1 else 0)
        return mat_vec(self.U, full)


@lru_cache(maxsize=None)
def lattice_data(graph: GasketGraph) -> LatticeData:
    det = determinant(reduced_laplacian(graph))
    if det == 0:
        raise ArithmeticError("reduced Laplacian should be nonsingular")
    return LatticeData(graph=graph, order=abs(det))


def in_lattice(graph: GasketGraph, entries: list[int]) -> bool:
    """Whether the integer vector lies in the column lattice of the reduced
    Laplacian, i.e. represents the trivial group element.  True exactly when
    Delta^{-1} @ x = (adj @ x) / det is integral."""
    data = lattice_data(graph)
    return all(v % data.order == 0 for v in mat_vec(data.adjugate, list(entries)))


def element_order(graph: GasketGraph, entries: list[int]) -> int:
    """Order of the class of `entries` in the sandpile group: the smallest
    k >= 1 for which k * (adj @ x) vanishes mod det."""
    data = lattice_data(graph)
    det = data.order
    ks = (det // math.gcd(det, v) for v in mat_vec(data.adjugate, list(entries)))
    return math.lcm(*ks)


# ---------------------------------------------------------------------------
# Quotients and the recursive decomposition of the group.
# ---------------------------------------------------------------------------


def delta_vector(graph: GasketGraph, index: int) -> list[int]:
    vec = [0] * graph.n_vertices
    vec[index] = 1
    return vec


def quotient_invariants(graph: GasketGraph, generators: list[list[int]]) -> list[int]:
    """Invariant factors (> 1) of the sandpile group modulo the subgroup
    generated by the given integer vectors' classes.

    Computed as the cokernel of [Delta | g1 | ... | gk], reduced modulo the
    group order throughout; that is legal because order * Z^V already lies in
    the column lattice of Delta.
    """
    n = graph.n_vertices
    for g in generators:
        if len(g) != n:
            raise ValueError("generator length must match vertex count")
    delta = reduced_laplacian(graph)
    augmented = [delta[i] + [g[i] for g in generators] for i in range(n)]
    dec = smith_mod(augmented, lattice_data(graph).order)
    return [d for d in dec.diag if d > 1]


def direct_sum_invariants(factor_lists: list[list[int]]) -> list[int]:
    """Canonical invariant factors of a direct sum of cyclic groups.

    Takes the Smith normal form of the diagonal matrix listing every cyclic
    factor, which recombines them into a divisibility chain without needing
    any integer factorization.
    """
    entries = [d for factors in factor_lists for d in factors]
    if not entries:
        return []
    k = len(entries)
    diag_matrix = [[entries[i] if i == j else 0 for j in range(k)] for i in range(k)]
    return smith_normal_form(diag_matrix, transforms=False).invariant_factors


def quotient_order(graph: GasketGraph, generators: list[list[int]]) -> int:
    n = graph.n_vertices
    delta = reduced_laplacian(graph)
    augmented = [delta[i] + [g[i] for g in generators] for i in range(n)]
    return math.prod(smith_mod(augmented, lattice_data(graph).order).diag)


@dataclass
class GroupTheoremReport:
    """Outcome of the three-copy decomposition check at one level."""

    level: int
    passed: bool
    convention: str
    lhs_factors: list[int]
    rhs_factors: list[int]
    lhs_order: int
    rhs_order: int

    def to_json(self) -> dict:
        return {
            "check": "group_theorem",
            "level": self.level,
            "pass": self.passed,
            "details": {
                "convention": self.convention,
                "lhs_factors": [str(d) for d in self.lhs_factors],
                "rhs_factors": [str(d) for d in self.rhs_factors],
                "lhs_order": str(self.lhs_order),
                "rhs_order": str(self.rhs_order),
            },
        }


# Which sub-copy supplies the two neighbors of each junction in the quotient
# generators: junction on the left side pairs with the top copy, bottom with
# the lower-left copy, right with the lower-right copy.
_PRIMARY_ASSIGNMENT = (("left", TOP), ("bottom", LOWER_LEFT), ("right", LOWER_RIGHT))
_FLIPPED_ASSIGNMENT = (("left", LOWER_LEFT), ("bottom", LOWER_RIGHT), ("right", TOP))


def _junction_copy_vector(graph: GasketGraph, side: str, copy: str) -> list[int]:
    """Indicator vector of the two neighbors of a junction that lie in the
    named sub-copy."""
    jidx = graph.junction_index(side)
    image = set(subcopy_embedding(graph.level, copy))
    vec = [0] * graph.n_vertices
    hits = 0
    for w in graph.neighbors[jidx]:
        if w in image:
            vec[w] = 1
            hits += 1
    if hits != 2:
        raise ArithmeticError(f"junction {side} should have 2 neighbors in copy {copy}")
    return vec


def check_group_theorem(level: int) -> GroupTheoremReport:
    """Verify that the level-n group, modulo the six junction-related classes,
    is the direct sum of three corner-quotiented level-(n-1) groups.

    The left side quotients G_n by the classes of the three junction deltas
    and, per junction, the sum of its two neighbors inside one sub-copy.  The
    right side quotients G_{n-1} by two corner deltas, once per corner pair.
    If the primary junction-copy assignment fails, the flipped one is tried
    and reported.
    """
    if level < 1:
        raise ValueError("decomposition needs level >= 1")
    parent = build_gasket(level)
    child = build_gasket(level - 1)
    x, y, z = (child.corner_index(name) for name in CORNER_NAMES)
    rhs_parts = [
        quotient_invariants(child, [delta_vector(child, i), delta_vector(child, j)])
        for i, j in ((x, y), (y, z), (z, x))
    ]
    rhs = direct_sum_invariants(rhs_parts)
    rhs_order = math.prod(
        quotient_order(child, [delta_vector(child, i), delta_vector(child, j)])
        for i, j in ((x, y), (y, z), (z, x))
    )
    junction_deltas = [
        delta_vector(parent, parent.junction_index(side))
        for side in ("left", "right", "bottom")
    ]
    report = None
    for name, assignment in (("primary", _PRIMARY_ASSIGNMENT), ("flipped", _FLIPPED_ASSIGNMENT)):
        u_vectors = [_junction_copy_vector(parent, side, copy) for side, copy in assignment]
        lhs = quotient_invariants(parent, u_vectors + junction_deltas)
        lhs_order = quotient_order(parent, u_vectors + junction_deltas)
        report = GroupTheoremReport(
            level=level,
            passed=(lhs == rhs),
            convention=name,
            lhs_factors=lhs,
            rhs_factors=rhs,
            lhs_order=lhs_order,
            rhs_order=rhs_order,
        )
        if report.passed:
            break
    return report


# ---------------------------------------------------------------------------
# Spanning tree counts of the bare gasket.
# ---------------------------------------------------------------------------


def tau_recursion(level: int) -> int:
    """Spanning tree count of the bare level-n gasket via the product
    recursion tau(n+1) = tau(n) * 18 * 540**((3**n - 1) // 2), tau(0) = 3."""
    if level < 0:
        raise ValueError("level must be >= 0")
    count = 3
    for k in range(level):
        count *= 18 * 540 ** ((3**k - 1) // 2)
    return count


def tau_matrix_tree(level: int) -> int:
    """Spanning tree count via the matrix-tree theorem: determinant of the
    bare gasket Laplacian with the lower-left corner row and column deleted."""
    lap = bare_laplacian(level)
    # Canonical order starts at (0, 0), so drop row/column 0.
    minor = [row[1:] for row in lap[1:]]
    return determinant(minor)


def tau_fourth_power_identity(level: int) -> bool:
    """Closed form check avoiding irrational factors:
    tau(n)^4 == (3/20) * (3/5)**(2n) * 540**(3**n)."""
    tau = tau_recursion(level)
    lhs = tau**4 * 20 * 5 ** (2 * level)
    rhs = 3 * 3 ** (2 * level) * 540 ** (3**level)
    return lhs == rhs
