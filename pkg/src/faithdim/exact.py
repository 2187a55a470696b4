"""Exact integer linear algebra and selection utilities.

Everything here works with arbitrary-precision Python integers: Smith normal
form with all four unimodular transforms, lattice bases / membership /
intersection, semibases of finitely generated abelian subquotients, the basis
partition of direct sums, matroid greedy selection, and the tail-sum
inequality check used by the lower-bound arguments downstream.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Sequence

from .errors import (
    DimensionMismatchError,
    InfeasibleError,
    InternalInvariantError,
    MembershipError,
    PreconditionError,
    RankDeficiencyError,
    SizeLimitError,
)

Vector = tuple[int, ...]

# Exhaustive subset search in partition_basis is only run up to this many
# vectors; all in-library uses stay well below it.
PARTITION_SIZE_LIMIT = 12


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix, entries in row-major order."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatchError(
                f"{self.rows}x{self.cols} matrix needs "
                f"{self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        for row in rows:
            if len(row) != c:
                raise DimensionMismatchError("ragged rows")
        return cls(r, c, tuple(int(x) for row in rows for x in row))

    def row_list(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]


@dataclass(frozen=True)
class SmithDecomposition:
    """left . A . right is diagonal with d_1 | d_2 | ... ; left and right are
    unimodular and their exact inverses are carried along."""

    diagonal: tuple[int, ...]
    left: IntMatrix
    right: IntMatrix
    left_inv: IntMatrix
    right_inv: IntMatrix


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _mat_mul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    if not a or not b:
        return [[0] * (len(b[0]) if b else 0) for _ in a]
    cols = len(b[0])
    return [
        [sum(ra[k] * b[k][j] for k in range(len(ra))) for j in range(cols)]
        for ra in a
    ]


class _SnfWorker:
    """Row/column reduction that tracks L, R and their inverses so that
    L . A0 . R = A at every step."""

    def __init__(self, rows: list[list[int]]):
        self.a = [list(r) for r in rows]
        self.r = len(rows)
        self.c = len(rows[0]) if rows else 0
        self.left = _identity(self.r)
        self.left_inv = _identity(self.r)
        self.right = _identity(self.c)
        self.right_inv = _identity(self.c)

    def _row_add(self, i: int, j: int, q: int):
        # row i += q * row j
        ai, aj = self.a[i], self.a[j]
        for k in range(self.c):
            ai[k] += q * aj[k]
        li, lj = self.left[i], self.left[j]
        for k in range(self.r):
            li[k] += q * lj[k]
        for row in self.left_inv:  # L^-1 column j -= q * column i
            row[j] -= q * row[i]

    def _col_add(self, j: int, i: int, q: int):
        # col j += q * col i
        for row in self.a:
            row[j] += q * row[i]
        for row in self.right:
            row[j] += q * row[i]
        ri, rj = self.right_inv[i], self.right_inv[j]
        for k in range(self.c):
            ri[k] -= q * rj[k]

    def _row_swap(self, i: int, j: int):
        if i == j:
            return
        self.a[i], self.a[j] = self.a[j], self.a[i]
        self.left[i], self.left[j] = self.left[j], self.left[i]
        for row in self.left_inv:
            row[i], row[j] = row[j], row[i]

    def _col_swap(self, i: int, j: int):
        if i == j:
            return
        for row in self.a:
            row[i], row[j] = row[j], row[i]
        for row in self.right:
            row[i], row[j] = row[j], row[i]
        self.right_inv[i], self.right_inv[j] = self.right_inv[j], self.right_inv[i]

    def _row_negate(self, i: int):
        self.a[i] = [-x for x in self.a[i]]
        self.left[i] = [-x for x in self.left[i]]
        for row in self.left_inv:
            row[i] = -row[i]

    def _pivot(self, t: int):
        """Smallest nonzero |entry| in the trailing submatrix, first in
        row-major order on ties; None if the submatrix is zero."""
        best = None
        for i in range(t, self.r):
            ai = self.a[i]
            for j in range(t, self.c):
                v = ai[j]
                if v != 0 and (best is None or abs(v) < abs(self.a[best[0]][best[1]])):
                    best = (i, j)
        return best

    def run(self):
        t = 0
        while t < min(self.r, self.c):
            pos = self._pivot(t)
            if pos is None:
                break
            self._row_swap(t, pos[0])
            self._col_swap(t, pos[1])
            while True:
                # clear column t below the pivot
                dirty = False
                for i in range(t + 1, self.r):
                    if self.a[i][t] != 0:
                        q = self.a[i][t] // self.a[t][t]
                        self._row_add(i, t, -q)
                        if self.a[i][t] != 0:
                            self._row_swap(t, i)
                            dirty = True
                if dirty:
                    continue
                # clear row t right of the pivot
                for j in range(t + 1, self.c):
                    if self.a[t][j] != 0:
                        q = self.a[t][j] // self.a[t][t]
                        self._col_add(j, t, -q)
                        if self.a[t][j] != 0:
                            self._col_swap(t, j)
                            dirty = True
                if not dirty:
                    break
            # enforce divisibility of the trailing submatrix by the pivot
            offender = None
            piv = self.a[t][t]
            for i in range(t + 1, self.r):
                ai = self.a[i]
                for j in range(t + 1, self.c):
                    if ai[j] % piv != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is not None:
                self._row_add(t, offender, 1)
                continue
            if self.a[t][t] < 0:
                self._row_negate(t)
            t += 1


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    """Smith normal form with unimodular transforms.

    Returns D = left . A . right diagonal with non-negative entries forming a
    divisibility chain d_1 | d_2 | ...; the inverses of both transforms are
    included since the lattice routines need them.
    """
    w = _SnfWorker(A.row_list())
    w.run()
    diag = tuple(w.a[i][i] for i in range(min(w.r, w.c)))
    return SmithDecomposition(
        diagonal=diag,
        left=IntMatrix.from_rows(w.left) if w.r else IntMatrix(0, 0, ()),
        right=IntMatrix.from_rows(w.right) if w.c else IntMatrix(0, 0, ()),
        left_inv=IntMatrix.from_rows(w.left_inv) if w.r else IntMatrix(0, 0, ()),
        right_inv=IntMatrix.from_rows(w.right_inv) if w.c else IntMatrix(0, 0, ()),
    )


def _normalize_sign(v: list[int]) -> tuple[int, ...]:
    for x in v:
        if x != 0:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def lattice_basis(generators: Sequence[Sequence[int]], ambient: int) -> list[Vector]:
    """Basis of the sublattice of Z^ambient spanned by the generators."""
    gens = [list(g) for g in generators if any(g)]
    for g in gens:
        if len(g) != ambient:
            raise DimensionMismatchError(
                f"generator length {len(g)} != ambient rank {ambient}"
            )
    if not gens:
        return []
    dec = smith_normal_form(IntMatrix.from_rows(gens))
    vinv = dec.right_inv.row_list()
    basis = []
    for i, d in enumerate(dec.diagonal):
        if d != 0:
            basis.append(_normalize_sign([d * x for x in vinv[i]]))
    return basis


def solve_in_lattice(basis: Sequence[Vector], w: Sequence[int]) -> list[int] | None:
    """Integer x with x . basis = w, or None when w is outside the lattice."""
    if not basis:
        return [] if not any(w) else None
    dec = smith_normal_form(IntMatrix.from_rows([list(b) for b in basis]))
    v = dec.right.row_list()
    wv = [sum(w[k] * v[k][j] for k in range(len(w))) for j in range(len(w))]
    s = len(basis)
    y = []
    for i in range(s):
        d = dec.diagonal[i]
        if d == 0 or wv[i] % d != 0:
            return None
        y.append(wv[i] // d)
    if any(wv[j] != 0 for j in range(s, len(w))):
        return None
    u = dec.left.row_list()
    return [sum(y[k] * u[k][j] for k in range(s)) for j in range(s)]


def kernel_basis(rows: Sequence[Sequence[int]], ambient: int) -> list[Vector]:
    """Basis of {x : x . M = 0} for the matrix M with the given rows."""
    k = len(rows)
    if k == 0:
        return []
    dec = smith_normal_form(IntMatrix.from_rows([list(r) for r in rows]))
    u = dec.left.row_list()
    free = [
        i for i in range(k)
        if i >= len(dec.diagonal) or dec.diagonal[i] == 0
    ]
    return [_normalize_sign(list(u[i])) for i in free]


def lattice_intersection(
    basis1: Sequence[Vector], basis2: Sequence[Vector], ambient: int
) -> list[Vector]:
    """Basis of the intersection of two sublattices given by bases."""
    if not basis1 or not basis2:
        return []
    stacked = [list(b) for b in basis1] + [list(b) for b in basis2]
    k = len(basis1)
    gens = []
    for x in kernel_basis(stacked, ambient):
        v = [
            sum(x[i] * basis1[i][j] for i in range(k))
            for j in range(ambient)
        ]
        if any(v):
            gens.append(v)
    return lattice_basis(gens, ambient)


@dataclass(frozen=True)
class Subquotient:
    """A/B with B <= A <= Z^ambient_rank, both given by generators."""

    ambient_rank: int
    sub_generators: tuple[Vector, ...]
    quot_generators: tuple[Vector, ...]

    @classmethod
    def of(cls, ambient_rank, sub_generators, quot_generators) -> "Subquotient":
        return cls(
            ambient_rank,
            tuple(tuple(int(x) for x in v) for v in sub_generators),
            tuple(tuple(int(x) for x in v) for v in quot_generators),
        )


@dataclass(frozen=True)
class SemibasisResult:
    vectors: tuple[Vector, ...]
    torsion_invariants: tuple[int, ...]
    torsion_exponent: int


def semibasis(sq: Subquotient) -> SemibasisResult:
    """Representatives in A of a Z-basis of (A/B)/(A/B)_tor.

    Also reports the invariant factors of the torsion part of A/B and their
    exponent (1 when A/B is torsion-free).
    """
    r = sq.ambient_rank
    for v in sq.sub_generators + sq.quot_generators:
        if len(v) != r:
            raise DimensionMismatchError(
                f"generator length {len(v)} != ambient rank {r}"
            )
    basis_a = lattice_basis(sq.quot_generators, r)
    if not basis_a:
        if any(any(v) for v in sq.sub_generators):
            raise MembershipError("sub lattice not contained in zero lattice")
        return SemibasisResult((), (), 1)
    coeff_rows = []
    for b in sq.sub_generators:
        if not any(b):
            continue
        x = solve_in_lattice(basis_a, b)
        if x is None:
            raise MembershipError(f"sub generator {b} outside the quotient lattice")
        coeff_rows.append(x)
    s = len(basis_a)
    if not coeff_rows:
        d = [0] * s
        adapted = basis_a
    else:
        dec = smith_normal_form(IntMatrix.from_rows(coeff_rows))
        rinv = dec.right_inv.row_list()
        adapted = [
            _normalize_sign(
                [sum(rinv[i][k] * basis_a[k][j] for k in range(s)) for j in range(r)]
            )
            for i in range(s)
        ]
        d = list(dec.diagonal) + [0] * (s - len(dec.diagonal))
        d = [d[i] if i < len(d) else 0 for i in range(s)]
    vectors = tuple(adapted[i] for i in range(s) if d[i] == 0)
    torsion = tuple(sorted(x for x in d if x >= 2))
    exponent = torsion[-1] if torsion else 1
    return SemibasisResult(vectors, torsion, exponent)


# ---------------------------------------------------------------------------
# prime-field helpers for the two combinatorial selections below


def _rank_mod_p(rows: list[list[int]], p: int) -> int:
    m = [[x % p for x in row] for row in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], p - 2, p)
        m[rank] = [(x * inv) % p for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def partition_basis(
    vectors: Sequence[Sequence[int]], k: int, block_dim: int, p: int
) -> list[list[Vector]]:
    """Split a basis of V^(+k) into k blocks whose l-th projections are bases.

    Coordinates are grouped block by block: projection onto copy l reads the
    slice [l*block_dim, (l+1)*block_dim). Existence is guaranteed whenever the
    input is a basis, so failure to find a split is an internal error. The
    search is exhaustive over index subsets with a two-sided rank test, done
    block by block; instances above PARTITION_SIZE_LIMIT vectors are rejected.
    """
    n = k * block_dim
    vecs = [tuple(int(x) % p for x in v) for v in vectors]
    if len(vecs) != n or any(len(v) != n for v in vecs):
        raise DimensionMismatchError(
            f"need {n} vectors of length {n} for k={k}, block_dim={block_dim}"
        )
    if n > PARTITION_SIZE_LIMIT:
        raise SizeLimitError(
            f"partition_basis limited to {PARTITION_SIZE_LIMIT} vectors, got {n}"
        )
    if _rank_mod_p([list(v) for v in vecs], p) != n:
        raise RankDeficiencyError("input vectors are not a basis")

    def split(items: list[Vector], block: int) -> list[list[Vector]] | None:
        if block == k - 1:
            return [list(items)]
        lo, hi = block * block_dim, (block + 1) * block_dim
        for sel in combinations(range(len(items)), block_dim):
            chosen = [items[i] for i in sel]
            rest = [items[i] for i in range(len(items)) if i not in sel]
            if _rank_mod_p([list(v[lo:hi]) for v in chosen], p) != block_dim:
                continue
            if _rank_mod_p([list(v[hi:]) for v in rest], p) != n - hi:
                continue
            tail = split(rest, block + 1)
            if tail is not None:
                return [chosen] + tail
        return None

    result = split(vecs, 0)
    if result is None:
        raise InternalInvariantError("no block split found for a valid basis")
    return result


def min_weight_selection(
    points: Sequence,
    weight: Callable,
    proj: Callable,
    target_dim: int,
    field,
) -> tuple[list[int], int]:
    """Minimum-weight subset whose projections are linearly independent.

    Greedy in non-decreasing (weight, index) order with an incremental
    elimination as the independence oracle. Independent subsets of a family
    of vectors form a matroid, so the greedy basis has minimal total weight
    among all bases; this realizes the minimum that the dimension formulas
    phrase over invertible coordinate matrices. Returns (selected indices in
    pick order, total weight); raises InfeasibleError when the projections do
    not span.

    `field` must provide encoded-integer ops sub(a,b), mul(a,b), inv(a) with
    0 as the zero element (FiniteField satisfies this).
    """
    order = sorted(range(len(points)), key=lambda i: (weight(points[i]), i))
    echelon: list[tuple[int, list[int]]] = []
    chosen: list[int] = []
    total = 0
    for i in order:
        v = [int(x) for x in proj(points[i])]
        for pc, prow in echelon:
            c = v[pc]
            if c:
                v = [field.sub(a, field.mul(c, b)) for a, b in zip(v, prow)]
        pc = next((j for j, x in enumerate(v) if x), None)
        if pc is None:
            continue
        inv = field.inv(v[pc])
        echelon.append((pc, [field.mul(inv, x) for x in v]))
        chosen.append(i)
        total += weight(points[i])
        if len(chosen) == target_dim:
            return chosen, total
    raise InfeasibleError(
        f"projections span only {len(chosen)} of {target_dim} dimensions"
    )


def check_ineq(a: Sequence, x: Sequence) -> bool:
    """Truth of sum(a_l * x_l) >= sum(x_l) for non-increasing x.

    Preconditions (violations raise PreconditionError, distinct from the
    inequality itself failing): the a_l are non-negative with sum equal to
    m = len(a), every tail sum a_l + ... + a_{m-1} is at most m - l, and x is
    non-increasing with len(x) == m. Under these the inequality always holds.
    """
    av = [Fraction(t) for t in a]
    xv = [Fraction(t) for t in x]
    m = len(av)
    if len(xv) != m:
        raise PreconditionError("a and x must have equal length")
    if any(t < 0 for t in av):
        raise PreconditionError("a must be non-negative")
    if sum(av) != m:
        raise PreconditionError(f"sum(a) = {sum(av)} != m = {m}")
    tail = Fraction(0)
    for l in range(m - 1, -1, -1):
        tail += av[l]
        if tail > m - l:
            raise PreconditionError(
                f"tail sum a_{l}+...+a_{m-1} = {tail} exceeds {m - l}"
            )
    if any(xv[i] < xv[i + 1] for i in range(m - 1)):
        raise PreconditionError("x must be non-increasing")
    return sum(ai * xi for ai, xi in zip(av, xv)) >= sum(xv)
