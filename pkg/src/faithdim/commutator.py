"""The commutator matrix of a nilpotent Z-Lie algebra.

Semibases are extracted for Z(g) cap [g,g], for [g,g] and Z(g) modulo that
intersection, for g/Z(g), and for g modulo Z(g)+[g,g]; the torsion exponent K
of ([g,g]/[g,g] cap Z(g))_tor rescales the coset representatives, and the
structure constants lambda^k_ij are solved exactly in the chosen w-basis.
The result is the skew-symmetric matrix of linear forms F(T_1,...,T_m) whose
evaluations drive every dimension computation downstream.

Variable ordering is load-bearing: T_1..T_{l1} correspond to the semibasis of
Z(g) cap [g,g], because the dimension formulas project points onto their
first l1 coordinates.
"""

from dataclasses import dataclass

from .errors import DimensionMismatchError, InternalInvariantError
from .exact import Subquotient, Vector, semibasis, solve_in_lattice
from .liecore import LieAlgebraZ, structural_data, validate


@dataclass(frozen=True)
class SymbolicSkewMatrix:
    """Skew matrix of linear forms; entry (i, j) with i < j is a sparse map
    variable-index -> integer coefficient, the transpose entries are negated
    and the diagonal is zero."""

    size: int
    nvars: int
    entries: dict[tuple[int, int], dict[int, int]]

    def form(self, i: int, j: int) -> dict[int, int]:
        if i == j:
            return {}
        if i < j:
            return dict(self.entries.get((i, j), {}))
        return {k: -c for k, c in self.entries.get((j, i), {}).items()}

    def variables_used(self) -> set[int]:
        used = set()
        for vec in self.entries.values():
            used.update(vec)
        return used


@dataclass(frozen=True)
class CommutatorData:
    """Semibasis package for the matrix construction.

    w: m vectors, the first l1 spanning Z(g) cap [g,g], the rest lifting a
    semibasis of [g,g] modulo the intersection; z: l2 lifts for Z(g) modulo
    the intersection; v: n = rk(g/Z(g)) coset representatives, scaled by K;
    u: l3 lifts for g modulo Z(g)+[g,g]; lam maps (i, j) with i < j to the
    sparse integer vector of lambda^k_ij.
    """

    w: tuple[Vector, ...]
    z: tuple[Vector, ...]
    v: tuple[Vector, ...]
    u: tuple[Vector, ...]
    K: int
    lam: dict[tuple[int, int], dict[int, int]]
    l1: int
    l2: int
    l3: int
    m: int
    n: int


def _solve_lambda(g: LieAlgebraZ, v: tuple[Vector, ...], w: tuple[Vector, ...]):
    """lambda^k_ij with [v_i, v_j] = sum_k lambda^k_ij w_k, solved exactly."""
    lam: dict[tuple[int, int], dict[int, int]] = {}
    for i in range(len(v)):
        for j in range(i + 1, len(v)):
            b = g.bracket(v[i], v[j])
            if not any(b):
                continue
            x = solve_in_lattice(w, b)
            if x is None:
                raise InternalInvariantError(
                    f"[v_{i}, v_{j}] is not an integer combination of the w-basis"
                )
            vec = {k: c for k, c in enumerate(x) if c}
            if vec:
                lam[(i, j)] = vec
    return lam


def build_commutator_data(
    g: LieAlgebraZ, force_K: int | None = None
) -> tuple[CommutatorData, SymbolicSkewMatrix]:
    """Commutator matrix of g relative to deterministically chosen semibases.

    All semibases come out of Smith-form echelon reduction with sign
    normalization, so repeated runs produce the identical matrix. `force_K`
    overrides the computed torsion exponent; it exists to exercise the
    K-scaling path (lambda = K^2 eta), which no torsion-free algebra with
    saturated center can trigger on its own.
    """
    validate(g)
    sd = structural_data(g)
    r = g.rank
    identity = tuple(
        tuple(1 if t == s else 0 for s in range(r)) for t in range(r)
    )
    center = sd.center_semibasis
    derived = sd.derived_semibasis
    inter = sd.center_cap_derived_semibasis
    l1 = len(inter)

    ext = semibasis(Subquotient.of(r, inter, derived))
    K = ext.torsion_exponent
    if force_K is not None:
        K = force_K
    w = tuple(inter) + ext.vectors
    m = len(w)
    if m != len(derived):
        raise InternalInvariantError("w does not span the derived lattice rank")

    zpart = semibasis(Subquotient.of(r, inter, center))
    z = zpart.vectors
    l2 = len(z)

    vpart = semibasis(Subquotient.of(r, center, identity))
    vprime = vpart.vectors
    n = len(vprime)
    if n != r - l1 - l2:
        raise InternalInvariantError("rank bookkeeping failed: n != rank - l1 - l2")
    v = tuple(tuple(K * x for x in vec) for vec in vprime)

    sum_gens = tuple(center) + tuple(derived)
    upart = semibasis(Subquotient.of(r, sum_gens, identity))
    u = upart.vectors
    l3 = len(u)

    lam = _solve_lambda(g, v, w)
    data = CommutatorData(
        w=w, z=z, v=v, u=u, K=K, lam=lam, l1=l1, l2=l2, l3=l3, m=m, n=n
    )
    matrix = SymbolicSkewMatrix(size=n, nvars=m, entries=dict(lam))
    return data, matrix


def evaluate(F: SymbolicSkewMatrix, point, ops):
    """Entrywise substitution of a point into F over any coefficient ring.

    `ops` must provide from_int, add, mul and the constants zero/one;
    FiniteField and ChainRing both qualify. Returns a size x size list of
    ring elements, skew-symmetric by construction.
    """
    if len(point) != F.nvars:
        raise DimensionMismatchError(
            f"point has {len(point)} coordinates, F has {F.nvars} variables"
        )
    n = F.size
    out = [[ops.zero for _ in range(n)] for _ in range(n)]
    for (i, j), vec in F.entries.items():
        acc = ops.zero
        for k, c in vec.items():
            acc = ops.add(acc, ops.mul(ops.from_int(c), point[k]))
        out[i][j] = acc
        out[j][i] = ops.neg(acc)
    return out


def symbolic_entries_json(F: SymbolicSkewMatrix) -> list[list[dict[str, int]]]:
    """Printable form: each entry as a map 'T<k>' -> coefficient (1-based)."""
    out = []
    for i in range(F.size):
        row = []
        for j in range(F.size):
            row.append({f"T{k + 1}": c for k, c in sorted(F.form(i, j).items())})
        out.append(row)
    return out
