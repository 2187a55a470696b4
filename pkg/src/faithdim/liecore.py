"""Nilpotent Z-Lie algebras given by integer structure constants.

An algebra is stored as a sparse bracket table on a free Z-basis. Validation
checks the Jacobi identity on all basis triples and that the lower central
series terminates; structural data (center, derived subalgebra, their
intersection, the series itself) is computed with exact lattice arithmetic.
Torsion-free algebras only; torsion is supported in subquotients downstream.
"""

import json
from dataclasses import dataclass, field

from .errors import DimensionMismatchError, LazardError, ValidationError
from .exact import (
    Vector,
    kernel_basis,
    lattice_basis,
    lattice_intersection,
    semibasis,
    Subquotient,
)


@dataclass
class LieAlgebraZ:
    """Bracket table on a free Z-module of the given rank.

    brackets maps (i, j) with i < j to a sparse vector {k: coefficient};
    [e_j, e_i] = -[e_i, e_j] is implied and unlisted pairs bracket to zero.
    """

    rank: int
    basis_names: tuple[str, ...]
    brackets: dict[tuple[int, int], dict[int, int]]
    name: str = "algebra"

    def __post_init__(self):
        if len(self.basis_names) != self.rank:
            raise DimensionMismatchError("basis_names length != rank")
        for (i, j), vec in self.brackets.items():
            if not (0 <= i < j < self.rank):
                raise DimensionMismatchError(f"bad bracket index pair {(i, j)}")
            if any(not (0 <= k < self.rank) for k in vec):
                raise DimensionMismatchError(f"bad target index in {(i, j)}")

    def bracket_basis(self, i: int, j: int) -> dict[int, int]:
        if i == j:
            return {}
        if i < j:
            return dict(self.brackets.get((i, j), {}))
        return {k: -c for k, c in self.brackets.get((j, i), {}).items()}

    def bracket(self, u, v) -> list[int]:
        """[u, v] for integer coefficient vectors u, v."""
        out = [0] * self.rank
        for i, ui in enumerate(u):
            if not ui:
                continue
            for j, vj in enumerate(v):
                if not vj:
                    continue
                for k, c in self.bracket_basis(i, j).items():
                    out[k] += ui * vj * c
        return out

    def ad_matrix(self, x) -> list[list[int]]:
        """Rows are [x, e_j] for each basis vector e_j."""
        return [self.bracket(x, _unit(self.rank, j)) for j in range(self.rank)]

    def permuted(self, perm: list[int]) -> "LieAlgebraZ":
        """Same algebra on the basis e'_t = e_{perm[t]}."""
        inv = [0] * self.rank
        for t, s in enumerate(perm):
            inv[s] = t
        new: dict[tuple[int, int], dict[int, int]] = {}
        for a in range(self.rank):
            for b in range(a + 1, self.rank):
                vec = self.bracket_basis(perm[a], perm[b])
                tgt = {inv[k]: c for k, c in vec.items() if c}
                if tgt:
                    new[(a, b)] = tgt
        return LieAlgebraZ(
            rank=self.rank,
            basis_names=tuple(self.basis_names[s] for s in perm),
            brackets=new,
            name=self.name + "-permuted",
        )


def _unit(n: int, j: int) -> list[int]:
    v = [0] * n
    v[j] = 1
    return v


@dataclass
class StructuralData:
    center_semibasis: tuple[Vector, ...]
    derived_semibasis: tuple[Vector, ...]
    center_cap_derived_semibasis: tuple[Vector, ...]
    derived_generators: tuple[Vector, ...]
    lcs: tuple[tuple[Vector, ...], ...]
    nilpotency_class: int = field(default=0)


def validate(g: LieAlgebraZ) -> int:
    """Checks Jacobi on all basis triples and nilpotency; returns the class.

    Raises ValidationError naming the first offending triple, or the stable
    nonzero term of the lower central series for non-nilpotent input.
    """
    n = g.rank
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                total = [0] * n
                for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
                    inner = g.bracket_basis(a, b)
                    for t, coef in inner.items():
                        for s, coef2 in g.bracket_basis(t, c).items():
                            total[s] += coef * coef2
                if any(total):
                    raise ValidationError(
                        "jacobi",
                        (g.basis_names[i], g.basis_names[j], g.basis_names[k]),
                        f"Jacobi identity fails on triple "
                        f"({g.basis_names[i]}, {g.basis_names[j]}, {g.basis_names[k]})",
                    )
    series = _lower_central_series(g)
    if series[-1]:
        raise ValidationError(
            "non-nilpotent",
            series[-1],
            f"lower central series stabilizes at rank {len(series[-1])}",
        )
    return len(series) - 1


def _lower_central_series(g: LieAlgebraZ) -> list[tuple[Vector, ...]]:
    """L_1 = g, L_{s+1} = [g, L_s]; stops at 0 or at stabilization."""
    n = g.rank
    current = tuple(tuple(_unit(n, j)) for j in range(n))
    series = [current]
    while current:
        gens = []
        for i in range(n):
            for b in current:
                v = g.bracket(_unit(n, i), b)
                if any(v):
                    gens.append(v)
        nxt = tuple(lattice_basis(gens, n))
        if len(nxt) == len(current):
            series.append(nxt)
            return series
        series.append(nxt)
        current = nxt
    return series


def structural_data(g: LieAlgebraZ) -> StructuralData:
    """Center (saturated), derived subalgebra (honest generated lattice, not
    saturated), their intersection, the lower central series, and the class."""
    n = g.rank
    stacked = []
    for j in range(n):
        col = []
        for i in range(n):
            vec = g.bracket_basis(i, j)
            col.append([vec.get(k, 0) for k in range(n)])
        stacked.append(col)
    # x central iff x . M = 0 where M stacks all ad(e_j)-columns
    big = [
        [stacked[j][i][k] for j in range(n) for k in range(n)]
        for i in range(n)
    ]
    center = kernel_basis(big, n) if n else []
    derived_gens = []
    for (i, j), vec in sorted(g.brackets.items()):
        v = [vec.get(k, 0) for k in range(n)]
        if any(v):
            derived_gens.append(tuple(v))
    derived = lattice_basis(derived_gens, n)
    inter = lattice_intersection(center, derived, n)
    series = _lower_central_series(g)
    if series[-1]:
        raise ValidationError("non-nilpotent", series[-1], "not nilpotent")
    cls = len(series) - 1
    return StructuralData(
        center_semibasis=tuple(center),
        derived_semibasis=tuple(derived),
        center_cap_derived_semibasis=tuple(inter),
        derived_generators=tuple(derived_gens),
        lcs=tuple(tuple(t) for t in series[:-1]),
        nilpotency_class=cls,
    )


def scalar_extend(g: LieAlgebraZ, ring):
    """Bracket table of g tensor R, entries mapped into the coefficient ring.

    The Lazard correspondence needs the residue characteristic to exceed the
    nilpotency class, so p <= class is a hard error.
    """
    cls = validate(g)
    if ring.p <= cls:
        raise LazardError(
            f"p = {ring.p} must exceed the nilpotency class {cls}"
        )
    table = {}
    for (i, j), vec in g.brackets.items():
        table[(i, j)] = {k: ring.from_int(c) for k, c in vec.items()}
    return table


# ---------------------------------------------------------------------------
# file format


def to_json_dict(g: LieAlgebraZ) -> dict:
    return {
        "name": g.name,
        "rank": g.rank,
        "basis": list(g.basis_names),
        "brackets": {
            f"{i + 1},{j + 1}": [[k + 1, c] for k, c in sorted(vec.items())]
            for (i, j), vec in sorted(g.brackets.items())
        },
    }


def from_json_dict(doc: dict) -> LieAlgebraZ:
    rank = int(doc["rank"])
    names = tuple(doc.get("basis") or [f"e{i + 1}" for i in range(rank)])
    brackets = {}
    for key, pairs in (doc.get("brackets") or {}).items():
        i_s, j_s = key.split(",")
        i, j = int(i_s) - 1, int(j_s) - 1
        vec = {}
        for k, c in pairs:
            c = int(c)
            if c:
                vec[int(k) - 1] = c
        if vec:
            brackets[(i, j)] = vec
    return LieAlgebraZ(
        rank=rank,
        basis_names=names,
        brackets=brackets,
        name=str(doc.get("name", "algebra")),
    )


def load_algebra(path: str) -> LieAlgebraZ:
    with open(path, "r", encoding="utf-8") as fh:
        return from_json_dict(json.load(fh))


def save_algebra(g: LieAlgebraZ, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_json_dict(g), fh, indent=1)
        fh.write("\n")


# ---------------------------------------------------------------------------
# small stock algebras used throughout the tests


def heisenberg() -> LieAlgebraZ:
    """[x, y] = z on rank 3."""
    return LieAlgebraZ(
        rank=3,
        basis_names=("x", "y", "z"),
        brackets={(0, 1): {2: 1}},
        name="heisenberg",
    )


def abelian(rank: int) -> LieAlgebraZ:
    return LieAlgebraZ(
        rank=rank,
        basis_names=tuple(f"a{i + 1}" for i in range(rank)),
        brackets={},
        name=f"abelian{rank}",
    )
