"""Pattern Lie algebras from partial orders on [n].

g_< is spanned by the matrix units e_ij with i < j in the order; posets are
ingested as arbitrary edge lists, transitively closed, and relabeled so the
order is compatible with the usual order of [n] (elements become strictly
upper triangular). alpha(i,j) counts strict intermediates and a comparable
pair is extreme when i is minimal and j is maximal; extreme pairs span the
center and carry the closed-form dimension formula.
"""

import json
from dataclasses import dataclass

from .errors import ParameterError, ThresholdError
from .liecore import LieAlgebraZ


@dataclass(frozen=True)
class Poset:
    """Strict partial order on {1..n}, stored transitively closed on the
    relabeled elements (i < j implies i before j); `relabel` maps new 1-based
    labels back to the user's original labels."""

    n: int
    relation: frozenset[tuple[int, int]]
    relabel: tuple[int, ...]

    def less(self, i: int, j: int) -> bool:
        return (i, j) in self.relation


def poset_from_relations(n: int, relations) -> Poset:
    if n < 1:
        raise ParameterError("n must be positive")
    edges = set()
    for i, j in relations:
        if not (1 <= i <= n and 1 <= j <= n):
            raise ParameterError(f"pair ({i},{j}) outside [1,{n}]")
        if i == j:
            raise ParameterError(f"relation ({i},{j}) is reflexive")
        edges.add((i, j))
    # transitive closure
    changed = True
    while changed:
        changed = False
        for (a, b) in list(edges):
            for (c, d) in list(edges):
                if b == c and (a, d) not in edges:
                    if a == d:
                        raise ParameterError("relation contains a cycle")
                    edges.add((a, d))
                    changed = True
    # compatible relabeling via a stable topological sort
    preds = {v: 0 for v in range(1, n + 1)}
    for (_, b) in edges:
        preds[b] += 1
    order = []
    avail = sorted(v for v in preds if preds[v] == 0)
    remaining = dict(preds)
    used = set()
    while avail:
        v = avail.pop(0)
        order.append(v)
        used.add(v)
        for (a, b) in edges:
            if a == v:
                remaining[b] -= 1
                if remaining[b] == 0 and b not in used:
                    avail.append(b)
        avail.sort()
    if len(order) != n:
        raise ParameterError("relation contains a cycle")
    new_of_old = {old: new + 1 for new, old in enumerate(order)}
    rel = frozenset(
        (new_of_old[a], new_of_old[b]) for (a, b) in edges
    )
    return Poset(n=n, relation=rel, relabel=tuple(order))


def load_poset(path: str) -> Poset:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return poset_from_relations(int(doc["n"]), doc.get("relations") or [])


def poset_to_json_dict(p: Poset) -> dict:
    return {
        "n": p.n,
        "relations": sorted([a, b] for (a, b) in p.relation),
        "relabel": list(p.relabel),
    }


def chain_poset(n: int) -> Poset:
    return poset_from_relations(n, [(i, i + 1) for i in range(1, n)])


def pairs(p: Poset) -> list[tuple[int, int]]:
    return sorted(p.relation)


def alpha(p: Poset, i: int, j: int) -> int:
    """#{k : i < k < j}; i and j in the relabeled order, i < j required."""
    if not p.less(i, j):
        raise ParameterError(f"({i},{j}) is not a strict relation of the poset")
    return sum(1 for k in range(1, p.n + 1) if p.less(i, k) and p.less(k, j))


def extreme_pairs(p: Poset) -> list[tuple[int, int]]:
    """Comparable pairs (i, j) with i minimal and j maximal."""
    minimal = {
        v for v in range(1, p.n + 1)
        if not any(p.less(u, v) for u in range(1, p.n + 1))
    }
    maximal = {
        v for v in range(1, p.n + 1)
        if not any(p.less(v, u) for u in range(1, p.n + 1))
    }
    return sorted(
        (i, j) for (i, j) in p.relation if i in minimal and j in maximal
    )


def max_alpha(p: Poset) -> int:
    return max((alpha(p, i, j) for (i, j) in p.relation), default=0)


def pattern_algebra(p: Poset) -> LieAlgebraZ:
    """Span of the e_ij for i < j; [e_ij, e_kl] = d_jk e_il - d_li e_kj,
    closed inside the pattern because the relation is transitive."""
    basis = pairs(p)
    index = {pr: t for t, pr in enumerate(basis)}
    brackets: dict[tuple[int, int], dict[int, int]] = {}
    for a, (i, j) in enumerate(basis):
        for b in range(a + 1, len(basis)):
            k, l = basis[b]
            vec: dict[int, int] = {}
            if j == k:
                vec[index[(i, l)]] = vec.get(index[(i, l)], 0) + 1
            if l == i:
                vec[index[(k, j)]] = vec.get(index[(k, j)], 0) - 1
            vec = {t: c for t, c in vec.items() if c}
            if vec:
                brackets[(a, b)] = vec
    return LieAlgebraZ(
        rank=len(basis),
        basis_names=tuple(f"e({i},{j})" for (i, j) in basis),
        brackets=brackets,
        name=f"pattern(n={p.n})",
    )


def pattern_fdim(p: Poset, d: int, pr: int, e: int, f: int) -> int:
    """Closed-form faithful dimension for the pattern group over a chain ring
    with parameters (d,p,e,f):
    sum_{l=0}^{e-1} sum_{(i,j) extreme} f p^{f(d-l) alpha(i,j)}.
    Requires p > max alpha + 1, which is the theorem's explicit hypothesis."""
    bound = max_alpha(p) + 1
    if pr <= bound:
        raise ThresholdError(
            f"p = {pr} must exceed max alpha + 1 = {bound} for the closed form"
        )
    total = 0
    ext = extreme_pairs(p)
    for ell in range(e):
        for (i, j) in ext:
            total += f * pr ** (f * (d - ell) * alpha(p, i, j))
    return total
