"""Free metabelian nilpotent Lie algebras m_{n,c}.

The algebra of class c on n generators has a basis indexed by Hall sequences
(i_1,...,i_k): the prefix (i_1,...,i_{k-1}) is non-increasing and
i_{k-1} < i_k; length-1 sequences are the generators. Brackets of a generator
against a Hall basis vector rewrite into the Hall basis by a two-case rule
(sort the prefix in, or split into two Hall terms via the Jacobi swap
[a,[a',a'']] = [a',[a,a'']], valid because a'' lies in the derived algebra).
The rule is stated in the source material for top length; the same swap
argument is length-uniform and is cross-checked in the tests against an
independent free-algebra construction.
"""

from math import comb

from .errors import LazardError, ParameterError
from .liecore import LieAlgebraZ

Seq = tuple[int, ...]


def decreasing_sequences(n: int, k: int) -> list[Seq]:
    """Non-increasing sequences over [n], lexicographically sorted.
    #D(n,k) = C(n+k-1, k)."""
    if n < 1 or k < 1:
        raise ParameterError("n, k must be positive")
    out: list[Seq] = []

    def rec(prefix):
        if len(prefix) == k:
            out.append(tuple(prefix))
            return
        hi = prefix[-1] if prefix else n
        for i in range(1, hi + 1):
            rec(prefix + [i])

    rec([])
    return sorted(out)


def hall_sequences(n: int, k: int) -> list[Seq]:
    """Hall sequences of length k over [n], lexicographically sorted.
    #H(n,k) = (k-1) C(k+n-2, k) for n, k >= 2; n singletons for k = 1."""
    if n < 1 or k < 1:
        raise ParameterError("n, k must be positive")
    if k == 1:
        return [(i,) for i in range(1, n + 1)]
    out = []
    for prefix in decreasing_sequences(n, k - 1):
        for last in range(prefix[-1] + 1, n + 1):
            out.append(prefix + (last,))
    return sorted(out)


def sort_desc(seq: Seq) -> Seq:
    return tuple(sorted(seq, reverse=True))


def metabelian_bracket(a: int, j: Seq, c: int) -> dict[Seq, int]:
    """Hall expansion of [v_a, v_j] in m_{n,c}, coefficients in {-1, 0, 1}.

    j must be a Hall sequence of length >= 1. Results longer than c vanish by
    nilpotency; brackets of two derived-algebra elements vanish and are the
    caller's case.
    """
    l = len(j)
    if l == 1:
        b = j[0]
        if a == b or c < 2:
            return {}
        return {(a, b): 1} if a < b else {(b, a): -1}
    if l + 1 > c:
        return {}
    last = j[-1]
    sec = j[-2]
    if a >= sec:
        return {sort_desc((a,) + j[:-1]) + (last,): 1}
    t1 = j[:-1] + (a, last)
    t2 = sort_desc(j[:-2] + (last,)) + (a, sec)
    return {t1: 1, t2: -1}


def basis_sequences(n: int, c: int) -> list[Seq]:
    """Hall basis of m_{n,c}, ordered by length then lexicographically."""
    out = []
    for k in range(1, c + 1):
        out.append(hall_sequences(n, k))
    return [s for group in out for s in group]


def _seq_name(seq: Seq) -> str:
    return "v(" + ",".join(str(i) for i in seq) + ")"


def metabelian_algebra(n: int, c: int) -> LieAlgebraZ:
    """m_{n,c} as a structure-constant algebra on its Hall basis."""
    if n < 2 or c < 2:
        raise ParameterError("need n >= 2 and c >= 2")
    basis = basis_sequences(n, c)
    index = {s: t for t, s in enumerate(basis)}
    brackets: dict[tuple[int, int], dict[int, int]] = {}
    for ia, sa in enumerate(basis):
        for ib in range(ia + 1, len(basis)):
            sb = basis[ib]
            if len(sa) >= 2 and len(sb) >= 2:
                continue  # metabelian: derived algebra is abelian
            if len(sa) == 1:
                expansion = metabelian_bracket(sa[0], sb, c)
                sign = 1
            else:
                expansion = metabelian_bracket(sb[0], sa, c)
                sign = -1
            vec = {index[s]: sign * coef for s, coef in expansion.items() if coef}
            if vec:
                brackets[(ia, ib)] = vec
    return LieAlgebraZ(
        rank=len(basis),
        basis_names=tuple(_seq_name(s) for s in basis),
        brackets=brackets,
        name=f"m({n},{c})",
    )


def rank1_vector(n: int, c: int, alphas, lambdas, field) -> dict[Seq, int]:
    """T_i = (prod_{k<=c-2} alpha_{i_k}) * det [[a_{i_{c-1}}, a_{i_c}],
    [l_{i_{c-1}-1}, l_{i_c-1}]] for arbitrary alphas and lambdas.

    For every choice the generator-against-top block of the commutator
    matrix evaluated at this vector has rank at most 1.
    """
    if len(alphas) != n or len(lambdas) != n:
        raise ParameterError("need n alphas and n lambdas (lambda_0..lambda_{n-1})")
    out = {}
    for seq in hall_sequences(n, c):
        prod = field.one
        for k in range(c - 2):
            prod = field.mul(prod, alphas[seq[k] - 1])
        a1, a2 = alphas[seq[c - 2] - 1], alphas[seq[c - 1] - 1]
        b1, b2 = lambdas[seq[c - 2] - 1], lambdas[seq[c - 1] - 1]
        det = field.sub(field.mul(a1, b2), field.mul(a2, b1))
        out[seq] = field.mul(prod, det)
    return out


def rank1_witness(n: int, c: int, alphas, lambdas, field) -> dict[Seq, int]:
    """rank1_vector with the normalization lambda_0 = 0, lambda_1 = 1 that
    makes the T_i family linearly independent as polynomials."""
    if len(lambdas) != n:
        raise ParameterError("need n lambdas (lambda_0..lambda_{n-1})")
    if lambdas[0] != field.zero or lambdas[1] != field.one:
        raise ParameterError("lambda_0 must be 0 and lambda_1 must be 1")
    return rank1_vector(n, c, alphas, lambdas, field)


def top_block(n: int, c: int, tvec: dict[Seq, int], field) -> list[list[int]]:
    """The submatrix of the commutator matrix with rows H(n,1) and columns
    H(n,c-1), evaluated with the H(n,c)-variables set to tvec and every other
    variable set to zero. Built directly from the bracket rule so that it is
    independent of the generic commutator-matrix machinery."""
    rows = []
    cols = hall_sequences(n, c - 1)
    for (a,) in hall_sequences(n, 1):
        row = []
        for j in cols:
            acc = field.zero
            for seq, coef in metabelian_bracket(a, j, c).items():
                if len(seq) == c:
                    term = tvec[seq]
                    if coef < 0:
                        term = field.neg(term)
                    acc = field.add(acc, term)
            row.append(acc)
        rows.append(row)
    return rows


def hall_count(n: int, k: int) -> int:
    if k == 1:
        return n
    return (k - 1) * comb(k + n - 2, k)


def metabelian_fdim(n: int, c: int, d: int, p: int, e: int, f: int) -> int:
    """Closed-form faithful dimension of exp(m_{n,c} tensor R) for a chain
    ring R with parameters (d,p,e,f):
    (c-1) C(n+c-2, c) * sum_{l=0}^{e-1} f p^{f(d-l)}."""
    if n < 2 or c < 2:
        raise ParameterError("need n >= 2 and c >= 2")
    if p <= c:
        raise LazardError(f"p = {p} must exceed the class c = {c}")
    count = (c - 1) * comb(n + c - 2, c)
    return count * sum(f * p ** (f * (d - ell)) for ell in range(e))
