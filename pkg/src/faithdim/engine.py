"""Faithful dimension engines over finite fields and chain rings.

Both engines classify every evaluation point of the commutator matrix by its
weight (q^{rank/2} over a field, p^{(fdn - kernel exponent)/2} over a ring),
then take a matroid greedy minimum over points whose leading coordinates are
linearly independent. Points are streamed: per weight class only an
independent set of representative projections is retained, which provably
leaves the greedy result unchanged, so q^m points never need simultaneous
residence. The field scan is vectorized with numpy since the point counts
reach tens of millions.

fit_mu recovers the exponent vector mu with value = f*(q^{a_1}+...+q^{a_l1}
+ l2) by base-q digit extraction (unambiguous once q > l1), and check_bounds
verifies the sandwich f*g(p^{fd}) <= value <= f*sum_l g(p^{f(d-l)}) together
with attainment of the conjectural upper expression.
"""

from dataclasses import dataclass

import numpy as np

from .commutator import SymbolicSkewMatrix, build_commutator_data
from .errors import (
    BudgetError,
    InternalInvariantError,
    LazardError,
    PreconditionError,
)
from .exact import min_weight_selection
from .liecore import LieAlgebraZ, validate
from .rings import ChainRing, FiniteField, TABLE_LIMIT

DEFAULT_BUDGET = 20_000_000

_BATCH = 1 << 18


@dataclass(frozen=True)
class WitnessPoint:
    point: tuple[int, ...]
    weight_exponent: int


@dataclass(frozen=True)
class FdimResult:
    value: int
    witness: tuple[WitnessPoint, ...]
    method: str
    p: int
    f: int
    e: int
    d: int
    flags: tuple[str, ...] = ()
    algebra: str = "algebra"

    def to_json_dict(self) -> dict:
        return {
            "algebra": self.algebra,
            "ring": {"p": self.p, "f": self.f, "e": self.e, "d": self.d},
            "value": self.value,
            "method": self.method,
            "witness": [
                {"point": list(w.point), "weight_exponent": w.weight_exponent}
                for w in self.witness
            ],
            "flags": list(self.flags),
        }


@dataclass(frozen=True)
class MuVector:
    """Sorted exponent vector (a_1 <= ... <= a_{l1}), each at most n/2."""

    exponents: tuple[int, ...]

    def g_value(self, l2: int, t: int) -> int:
        return sum(t ** a for a in self.exponents) + l2


def _guarantee_flags(p: int, cls: int, l1: int, l2: int) -> tuple[str, ...]:
    # the non-effective lower bound on p cannot be checked; flag the regimes
    # where the generic-p statements are not yet known to apply
    if p <= l1 + l2 or p <= cls + 1:
        return ("below-paper-guarantee",)
    return ()


def _prepared(g: LieAlgebraZ):
    cls = validate(g)
    data, F = build_commutator_data(g)
    return cls, data, F


# ---------------------------------------------------------------------------
# vectorized field scan


class _FieldKernel:
    """Batched arithmetic over F_q on encoded elements: plain residue
    arithmetic for prime fields, dense table gathers otherwise."""

    def __init__(self, field: FiniteField):
        self.field = field
        self.q = field.q
        self.prime = field.f == 1
        if self.prime:
            p = field.p
            self.inv_t = np.array(
                [0] + [pow(a, p - 2, p) for a in range(1, p)], dtype=np.int32
            )
        else:
            add_t, mul_t, inv_t, neg_t = field.np_tables()
            self.add_t = add_t
            self.mul_t = mul_t
            self.inv_t = inv_t
            self.neg_t = neg_t
            self.sub_t = add_t[:, neg_t]

    def mul(self, a, b):
        if self.prime:
            return (a * b) % self.field.p
        return self.mul_t[a, b]

    def sub(self, a, b):
        if self.prime:
            return (a - b) % self.field.p
        return self.sub_t[a, b]

    def add(self, a, b):
        if self.prime:
            return (a + b) % self.field.p
        return self.add_t[a, b]

    def neg(self, a):
        if self.prime:
            return (-a) % self.field.p
        return self.neg_t[a]

    def inv(self, a):
        return self.inv_t[a]

    def scalar(self, c: int) -> int:
        return self.field.from_int(c) if self.prime else c % self.field.p

    def batch_rank(self, mats) -> np.ndarray:
        """Ranks of a stack of square matrices by masked elimination."""
        a = mats
        nmat, n = a.shape[0], a.shape[1]
        if n == 0:
            return np.zeros(nmat, dtype=np.int32)
        rank = np.zeros(nmat, dtype=np.int32)
        ar = np.arange(nmat)
        rows_idx = np.arange(n)[None, :]
        for col in range(n):
            vals = a[:, :, col]
            valid = (rows_idx >= rank[:, None]) & (vals != 0)
            has = valid.any(axis=1)
            piv = np.where(has, np.argmax(valid, axis=1), 0)
            r = np.where(has, rank, 0)
            rowr = a[ar, r].copy()
            rowp = a[ar, piv].copy()
            hasb = has[:, None]
            a[ar, piv] = np.where(hasb, rowr, rowp)
            a[ar, r] = np.where(hasb, rowp, rowr)
            pv = a[ar, r, col]
            pinv = self.inv_t[pv]
            fac = self.mul(a[:, :, col], pinv[:, None])
            fac = np.where((rows_idx > r[:, None]) & hasb, fac, 0)
            a[...] = self.sub(a, self.mul(fac[:, :, None], a[ar, r][:, None, :]))
            rank += has
        return rank


def _pf_matchings(idx: tuple[int, ...]):
    """Perfect matchings of the index set with Pfaffian expansion signs."""
    if not idx:
        return [((), 1)]
    out = []
    a = idx[0]
    for k in range(1, len(idx)):
        b = idx[k]
        rest = idx[1:k] + idx[k + 1:]
        sign = -1 if (k - 1) % 2 else 1
        for pairs, s in _pf_matchings(rest):
            out.append((((a, b),) + pairs, sign * s))
    return out


def _field_candidates(
    F: SymbolicSkewMatrix, l1: int, field: FiniteField, budget: int
):
    """Classify points of F_q^m by rank(F(point))/2 and keep per class an
    independent set of representative projections; the matroid greedy over
    these equals the greedy over all points.

    Two exact reductions keep the scan fast: ranks and projection spans are
    invariant under scaling, so only points with leading coordinate 1 are
    enumerated (plus nothing for the zero point, whose projection is zero);
    and for even matrix size the full-rank points are recognized by a batched
    Pfaffian, leaving Gaussian elimination to the degenerate ones.
    """
    q, m, n = field.q, F.nvars, F.size
    total = q ** m
    if total > budget:
        raise BudgetError(total, budget)
    kern = _FieldKernel(field)
    entries = [
        (i, j, [(k, kern.scalar(c)) for k, c in sorted(vec.items())])
        for (i, j), vec in sorted(F.entries.items())
    ]
    present = {(i, j) for (i, j, _) in entries}
    matchings = None
    if n >= 2 and n % 2 == 0:
        matchings = [
            (pairs, s)
            for pairs, s in _pf_matchings(tuple(range(n)))
            if all(pr in present for pr in pairs)
        ]
    kmax = n // 2
    ech: list[list[tuple[int, np.ndarray]]] = [[] for _ in range(kmax + 1)]
    reps: list[list[tuple[int, tuple[int, ...]]]] = [[] for _ in range(kmax + 1)]
    powers = [q ** k for k in range(m)]

    def absorb(k: int, proj_rows, pts_rows, gidx_rows):
        bucket = ech[k]
        if len(bucket) == l1:
            return
        proj = proj_rows.copy()
        for pc, prow in bucket:
            proj = kern.sub(proj, kern.mul(proj[:, pc][:, None], prow[None, :]))
        live = proj.any(axis=1)
        while live.any() and len(bucket) < l1:
            t = int(np.argmax(live))
            vec = proj[t].copy()
            pc = int(np.argmax(vec != 0))
            prow = kern.mul(vec, kern.inv_t[vec[pc]])
            bucket.append((pc, prow))
            reps[k].append(
                (int(gidx_rows[t]), tuple(int(v) for v in pts_rows[t]))
            )
            proj = kern.sub(proj, kern.mul(proj[:, pc][:, None], prow[None, :]))
            live = proj.any(axis=1)

    # strata by position of the leading coordinate fixed to 1
    for lead in range(m):
        free = m - 1 - lead
        count = q ** free
        for start in range(0, count, _BATCH):
            stop = min(start + _BATCH, count)
            nb = stop - start
            idx = np.arange(start, stop, dtype=np.int64)
            x = np.zeros((nb, m), dtype=np.int32)
            x[:, lead] = 1
            for k in range(free):
                x[:, lead + 1 + k] = (idx // powers[k]) % q
            gidx = powers[lead] * np.ones(nb, dtype=np.int64)
            for k in range(free):
                gidx += x[:, lead + 1 + k].astype(np.int64) * powers[lead + 1 + k]
            ent = {}
            for i, j, terms in entries:
                acc = np.zeros(nb, dtype=np.int32)
                for k, c in terms:
                    acc = kern.add(acc, kern.mul(np.int32(c), x[:, k]))
                ent[(i, j)] = acc
            ks = np.full(nb, kmax, dtype=np.int32)
            if matchings is not None:
                pf = np.zeros(nb, dtype=np.int32)
                for pairs, s in matchings:
                    term = ent[pairs[0]]
                    for pr in pairs[1:]:
                        term = kern.mul(term, ent[pr])
                    pf = kern.add(pf, term if s > 0 else kern.neg(term))
                degenerate = np.nonzero(pf == 0)[0]
            else:
                degenerate = np.arange(nb)
            if degenerate.size:
                mats = np.zeros((degenerate.size, n, n), dtype=np.int32)
                for (i, j), arr in ent.items():
                    col = arr[degenerate]
                    mats[:, i, j] = col
                    mats[:, j, i] = kern.neg(col)
                sub_ks = kern.batch_rank(mats) >> 1
                ks[degenerate] = sub_ks
            for k in np.unique(ks):
                k = int(k)
                if len(ech[k]) == l1:
                    continue
                sel = np.nonzero(ks == k)[0]
                absorb(k, x[sel, :l1], x[sel], gidx[sel])
    cands = [
        (k, gidx, pt)
        for k in range(kmax + 1)
        for (gidx, pt) in reps[k]
    ]
    cands.sort(key=lambda c: c[1])
    return cands


def fdim_field(
    g: LieAlgebraZ, p: int, f: int, budget: int | None = None
) -> FdimResult:
    """Exact faithful dimension of exp(g tensor F_{p^f}).

    Every point x in F_q^m is weighted by q^{rank(F(x))/2}; the value is
    f * (minimal weight sum over l1 points whose first l1 coordinates are an
    F_q-basis) + f*l2. Witness weights are f * p^{weight_exponent}.
    """
    budget = DEFAULT_BUDGET if budget is None else budget
    cls, data, F = _prepared(g)
    if p <= cls:
        raise LazardError(f"p = {p} must exceed the nilpotency class {cls}")
    field = FiniteField(p, f)
    q = field.q
    flags = _guarantee_flags(p, cls, data.l1, data.l2)
    if data.m == 0:
        return FdimResult(
            value=f * data.l2, witness=(), method="engine-field",
            p=p, f=f, e=1, d=1, flags=flags, algebra=g.name,
        )
    cands = _field_candidates(F, data.l1, field, budget)
    sel, _ = min_weight_selection(
        cands,
        weight=lambda c: q ** c[0],
        proj=lambda c: c[2][: data.l1],
        target_dim=data.l1,
        field=field,
    )
    witness = tuple(
        WitnessPoint(point=cands[i][2], weight_exponent=f * cands[i][0])
        for i in sel
    )
    value = f * data.l2 + sum(f * p ** w.weight_exponent for w in witness)
    return FdimResult(
        value=value, witness=witness, method="engine-field",
        p=p, f=f, e=1, d=1, flags=flags, algebra=g.name,
    )


# ---------------------------------------------------------------------------
# chain ring scan


class _RingTables:
    """Flat-encoded chain ring ops plus level/shift/unit-inverse tables and
    the F_p coordinate vectors of reductions mod p^e."""

    def __init__(self, ring: ChainRing):
        self.ring = ring
        add, mul, neg, lev = ring.tables()
        self.add = add
        self.mul = mul
        self.neg = neg
        self.lev = lev
        size = ring.size
        self.shift = [0] * size
        self.invu = [0] * size
        self.proj = [None] * size
        p = ring.p
        for enc in range(size):
            el = ring.decode(enc)
            if lev[enc] >= 1:
                self.shift[enc] = ring.encode(ring.shift_down(el))
            if lev[enc] == 0:
                self.invu[enc] = ring.encode(ring.inv_unit(el))
            coords = []
            for i in range(ring.e):
                coords.extend(v % p for v in el.coeffs[i])
            self.proj[enc] = tuple(coords)

    def divide(self, x: int, y: int) -> int:
        ell = self.lev[y]
        for _ in range(ell):
            x = self.shift[x]
            y = self.shift[y]
        return self.mul[x][self.invu[y]]

    def kernel_exponent(self, mat: list[list[int]]) -> int:
        ring = self.ring
        d = ring.d
        nrows = len(mat)
        ncols = len(mat[0]) if nrows else 0
        m = [row[:] for row in mat]
        divisors = []
        t = 0
        lev = self.lev
        while t < min(nrows, ncols):
            best = None
            best_lev = d
            for i in range(t, nrows):
                mi = m[i]
                for j in range(t, ncols):
                    lv = lev[mi[j]]
                    if lv < best_lev:
                        best, best_lev = (i, j), lv
                        if lv == 0:
                            break
                if best_lev == 0:
                    break
            if best is None:
                break
            bi, bj = best
            m[t], m[bi] = m[bi], m[t]
            for row in m:
                row[t], row[bj] = row[bj], row[t]
            piv = m[t][t]
            add, mul, neg = self.add, self.mul, self.neg
            for i in range(t + 1, nrows):
                if lev[m[i][t]] < d:
                    fq = neg[self.divide(m[i][t], piv)]
                    mrow = mul[fq]
                    m[i] = [add[a][mrow[b]] for a, b in zip(m[i], m[t])]
            for j in range(t + 1, ncols):
                if lev[m[t][j]] < d:
                    fq = neg[self.divide(m[t][j], piv)]
                    mrow = mul[fq]
                    for i in range(nrows):
                        m[i][j] = add[m[i][j]][mrow[m[i][t]]]
            divisors.append(best_lev)
            t += 1
        k = ring.f * sum(min(a, d) for a in divisors)
        k += ring.f * ring.d * (ncols - len(divisors))
        return k


def _ring_candidates(
    F: SymbolicSkewMatrix, l1: int, ring: ChainRing, budget: int
):
    from .rings import matrix_kernel_size

    m, n = F.nvars, F.size
    size = ring.size
    total = size ** m
    if total > budget:
        raise BudgetError(total, budget)
    p, f, e, d = ring.p, ring.f, ring.e, ring.d
    proj_dim = f * e * l1
    ymax = (f * d * n) // 2
    ech: list[list[tuple[int, list[int]]]] = [[] for _ in range(ymax + 1)]
    reps: list[list[tuple[int, tuple[int, ...], tuple[int, ...]]]] = [
        [] for _ in range(ymax + 1)
    ]
    tables = _RingTables(ring) if size <= TABLE_LIMIT else None
    entry_items = sorted(F.entries.items())
    if tables is not None:
        coef_enc = {}
        for _, vec in entry_items:
            for c in vec.values():
                if c not in coef_enc:
                    coef_enc[c] = ring.encode(ring.from_int(c))
        zero_enc = ring.encode(ring.zero)
    for gidx in range(total):
        idx = gidx
        coords = []
        for _ in range(m):
            coords.append(idx % size)
            idx //= size
        if tables is not None:
            mat = [[zero_enc] * n for _ in range(n)]
            for (i, j), vec in entry_items:
                acc = zero_enc
                for k, c in vec.items():
                    acc = tables.add[acc][tables.mul[coef_enc[c]][coords[k]]]
                mat[i][j] = acc
                mat[j][i] = tables.neg[acc]
            kexp = tables.kernel_exponent(mat)
            projvec = []
            for k in range(l1):
                projvec.extend(tables.proj[coords[k]])
        else:
            els = [ring.decode(c) for c in coords]
            mat = [[ring.zero] * n for _ in range(n)]
            for (i, j), vec in entry_items:
                acc = ring.zero
                for k, c in vec.items():
                    acc = ring.add(acc, ring.mul(ring.from_int(c), els[k]))
                mat[i][j] = acc
                mat[j][i] = ring.neg(acc)
            kexp = matrix_kernel_size(ring, mat)
            projvec = []
            for k in range(l1):
                el = els[k]
                for i in range(e):
                    projvec.extend(v % p for v in el.coeffs[i])
        num = f * d * n - kexp
        if num % 2:
            raise InternalInvariantError("odd kernel exponent for a skew matrix")
        y = num // 2
        bucket = ech[y]
        if len(bucket) == proj_dim:
            continue
        vec = [v % p for v in projvec]
        for pc, prow in bucket:
            cc = vec[pc]
            if cc:
                vec = [(a - cc * b) % p for a, b in zip(vec, prow)]
        pc = next((t for t, v in enumerate(vec) if v), None)
        if pc is None:
            continue
        ivv = pow(vec[pc], p - 2, p)
        bucket.append((pc, [(ivv * v) % p for v in vec]))
        reps[y].append((gidx, tuple(coords), tuple(projvec)))
    cands = [
        (y, gidx, pt, pj)
        for y in range(ymax + 1)
        for (gidx, pt, pj) in reps[y]
    ]
    cands.sort(key=lambda c: c[1])
    return cands, proj_dim


def fdim_ring(
    g: LieAlgebraZ, ring: ChainRing, budget: int | None = None
) -> FdimResult:
    """Exact faithful dimension of exp(g tensor R) for a chain ring R.

    Every point a in R^m gets weight p^{(fdn - kernel exponent of F(a))/2};
    the value is f*l2*e plus the minimal weight sum over f*e*l1 points whose
    first l1 coordinates, reduced mod p^e, are F_p-linearly independent.
    Witness weights are p^{weight_exponent} (no extra f factor here; the f
    lives in the number of selected points).
    """
    budget = DEFAULT_BUDGET if budget is None else budget
    cls, data, F = _prepared(g)
    if ring.p <= cls:
        raise LazardError(f"p = {ring.p} must exceed the nilpotency class {cls}")
    p, f, e, d = ring.p, ring.f, ring.e, ring.d
    flags = _guarantee_flags(p, cls, data.l1, data.l2)
    base = f * data.l2 * e
    if data.m == 0:
        return FdimResult(
            value=base, witness=(), method="engine-ring",
            p=p, f=f, e=e, d=d, flags=flags, algebra=g.name,
        )
    cands, proj_dim = _ring_candidates(F, data.l1, ring, budget)
    fp = FiniteField(p, 1)
    sel, _ = min_weight_selection(
        cands,
        weight=lambda c: p ** c[0],
        proj=lambda c: c[3],
        target_dim=proj_dim,
        field=fp,
    )
    witness = tuple(
        WitnessPoint(point=cands[i][2], weight_exponent=cands[i][0]) for i in sel
    )
    value = base + sum(p ** w.weight_exponent for w in witness)
    return FdimResult(
        value=value, witness=witness, method="engine-ring",
        p=p, f=f, e=e, d=d, flags=flags, algebra=g.name,
    )


# ---------------------------------------------------------------------------
# polynomiality explorer


@dataclass
class FitReport:
    mu_by_point: dict[tuple[int, int], MuVector]
    partition: dict[MuVector, tuple[tuple[int, int], ...]]
    no_fit: tuple[tuple[int, int], ...] = ()
    l1: int = 0
    l2: int = 0

    @property
    def consistent(self) -> bool:
        return not self.no_fit


def fit_mu(g: LieAlgebraZ, results: dict) -> FitReport:
    """Recover mu with value = f * g_mu(q) at each grid point by base-q digit
    extraction of value/f - l2; unambiguous because q > l1 is required."""
    _, data, F = _prepared(g)
    l1, l2, n = data.l1, data.l2, F.size
    mu_by_point: dict[tuple[int, int], MuVector] = {}
    no_fit = []
    for (p, f), res in sorted(results.items()):
        value = res.value if isinstance(res, FdimResult) else int(res)
        q = p ** f
        if q <= l1:
            raise PreconditionError(
                f"fit_mu needs q > l1; got q = {q}, l1 = {l1}"
            )
        if value % f:
            no_fit.append((p, f))
            continue
        rem = value // f - l2
        exps = []
        pos = 0
        while rem and pos <= n:
            digit = rem % q
            exps.extend([pos] * digit)
            rem //= q
            pos += 1
        if rem or len(exps) != l1 or any(a > n // 2 for a in exps):
            no_fit.append((p, f))
            continue
        mu_by_point[(p, f)] = MuVector(tuple(sorted(exps)))
    partition: dict[MuVector, list] = {}
    for pt, mu in mu_by_point.items():
        partition.setdefault(mu, []).append(pt)
    return FitReport(
        mu_by_point=mu_by_point,
        partition={mu: tuple(sorted(v)) for mu, v in partition.items()},
        no_fit=tuple(no_fit),
        l1=l1,
        l2=l2,
    )


@dataclass(frozen=True)
class BoundReport:
    lower: int
    upper: int
    value: int
    ok: bool
    conjecture_attained: bool
    p: int
    f: int
    e: int
    d: int


def check_bounds(
    g: LieAlgebraZ,
    mu: MuVector,
    ring: ChainRing,
    value: int | None = None,
    budget: int | None = None,
) -> BoundReport:
    """Sandwich f*g(p^{fd}) <= m_faithful <= f*sum_{l<e} g(p^{f(d-l)}) for the
    fitted polynomial g = g_mu + l2; reports whether the conjectural value
    (the upper expression) is attained exactly."""
    _, data, _ = _prepared(g)
    l2 = data.l2
    p, f, e, d = ring.p, ring.f, ring.e, ring.d
    if value is None:
        value = fdim_ring(g, ring, budget=budget).value
    lower = f * mu.g_value(l2, p ** (f * d))
    upper = f * sum(mu.g_value(l2, p ** (f * (d - ell))) for ell in range(e))
    ok = lower <= value <= upper
    return BoundReport(
        lower=lower, upper=upper, value=value, ok=ok,
        conjecture_attained=(value == upper), p=p, f=f, e=e, d=d,
    )
