"""Finite fields F_{p^f} and finite truncated valuation rings.

A chain ring is described by its parameters (d, p, e, f) and realized as the
Eisenstein model  (unramified degree-f extension)[pi] / (pi^e - p, pi^d).
The parameters do not pin the ring down up to isomorphism, but every quantity
computed downstream depends only on them, so one representative is fixed.

Field elements are encoded as integers in [0, p^f): base-p digits are the
coefficients of the residue polynomial. Chain ring elements are tuples
(c_0, ..., c_{e-1}) where c_i is a Galois ring element (an f-tuple of
integers mod p^{m_i}, m_i = ceil((d - i) / e)); the element is
sum_i c_i pi^i with pi^e = p. With this mixed-modulus layout multiplication
is plain convolution in pi plus the single rewrite pi^e -> p.
"""

from dataclasses import dataclass
from functools import lru_cache

from .errors import ParameterError, SizeLimitError

TABLE_LIMIT = 4096  # largest ring/field size for which dense op tables are built


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# polynomials over F_p, little-endian coefficient tuples


def _poly_trim(a):
    while a and a[-1] == 0:
        a = a[:-1]
    return a


def _poly_mulmod(a, b, mod, p):
    res = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    # reduce modulo the monic polynomial `mod`
    dm = len(mod) - 1
    for k in range(len(res) - 1, dm - 1, -1):
        c = res[k]
        if c:
            res[k] = 0
            for j in range(dm):
                res[k - dm + j] = (res[k - dm + j] - c * mod[j]) % p
    return tuple(_poly_trim(tuple(res)))


def _poly_powmod(base, exp, mod, p):
    result = (1,)
    base = _poly_mulmod(base, (1,), mod, p)
    while exp:
        if exp & 1:
            result = _poly_mulmod(result, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        exp >>= 1
    return result


def _poly_gcd(a, b, p):
    a, b = tuple(_poly_trim(a)), tuple(_poly_trim(b))
    while b:
        inv = pow(b[-1], p - 2, p)
        r = list(a)
        db = len(b) - 1
        while len(r) - 1 >= db and any(r):
            c = (r[-1] * inv) % p
            shift = len(r) - 1 - db
            for j in range(len(b)):
                r[shift + j] = (r[shift + j] - c * b[j]) % p
            r = list(_poly_trim(tuple(r)))
            if not r:
                break
        a, b = b, tuple(_poly_trim(tuple(r)))
    return a


def _is_irreducible(g, p):
    """Rabin test for a monic polynomial g over F_p."""
    f = len(g) - 1
    x = (0, 1)
    primes = set()
    n = f
    q = 2
    while q * q <= n:
        while n % q == 0:
            primes.add(q)
            n //= q
        q += 1
    if n > 1:
        primes.add(n)
    for ell in primes:
        h = _poly_powmod(x, p ** (f // ell), g, p)
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        if len(_poly_gcd(tuple(diff), g, p)) >= 2:
            return False
    h = _poly_powmod(x, p ** f, g, p)
    diff = list(h) + [0] * max(0, 2 - len(h))
    diff[1] = (diff[1] - 1) % p
    return not _poly_trim(tuple(diff))


@lru_cache(maxsize=None)
def find_irreducible(p: int, f: int) -> tuple[int, ...]:
    """First monic degree-f polynomial irreducible mod p, searching constant
    coefficients in increasing base-p order; coefficients lie in {0,...,p-1}.
    Deterministic so that all ring constructions are reproducible."""
    if f == 1:
        return (0, 1)
    n = 0
    while True:
        coeffs = []
        t = n
        for _ in range(f):
            coeffs.append(t % p)
            t //= p
        g = tuple(coeffs) + (1,)
        if _is_irreducible(g, p):
            return g
        n += 1
        if n >= p ** f:
            raise ParameterError("no irreducible polynomial found")  # unreachable


class FiniteField:
    """F_{p^f} with elements encoded as integers in [0, p^f)."""

    def __init__(self, p: int, f: int = 1):
        if not is_prime(p):
            raise ParameterError(f"p = {p} is not prime")
        if f < 1:
            raise ParameterError("f must be positive")
        self.p = p
        self.f = f
        self.q = p ** f
        self.modulus = find_irreducible(p, f)
        self.zero = 0
        self.one = 1
        self._inv_cache: dict[int, int] = {}
        self._np_tables = None

    def __repr__(self):
        return f"FiniteField(p={self.p}, f={self.f})"

    def coeffs(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.f):
            out.append(a % self.p)
            a //= self.p
        return tuple(out)

    def from_coeffs(self, cs) -> int:
        a = 0
        for c in reversed(list(cs)[: self.f]):
            a = a * self.p + (c % self.p)
        return a

    def from_int(self, n: int) -> int:
        """Image of the rational integer n under Z -> F_q."""
        return n % self.p

    def add(self, a: int, b: int) -> int:
        if self.f == 1:
            return (a + b) % self.p
        return self.from_coeffs(
            x + y for x, y in zip(self.coeffs(a), self.coeffs(b))
        )

    def sub(self, a: int, b: int) -> int:
        if self.f == 1:
            return (a - b) % self.p
        return self.from_coeffs(
            x - y for x, y in zip(self.coeffs(a), self.coeffs(b))
        )

    def neg(self, a: int) -> int:
        if self.f == 1:
            return (-a) % self.p
        return self.from_coeffs(-x for x in self.coeffs(a))

    def mul(self, a: int, b: int) -> int:
        if self.f == 1:
            return (a * b) % self.p
        prod = _poly_mulmod(self.coeffs(a), self.coeffs(b), self.modulus, self.p)
        return self.from_coeffs(list(prod) + [0] * self.f)

    def pow(self, a: int, n: int) -> int:
        r = 1
        while n:
            if n & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            n >>= 1
        return r

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        if self.f == 1:
            return pow(a, self.p - 2, self.p)
        v = self._inv_cache.get(a)
        if v is None:
            v = self.pow(a, self.q - 2)
            self._inv_cache[a] = v
        return v

    def trace(self, a: int) -> int:
        """Field trace to F_p, as an integer in [0, p)."""
        t = 0
        x = a
        for _ in range(self.f):
            t = self.add(t, x) if self.f > 1 else (t + x) % self.p
            x = self.pow(x, self.p)
        # the trace lies in the prime field: only the constant digit survives
        return self.coeffs(t)[0] if self.f > 1 else t

    def elements(self):
        return range(self.q)

    def np_tables(self):
        """(add, mul, inv, neg) dense numpy tables for batch elimination."""
        if self._np_tables is None:
            import numpy as np

            if self.q > TABLE_LIMIT:
                raise SizeLimitError(f"no dense tables for q = {self.q}")
            q = self.q
            add = np.zeros((q, q), dtype=np.int32)
            mul = np.zeros((q, q), dtype=np.int32)
            for a in range(q):
                for b in range(q):
                    add[a, b] = self.add(a, b)
                    mul[a, b] = self.mul(a, b)
            inv = np.zeros(q, dtype=np.int32)
            for a in range(1, q):
                inv[a] = self.inv(a)
            neg = np.array([self.neg(a) for a in range(q)], dtype=np.int32)
            self._np_tables = (add, mul, inv, neg)
        return self._np_tables


def ff_rank(field: FiniteField, rows) -> int:
    """Rank over F_{p^f} by Gaussian elimination on encoded entries."""
    m = [list(r) for r in rows]
    if not m or not m[0]:
        return 0
    cols = len(m[0])
    rank = 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = field.inv(m[rank][c])
        m[rank] = [field.mul(inv, x) for x in m[rank]]
        for i in range(rank + 1, len(m)):
            f0 = m[i][c]
            if f0:
                m[i] = [field.sub(a, field.mul(f0, b)) for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# chain rings


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


@dataclass(frozen=True)
class RingElement:
    """Element of a ChainRing: coefficient c_i of pi^i is an f-tuple of
    integers mod p^{m_i}."""

    coeffs: tuple[tuple[int, ...], ...]

    def __iter__(self):
        return iter(self.coeffs)


class ChainRing:
    """Finite truncated valuation ring with parameters (d, p, e, f)."""

    def __init__(self, p: int, f: int, e: int, d: int):
        if not is_prime(p):
            raise ParameterError(f"p = {p} is not prime")
        if min(p, f, e, d) < 1:
            raise ParameterError("parameters must be positive")
        self.p = p
        self.f = f
        self.e = e
        self.d = d
        self.size = p ** (f * d)
        self.residue = FiniteField(p, f)
        self.moduli = tuple(p ** _ceil_div(d - i, e) for i in range(e))
        self.mvals = tuple(_ceil_div(d - i, e) for i in range(e))
        # integer lift of the residue-field modulus, shared across precisions
        self.modulus = self.residue.modulus
        # x^(f+j) mod modulus, as integer f-vectors, for j = 0..f-2
        red = []
        cur = [(-self.modulus[k]) % self.moduli[0] for k in range(f)]
        for _ in range(max(0, f - 1)):
            red.append(tuple(cur))
            nxt = [0] * f
            for k in range(f - 1):
                nxt[k + 1] = cur[k]
            top = cur[f - 1]
            if top:
                for k in range(f):
                    nxt[k] = (nxt[k] - top * self.modulus[k]) % self.moduli[0]
            cur = nxt
        self._reduction = red
        self.zero = RingElement(tuple(tuple(0 for _ in range(f)) for _ in range(e)))
        one = [[0] * f for _ in range(e)]
        one[0][0] = 1
        self.one = RingElement(tuple(tuple(c) for c in one))
        if e > 1:
            pi = [[0] * f for _ in range(e)]
            pi[1][0] = 1
            self.pi = RingElement(tuple(tuple(c) for c in pi))
        else:
            self.pi = self.from_int(p)
        self._tables = None

    def __repr__(self):
        return f"ChainRing(p={self.p}, f={self.f}, e={self.e}, d={self.d})"

    # -- construction and conversion

    def from_int(self, n: int) -> RingElement:
        c = [[0] * self.f for _ in range(self.e)]
        c[0][0] = n % self.moduli[0]
        return RingElement(tuple(tuple(x) for x in c))

    def from_residue(self, a: int) -> RingElement:
        """Teichmueller-free lift of a residue-field element (nearest rep)."""
        c = [[0] * self.f for _ in range(self.e)]
        c[0] = list(self.residue.coeffs(a))
        return RingElement(tuple(tuple(x) for x in c))

    def to_residue(self, x: RingElement) -> int:
        return self.residue.from_coeffs(v % self.p for v in x.coeffs[0])

    def encode(self, x: RingElement) -> int:
        n = 0
        for i in range(self.e - 1, -1, -1):
            for v in reversed(x.coeffs[i]):
                n = n * self.moduli[i] + v
        return n

    def decode(self, n: int) -> RingElement:
        out = []
        for i in range(self.e):
            c = []
            for _ in range(self.f):
                c.append(n % self.moduli[i])
                n //= self.moduli[i]
            out.append(tuple(c))
        return RingElement(tuple(out))

    def elements(self):
        return (self.decode(n) for n in range(self.size))

    # -- arithmetic

    def add(self, x: RingElement, y: RingElement) -> RingElement:
        return RingElement(
            tuple(
                tuple((a + b) % self.moduli[i] for a, b in zip(x.coeffs[i], y.coeffs[i]))
                for i in range(self.e)
            )
        )

    def sub(self, x: RingElement, y: RingElement) -> RingElement:
        return RingElement(
            tuple(
                tuple((a - b) % self.moduli[i] for a, b in zip(x.coeffs[i], y.coeffs[i]))
                for i in range(self.e)
            )
        )

    def neg(self, x: RingElement) -> RingElement:
        return RingElement(
            tuple(
                tuple((-a) % self.moduli[i] for a in x.coeffs[i])
                for i in range(self.e)
            )
        )

    def _gr_mul(self, a, b, modulus_power: int):
        """Product of two f-tuples in the Galois ring at the given modulus."""
        f = self.f
        conv = [0] * (2 * f - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    conv[i + j] += ai * bj
        out = list(conv[:f])
        for j in range(f - 1):
            c = conv[f + j]
            if c:
                red = self._reduction[j]
                for k in range(f):
                    out[k] += c * red[k]
        return [v % modulus_power for v in out]

    def mul(self, x: RingElement, y: RingElement) -> RingElement:
        e, f = self.e, self.f
        acc = [[0] * f for _ in range(e)]
        for i in range(e):
            ci = x.coeffs[i]
            if not any(ci):
                continue
            for j in range(e):
                cj = y.coeffs[j]
                if not any(cj):
                    continue
                prod = self._gr_mul(ci, cj, self.moduli[0])
                k = i + j
                if k < e:
                    for t in range(f):
                        acc[k][t] += prod[t]
                else:
                    # pi^e = p
                    for t in range(f):
                        acc[k - e][t] += self.p * prod[t]
        return RingElement(
            tuple(
                tuple(v % self.moduli[i] for v in acc[i]) for i in range(e)
            )
        )

    def scalar(self, n: int, x: RingElement) -> RingElement:
        return RingElement(
            tuple(
                tuple((n * a) % self.moduli[i] for a in x.coeffs[i])
                for i in range(self.e)
            )
        )

    def is_zero(self, x: RingElement) -> bool:
        return all(not any(c) for c in x.coeffs)

    # -- valuation structure

    def level(self, x: RingElement) -> int:
        """Smallest k with x outside p^(k+1); level(0) = d (Definition of the
        level of a ring element, capped at the nilpotency length)."""
        best = self.d
        for i in range(self.e):
            val = self.mvals[i]
            for c in x.coeffs[i]:
                if c:
                    v = 0
                    while c % self.p == 0:
                        c //= self.p
                        v += 1
                    val = min(val, v)
            cand = i + self.e * val
            if cand < best:
                best = cand
        return min(best, self.d)

    def is_unit(self, x: RingElement) -> bool:
        return self.level(x) == 0

    def shift_down(self, x: RingElement) -> RingElement:
        """Some y with pi * y = x; requires level(x) >= 1."""
        f = self.f
        out = []
        for i in range(1, self.e):
            out.append(tuple(v % self.moduli[i - 1] for v in x.coeffs[i]))
        c0 = x.coeffs[0]
        last = []
        for v in c0:
            if v % self.p != 0:
                raise ParameterError("shift_down requires level >= 1")
            last.append((v // self.p) % self.moduli[self.e - 1])
        out.append(tuple(last))
        return RingElement(tuple(out))

    def inv_unit(self, x: RingElement) -> RingElement:
        if not self.is_unit(x):
            raise ZeroDivisionError("not a unit")
        v = self.from_residue(self.residue.inv(self.to_residue(x)))
        # Hensel: v <- v(2 - xv) doubles the precision each round
        steps = max(1, self.d.bit_length() + 1)
        two = self.from_int(2)
        for _ in range(steps):
            v = self.mul(v, self.sub(two, self.mul(x, v)))
        assert self.sub(self.mul(x, v), self.one) == self.zero
        return v

    def divide_exact(self, x: RingElement, y: RingElement) -> RingElement:
        """Some q with q * y = x, valid whenever level(x) >= level(y)."""
        ell = self.level(y)
        if self.level(x) < ell:
            raise ParameterError("divide_exact requires level(x) >= level(y)")
        if ell >= self.d:
            return self.zero
        xs, ys = x, y
        for _ in range(ell):
            xs = self.shift_down(xs)
            ys = self.shift_down(ys)
        return self.mul(xs, self.inv_unit(ys))

    # -- dense tables for enumeration kernels

    def tables(self):
        """(add, mul, neg, level, encode-of-pi-powers) flat tables keyed by
        encoded elements; only for rings up to TABLE_LIMIT elements."""
        if self._tables is None:
            if self.size > TABLE_LIMIT:
                raise SizeLimitError(f"no dense tables for |R| = {self.size}")
            els = [self.decode(n) for n in range(self.size)]
            add = [
                [self.encode(self.add(a, b)) for b in els] for a in els
            ]
            mul = [
                [self.encode(self.mul(a, b)) for b in els] for a in els
            ]
            neg = [self.encode(self.neg(a)) for a in els]
            lev = [self.level(a) for a in els]
            self._tables = (add, mul, neg, lev)
        return self._tables


def ring_create(p: int, f: int, e: int, d: int) -> ChainRing:
    """Chain ring with parameters (d, p, e, f) in the fixed Eisenstein model."""
    return ChainRing(p, f, e, d)


def matrix_kernel_size(ring: ChainRing, rows) -> int:
    """Exponent k with #ker = p^k for the map R^cols -> R^rows.

    Diagonalizes by always pivoting on an entry of minimal level, which
    divides every other entry; the elementary divisors pi^{a_1},...,pi^{a_r}
    then give #ker = p^{f * sum(min(a_i, d))} * p^{f * d * (cols - r)}.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    divisors = []
    t = 0
    while t < min(nrows, ncols):
        best = None
        best_lev = ring.d
        for i in range(t, nrows):
            for j in range(t, ncols):
                lev = ring.level(m[i][j])
                if lev < best_lev:
                    best, best_lev = (i, j), lev
                    if lev == 0:
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
        for i in range(t + 1, nrows):
            if not ring.is_zero(m[i][t]):
                fq = ring.divide_exact(m[i][t], piv)
                m[i] = [ring.sub(a, ring.mul(fq, b)) for a, b in zip(m[i], m[t])]
        for j in range(t + 1, ncols):
            if not ring.is_zero(m[t][j]):
                fq = ring.divide_exact(m[t][j], piv)
                for i in range(nrows):
                    m[i][j] = ring.sub(m[i][j], ring.mul(fq, m[i][t]))
        divisors.append(best_lev)
        t += 1
    k = ring.f * sum(min(a, ring.d) for a in divisors)
    k += ring.f * ring.d * (ncols - len(divisors))
    return k


def kernel_size_bruteforce(ring: ChainRing, rows) -> int:
    """Exponent via exhaustive kernel enumeration; test oracle only."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    count = 0
    total = ring.size ** ncols
    for idx in range(total):
        n = idx
        vec = []
        for _ in range(ncols):
            vec.append(ring.decode(n % ring.size))
            n //= ring.size
        ok = True
        for i in range(nrows):
            acc = ring.zero
            for j in range(ncols):
                acc = ring.add(acc, ring.mul(rows[i][j], vec[j]))
            if not ring.is_zero(acc):
                ok = False
                break
        if ok:
            count += 1
    k = 0
    while count > 1:
        assert count % ring.p == 0
        count //= ring.p
        k += 1
    return k
