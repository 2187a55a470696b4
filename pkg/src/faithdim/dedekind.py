"""Factorization degrees of monic integer polynomials mod p.

Only the degree multisets are needed (they are the cycle types of the
Frobenius permutation at unramified primes), so factorization stops at
squarefree decomposition plus distinct-degree gcd ladders and never splits
factors of equal degree. Discriminants are exact resultants, root existence
in F_{p^n} is a gcd with x^{p^n} - x, S_p(h) is generated by the factor
degrees, and frobenius_sample tabulates cycle types over a prime range.
"""

from dataclasses import dataclass

from .errors import InternalInvariantError, ParameterError, RamifiedError
from .rings import is_prime

Poly = tuple[int, ...]  # little-endian, constant term first


@dataclass(frozen=True)
class MonicIntPoly:
    coefficients: Poly

    def __post_init__(self):
        c = self.coefficients
        if len(c) < 2 or c[-1] != 1:
            raise ParameterError("polynomial must be monic of degree >= 1")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @classmethod
    def parse(cls, text: str) -> "MonicIntPoly":
        """Comma-separated integer coefficients, constant term first."""
        try:
            coeffs = tuple(int(t.strip()) for t in text.split(","))
        except ValueError as exc:
            raise ParameterError(f"bad polynomial string {text!r}") from exc
        return cls(coeffs)


# -- integer resultant via Sylvester matrix and fraction-free elimination


def _bareiss_det(m: list[list[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k]), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _resultant(f: Poly, g: Poly) -> int:
    n, m = len(f) - 1, len(g) - 1
    if n == 0 or m == 0:
        # res(f, const c) = c^deg(f)
        if m == 0:
            return g[0] ** n
        return f[0] ** m
    size = n + m
    rows = []
    fr = list(reversed(f))
    gr = list(reversed(g))
    for i in range(m):
        rows.append([0] * i + fr + [0] * (m - 1 - i))
    for i in range(n):
        rows.append([0] * i + gr + [0] * (n - 1 - i))
    assert all(len(r) == size for r in rows)
    return _bareiss_det(rows)


def discriminant(h: MonicIntPoly) -> int:
    """Disc = (-1)^{n(n-1)/2} Res(h, h') for monic h (exact integer)."""
    c = h.coefficients
    n = h.degree
    if n == 1:
        return 1
    deriv = tuple(k * c[k] for k in range(1, n + 1))
    res = _resultant(c, deriv)
    return (-1) ** (n * (n - 1) // 2) * res


# -- polynomial arithmetic over F_p (little-endian tuples)


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def _red(a: Poly, p: int) -> Poly:
    return _trim(x % p for x in a)


def _pmul(a: Poly, b: Poly, p: int) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _pdivmod(a: Poly, b: Poly, p: int) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    q = [0] * max(0, len(a) - len(b) + 1)
    inv = pow(b[-1], p - 2, p)
    while len(r) >= len(b) and any(r):
        if r[-1] == 0:
            r.pop()
            continue
        c = (r[-1] * inv) % p
        shift = len(r) - len(b)
        q[shift] = c
        for j in range(len(b)):
            r[shift + j] = (r[shift + j] - c * b[j]) % p
        r.pop()
    return _trim(q), _trim(r)


def _pgcd(a: Poly, b: Poly, p: int) -> Poly:
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], p - 2, p)
        a = tuple((x * inv) % p for x in a)
    return a


def _ppowmod(base: Poly, exp: int, mod: Poly, p: int) -> Poly:
    result = (1,)
    base = _pdivmod(base, mod, p)[1]
    while exp:
        if exp & 1:
            result = _pdivmod(_pmul(result, base, p), mod, p)[1]
        base = _pdivmod(_pmul(base, base, p), mod, p)[1]
        exp >>= 1
    return result


def _deriv(a: Poly, p: int) -> Poly:
    return _trim((k * a[k]) % p for k in range(1, len(a)))


def _squarefree_parts(f: Poly, p: int) -> list[tuple[Poly, int]]:
    """(squarefree factor, multiplicity) pairs with f = prod g^m, handling
    the characteristic-p collapse f = g(x^p) by coefficient extraction."""
    f = _red(f, p)
    if len(f) <= 1:
        return []
    out = []
    df = _deriv(f, p)
    if not df:
        # f(x) = g(x^p); over F_p the coefficients are their own p-th roots
        g = tuple(f[k] for k in range(0, len(f), p))
        return [(s, m * p) for (s, m) in _squarefree_parts(g, p)]
    c = _pgcd(f, df, p)
    w = _pdivmod(f, c, p)[0]
    i = 1
    while len(w) > 1:
        y = _pgcd(w, c, p)
        z = _pdivmod(w, y, p)[0]
        if len(z) > 1:
            out.append((z, i))
        w = y
        c = _pdivmod(c, y, p)[0]
        i += 1
    if len(c) > 1:
        g = tuple(c[k] for k in range(0, len(c), p))
        out.extend((s, m * p) for (s, m) in _squarefree_parts(g, p))
    return out


def _distinct_degree(f: Poly, p: int) -> list[tuple[int, int]]:
    """(degree, count) pairs for a squarefree f: gcd with x^{p^k} - x strips
    the product of all irreducible factors of degree k."""
    out = []
    g = f
    k = 1
    while len(g) - 1 >= 2 * k:
        xq = _ppowmod((0, 1), p ** k, g, p)
        diff = list(xq) + [0] * max(0, 2 - len(xq))
        diff[1] = (diff[1] - 1) % p
        d = _pgcd(_trim(diff), g, p)
        if len(d) > 1:
            deg = len(d) - 1
            if deg % k:
                raise InternalInvariantError("distinct-degree gcd misaligned")
            out.append((k, deg // k))
            g = _pdivmod(g, d, p)[0]
        k += 1
    if len(g) > 1:
        out.append((len(g) - 1, 1))
    return out


@dataclass(frozen=True)
class FactorDegrees:
    degrees: tuple[int, ...]  # with multiplicity, sorted
    ramified: bool


def factor_degrees(h: MonicIntPoly, p: int) -> FactorDegrees:
    """Degrees (with multiplicity) of the irreducible factors of h mod p,
    flagged when p divides the discriminant."""
    if not is_prime(p):
        raise ParameterError(f"p = {p} is not prime")
    f = _red(h.coefficients, p)
    degs: list[int] = []
    for part, mult in _squarefree_parts(f, p):
        for deg, count in _distinct_degree(part, p):
            degs.extend([deg] * (count * mult))
    degs.sort()
    if sum(degs) != h.degree:
        raise InternalInvariantError("factor degrees do not sum to deg h")
    return FactorDegrees(tuple(degs), ramified=discriminant(h) % p == 0)


def has_root_in(h: MonicIntPoly, p: int, n: int) -> bool:
    """True iff h mod p has a root in F_{p^n}: deg gcd(h, x^{p^n} - x) >= 1,
    with x^{p^n} computed by n successive p-th powers mod h."""
    if not is_prime(p):
        raise ParameterError(f"p = {p} is not prime")
    if n < 1:
        raise ParameterError("n must be >= 1")
    f = _red(h.coefficients, p)
    if len(f) <= 1:
        # h collapsed to a constant cannot happen for monic h
        raise InternalInvariantError("monic polynomial collapsed mod p")
    xq = (0, 1)
    for _ in range(n):
        xq = _ppowmod(xq, p, f, p)
    diff = list(xq) + [0] * max(0, 2 - len(xq))
    diff[1] = (diff[1] - 1) % p
    return len(_pgcd(_trim(diff), f, p)) >= 2


def sp_generators(h: MonicIntPoly, p: int) -> tuple[int, ...]:
    """Minimal generating degrees of S_p(h) = {n : h mod p has a root in
    F_{p^n}} = union of n_i Z over factor degrees n_i; unramified p only."""
    fd = factor_degrees(h, p)
    if fd.ramified:
        raise RamifiedError(
            f"p = {p} divides the discriminant; use factor_degrees instead"
        )
    degs = sorted(set(fd.degrees))
    gens = tuple(
        n for n in degs if not any(m != n and n % m == 0 for m in degs)
    )
    for n in range(1, 2 * h.degree + 1):
        in_sp = any(n % g == 0 for g in gens)
        if in_sp != has_root_in(h, p, n):
            raise InternalInvariantError(
                f"S_p generator check failed at p = {p}, n = {n}"
            )
    return gens


def _primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(n ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i:: i] = b"\x00" * len(sieve[i * i:: i])
    return [i for i in range(2, n + 1) if sieve[i]]


@dataclass(frozen=True)
class FrobeniusSample:
    per_prime: tuple[tuple[int, tuple[int, ...], bool], ...]
    frequencies: dict[tuple[int, ...], float]
    unramified_count: int

    def to_json_dict(self) -> dict:
        return {
            "per_prime": [
                {"p": p, "degrees": list(d), "ramified": r}
                for (p, d, r) in self.per_prime
            ],
            "frequencies": {
                ",".join(map(str, k)): v for k, v in sorted(self.frequencies.items())
            },
            "unramified_count": self.unramified_count,
        }


def frobenius_sample(h: MonicIntPoly, p_max: int) -> FrobeniusSample:
    """Cycle types of h at every prime up to p_max with empirical frequencies
    among the unramified ones (ramified primes are listed but not counted)."""
    if p_max < 2:
        raise ParameterError("p_max must be at least 2")
    rows = []
    counts: dict[tuple[int, ...], int] = {}
    unram = 0
    for p in _primes_upto(p_max):
        fd = factor_degrees(h, p)
        rows.append((p, fd.degrees, fd.ramified))
        if not fd.ramified:
            unram += 1
            counts[fd.degrees] = counts.get(fd.degrees, 0) + 1
    freq = {k: v / unram for k, v in counts.items()} if unram else {}
    return FrobeniusSample(
        per_prime=tuple(rows), frequencies=freq, unramified_count=unram
    )
