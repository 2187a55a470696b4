import random
from itertools import product

import pytest

from faithdim.errors import ParameterError
from faithdim.rings import (
    ChainRing,
    FiniteField,
    ff_rank,
    find_irreducible,
    kernel_size_bruteforce,
    matrix_kernel_size,
    ring_create,
)


def test_modulus_search_deterministic():
    assert find_irreducible(5, 1) == (0, 1)
    # x^2 and x^2+1 are reducible mod 5; x^2+2 is the first irreducible
    assert find_irreducible(5, 2) == (2, 0, 1)
    assert find_irreducible(2, 3) == (1, 1, 0, 1)


def test_field_axioms_exhaustive_f9():
    k = FiniteField(3, 2)
    els = list(k.elements())
    for a in els:
        for b in els:
            assert k.mul(a, b) == k.mul(b, a)
            assert k.add(a, b) == k.add(b, a)
    rng = random.Random(0)
    for _ in range(300):
        a, b, c = (rng.randrange(k.q) for _ in range(3))
        assert k.mul(a, k.mul(b, c)) == k.mul(k.mul(a, b), c)
        assert k.mul(a, k.add(b, c)) == k.add(k.mul(a, b), k.mul(a, c))
    for a in els:
        if a:
            assert k.mul(a, k.inv(a)) == k.one


def test_field_trace():
    k = FiniteField(5, 2)
    values = {k.trace(a) for a in k.elements()}
    assert values == set(range(5))
    for a in range(k.q):
        for b in range(k.q):
            s = k.add(a, b)
            assert k.trace(s) == (k.trace(a) + k.trace(b)) % 5
    # trace of a prime-field element is f * a
    assert k.trace(k.from_int(2)) == (2 * 2) % 5


def test_ring_create_examples():
    r = ring_create(5, 1, 1, 2)
    assert r.size == 25
    assert r.encode(r.from_int(26)) == r.encode(r.one)

    r = ring_create(5, 1, 2, 3)
    assert r.size == 125
    pi = r.pi
    pi2 = r.mul(pi, pi)
    assert pi2 == r.from_int(5)  # pi^2 = 5
    assert r.mul(pi2, pi) == r.zero  # pi^3 = 0
    x = r.add(r.one, pi)
    sq = r.mul(x, x)
    assert sq == r.add(r.from_int(6), r.scalar(2, pi))  # (1+pi)^2 = 6 + 2 pi

    r = ring_create(3, 2, 1, 1)
    assert r.size == 9 and r.d == 1

    with pytest.raises(ParameterError):
        ring_create(4, 1, 1, 1)


def test_level_examples():
    r = ring_create(5, 1, 1, 2)
    assert r.level(r.from_int(10)) == 1
    assert r.level(r.zero) == 2
    r = ring_create(5, 1, 2, 3)
    assert r.level(r.pi) == 1
    assert r.level(r.from_int(5)) == 2
    assert r.level(r.zero) == 3
    assert r.level(r.one) == 0


def test_level_multiplicative():
    for params in [(5, 1, 2, 3), (2, 2, 2, 4), (3, 1, 1, 3)]:
        r = ring_create(*params)
        els = list(r.elements())
        assert len(els) == r.size
        for x in els:
            for y in els:
                assert r.level(r.mul(x, y)) == min(
                    r.level(x) + r.level(y), r.d
                )


def test_ring_axioms():
    for params in [(5, 1, 2, 3), (2, 1, 3, 5), (3, 2, 2, 4)]:
        r = ring_create(*params)
        assert r.size == r.p ** (r.f * r.d)
        rng = random.Random(1)
        els = list(r.elements()) if r.size <= 200 else None
        if els:
            for x in els:
                for y in els:
                    assert r.mul(x, y) == r.mul(y, x)
        for _ in range(250):
            x = r.decode(rng.randrange(r.size))
            y = r.decode(rng.randrange(r.size))
            z = r.decode(rng.randrange(r.size))
            assert r.mul(x, r.mul(y, z)) == r.mul(r.mul(x, y), z)
            assert r.mul(x, r.add(y, z)) == r.add(r.mul(x, y), r.mul(x, z))
            assert r.add(x, r.neg(x)) == r.zero
            assert r.mul(x, r.one) == x


def test_unit_inverse_and_divide():
    r = ring_create(5, 1, 2, 3)
    rng = random.Random(2)
    for _ in range(100):
        x = r.decode(rng.randrange(r.size))
        if r.is_unit(x):
            assert r.mul(x, r.inv_unit(x)) == r.one
        y = r.decode(rng.randrange(r.size))
        if r.level(x) <= r.level(y):
            q = r.divide_exact(y, x)
            assert r.mul(q, x) == y


def test_matrix_kernel_size_examples():
    r = ring_create(5, 1, 1, 2)  # Z/25
    m = [[r.from_int(0), r.from_int(5)], [r.from_int(-5), r.from_int(0)]]
    assert matrix_kernel_size(r, m) == 2  # #ker = 25
    z = [[r.zero, r.zero], [r.zero, r.zero]]
    assert matrix_kernel_size(r, z) == 4  # #ker = 625

    r2 = ring_create(5, 1, 2, 2)
    m = [[r2.one, r2.zero], [r2.zero, r2.pi]]
    assert matrix_kernel_size(r2, m) == 1  # #ker = 5
    assert kernel_size_bruteforce(r2, m) == 1


def test_kernel_size_vs_bruteforce_random():
    rng = random.Random(3)
    for params in [(5, 1, 1, 2), (5, 1, 2, 2), (2, 2, 1, 2), (3, 1, 1, 2)]:
        r = ring_create(*params)
        for _ in range(12):
            n = rng.choice([2, 3])
            if r.size ** n > 20000:
                n = 2
            m = [
                [r.decode(rng.randrange(r.size)) for _ in range(n)]
                for _ in range(n)
            ]
            assert matrix_kernel_size(r, m) == kernel_size_bruteforce(r, m)


def test_skew_kernel_bound():
    # for skew-symmetric B with an entry of level l: #ker <= p^{fd(r-2)+2fl}
    rng = random.Random(4)
    for params in [(5, 1, 1, 2), (5, 1, 2, 2), (3, 1, 1, 3)]:
        r = ring_create(*params)
        for _ in range(40):
            n = rng.choice([2, 3, 4])
            m = [[r.zero for _ in range(n)] for _ in range(n)]
            levels = []
            for i in range(n):
                for j in range(i + 1, n):
                    x = r.decode(rng.randrange(r.size))
                    m[i][j] = x
                    m[j][i] = r.neg(x)
                    levels.append(r.level(x))
            ell = min(levels)
            k = matrix_kernel_size(r, m)
            assert r.p ** k <= r.p ** (r.f * r.d * (n - 2) + 2 * r.f * ell)


def test_ff_rank():
    k5 = FiniteField(5, 1)
    assert ff_rank(k5, [[0, 1], [4, 0]]) == 2
    assert ff_rank(k5, [[0, 0], [0, 0]]) == 0
    assert ff_rank(k5, [[0, 1, 2], [4, 0, 0], [3, 0, 0]]) == 2


def test_skew_rank_even():
    rng = random.Random(5)
    for q in [(5, 1), (3, 2)]:
        k = FiniteField(*q)
        for _ in range(60):
            n = rng.choice([2, 3, 4, 5])
            m = [[0] * n for _ in range(n)]
            for i in range(n):
                for j in range(i + 1, n):
                    x = rng.randrange(k.q)
                    m[i][j] = x
                    m[j][i] = k.neg(x)
            assert ff_rank(k, m) % 2 == 0
