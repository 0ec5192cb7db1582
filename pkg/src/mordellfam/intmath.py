"""Exact integer helpers: perfect powers, valuations, factorization."""

from __future__ import annotations

import math
from functools import lru_cache


def exact_sqrt(n: int) -> int | None:
    """Return r >= 0 with r*r == n, or None."""
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def exact_cbrt(n: int) -> int | None:
    """Return the integer cube root of n if n is a perfect cube (any sign)."""
    if n < 0:
        r = exact_cbrt(-n)
        return -r if r is not None else None
    if n == 0:
        return 0
    r = round(n ** (1.0 / 3.0))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c * c * c == n:
            return c
    # float guess can be off for very large n; fall back to bisection
    lo, hi = 0, 1 << ((n.bit_length() + 2) // 3 + 1)
    while lo <= hi:
        mid = (lo + hi) // 2
        m3 = mid * mid * mid
        if m3 == n:
            return mid
        if m3 < n:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


def valuation(n: int, p: int) -> int:
    """Largest e with p^e | n.  n must be nonzero."""
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    e = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        e += 1
    return e


def sixth_power_reduce(d: int) -> tuple[int, int]:
    """Write d = d0 * e^6 with e maximal; return (d0, e)."""
    if d == 0:
        raise ValueError("d must be nonzero")
    e = 1
    for p, m in factorize(abs(d)).items():
        e *= p ** (m // 6)
    return d // e**6, e


_SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin, deterministic for n < 3.3e24 with the fixed base set."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
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


def _pollard_brent(n: int) -> int:
    """A nontrivial factor of composite odd n."""
    if n % 2 == 0:
        return 2
    seed = 1
    while True:
        y, c, m = seed % n or 1, seed + 1, 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        seed += 1


@lru_cache(maxsize=1024)
def _factorize_cached(n: int) -> tuple[tuple[int, int], ...]:
    out: dict[int, int] = {}
    for p in range(2, 10_000):
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        f = _pollard_brent(m)
        stack.extend((f, m // f))
    return tuple(sorted(out.items()))


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| as {prime: multiplicity}."""
    n = abs(n)
    if n <= 1:
        return {}
    return dict(_factorize_cached(n))
