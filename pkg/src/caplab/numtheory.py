"""Exact integer arithmetic helpers: primality, factorization, Bezout, CRT.

Factorization is trial division up to a fixed bound followed by Brent's
variant of the rho method.  All rho work is metered: if the configured
budget runs out before the cofactor is split, a
:class:`FactorizationBudgetError` is raised instead of returning a wrong
or partial answer.
"""

from __future__ import annotations

import math

DEFAULT_BUDGET = 500_000

_TRIAL_LIMIT = 10**6

# Strong-pseudoprime bases proving primality for every n < 3.3 * 10**24,
# far above anything this library factors.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class FactorizationBudgetError(RuntimeError):
    """Factoring an integer exceeded the configured work budget."""


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin test.

    >>> [p for p in range(25) if is_prime(p)]
    [2, 3, 5, 7, 11, 13, 17, 19, 23]
    >>> is_prime(561)  # Carmichael number
    False
    """
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int, meter: list[int]) -> int:
    """Return a nontrivial factor of composite odd n, charging ``meter``."""
    for c in range(1, 10_000):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                steps = min(m, r - k)
                for _ in range(steps):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                meter[0] -= steps
                if meter[0] < 0:
                    raise FactorizationBudgetError(
                        f"factorization exceeded budget while splitting {n}"
                    )
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
                meter[0] -= 1
                if meter[0] < 0:
                    raise FactorizationBudgetError(
                        f"factorization exceeded budget while splitting {n}"
                    )
        if g != n:
            return g
        # rare bad cycle for this c; retry with the next polynomial
    raise FactorizationBudgetError(f"rho failed to split {n}")


def factor(n: int, budget: int | None = None) -> dict[int, int]:
    """Factor ``n >= 1`` into ``{prime: exponent}``.

    >>> factor(360)
    {2: 3, 3: 2, 5: 1}
    >>> factor(1)
    {}
    """
    if n < 1:
        raise ValueError(f"can only factor positive integers, got {n}")
    meter = [DEFAULT_BUDGET if budget is None else budget]
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)  # step pattern skipping multiples of 2,3,5
    i = 0
    while d <= _TRIAL_LIMIT and d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += wheel[i]
        i = (i + 1) % 8
    if n == 1:
        return dict(sorted(out.items()))
    if d * d > n or is_prime(n):
        out[n] = out.get(n, 0) + 1
        return dict(sorted(out.items()))
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        f = _brent_rho(m, meter)
        stack.append(f)
        stack.append(m // f)
    return dict(sorted(out.items()))


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended gcd: returns ``(g, x, y)`` with ``a*x + b*y = g >= 0``.

    >>> xgcd(12, 18)
    (6, -1, 1)
    >>> g, x, y = xgcd(-5, 7)
    >>> g, -5 * x + 7 * y
    (1, 1)
    """
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def crt(residues: list[tuple[int, int]]) -> tuple[int, int]:
    """Combine congruences ``x = r (mod m)`` into ``(x, lcm)``.

    Raises ValueError on inconsistent congruences.  The pairs need not
    have coprime moduli.

    >>> crt([(2, 3), (3, 5)])
    (8, 15)
    """
    x, m = 0, 1
    for r, n in residues:
        if n <= 0:
            raise ValueError("modulus must be positive")
        g, u, _ = xgcd(m, n)
        if (r - x) % g != 0:
            raise ValueError("inconsistent congruences")
        lcm = m // g * n
        x = (x + (r - x) // g * u % (n // g) * m) % lcm
        m = lcm
    return x % m, m


def valuation(n: int, p: int) -> int:
    """The exponent of the prime p in n (n nonzero).

    >>> valuation(48, 2)
    4
    """
    if n == 0:
        raise ValueError("valuation of zero is undefined")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_squarefree(n: int, budget: int | None = None) -> bool:
    return all(e == 1 for e in factor(abs(n), budget).values())
