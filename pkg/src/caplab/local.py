"""Closed-form capacities over a local ring.

Over a discrete valuation ring (or its Artinian quotients) a finitely
generated module is a free part plus cyclic torsion summands, so each
capacity reduces to floor-quotients of summand counts:

* surjective capacity: for every depth k the target's generators at
  depth k must be covered, counting free summands as arbitrarily deep;
* splitting capacity: Krull-Schmidt — each indecomposable type of the
  target must appear in the source with at least t-fold multiplicity;
* injective capacity: free only embeds in free and torsion only in
  torsion, with depth-k socle counts dominating.

These formulas are certified against the brute-force engines in
``oracle``; the test suite runs the exhaustive grid before trusting
anything here.
"""

from __future__ import annotations

from collections import Counter

from .modules import INFINITY, Capacity, LocalModule


def _check_primes(a: LocalModule, b: LocalModule) -> None:
    if a.prime is not None and b.prime is not None and a.prime != b.prime:
        raise ValueError(f"modules are localized at different primes: {a.prime!r} vs {b.prime!r}")


def _count(m: LocalModule, k: int) -> int:
    """c(k): summands surviving to depth k, free summands included."""
    return sum(1 for e in m.exps if e >= k) + m.free_rank


def sur_local(a: LocalModule, b: LocalModule) -> Capacity:
    """Largest t with a surjection from a onto b^t (infinite for b = 0)."""
    _check_primes(a, b)
    if b.is_zero():
        return INFINITY
    best: Capacity = INFINITY
    for k in range(1, max(b.exps, default=0) + 1):
        cb = _count(b, k)
        best = min(best, _count(a, k) // cb)
    if b.free_rank > 0:
        best = min(best, a.free_rank // b.free_rank)
    return best


def spl_local(a: LocalModule, b: LocalModule) -> Capacity:
    """Largest t with b^t a direct summand of a (infinite for b = 0)."""
    _check_primes(a, b)
    if b.is_zero():
        return INFINITY
    mult_a = Counter(a.exps)
    best: Capacity = INFINITY
    for e, mb in Counter(b.exps).items():
        best = min(best, mult_a[e] // mb)
    if b.free_rank > 0:
        best = min(best, a.free_rank // b.free_rank)
    return best


def inj_local(a: LocalModule, b: LocalModule) -> Capacity:
    """Largest t with an embedding of b^t into a (infinite for b = 0)."""
    _check_primes(a, b)
    if b.is_zero():
        return INFINITY
    best: Capacity = INFINITY
    if b.free_rank > 0:
        best = min(best, a.free_rank // b.free_rank)
    for k in range(1, max(b.exps, default=0) + 1):
        cb = sum(1 for e in b.exps if e >= k)
        if cb > 0:
            ca = sum(1 for e in a.exps if e >= k)
            best = min(best, ca // cb)
    return best


_LOCAL = {"sur": sur_local, "spl": spl_local, "inj": inj_local}


def local_capacity(kind: str, a: LocalModule, b: LocalModule) -> Capacity:
    if kind not in _LOCAL:
        raise ValueError(f"unknown capacity kind {kind!r}")
    return _LOCAL[kind](a, b)
