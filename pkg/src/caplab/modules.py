"""Finitely generated modules over the ring backends.

A module is stored in structure-theorem normal form: a free rank, a
Steinitz class (the class of the last projective summand, trivial in
principal ideal rings), and a chain of torsion invariant ideals ordered
with the largest quotient first, so each ideal divides the one before
it.  Localizations are recorded as a free rank plus a descending list
of exponents at the chosen prime.

Capacity values live in the naturals extended by infinity; infinity is
``math.inf`` and serializes as the string "infinity".
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import rings as R

INFINITY = math.inf

Capacity = float  # natural numbers plus INFINITY


def capacity_to_json(value: Capacity):
    if value == INFINITY:
        return "infinity"
    return int(value)


def capacity_from_json(value) -> Capacity:
    if value == "infinity":
        return INFINITY
    if isinstance(value, int) and value >= 0:
        return value
    raise ValueError(f"capacity: expected a nonnegative integer or 'infinity', got {value!r}")


def ideal_divides(ring: R.Ring, i: R.Ideal, j: R.Ideal) -> bool:
    """Whether i divides j, i.e. j is contained in i."""
    if isinstance(i, R.ZIdeal):
        return j.g % i.g == 0
    if isinstance(i, R.ZModIdeal):
        return j.d % i.d == 0
    fi = R.ideal_factor(ring, i)
    fj = R.ideal_factor(ring, j)
    return all(fj.get(p, 0) >= e for p, e in fi.items())


@dataclass(frozen=True)
class FGModule:
    """A finitely generated module in structure-theorem form."""

    ring: R.Ring
    rank: int
    steinitz: R.ClassElement
    torsion: tuple[R.Ideal, ...]

    def __post_init__(self) -> None:
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")
        ideal_type = {
            R.ZRing: R.ZIdeal,
            R.ZModRing: R.ZModIdeal,
            R.QuadraticRing: R.QuadIdeal,
            R.AbstractRing: R.AbstractIdeal,
        }[type(self.ring)]
        for k, i in enumerate(self.torsion):
            if not isinstance(i, ideal_type):
                raise ValueError(f"torsion[{k}]: ideal type does not match the ring")
            if isinstance(i, R.ZModIdeal) and i.n != self.ring.n:
                raise ValueError(f"torsion[{k}]: modulus does not match the ring")
            if isinstance(i, R.QuadIdeal) and i.D != self.ring.D:
                raise ValueError(f"torsion[{k}]: discriminant does not match the ring")
            if R.ideal_is_unit(i):
                raise ValueError(f"torsion[{k}]: the unit ideal gives a zero factor")
            if isinstance(i, R.ZModIdeal) and i.d == i.n:
                raise ValueError(f"torsion[{k}]: the zero ideal gives a free factor; use rank")
            if isinstance(i, R.AbstractIdeal):
                for name, _ in i.factors:
                    self.ring.prime_vector(name)
        for k in range(len(self.torsion) - 1):
            if not ideal_divides(self.ring, self.torsion[k + 1], self.torsion[k]):
                raise ValueError(
                    f"torsion[{k + 1}] must divide torsion[{k}] (largest factor first)"
                )
        ident = R.identity_class(self.ring)
        if type(self.steinitz) is not type(ident):
            raise ValueError("steinitz class type does not match the ring")
        if self.rank == 0 and not R.class_eq(self.steinitz, ident):
            raise ValueError("a rank zero module has no Steinitz class")


def zero_module(ring: R.Ring) -> FGModule:
    return FGModule(ring, 0, R.identity_class(ring), ())


def is_zero(m: FGModule) -> bool:
    return m.rank == 0 and not m.torsion


def z_module(rank: int, divisors=()) -> FGModule:
    """Convenience constructor over Z from plain invariant factors.

    >>> z_module(1, [12, 2]).torsion
    (ZIdeal(g=12), ZIdeal(g=2))
    """
    return FGModule(
        R.ZRing(), rank, R.TrivialClass(), tuple(R.ZIdeal(d) for d in divisors)
    )


def zmod_module(n: int, rank: int, divisors=()) -> FGModule:
    ring = R.ZModRing(n)
    return FGModule(
        ring, rank, R.TrivialClass(), tuple(R.ZModIdeal(n, d) for d in divisors)
    )


# ---------------------------------------------------------------------------
# localization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LocalModule:
    """A module over a localized ring: free rank plus torsion exponents."""

    free_rank: int
    exps: tuple[int, ...]
    prime: R.PrimeId | None = None

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        if any(e < 1 for e in self.exps):
            raise ValueError("exponents must be positive")
        if tuple(sorted(self.exps, reverse=True)) != self.exps:
            raise ValueError("exponents must be sorted descending")

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.exps


def local_module_to_json(m: LocalModule) -> dict:
    return {"free": m.free_rank, "exps": list(m.exps)}


def local_module_from_json(data) -> LocalModule:
    if not isinstance(data, dict):
        raise ValueError("local module: expected an object")
    free = data.get("free", 0)
    exps = data.get("exps", [])
    if not isinstance(free, int) or not isinstance(exps, list):
        raise ValueError("local module: 'free' must be an int and 'exps' a list")
    return LocalModule(free, tuple(sorted(exps, reverse=True)))


def _validate_prime(ring: R.Ring, prime: R.PrimeId) -> None:
    if prime is R.ZERO_PRIME:
        if isinstance(ring, R.ZModRing):
            raise ValueError("the zero ideal is not prime in a quotient ring")
        return
    if isinstance(ring, (R.ZRing, R.ZModRing)):
        if not isinstance(prime, int) or not R.is_prime(prime):
            raise ValueError(f"{prime!r} is not a prime of the ring")
        if isinstance(ring, R.ZModRing) and ring.n % prime != 0:
            raise ValueError(f"{prime} does not divide the modulus {ring.n}")
        return
    if isinstance(ring, R.QuadraticRing):
        if not isinstance(prime, R.QuadPrime) or prime not in R.primes_above(ring.D, prime.p):
            raise ValueError(f"{prime!r} is not a prime of this quadratic order")
        return
    try:
        ring.prime_vector(prime)
    except (KeyError, TypeError):
        raise ValueError(f"{prime!r} is not a prime of the ring") from None


def localize(m: FGModule, prime: R.PrimeId) -> LocalModule:
    """The module over the local ring at the given prime.

    >>> localize(z_module(1, [4]), 2)
    LocalModule(free_rank=1, exps=(2,), prime=2)
    >>> localize(z_module(0, [12, 2]), 3)
    LocalModule(free_rank=0, exps=(1,), prime=3)
    """
    _validate_prime(m.ring, prime)
    if prime is R.ZERO_PRIME:
        return LocalModule(m.rank, (), prime)
    vals = [R.ideal_valuation(m.ring, i, prime) for i in m.torsion]
    exps = [v for v in vals if v > 0]
    if isinstance(m.ring, R.ZModRing):
        # free summands of Z/n localize to full-exponent torsion
        exps.extend([R.valuation(m.ring.n, prime)] * m.rank)
        return LocalModule(0, tuple(sorted(exps, reverse=True)), prime)
    return LocalModule(m.rank, tuple(sorted(exps, reverse=True)), prime)


def ass_of(m: FGModule, include_zero: bool = False) -> list[R.PrimeId]:
    """Associated primes: divisors of the torsion, plus the zero ideal
    when requested and the free rank is positive."""
    out: list[R.PrimeId] = []
    if include_zero and m.rank >= 1 and not isinstance(m.ring, R.ZModRing):
        out.append(R.ZERO_PRIME)
    if m.torsion:
        primes = R.ideal_factor(m.ring, m.torsion[0])
        out.extend(sorted(primes, key=R.prime_key))
    return out


def support_dimension(m: FGModule) -> int:
    """Krull dimension of the support; modules over Z/n are 0-dimensional."""
    if is_zero(m):
        raise ValueError("the zero module has empty support")
    if m.rank >= 1 and not isinstance(m.ring, R.ZModRing):
        return 1
    return 0


def point_dimension(prime: R.PrimeId) -> int:
    return 1 if prime is R.ZERO_PRIME else 0


# ---------------------------------------------------------------------------
# elementary divisors and direct sums
# ---------------------------------------------------------------------------


def to_elementary_divisors(m: FGModule) -> dict[R.PrimeId, tuple[int, ...]]:
    """Per-prime descending exponent lists of the torsion part.

    >>> to_elementary_divisors(z_module(0, [6]))
    {2: (1,), 3: (1,)}
    """
    acc: dict[R.PrimeId, list[int]] = {}
    for i in m.torsion:
        for p, e in R.ideal_factor(m.ring, i).items():
            acc.setdefault(p, []).append(e)
    return {
        p: tuple(sorted(exps, reverse=True))
        for p, exps in sorted(acc.items(), key=lambda kv: R.prime_key(kv[0]))
    }


def from_elementary_divisors(
    ring: R.Ring,
    divisors: dict[R.PrimeId, tuple[int, ...]],
    rank: int = 0,
    steinitz: R.ClassElement | None = None,
) -> FGModule:
    """Rebuild a module from per-prime exponents (order within a prime
    does not matter; exponents are matched largest with largest)."""
    cleaned = {
        p: sorted((e for e in exps if e > 0), reverse=True)
        for p, exps in divisors.items()
    }
    cleaned = {p: exps for p, exps in cleaned.items() if exps}
    width = max((len(v) for v in cleaned.values()), default=0)
    torsion = []
    for k in range(width):
        fac = {p: exps[k] for p, exps in cleaned.items() if k < len(exps)}
        ideal = R.ideal_from_factors(ring, fac)
        if isinstance(ideal, R.ZModIdeal) and ideal.d == ideal.n:
            # full exponent at every prime of n: the factor is Z/n itself
            rank += 1
            continue
        torsion.append(ideal)
    if steinitz is None:
        steinitz = R.identity_class(ring)
    return FGModule(ring, rank, steinitz, tuple(torsion))


def direct_sum(m: FGModule, n: FGModule) -> FGModule:
    if m.ring != n.ring:
        raise ValueError("modules live over different rings")
    merged: dict[R.PrimeId, list[int]] = {}
    for part in (to_elementary_divisors(m), to_elementary_divisors(n)):
        for p, exps in part.items():
            merged.setdefault(p, []).extend(exps)
    st = R.class_compose(m.steinitz, n.steinitz)
    return from_elementary_divisors(
        m.ring,
        {p: tuple(v) for p, v in merged.items()},
        rank=m.rank + n.rank,
        steinitz=st if m.rank + n.rank >= 1 else None,
    )


def module_power(n: FGModule, t: int) -> FGModule:
    """The direct sum of t copies of n."""
    if t < 0:
        raise ValueError("powers must be nonnegative")
    if t == 0:
        return zero_module(n.ring)
    ed = {p: tuple(e for e in exps for _ in range(t))
          for p, exps in to_elementary_divisors(n).items()}
    st = R.class_pow(n.steinitz, t) if n.rank * t >= 1 else None
    return from_elementary_divisors(n.ring, ed, rank=n.rank * t, steinitz=st)


def projective_module(ring: R.Ring, classes) -> FGModule:
    """Free-plus-ideal module with the given list of summand classes."""
    classes = list(classes)
    st = R.identity_class(ring)
    for c in classes:
        st = R.class_compose(st, c)
    return FGModule(ring, len(classes), st if classes else R.identity_class(ring), ())


def iso_check(m: FGModule, n: FGModule) -> bool:
    """Whether two normal forms present isomorphic modules."""
    if m.ring != n.ring or m.rank != n.rank:
        return False
    if len(m.torsion) != len(n.torsion):
        return False
    if not all(R.ideal_eq(i, j) for i, j in zip(m.torsion, n.torsion)):
        return False
    if m.rank >= 1 and not R.class_eq(m.steinitz, n.steinitz):
        return False
    return True


def mu_torsion(m: FGModule) -> int:
    """Minimal generator count of the torsion part (its chain length)."""
    return len(m.torsion)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def _steinitz_to_json(st: R.ClassElement):
    if isinstance(st, R.TrivialClass):
        return None
    if isinstance(st, R.QuadClass):
        return list(st.form)
    return list(st.vector)


def _torsion_to_json(ring: R.Ring, i: R.Ideal):
    if isinstance(i, R.ZIdeal):
        return i.g
    if isinstance(i, R.ZModIdeal):
        return i.d
    return {"factors": {R.prime_key(p): e for p, e in R.ideal_factor(ring, i).items()}}


def module_to_json(m: FGModule) -> dict:
    return {
        "ring": R.ring_to_json(m.ring),
        "rank": m.rank,
        "steinitz": _steinitz_to_json(m.steinitz),
        "torsion": [_torsion_to_json(m.ring, i) for i in m.torsion],
    }


def _steinitz_from_json(ring: R.Ring, data) -> R.ClassElement:
    if data is None:
        return R.identity_class(ring)
    if isinstance(ring, R.QuadraticRing):
        if not (isinstance(data, list) and len(data) == 3):
            raise ValueError("steinitz: expected a form [a, b, c]")
        return R.QuadClass(ring.D, R.reduce_form(ring.D, tuple(data)))
    if isinstance(ring, R.AbstractRing):
        if not isinstance(data, list) or len(data) != len(ring.class_group):
            raise ValueError("steinitz: expected an exponent vector matching the class group")
        vec = tuple(v % d for v, d in zip(data, ring.class_group))
        return R.AbstractClass(ring.class_group, vec)
    raise ValueError("steinitz: must be null over a principal ideal ring")


def _torsion_from_json(ring: R.Ring, data, where: str) -> R.Ideal:
    if isinstance(ring, (R.ZRing, R.ZModRing)) and isinstance(data, int):
        if isinstance(ring, R.ZRing):
            if data < 2:
                raise ValueError(f"{where}: invariant factor must be at least 2")
            return R.ZIdeal(data)
        if data < 2 or data >= ring.n or ring.n % data != 0:
            raise ValueError(f"{where}: expected a proper divisor of {ring.n}")
        return R.ZModIdeal(ring.n, data)
    if isinstance(data, dict) and "quad" in data:
        if not isinstance(ring, R.QuadraticRing):
            raise ValueError(f"{where}: 'quad' ideals need a quadratic ring")
        spec = data["quad"]
        if not (isinstance(spec, list) and len(spec) == 3
                and all(isinstance(x, int) for x in spec)):
            raise ValueError(f"{where}: 'quad' must be three integers [g, a, b]")
        g, a, b = spec
        if a < 1:
            raise ValueError(f"{where}: 'quad' needs a >= 1")
        return R.QuadIdeal(ring.D, g, a, b % a)
    if isinstance(data, dict) and "factors" in data:
        fac = data["factors"]
        if not isinstance(fac, dict):
            raise ValueError(f"{where}: 'factors' must be an object")
        parsed: dict[R.PrimeId, int] = {}
        for key, e in fac.items():
            if not isinstance(e, int) or e < 1:
                raise ValueError(f"{where}: exponent of {key!r} must be a positive integer")
            parsed[R.parse_prime_key(ring, key)] = e
        return R.ideal_from_factors(ring, parsed)
    raise ValueError(f"{where}: unrecognized torsion entry {data!r}")


def module_from_json(data) -> FGModule:
    if not isinstance(data, dict):
        raise ValueError("module: expected an object")
    if "ring" not in data:
        raise ValueError("module: missing 'ring'")
    ring = R.ring_from_json(data["ring"])
    rank = data.get("rank", 0)
    if not isinstance(rank, int) or rank < 0:
        raise ValueError("module.rank: expected a nonnegative integer")
    steinitz = _steinitz_from_json(ring, data.get("steinitz"))
    torsion_data = data.get("torsion", [])
    if not isinstance(torsion_data, list):
        raise ValueError("module.torsion: expected a list")
    torsion = tuple(
        _torsion_from_json(ring, entry, f"module.torsion[{k}]")
        for k, entry in enumerate(torsion_data)
    )
    return FGModule(ring, rank, steinitz, torsion)
