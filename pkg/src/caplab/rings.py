"""Ring backends: Z, Z/n, imaginary quadratic orders, abstract Dedekind data.

Each backend supplies the same small vocabulary the module layer needs:
prime ideals with printable keys, nonzero ideals with exact arithmetic
(product, norm, factorization, valuation), and ideal classes with the
group operations used for Steinitz bookkeeping.

The quadratic backend works with the maximal order of Q(sqrt(D)) for a
fundamental discriminant D < 0.  Ideals are stored in Hermite normal
form g*(a*Z + (b + w)*Z) where w = sqrt(D)/2 or (1 + sqrt(D))/2, and
ideal classes are reduced binary quadratic forms under Gauss
composition.  Everything is integer arithmetic; nothing is numeric.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache

from .numtheory import factor, is_prime, is_squarefree, valuation, xgcd

# ---------------------------------------------------------------------------
# ring descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZRing:
    """The ring of rational integers."""

    @property
    def kind(self) -> str:
        return "Z"


@dataclass(frozen=True)
class ZModRing:
    """The quotient ring Z/n for a composite or prime modulus n >= 2."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("modulus must be at least 2")

    @property
    def kind(self) -> str:
        return "ZmodN"


@dataclass(frozen=True)
class QuadraticRing:
    """Maximal order of the imaginary quadratic field with discriminant D."""

    D: int

    def __post_init__(self) -> None:
        D = self.D
        if D >= 0:
            raise ValueError("discriminant must be negative")
        r = D % 4
        if r == 1:
            if not is_squarefree(-D):
                raise ValueError(f"{D} is not a fundamental discriminant")
        elif r == 0:
            m = D // 4
            if m % 4 not in (2, 3) or not is_squarefree(-m):
                raise ValueError(f"{D} is not a fundamental discriminant")
        else:
            raise ValueError("discriminant must be 0 or 1 mod 4")

    @property
    def kind(self) -> str:
        return "quadratic"


_NAME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class AbstractRing:
    """A Dedekind domain given by its class group and named prime classes.

    ``class_group`` lists cyclic orders; ``primes`` maps a prime name to
    its class written as an exponent vector against those cyclic factors.
    No norms or residue data exist here — only what localization and
    Steinitz arithmetic need.
    """

    class_group: tuple[int, ...]
    primes: tuple[tuple[str, tuple[int, ...]], ...]

    def __post_init__(self) -> None:
        for d in self.class_group:
            if d < 2:
                raise ValueError("class group orders must be at least 2")
        seen = set()
        for name, vec in self.primes:
            if not _NAME_RE.match(name):
                raise ValueError(f"bad prime name {name!r}")
            if name in seen:
                raise ValueError(f"duplicate prime name {name!r}")
            seen.add(name)
            if len(vec) != len(self.class_group):
                raise ValueError(f"class vector of {name!r} has wrong length")
            if any(not (0 <= e < d) for e, d in zip(vec, self.class_group)):
                raise ValueError(f"class vector of {name!r} out of range")

    @property
    def kind(self) -> str:
        return "abstract"

    def prime_vector(self, name: str) -> tuple[int, ...]:
        for n, vec in self.primes:
            if n == name:
                return vec
        raise KeyError(name)


Ring = ZRing | ZModRing | QuadraticRing | AbstractRing


def ring_to_json(ring: Ring) -> dict:
    if isinstance(ring, ZRing):
        return {"kind": "Z"}
    if isinstance(ring, ZModRing):
        return {"kind": "ZmodN", "n": ring.n}
    if isinstance(ring, QuadraticRing):
        return {"kind": "quadratic", "D": ring.D}
    return {
        "kind": "abstract",
        "class_group": list(ring.class_group),
        "primes": {name: list(vec) for name, vec in ring.primes},
    }


def ring_from_json(data: dict) -> Ring:
    if not isinstance(data, dict) or "kind" not in data:
        raise ValueError("ring: expected an object with a 'kind' field")
    kind = data["kind"]
    if kind == "Z":
        return ZRing()
    if kind == "ZmodN":
        if "n" not in data or not isinstance(data["n"], int):
            raise ValueError("ring: ZmodN needs an integer field 'n'")
        return ZModRing(data["n"])
    if kind == "quadratic":
        if "D" not in data or not isinstance(data["D"], int):
            raise ValueError("ring: quadratic needs an integer field 'D'")
        return QuadraticRing(data["D"])
    if kind == "abstract":
        orders = data.get("class_group")
        primes = data.get("primes")
        if not isinstance(orders, list) or not isinstance(primes, dict):
            raise ValueError("ring: abstract needs 'class_group' and 'primes'")
        return AbstractRing(
            tuple(orders),
            tuple(sorted((name, tuple(vec)) for name, vec in primes.items())),
        )
    raise ValueError(f"ring: unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# prime identifiers
# ---------------------------------------------------------------------------


class _ZeroPrime:
    """The zero ideal, viewed as the generic point of Spec."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ZERO_PRIME"


ZERO_PRIME = _ZeroPrime()


@dataclass(frozen=True)
class QuadPrime:
    """A maximal ideal of a quadratic order: (p) or (p, root + w)."""

    p: int
    split_kind: str  # "split" | "ramified" | "inert"
    root: int | None

    def __post_init__(self) -> None:
        if self.split_kind not in ("split", "ramified", "inert"):
            raise ValueError(f"bad split kind {self.split_kind!r}")
        if (self.root is None) != (self.split_kind == "inert"):
            raise ValueError("root must be present exactly when p is not inert")


PrimeId = int | str | QuadPrime | _ZeroPrime


def prime_key(prime: PrimeId) -> str:
    """Printable key for a prime, used in JSON maps and reports."""
    if prime is ZERO_PRIME:
        return "(0)"
    if isinstance(prime, QuadPrime):
        if prime.split_kind == "inert":
            return f"({prime.p})"
        return f"({prime.p},{prime.root}+w)"
    return str(prime)


_INERT_RE = re.compile(r"^\((\d+)\)$")
_SPLIT_RE = re.compile(r"^\((\d+),(\d+)\+w\)$")


def parse_prime_key(ring: Ring, key: str) -> PrimeId:
    """Inverse of prime_key, validated against the ring."""
    if key == "(0)":
        if isinstance(ring, ZModRing):
            raise ValueError("the zero ideal is not prime in a quotient ring")
        return ZERO_PRIME
    if isinstance(ring, (ZRing, ZModRing)):
        if not key.isdigit():
            raise ValueError(f"prime key {key!r}: expected a rational prime")
        p = int(key)
        if not is_prime(p):
            raise ValueError(f"prime key {key!r}: {p} is not prime")
        if isinstance(ring, ZModRing) and ring.n % p != 0:
            raise ValueError(f"prime key {key!r}: {p} does not divide {ring.n}")
        return p
    if isinstance(ring, QuadraticRing):
        m = _INERT_RE.match(key)
        if m:
            p = int(m.group(1))
            primes = primes_above(ring.D, p)
            if primes[0].split_kind != "inert":
                raise ValueError(f"prime key {key!r}: {p} is not inert")
            return primes[0]
        m = _SPLIT_RE.match(key)
        if m:
            p, root = int(m.group(1)), int(m.group(2))
            for q in primes_above(ring.D, p):
                if q.root == root:
                    return q
            raise ValueError(f"prime key {key!r}: {root} is not a valid root mod {p}")
        raise ValueError(f"prime key {key!r}: unrecognized format")
    if not _NAME_RE.match(key):
        raise ValueError(f"prime key {key!r}: unrecognized format")
    try:
        ring.prime_vector(key)
    except KeyError:
        raise ValueError(f"prime key {key!r}: unknown prime name") from None
    return key


# ---------------------------------------------------------------------------
# quadratic integer arithmetic in the basis (1, w)
# ---------------------------------------------------------------------------


def _omega_parts(D: int) -> tuple[int, int]:
    """(t, c) with w^2 = t*w + c; t is also the trace of w."""
    t = D % 2
    return t, (D - t) // 4


def norm_bw(D: int, b: int) -> int:
    """Norm of b + w."""
    t, c = _omega_parts(D)
    return b * b + t * b - c


def _elt_mul(D: int, u: tuple[int, int], v: tuple[int, int]) -> tuple[int, int]:
    t, c = _omega_parts(D)
    x1, y1 = u
    x2, y2 = v
    return (x1 * x2 + y1 * y2 * c, x1 * y2 + x2 * y1 + y1 * y2 * t)


# ---------------------------------------------------------------------------
# ideals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZIdeal:
    """The ideal (g) of Z, g >= 1."""

    g: int

    def __post_init__(self) -> None:
        if self.g < 1:
            raise ValueError("only nonzero ideals are represented")


@dataclass(frozen=True)
class ZModIdeal:
    """The ideal (d) of Z/n, with d a positive divisor of n."""

    n: int
    d: int

    def __post_init__(self) -> None:
        if self.d < 1 or self.n % self.d != 0:
            raise ValueError("generator must be a positive divisor of the modulus")


@dataclass(frozen=True)
class QuadIdeal:
    """Nonzero ideal g*(a*Z + (b + w)*Z) of the order with discriminant D.

    Stored in canonical form: g >= 1, a >= 1, 0 <= b < a, and a divides
    the norm of b + w.  The norm of the ideal is g*g*a.
    """

    D: int
    g: int
    a: int
    b: int

    def __post_init__(self) -> None:
        if self.g < 1 or self.a < 1:
            raise ValueError("only nonzero ideals are represented")
        if not (0 <= self.b < self.a):
            raise ValueError("b must be reduced mod a")
        if norm_bw(self.D, self.b) % self.a != 0:
            raise ValueError("lattice is not an ideal: a must divide N(b + w)")


@dataclass(frozen=True)
class AbstractIdeal:
    """A formal product of named primes with positive exponents."""

    factors: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        names = [n for n, _ in self.factors]
        if names != sorted(names):
            raise ValueError("factors must be sorted by prime name")
        if len(set(names)) != len(names):
            raise ValueError("duplicate prime in factorization")
        if any(e < 1 for _, e in self.factors):
            raise ValueError("exponents must be positive")


Ideal = ZIdeal | ZModIdeal | QuadIdeal | AbstractIdeal


def _lattice_canon(D: int, gens: list[tuple[int, int]]) -> tuple[int, int, int]:
    """Canonical (g, a, b) of the full lattice spanned by x + y*w pairs.

    Row-reduces the generators to the basis [g*a, g*(b + w)]; the final
    divisibility of a and b by the w-content g holds exactly when the
    lattice is stable under multiplication by w, so it is asserted.
    """
    pure: list[int] = []
    B, G = 0, 0
    for x, y in gens:
        if y == 0:
            if x != 0:
                pure.append(x)
            continue
        if G == 0:
            B, G = x, y
            continue
        d, u, v = xgcd(G, y)
        pure.append((y // d) * B - (G // d) * x)
        B, G = u * B + v * x, d
    if G < 0:
        B, G = -B, -G
    if G == 0:
        raise ValueError("lattice is not of full rank")
    A = 0
    for x in pure:
        A = math.gcd(A, x)
    if A == 0:
        raise ValueError("lattice is not of full rank")
    assert A % G == 0 and B % G == 0, "lattice is not stable under w"
    a = A // G
    b = (B // G) % a
    return G, a, b


def quad_ideal_from_lattice(D: int, gens: list[tuple[int, int]]) -> QuadIdeal:
    g, a, b = _lattice_canon(D, gens)
    return QuadIdeal(D, g, a, b)


def ideal_one(ring: Ring) -> Ideal:
    if isinstance(ring, ZRing):
        return ZIdeal(1)
    if isinstance(ring, ZModRing):
        return ZModIdeal(ring.n, 1)
    if isinstance(ring, QuadraticRing):
        return QuadIdeal(ring.D, 1, 1, 0)
    return AbstractIdeal(())


def ideal_mul(i: Ideal, j: Ideal) -> Ideal:
    if isinstance(i, ZIdeal) and isinstance(j, ZIdeal):
        return ZIdeal(i.g * j.g)
    if isinstance(i, ZModIdeal) and isinstance(j, ZModIdeal):
        if i.n != j.n:
            raise ValueError("ideals live in different quotient rings")
        return ZModIdeal(i.n, math.gcd(i.d * j.d, i.n))
    if isinstance(i, QuadIdeal) and isinstance(j, QuadIdeal):
        if i.D != j.D:
            raise ValueError("ideals live in different quadratic orders")
        D = i.D
        t, c = _omega_parts(D)
        gens = [
            (i.a * j.a, 0),
            (i.a * j.b, i.a),
            (j.a * i.b, j.a),
            (i.b * j.b + c, i.b + j.b + t),
        ]
        g, a, b = _lattice_canon(D, gens)
        return QuadIdeal(D, i.g * j.g * g, a, b)
    if isinstance(i, AbstractIdeal) and isinstance(j, AbstractIdeal):
        merged: dict[str, int] = dict(i.factors)
        for name, e in j.factors:
            merged[name] = merged.get(name, 0) + e
        return AbstractIdeal(tuple(sorted(merged.items())))
    raise TypeError("ideal types do not match")


def ideal_pow(i: Ideal, k: int) -> Ideal:
    if k < 0:
        raise ValueError("negative ideal powers are not represented")
    ring_one = {
        ZIdeal: lambda: ZIdeal(1),
        ZModIdeal: lambda: ZModIdeal(i.n, 1),
        QuadIdeal: lambda: QuadIdeal(i.D, 1, 1, 0),
        AbstractIdeal: lambda: AbstractIdeal(()),
    }[type(i)]
    out: Ideal = ring_one()
    for _ in range(k):
        out = ideal_mul(out, i)
    return out


def ideal_eq(i: Ideal, j: Ideal) -> bool:
    if type(i) is not type(j):
        raise TypeError("ideal types do not match")
    return i == j


def ideal_norm(i: Ideal) -> int:
    """Index of the ideal in its ring."""
    if isinstance(i, ZIdeal):
        return i.g
    if isinstance(i, ZModIdeal):
        return i.d
    if isinstance(i, QuadIdeal):
        return i.g * i.g * i.a
    raise ValueError("abstract ideals carry no norm")


def ideal_is_unit(i: Ideal) -> bool:
    if isinstance(i, AbstractIdeal):
        return not i.factors
    return ideal_norm(i) == 1


# ---------------------------------------------------------------------------
# splitting of rational primes and ideal factorization
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def primes_above(D: int, p: int) -> tuple[QuadPrime, ...]:
    """The primes of the order of discriminant D over the rational prime p."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    roots = [b for b in range(p) if norm_bw(D, b) % p == 0]
    if not roots:
        return (QuadPrime(p, "inert", None),)
    if len(roots) == 1:
        return (QuadPrime(p, "ramified", roots[0]),)
    return tuple(QuadPrime(p, "split", r) for r in roots)


def quad_prime_conjugate(q: QuadPrime, D: int) -> QuadPrime:
    if q.split_kind != "split":
        return q
    t, _ = _omega_parts(D)
    other = (-t - q.root) % q.p
    return QuadPrime(q.p, "split", other)


def ideal_from_prime(ring: Ring, prime: PrimeId) -> Ideal:
    if prime is ZERO_PRIME:
        raise ValueError("the zero ideal has no finite presentation here")
    if isinstance(ring, ZRing):
        return ZIdeal(prime)
    if isinstance(ring, ZModRing):
        if ring.n % prime != 0:
            raise ValueError(f"{prime} does not divide the modulus {ring.n}")
        return ZModIdeal(ring.n, prime)
    if isinstance(ring, QuadraticRing):
        assert isinstance(prime, QuadPrime)
        if prime.split_kind == "inert":
            return QuadIdeal(ring.D, prime.p, 1, 0)
        return QuadIdeal(ring.D, 1, prime.p, prime.root)
    assert isinstance(prime, str)
    return AbstractIdeal(((prime, 1),))


def _quad_divide_out(i: QuadIdeal, q: QuadPrime) -> QuadIdeal | None:
    """i / P when P divides i, else None."""
    D = i.D
    conj = quad_prime_conjugate(q, D)
    k = ideal_mul(i, ideal_from_prime(QuadraticRing(D), conj))
    if k.g % q.p != 0:
        return None
    return QuadIdeal(D, k.g // q.p, k.a, k.b)


def ideal_factor(ring: Ring, i: Ideal) -> dict[PrimeId, int]:
    """Prime factorization of a nonzero ideal, keyed by prime identifiers."""
    if isinstance(i, ZIdeal):
        return dict(factor(i.g)) if i.g > 1 else {}
    if isinstance(i, ZModIdeal):
        return dict(factor(i.d)) if i.d > 1 else {}
    if isinstance(i, AbstractIdeal):
        return dict(i.factors)
    assert isinstance(i, QuadIdeal)
    out: dict[PrimeId, int] = {}
    n = ideal_norm(i)
    current = i
    for p, np_ in factor(n).items():
        used = 0
        for q in primes_above(i.D, p):
            if q.split_kind == "inert":
                # inert primes cannot divide a (a divides N(b + w), which
                # has no root mod p), so the valuation sits in the content
                assert current.a % p != 0
                v = valuation(current.g, p)
                if v:
                    probe = QuadIdeal(i.D, current.g // p ** v, current.a, current.b)
            else:
                v = 0
                probe = current
                while True:
                    nxt = _quad_divide_out(probe, q)
                    if nxt is None:
                        break
                    probe = nxt
                    v += 1
                    assert v <= np_, "valuation exceeded the norm bound"
            if v:
                out[q] = v
                current = probe
                used += v * (2 if q.split_kind == "inert" else 1)
        assert used == np_, "norm does not match the extracted valuations"
    assert ideal_norm(current) == 1
    return out


def ideal_valuation(ring: Ring, i: Ideal, prime: PrimeId) -> int:
    if prime is ZERO_PRIME:
        return 0
    if isinstance(i, (ZIdeal, ZModIdeal)):
        g = i.g if isinstance(i, ZIdeal) else i.d
        return valuation(g, prime)
    if isinstance(i, AbstractIdeal):
        return dict(i.factors).get(prime, 0)
    return ideal_factor(ring, i).get(prime, 0)


def ideal_from_factors(ring: Ring, factors: dict[PrimeId, int]) -> Ideal:
    out = ideal_one(ring)
    for prime, e in factors.items():
        out = ideal_mul(out, ideal_pow(ideal_from_prime(ring, prime), e))
    return out


# ---------------------------------------------------------------------------
# binary quadratic forms and ideal classes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TrivialClass:
    """The class of any ideal in a principal ideal ring."""


@dataclass(frozen=True)
class QuadClass:
    """An ideal class of a quadratic order as a reduced form (a, b, c)."""

    D: int
    form: tuple[int, int, int]

    def __post_init__(self) -> None:
        a, b, c = self.form
        if b * b - 4 * a * c != self.D:
            raise ValueError("form discriminant does not match the ring")
        if reduce_form(self.D, self.form) != self.form:
            raise ValueError("form is not reduced")


@dataclass(frozen=True)
class AbstractClass:
    """An element of a product of cyclic groups, as an exponent vector."""

    orders: tuple[int, ...]
    vector: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.orders) != len(self.vector):
            raise ValueError("vector length does not match the class group")
        if any(not (0 <= v < d) for v, d in zip(self.vector, self.orders)):
            raise ValueError("vector entries out of range")


ClassElement = TrivialClass | QuadClass | AbstractClass


def reduce_form(D: int, form: tuple[int, int, int]) -> tuple[int, int, int]:
    """The reduced representative of a positive definite form's class."""
    a, b, c = form
    if a <= 0 or b * b - 4 * a * c != D:
        raise ValueError("not a positive definite form of this discriminant")
    while True:
        if b > a or b <= -a:
            b = b % (2 * a)
            if b > a:
                b -= 2 * a
            c = (b * b - D) // (4 * a)
        if a > c:
            a, b, c = c, -b, a
            continue
        break
    if b < 0 and a == c:
        b = -b
    return (a, b, c)


def principal_form(D: int) -> tuple[int, int, int]:
    t = D % 2
    return (1, t, (t * t - D) // 4)


def compose_forms(D: int, f1: tuple[int, int, int], f2: tuple[int, int, int]) -> tuple[int, int, int]:
    """Gauss composition of two forms of discriminant D, reduced."""
    a1, b1, _ = f1
    a2, b2, _ = f2
    s = (b1 + b2) // 2
    d1, u1, v1 = xgcd(a1, a2)
    d, u2, v2 = xgcd(d1, s)
    a3 = a1 * a2 // (d * d)
    num = u2 * (u1 * a1 * b2 + v1 * a2 * b1) + v2 * (b1 * b2 + D) // 2
    assert num % d == 0, "composition congruences are inconsistent"
    b3 = (num // d) % (2 * a3)
    assert (b3 * b3 - D) % (4 * a3) == 0
    c3 = (b3 * b3 - D) // (4 * a3)
    return reduce_form(D, (a3, b3, c3))


def identity_class(ring: Ring) -> ClassElement:
    if isinstance(ring, (ZRing, ZModRing)):
        return TrivialClass()
    if isinstance(ring, QuadraticRing):
        return QuadClass(ring.D, reduce_form(ring.D, principal_form(ring.D)))
    return AbstractClass(ring.class_group, (0,) * len(ring.class_group))


def class_compose(x: ClassElement, y: ClassElement) -> ClassElement:
    if isinstance(x, TrivialClass) and isinstance(y, TrivialClass):
        return TrivialClass()
    if isinstance(x, QuadClass) and isinstance(y, QuadClass):
        if x.D != y.D:
            raise ValueError("classes live in different quadratic orders")
        return QuadClass(x.D, compose_forms(x.D, x.form, y.form))
    if isinstance(x, AbstractClass) and isinstance(y, AbstractClass):
        if x.orders != y.orders:
            raise ValueError("classes live in different class groups")
        vec = tuple((a + b) % d for a, b, d in zip(x.vector, y.vector, x.orders))
        return AbstractClass(x.orders, vec)
    raise TypeError("class types do not match")


def class_inverse(x: ClassElement) -> ClassElement:
    if isinstance(x, TrivialClass):
        return x
    if isinstance(x, QuadClass):
        a, b, c = x.form
        return QuadClass(x.D, reduce_form(x.D, (a, -b, c)))
    return AbstractClass(x.orders, tuple((-v) % d for v, d in zip(x.vector, x.orders)))


def class_pow(x: ClassElement, k: int) -> ClassElement:
    if k < 0:
        return class_pow(class_inverse(x), -k)
    if isinstance(x, TrivialClass):
        return x
    if isinstance(x, QuadClass):
        out = QuadClass(x.D, reduce_form(x.D, principal_form(x.D)))
    else:
        out = AbstractClass(x.orders, (0,) * len(x.orders))
    base = x
    while k:
        if k & 1:
            out = class_compose(out, base)
        k >>= 1
        if k:
            base = class_compose(base, base)
    return out


def class_eq(x: ClassElement, y: ClassElement) -> bool:
    if type(x) is not type(y):
        raise TypeError("class types do not match")
    return x == y


def class_order(x: ClassElement) -> int:
    ident = _identity_like(x)
    out = x
    k = 1
    while not class_eq(out, ident):
        out = class_compose(out, x)
        k += 1
        if k > 10_000_000:
            raise RuntimeError("runaway class order")
    return k


def _identity_like(x: ClassElement) -> ClassElement:
    if isinstance(x, TrivialClass):
        return TrivialClass()
    if isinstance(x, QuadClass):
        return QuadClass(x.D, reduce_form(x.D, principal_form(x.D)))
    return AbstractClass(x.orders, (0,) * len(x.orders))


def class_of_ideal(ring: Ring, i: Ideal) -> ClassElement:
    """The ideal class, dropping principal content."""
    if isinstance(ring, (ZRing, ZModRing)):
        return TrivialClass()
    if isinstance(ring, QuadraticRing):
        assert isinstance(i, QuadIdeal) and i.D == ring.D
        t = ring.D % 2
        form = (i.a, 2 * i.b + t, norm_bw(ring.D, i.b) // i.a)
        return QuadClass(ring.D, reduce_form(ring.D, form))
    assert isinstance(i, AbstractIdeal)
    vec = [0] * len(ring.class_group)
    for name, e in i.factors:
        pv = ring.prime_vector(name)
        vec = [(a + e * b) % d for a, b, d in zip(vec, pv, ring.class_group)]
    return AbstractClass(ring.class_group, tuple(vec))


# ---------------------------------------------------------------------------
# class group tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassGroupTable:
    order: int
    invariant_factors: tuple[int, ...]  # largest first, each divisible by the next
    elements: tuple[ClassElement, ...]
    generators: tuple[tuple[ClassElement, int], ...]


def reduced_forms(D: int) -> list[tuple[int, int, int]]:
    """All reduced positive definite forms of fundamental discriminant D."""
    out = []
    for a in range(1, math.isqrt(-D // 3) + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2 != 0:
                continue
            num = b * b - D
            if num % (4 * a) != 0:
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and a == c:
                continue
            assert math.gcd(math.gcd(a, abs(b)), c) == 1
            out.append((a, b, c))
    return sorted(out)


def invariant_factors_from_orders(orders: tuple[int, ...]) -> tuple[int, ...]:
    """Invariant factors (largest first) of a product of cyclic groups."""
    per_prime: dict[int, list[int]] = {}
    for d in orders:
        for p, e in factor(d).items():
            per_prime.setdefault(p, []).append(e)
    width = max((len(v) for v in per_prime.values()), default=0)
    out = []
    for j in range(width):
        d = 1
        for p, exps in per_prime.items():
            exps_sorted = sorted(exps, reverse=True)
            if j < len(exps_sorted):
                d *= p ** exps_sorted[j]
        out.append(d)
    return tuple(out)


def _invariants_from_element_orders(element_orders: list[int]) -> tuple[int, ...]:
    """Invariant factors of a finite abelian group from its order statistics.

    For each prime p, the number of elements killed by p^k is p to the
    sum of min(lambda_i, k) over the p-exponents lambda of the group;
    the increments of that sum in k are the conjugate partition, so the
    partition is recovered exactly.
    """
    h = len(element_orders)
    if h == 1:
        return ()
    per_prime: dict[int, list[int]] = {}
    for p, hp in factor(h).items():
        layers = []
        prev = 0
        for k in range(1, hp + 1):
            n_k = sum(1 for o in element_orders if (p ** k) % o == 0)
            lk = valuation(n_k, p)
            assert n_k == p ** lk, "p-layer count is not a power of p"
            layers.append(lk - prev)
            prev = lk
        assert prev == hp, "Sylow subgroup not exhausted"
        partition = [sum(1 for inc in layers if inc >= i) for i in range(1, max(layers) + 1)]
        per_prime[p] = partition
    width = max(len(v) for v in per_prime.values())
    out = []
    for j in range(width):
        d = 1
        for p, part in per_prime.items():
            if j < len(part):
                d *= p ** part[j]
        out.append(d)
    return tuple(out)


def class_group_table(ring: Ring) -> ClassGroupTable:
    if isinstance(ring, (ZRing, ZModRing)):
        return ClassGroupTable(1, (), (TrivialClass(),), ())
    if isinstance(ring, AbstractRing):
        h = math.prod(ring.class_group)
        inv = invariant_factors_from_orders(ring.class_group)
        gens = tuple(
            (
                AbstractClass(
                    ring.class_group,
                    tuple(1 if j == i else 0 for j in range(len(ring.class_group))),
                ),
                d,
            )
            for i, d in enumerate(ring.class_group)
        )
        return ClassGroupTable(h, inv, (), gens)
    D = ring.D
    elements = tuple(QuadClass(D, f) for f in reduced_forms(D))
    orders = [class_order(x) for x in elements]
    inv = _invariants_from_element_orders(list(orders))
    ident = identity_class(ring)
    closure = {ident}
    gens: list[tuple[ClassElement, int]] = []
    by_order = sorted(zip(orders, elements), key=lambda t: (-t[0], t[1].form))
    for o, x in by_order:
        if x in closure:
            continue
        gens.append((x, o))
        powers = [ident]
        for _ in range(o - 1):
            powers.append(class_compose(powers[-1], x))
        closure = {class_compose(base, pw) for base in closure for pw in powers}
        if len(closure) == len(elements):
            break
    assert len(closure) == len(elements), "generators failed to span"
    return ClassGroupTable(len(elements), inv, elements, tuple(gens))


# ---------------------------------------------------------------------------
# helpers for random instance generation
# ---------------------------------------------------------------------------


def prime_above(ring: Ring, p: int, rng=None) -> PrimeId:
    """A prime of the ring over the rational prime p."""
    if isinstance(ring, ZRing):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        return p
    if isinstance(ring, ZModRing):
        if not is_prime(p) or ring.n % p != 0:
            raise ValueError(f"{p} is not a prime divisor of {ring.n}")
        return p
    if isinstance(ring, QuadraticRing):
        qs = primes_above(ring.D, p)
        if len(qs) == 1:
            return qs[0]
        return rng.choice(qs) if rng is not None else qs[0]
    raise ValueError("abstract primes are chosen by name, not by residue")


def random_class_element(ring: Ring, rng) -> ClassElement:
    if isinstance(ring, (ZRing, ZModRing)):
        return TrivialClass()
    if isinstance(ring, QuadraticRing):
        return QuadClass(ring.D, rng.choice(reduced_forms(ring.D)))
    return AbstractClass(
        ring.class_group, tuple(rng.randrange(d) for d in ring.class_group)
    )
