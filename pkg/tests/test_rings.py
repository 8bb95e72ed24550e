"""Ring backend tests.

Frozen values and where they come from:

* For D = -20 (so w = sqrt(-5)): N(b + w) = b^2 + 5, hence N(1 + w) = 6
  and the lattice (2, 1 + w) is an ideal of norm 2.  Squaring it by hand
  (basis products (4,0), (2,2), (2,2), (-4,2), then row reduction) gives
  the principal ideal (2).
* Splitting of small rational primes in Z[sqrt(-5)] follows from the
  roots of b^2 + 5: p = 2 ramifies at b = 1, p = 3 splits at b = 1, 2,
  p = 5 ramifies at b = 0, p = 7 splits at b = 3, 4, p = 11 is inert
  because -5 is not a square mod 11.
* Class numbers 1, 2, 3, 5 for D = -4, -20, -23, -47 come from listing
  reduced forms directly: a <= sqrt(|D|/3) leaves (1,0,1); (1,0,5),
  (2,2,3); (1,1,6), (2,+-1,3); (1,1,12), (2,+-1,6), (3,+-1,4).
* Principal ideals must land in the identity class, and ideal norms are
  multiplicative — both checked on pseudorandom ideals as independent
  routes through the same arithmetic.
"""

import math
import random

import pytest

from caplab import rings as R


def test_fundamental_discriminant_validation():
    for d in (-3, -4, -8, -20, -23, -47, -163):
        R.QuadraticRing(d)
    for d in (0, 5, -5, -9, -12, -45, -75, -100):
        with pytest.raises(ValueError):
            R.QuadraticRing(d)


def test_zmod_ring_validation():
    with pytest.raises(ValueError):
        R.ZModRing(1)
    assert R.ZModRing(12).n == 12


def test_ring_json_roundtrip():
    rings = [
        R.ZRing(),
        R.ZModRing(360),
        R.QuadraticRing(-23),
        R.AbstractRing((2,), (("P", (1,)), ("Q", (0,)))),
    ]
    for ring in rings:
        assert R.ring_from_json(R.ring_to_json(ring)) == ring
    with pytest.raises(ValueError):
        R.ring_from_json({"kind": "bogus"})
    with pytest.raises(ValueError):
        R.ring_from_json({"kind": "ZmodN"})
    with pytest.raises(ValueError):
        R.ring_from_json([1, 2])


def test_norm_of_b_plus_w():
    assert R.norm_bw(-20, 1) == 6
    assert R.norm_bw(-20, 0) == 5
    assert R.norm_bw(-23, 0) == 6
    assert R.norm_bw(-23, 1) == 8
    assert R.norm_bw(-4, 1) == 2


def test_prime_ideal_above_two_squares_to_two():
    p = R.QuadIdeal(-20, 1, 2, 1)
    assert R.ideal_norm(p) == 2
    sq = R.ideal_mul(p, p)
    assert sq == R.QuadIdeal(-20, 2, 1, 0)
    assert R.ideal_norm(sq) == 4


def test_prime_splitting_minus_twenty():
    assert R.primes_above(-20, 2) == (R.QuadPrime(2, "ramified", 1),)
    assert R.primes_above(-20, 5) == (R.QuadPrime(5, "ramified", 0),)
    assert {q.root for q in R.primes_above(-20, 3)} == {1, 2}
    assert all(q.split_kind == "split" for q in R.primes_above(-20, 3))
    assert {q.root for q in R.primes_above(-20, 7)} == {3, 4}
    assert R.primes_above(-20, 11) == (R.QuadPrime(11, "inert", None),)


def test_two_splits_exactly_when_d_is_one_mod_eight():
    assert {q.root for q in R.primes_above(-23, 2)} == {0, 1}  # -23 = 1 mod 8
    assert R.primes_above(-7, 2)[0].split_kind == "split"
    assert R.primes_above(-3, 2)[0].split_kind == "inert"
    assert R.primes_above(-4, 2)[0].split_kind == "ramified"


def test_conjugate_roots_sum_to_minus_trace():
    for d in (-20, -23, -47):
        for p in (3, 7, 13, 2):
            qs = R.primes_above(d, p)
            if qs[0].split_kind != "split":
                continue
            q = qs[0]
            conj = R.quad_prime_conjugate(q, d)
            assert conj in qs and conj != q


def _principal(D: int, x: int, y: int) -> R.QuadIdeal:
    t, c = R._omega_parts(D)
    gens = [(x, y), (y * c, x + y * t)]  # (x + yw) * 1 and (x + yw) * w
    return R.quad_ideal_from_lattice(D, gens)


def test_principal_ideal_norm_and_class():
    rng = random.Random(5)
    for d in (-4, -20, -23, -47):
        ring = R.QuadraticRing(d)
        t, c = R._omega_parts(d)
        for _ in range(25):
            x, y = rng.randint(-9, 9), rng.randint(-9, 9)
            if x == 0 and y == 0:
                continue
            ideal = _principal(d, x, y)
            assert R.ideal_norm(ideal) == abs(x * x + t * x * y - c * y * y)
            assert R.class_eq(R.class_of_ideal(ring, ideal), R.identity_class(ring))


def _random_ideal(d: int, rng: random.Random) -> R.QuadIdeal:
    ring = R.QuadraticRing(d)
    out = R.ideal_one(ring)
    for p in rng.sample((2, 3, 5, 7, 11, 13), 3):
        for q in R.primes_above(d, p):
            out = R.ideal_mul(out, R.ideal_pow(R.ideal_from_prime(ring, q), rng.randint(0, 2)))
    return out


def test_ideal_norm_is_multiplicative():
    rng = random.Random(11)
    for d in (-20, -23):
        for _ in range(40):
            i, j = _random_ideal(d, rng), _random_ideal(d, rng)
            assert R.ideal_norm(R.ideal_mul(i, j)) == R.ideal_norm(i) * R.ideal_norm(j)


def test_ideal_factor_roundtrip():
    rng = random.Random(13)
    for d in (-20, -23, -47):
        ring = R.QuadraticRing(d)
        for _ in range(30):
            i = _random_ideal(d, rng)
            fac = R.ideal_factor(ring, i)
            assert R.ideal_from_factors(ring, fac) == i
            total = math.prod(
                (q.p ** (2 if q.split_kind == "inert" else 1)) ** e
                for q, e in fac.items()
            )
            assert total == R.ideal_norm(i)


def test_rational_prime_factors_as_expected():
    ring = R.QuadraticRing(-20)
    six = R.QuadIdeal(-20, 6, 1, 0)
    fac = R.ideal_factor(ring, six)
    assert fac[R.QuadPrime(2, "ramified", 1)] == 2
    assert fac[R.QuadPrime(3, "split", 1)] == 1
    assert fac[R.QuadPrime(3, "split", 2)] == 1
    assert len(fac) == 3


def test_split_primes_multiply_back_to_p():
    for d in (-4, -20, -23):
        ring = R.QuadraticRing(d)
        for p in range(2, 60):
            if not R.is_prime(p):
                continue
            qs = R.primes_above(d, p)
            prod = R.ideal_one(ring)
            for q in qs:
                e = 2 if q.split_kind == "ramified" else 1
                prod = R.ideal_mul(prod, R.ideal_pow(R.ideal_from_prime(ring, q), e))
            assert prod == R.QuadIdeal(d, p, 1, 0), (d, p)


def test_reduced_forms_and_class_numbers():
    assert R.reduced_forms(-4) == [(1, 0, 1)]
    assert R.reduced_forms(-20) == [(1, 0, 5), (2, 2, 3)]
    assert R.reduced_forms(-23) == [(1, 1, 6), (2, -1, 3), (2, 1, 3)]
    assert len(R.reduced_forms(-47)) == 5
    assert len(R.reduced_forms(-163)) == 1


def test_composition_is_a_group_law():
    for d in (-20, -23, -47):
        forms = R.reduced_forms(d)
        ident = R.reduce_form(d, R.principal_form(d))
        assert ident in forms
        for f in forms:
            assert R.compose_forms(d, f, ident) == f
            a, b, c = f
            inv = R.reduce_form(d, (a, -b, c))
            assert R.compose_forms(d, f, inv) == ident
        for f1 in forms:
            for f2 in forms:
                assert R.compose_forms(d, f1, f2) in forms
                assert R.compose_forms(d, f1, f2) == R.compose_forms(d, f2, f1)
        for f1 in forms:
            for f2 in forms:
                for f3 in forms:
                    left = R.compose_forms(d, R.compose_forms(d, f1, f2), f3)
                    right = R.compose_forms(d, f1, R.compose_forms(d, f2, f3))
                    assert left == right


def test_nonprincipal_class_above_two():
    ring = R.QuadraticRing(-20)
    p = R.ideal_from_prime(ring, R.QuadPrime(2, "ramified", 1))
    cls = R.class_of_ideal(ring, p)
    assert cls == R.QuadClass(-20, (2, 2, 3))
    assert not R.class_eq(cls, R.identity_class(ring))
    assert R.class_eq(R.class_compose(cls, cls), R.identity_class(ring))


def test_class_of_ideal_is_a_homomorphism():
    rng = random.Random(17)
    for d in (-20, -23):
        ring = R.QuadraticRing(d)
        for _ in range(50):
            i, j = _random_ideal(d, rng), _random_ideal(d, rng)
            lhs = R.class_of_ideal(ring, R.ideal_mul(i, j))
            rhs = R.class_compose(R.class_of_ideal(ring, i), R.class_of_ideal(ring, j))
            assert R.class_eq(lhs, rhs)


def test_class_group_tables():
    expected = {-4: (1, ()), -20: (2, (2,)), -23: (3, (3,)), -47: (5, (5,))}
    for d, (h, inv) in expected.items():
        table = R.class_group_table(R.QuadraticRing(d))
        assert table.order == h
        assert table.invariant_factors == inv
        assert len(table.elements) == h
        assert math.prod(o for _, o in table.generators) >= h or h == 1
    table = R.class_group_table(R.ZRing())
    assert table.order == 1 and table.invariant_factors == ()


def test_class_pow_matches_repeated_composition():
    x = R.QuadClass(-47, (2, 1, 6))
    acc = R.identity_class(R.QuadraticRing(-47))
    for k in range(12):
        assert R.class_eq(R.class_pow(x, k), acc)
        acc = R.class_compose(acc, x)
    assert R.class_eq(R.class_pow(x, 5), R.identity_class(R.QuadraticRing(-47)))


def test_abstract_ring_classes():
    ring = R.AbstractRing((2, 4), (("P", (1, 0)), ("Q", (1, 3))))
    ident = R.identity_class(ring)
    p = R.class_of_ideal(ring, R.AbstractIdeal((("P", 1),)))
    q = R.class_of_ideal(ring, R.AbstractIdeal((("Q", 2),)))
    assert p.vector == (1, 0)
    assert q.vector == (0, 2)  # 2 * (1, 3) = (2, 6) = (0, 2) mod (2, 4)
    assert R.class_eq(R.class_pow(p, 2), ident)
    assert R.class_order(R.AbstractClass((2, 4), (1, 3))) == 4
    with pytest.raises(ValueError):
        R.AbstractRing((2,), (("P", (5,)),))
    with pytest.raises(ValueError):
        R.AbstractRing((2,), (("(bad", (1,)),))


def test_invariant_factors_from_orders():
    assert R.invariant_factors_from_orders((2, 3)) == (6,)
    assert R.invariant_factors_from_orders((2, 4)) == (4, 2)
    assert R.invariant_factors_from_orders((6, 4, 9)) == (36, 6)
    assert R.invariant_factors_from_orders(()) == ()


def test_prime_keys_roundtrip():
    cases = [
        (R.ZRing(), 7, "7"),
        (R.ZRing(), R.ZERO_PRIME, "(0)"),
        (R.ZModRing(12), 3, "3"),
        (R.QuadraticRing(-20), R.QuadPrime(11, "inert", None), "(11)"),
        (R.QuadraticRing(-20), R.QuadPrime(3, "split", 1), "(3,1+w)"),
        (R.QuadraticRing(-20), R.QuadPrime(2, "ramified", 1), "(2,1+w)"),
        (R.AbstractRing((2,), (("P", (1,)),)), "P", "P"),
    ]
    for ring, prime, key in cases:
        assert R.prime_key(prime) == key
        assert R.parse_prime_key(ring, key) == prime


def test_prime_key_parse_errors():
    with pytest.raises(ValueError):
        R.parse_prime_key(R.ZRing(), "4")
    with pytest.raises(ValueError):
        R.parse_prime_key(R.ZModRing(12), "5")
    with pytest.raises(ValueError):
        R.parse_prime_key(R.ZModRing(12), "(0)")
    with pytest.raises(ValueError):
        R.parse_prime_key(R.QuadraticRing(-20), "(3)")  # 3 splits, not inert
    with pytest.raises(ValueError):
        R.parse_prime_key(R.QuadraticRing(-20), "(3,0+w)")
    with pytest.raises(ValueError):
        R.parse_prime_key(R.AbstractRing((2,), (("P", (1,)),)), "Q")


def test_ideal_valuations():
    ring = R.QuadraticRing(-20)
    p3 = R.QuadPrime(3, "split", 1)
    i = R.ideal_pow(R.ideal_from_prime(ring, p3), 2)
    assert R.ideal_valuation(ring, i, p3) == 2
    assert R.ideal_valuation(ring, i, R.quad_prime_conjugate(p3, -20)) == 0
    assert R.ideal_valuation(ring, i, R.ZERO_PRIME) == 0
    assert R.ideal_valuation(R.ZRing(), R.ZIdeal(12), 2) == 2
    assert R.ideal_valuation(R.ZModRing(12), R.ZModIdeal(12, 6), 3) == 1


def test_random_class_element_is_uniform_enough():
    rng = random.Random(2026)
    ring = R.QuadraticRing(-20)
    hits = sum(
        1
        for _ in range(1000)
        if R.class_eq(R.random_class_element(ring, rng), R.identity_class(ring))
    )
    # binomial(1000, 1/2): three sigma is about 47
    assert abs(hits - 500) <= 3 * 16 + 1


def test_prime_above_dispatch():
    assert R.prime_above(R.ZRing(), 7) == 7
    assert R.prime_above(R.ZModRing(12), 3) == 3
    with pytest.raises(ValueError):
        R.prime_above(R.ZModRing(12), 5)
    q = R.prime_above(R.QuadraticRing(-20), 11)
    assert q.split_kind == "inert"
    with pytest.raises(ValueError):
        R.prime_above(R.AbstractRing((2,), (("P", (1,)),)), 2)
