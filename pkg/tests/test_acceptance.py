"""Acceptance harness: eight go/no-go checks, one printed line each.

Each criterion pins its random seed and wall-clock cap in advance; the
line is printed whether the check passes or fails, so a red run still
reports every criterion.  Run directly with ``pytest -q
tests/test_acceptance.py`` or via ``scripts/run_acceptance.py``.
"""

import itertools
import random
import time

from caplab import globalcap as G
from caplab import glq as Q
from caplab import local as L
from caplab import modules as M
from caplab import numtheory as NT
from caplab import oracle as O
from caplab import rings as R
from caplab import snf as S
from caplab.modules import INFINITY

SEED_WITNESS = 20260819
SEED_BOUNDS = 715
SEED_GLQ = 52
SEED_QUOTIENT = 77
SEED_SNF = 8


def _run(capsys, num: int, cap_seconds: float, body):
    """Time one criterion and always print its pass/fail line."""
    t0 = time.perf_counter()
    try:
        detail = body()
        err = None
    except Exception as exc:
        detail, err = f"{type(exc).__name__}: {exc}", exc
    elapsed = time.perf_counter() - t0
    ok = err is None and elapsed < cap_seconds
    with capsys.disabled():
        print(
            f"[acceptance] criterion {num}: {'PASS' if ok else 'FAIL'} "
            f"({elapsed:.2f}s, cap {cap_seconds:g}s) {detail}"
        )
    if err is not None:
        raise err
    assert elapsed < cap_seconds, f"criterion {num}: {elapsed:.2f}s over cap"


# --- 1: rank-one modules in distinct ideal classes -------------------------


def test_criterion_1_class_obstruction(capsys):
    def body():
        ring = R.AbstractRing(class_group=(2,), primes=(("p", (1,)), ("q", (0,))))
        free = M.FGModule(ring, 1, R.identity_class(ring), ())
        twisted = M.FGModule(ring, 1, R.AbstractClass((2,), (1,)), ())
        for a, b in ((free, twisted), (twisted, free)):
            rep = G.capacity("sur", a, b)
            assert rep.value == 0, (a, b, rep.value)
            for prime in ("p", "q", R.ZERO_PRIME):
                loc = L.local_capacity("sur", M.localize(a, prime), M.localize(b, prime))
                assert loc == 1, (prime, loc)
        return "global sur = 0 both ways, all 6 local capacities = 1"

    _run(capsys, 1, 1.0, body)


# --- 2: local closed forms against the brute-force engine ------------------


def test_criterion_2_local_oracle_grid(capsys):
    def body():
        types = [
            tuple(sorted(c, reverse=True))
            for k in range(5)
            for c in itertools.combinations_with_replacement((3, 2, 1), k)
        ]
        engines = {"sur": O.oracle_sur_type, "spl": O.oracle_spl_type,
                   "inj": O.oracle_inj_type}
        checked = 0
        for p in (2, 3):
            for a_exps, b_exps in itertools.product(types, types):
                a = M.LocalModule(0, a_exps)
                b = M.LocalModule(0, b_exps)
                for kind, engine in engines.items():
                    closed = L.local_capacity(kind, a, b)
                    brute = engine(a_exps, b_exps, p)
                    assert closed == brute, (kind, p, a_exps, b_exps, closed, brute)
                    checked += 1
        return f"{checked} grid comparisons, zero mismatches"

    _run(capsys, 2, 120.0, body)


# --- 3: witnesses certify every claimed value over Z -----------------------


def test_criterion_3_witness_soundness(capsys):
    def body():
        built = refused = 0
        for i in range(300):
            m, n = O.random_instance(SEED_WITNESS + i)
            for kind in G.KINDS:
                value = G.capacity(kind, m, n).value
                if value == INFINITY:
                    G.witness(kind, m, n, 3)  # spot-check an unbounded claim
                    assert G.clause_holds(kind, m, n, 10)
                    built += 1
                    continue
                G.witness(kind, m, n, int(value))  # verifies or raises
                assert not G.clause_holds(kind, m, n, int(value) + 1), (kind, m, n)
                built += 1
                refused += 1
        return f"{built} witnesses verified, {refused} above-value clauses failed"

    _run(capsys, 3, 120.0, body)


# --- 4: inequality package over seeded Z instances -------------------------


def test_criterion_4_bound_harness(capsys):
    def body():
        items_seen = 0
        for i in range(500):
            m, n = O.random_instance(SEED_BOUNDS + i)
            items = G.bound_report(m, n)
            broken = G.bound_violations(items)
            assert not broken, (m, n, [b.name for b in broken])
            items_seen += len(items)
        return f"500 instances, {items_seen} bound items, zero violations"

    _run(capsys, 4, 60.0, body)


# --- 5: determinant-one congruence matrices --------------------------------


def test_criterion_5_glq_construction(capsys):
    def body():
        rng = random.Random(SEED_GLQ)
        primes = [p for p in range(2, 51) if NT.is_prime(p)]
        for _ in range(100):
            n = rng.randrange(2, 5)
            pool = primes[:]
            rng.shuffle(pool)
            lambdas = tuple(
                tuple(sorted(pool.pop() for _ in range(rng.randrange(0, 4))))
                for _ in range(n)
            )
            a = rng.choice([1, 1, rng.randrange(2, 30), -rng.randrange(1, 10)])
            while any(a % p == 0 for p in lambdas[0]):
                a += 1
            inst = Q.GLQInstance(n, lambdas, a=a)
            verification = Q.verify_glq(inst, Q.build_glq(inst))
            assert verification.ok, (inst, verification.failures())
        return "100 instances built and verified"

    _run(capsys, 5, 10.0, body)


# --- 6: class-group tables from reduced forms -------------------------------


def test_criterion_6_class_groups(capsys):
    def body():
        expected = {-4: 1, -20: 2, -23: 3, -47: 5}
        for disc, order in expected.items():
            ring = R.QuadraticRing(disc)
            table = R.class_group_table(ring)
            assert table.order == order, (disc, table.order)
            elements = table.elements
            identity = R.identity_class(ring)

            def member(x, elements=elements):
                return any(R.class_eq(x, e) for e in elements)

            for x, y in itertools.product(elements, repeat=2):
                assert member(R.class_compose(x, y))
            for x, y, z in itertools.product(elements, repeat=3):
                lhs = R.class_compose(R.class_compose(x, y), z)
                rhs = R.class_compose(x, R.class_compose(y, z))
                assert R.class_eq(lhs, rhs)
            for x in elements:
                assert R.class_eq(R.class_compose(x, identity), x)
                inv = R.class_inverse(x)
                assert member(inv)
                assert R.class_eq(R.class_compose(x, inv), identity)
        ring = R.QuadraticRing(-20)
        ideal = R.quad_ideal_from_lattice(-20, [(2, 0), (1, 1)])  # (2, 1+w)
        cls = R.class_of_ideal(ring, ideal)
        assert not R.class_eq(cls, R.identity_class(ring))
        return "orders 1/2/3/5 confirmed; group law exhaustive; (2, 1+w) nontrivial"

    _run(capsys, 6, 5.0, body)


# --- 7: quotient-ring capacities equal the local minimum -------------------


def _prime_power_orders(cyclic_orders):
    """Split each cyclic factor into its prime-power pieces."""
    return [p**v for d in cyclic_orders for p, v in NT.factor(d).items()]


def test_criterion_7_quotient_ring_exactness(capsys):
    def body():
        master = random.Random(SEED_QUOTIENT)
        oracle_checks = 0
        for _ in range(200):
            n = master.randrange(2, 361)
            profile = O.InstanceProfile(ring={"kind": "ZmodN", "n": n})
            m, nn = O.random_instance(master.randrange(1 << 30), profile)
            primes = sorted(NT.factor(n))
            orders_m = _prime_power_orders([n] * m.rank + [t.d for t in m.torsion])
            orders_n = _prime_power_orders([n] * nn.rank + [t.d for t in nn.torsion])
            for kind in G.KINDS:
                value = G.capacity(kind, m, nn).value
                local_min = min(
                    (L.local_capacity(kind, M.localize(m, p), M.localize(nn, p))
                     for p in primes),
                    default=INFINITY,
                )
                assert value == local_min, (kind, m, nn, value, local_min)
                try:
                    brute = O.definitional_capacity(
                        kind, O.finite_module(orders_m), O.finite_module(orders_n)
                    )
                except O.SizeCapExceeded:
                    continue
                assert value == brute, (kind, m, nn, value, brute)
                oracle_checks += 1
        assert oracle_checks >= 50, f"only {oracle_checks} oracle cross-checks ran"
        return f"200 instances exact; {oracle_checks} brute-force cross-checks"

    _run(capsys, 7, 60.0, body)


# --- 8: diagonalization engine on random matrices ---------------------------


def test_criterion_8_snf_engine(capsys):
    def body():
        rng = random.Random(SEED_SNF)
        minor_checks = 0
        for _ in range(1000):
            r, c = rng.randint(1, 8), rng.randint(1, 8)
            a = S.mat([[rng.randint(-50, 50) for _ in range(c)] for _ in range(r)])
            res = S.snf(a)
            assert S.mat_mul(S.mat_mul(res.U, a), res.V) == res.D
            assert abs(S.det(res.U)) == 1 and abs(S.det(res.V)) == 1
            diag = res.D.diagonal()
            for x, y in zip(diag, diag[1:]):
                assert (y % x == 0) if x else (y == 0), diag
            if max(r, c) <= 5:
                acc = 1
                for k, d in enumerate(diag, start=1):
                    acc *= d
                    assert acc == S.minor_gcd(a, k), (a, k, acc)
                    minor_checks += 1
        return f"1000 matrices diagonalized; {minor_checks} minor-gcd checks"

    _run(capsys, 8, 60.0, body)
