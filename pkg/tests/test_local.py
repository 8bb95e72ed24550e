"""Local capacity criteria against the brute-force engines.

The closed forms in ``caplab.local`` are count formulas; nothing about
them is trusted until they reproduce the enumerative ground truth.  The
grid here covers torsion pairs at p = 2 and 3 (a larger grid runs in
the acceptance harness) and the free-rank handling of the surjective
formula is checked against the proxy-exponent engine.
"""

import itertools

import pytest

from caplab import local as L
from caplab import oracle as O
from caplab.modules import INFINITY, LocalModule


def test_frozen_sur_examples():
    assert L.sur_local(LocalModule(1, (2,)), LocalModule(0, (1,))) == 2
    b = LocalModule(1, (3, 1))
    assert L.sur_local(b, b) == 1
    assert L.sur_local(LocalModule(0, (3, 1)), LocalModule(0, (2,))) == 1


def test_frozen_spl_examples():
    assert L.spl_local(LocalModule(0, (2, 2, 1)), LocalModule(0, (2, 1))) == 1
    b = LocalModule(1, (2, 1))
    a = LocalModule(3, (2, 2, 2, 1, 1, 1))
    assert L.spl_local(a, b) == 3
    assert L.spl_local(LocalModule(2, (2,)), LocalModule(1, (2,))) == 1


def test_frozen_inj_examples():
    assert L.inj_local(LocalModule(1, ()), LocalModule(0, (1,))) == 0
    assert L.inj_local(LocalModule(0, (2,)), LocalModule(0, (1, 1))) == 0
    b = LocalModule(2, (3,))
    assert L.inj_local(b, b) >= 1


def test_infinite_exactly_for_zero_target():
    zero = LocalModule(0, ())
    a = LocalModule(1, (2,))
    for kind in ("sur", "spl", "inj"):
        assert L.local_capacity(kind, a, zero) == INFINITY
        assert L.local_capacity(kind, zero, zero) == INFINITY
        assert L.local_capacity(kind, zero, a) != INFINITY


def test_prime_mismatch():
    a = LocalModule(0, (1,), 2)
    b = LocalModule(0, (1,), 3)
    with pytest.raises(ValueError):
        L.sur_local(a, b)
    assert L.sur_local(a, LocalModule(0, (1,), 2)) == 1
    assert L.sur_local(a, LocalModule(0, (1,))) == 1  # unspecified prime matches


def test_fraction_field_spaces():
    # at the zero prime everything is a vector space: all three agree
    a, b = LocalModule(5, ()), LocalModule(2, ())
    assert L.sur_local(a, b) == L.spl_local(a, b) == L.inj_local(a, b) == 2


def _types(max_parts, max_exp):
    out = []
    for k in range(max_parts + 1):
        for exps in itertools.combinations_with_replacement(range(max_exp, 0, -1), k):
            out.append(tuple(sorted(exps, reverse=True)))
    return out


def test_torsion_grid_matches_oracle():
    grids = [(2, _types(3, 3)), (3, _types(2, 2))]
    for p, types in grids:
        for a_exps in types:
            for b_exps in types:
                a = LocalModule(0, a_exps)
                b = LocalModule(0, b_exps)
                am = O.finite_module([p ** e for e in a_exps])
                bm = O.finite_module([p ** e for e in b_exps])
                for kind in ("sur", "spl", "inj"):
                    expected = O.oracle_capacity(kind, am, bm)
                    got = L.local_capacity(kind, a, b)
                    assert got == expected, (kind, p, a_exps, b_exps, got, expected)


def test_sur_with_free_ranks_matches_proxy_engine():
    types = _types(2, 2)
    for free_a in (0, 1, 2):
        for a_exps in types:
            for b_exps in types:
                if not b_exps:
                    continue
                got = L.sur_local(LocalModule(free_a, a_exps), LocalModule(0, b_exps))
                expected = O.oracle_sur_with_free(free_a, a_exps, b_exps, 2)
                assert got == expected, (free_a, a_exps, b_exps, got, expected)


def test_split_below_sur_and_inj():
    types = _types(3, 2)
    for fa, fb in ((0, 0), (1, 0), (2, 1)):
        for a_exps in types:
            for b_exps in types:
                a = LocalModule(fa, a_exps)
                b = LocalModule(fb, b_exps)
                s = L.spl_local(a, b)
                assert s <= L.sur_local(a, b)
                assert s <= L.inj_local(a, b)


def test_monotone_in_source():
    types = _types(2, 2)
    for a_exps in types:
        for b_exps in types:
            a = LocalModule(1, a_exps)
            b = LocalModule(0, b_exps)
            bigger_free = LocalModule(2, a_exps)
            bigger_torsion = LocalModule(1, tuple(sorted(a_exps + (2,), reverse=True)))
            for kind in ("sur", "spl", "inj"):
                base = L.local_capacity(kind, a, b)
                assert L.local_capacity(kind, bigger_free, b) >= base
                assert L.local_capacity(kind, bigger_torsion, b) >= base


def test_torsion_duality():
    types = _types(3, 3)
    for a_exps in types:
        for b_exps in types:
            a = LocalModule(0, a_exps)
            b = LocalModule(0, b_exps)
            assert L.sur_local(a, b) == L.inj_local(a, b)
