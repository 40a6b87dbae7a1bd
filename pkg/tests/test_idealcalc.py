import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from mpvar.errors import MixedRings, ZeroDivisorInput, ZeroIdealDivisor
from mpvar.fields import GF, QQ
from mpvar.idealcalc import MHIdeal, colon, colon_ideal, ideal_ops, intersect, irrelevant_ideal, multi_saturate, \
    ring_map_kernel, saturate, scheme_equal, vanishes_on
from mpvar.polyring import make_ring

F = GF(32003)


# -- an independent oracle for monomial ideals, on exponent tuples ---------------

def _minimal(gens):
    gens = sorted(set(gens), key=sum)
    out = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return sorted(out)


def _mono_intersect(A, B):
    return _minimal(tuple(max(a, b) for a, b in zip(g, h)) for g in A for h in B)


def _mono_sat_var(A, i):
    return _minimal(tuple(0 if k == i else e for k, e in enumerate(g)) for g in A)


def _mono_saturate_block(A, block):
    # a : (x_i, i in block)^inf = intersection over i of a : x_i^inf
    acc = None
    for i in block:
        S = _mono_sat_var(A, i)
        acc = S if acc is None else _mono_intersect(acc, S)
    return acc


def _as_exponents(I):
    R = I.ring
    return _minimal(tuple(R.unpack(next(iter(g.terms)))) for g in I.gb().gens)


def _monomial_ideal(R, exps):
    return MHIdeal(R, [R.monomial(e) for e in exps])


def _random_monomials(rng, R, count, maxdeg):
    out = []
    for _ in range(count):
        e = [0] * R.nvars
        for _ in range(rng.randint(1, maxdeg)):
            e[rng.randrange(R.nvars)] += 1
        out.append(tuple(e))
    return out


# -- tests ------------------------------------------------------------------------

def test_sum_product_intersect_examples():
    R = make_ring(QQ, [2], names="x y z".split())
    x, y, z = R.gens()
    a, b = MHIdeal(R, [x, y]), MHIdeal(R, [y, z])
    assert scheme_equal(ideal_ops(a, b, "sum"), MHIdeal(R, [x, y, z]))
    assert ideal_ops(a, b, "product").gb().contains_all([x * y, x * z, y ** 2, y * z])
    inter = ideal_ops(a, b, "intersect")
    assert inter.gb().contains_all([y, x * z]) and not inter.contains(x)
    with pytest.raises(MixedRings):
        intersect(a, MHIdeal(make_ring(QQ, [2]), []))


def test_intersection_matches_monomial_oracle():
    rng = random.Random(4)
    R = make_ring(F, [1, 1])
    for _ in range(10):
        A, B = _random_monomials(rng, R, 3, 3), _random_monomials(rng, R, 3, 3)
        got = intersect(_monomial_ideal(R, A), _monomial_ideal(R, B))
        assert _as_exponents(got) == _mono_intersect(_minimal(A), _minimal(B))


def test_colon_examples():
    R = make_ring(QQ, [2], names="x y z".split())
    x, y, z = R.gens()
    a = MHIdeal(R, [x ** 2 * y, x * z])
    c = colon(a, x)
    assert c.gb().contains_all([x * y, z]) and not c.contains(x)
    c2 = colon(MHIdeal(R, [x * y * z]), x + y)
    assert c2.contains(x * y * z) and not c2.contains(x * y)
    with pytest.raises(ZeroDivisorInput):
        colon(a, R.zero())
    with pytest.raises(ZeroIdealDivisor):
        colon_ideal(a, MHIdeal(R, []))


def test_saturation_examples():
    R = make_ring(QQ, [2], names="x y z".split())
    x, y, z = R.gens()
    # (x^2, xy) : (x, y)^inf is the unit ideal; (xz, yz) : (x, y)^inf = (z)
    assert saturate(MHIdeal(R, [x ** 2, x * y, y ** 2]), MHIdeal(R, [x, y])).is_unit()
    S = saturate(MHIdeal(R, [x * z, y * z]), MHIdeal(R, [x, y]))
    assert S.gb().contains(z) and not S.is_unit()
    # saturation by a non-variable form
    T = saturate(MHIdeal(R, [x * (x + y + z), y * (x + y + z)]), MHIdeal(R, [x + y + z]))
    assert T.gb().contains_all([x, y]) and not T.contains(z)


@pytest.mark.parametrize("seed", range(6))
def test_block_saturation_matches_monomial_oracle(seed):
    rng = random.Random(seed)
    R = make_ring(F, [2, 1])
    A = _random_monomials(rng, R, 4, 4)
    for j in range(R.r):
        got = saturate(_monomial_ideal(R, A), irrelevant_ideal(R, j))
        want = _mono_saturate_block(_minimal(A), R.blocks[j])
        if want == [tuple([0] * R.nvars)]:
            assert got.is_unit()
        else:
            assert _as_exponents(got) == want


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_multi_saturation_is_idempotent(seed):
    rng = random.Random(seed)
    R = make_ring(F, [1, 2])
    A = _random_monomials(rng, R, rng.randint(1, 5), 4)
    S = multi_saturate(_monomial_ideal(R, A))
    again = multi_saturate(MHIdeal(R, S.gens))
    assert S.same_ideal(again)


def test_scheme_equal_ignores_irrelevant_components():
    R = make_ring(QQ, [1, 1])
    a0, a1, b0, b1 = R.gens()
    diag = MHIdeal(R, [a0 * b1 - a1 * b0])
    dirty = MHIdeal(R, [(a0 * b1 - a1 * b0) * a0, (a0 * b1 - a1 * b0) * a1])
    assert scheme_equal(diag, dirty)
    assert not scheme_equal(diag, MHIdeal(R, [a0]))


def test_vanishes_on_radical_membership():
    R = make_ring(QQ, [2], names="x y z".split())
    x, y, z = R.gens()
    a = MHIdeal(R, [x ** 2, y ** 3])
    assert vanishes_on(x * z, a)
    assert vanishes_on(x + y, a)
    assert not vanishes_on(z, a)


def test_kernel_conic():
    L = make_ring(QQ, [1], names="s t".split())
    s, t = L.gens()
    S = make_ring(QQ, [2], names="a b c".split())
    a, b, c = S.gens()
    K = ring_map_kernel([[s * s, s * t, t * t]], MHIdeal(L, []), S)
    assert len(K.gens) == 1
    assert K.gens[0].monic() == (b ** 2 - a * c).monic()


def test_kernel_segre_quadric():
    R = make_ring(F, [1, 1])
    u0, u1, v0, v1 = R.gens()
    S = make_ring(F, [3], names="z00 z01 z10 z11".split())
    z00, z01, z10, z11 = S.gens()
    K = ring_map_kernel([[u0 * v0, u0 * v1, u1 * v0, u1 * v1]], MHIdeal(R, []), S)
    assert scheme_equal(K, MHIdeal(S, [z00 * z11 - z01 * z10]))


def test_kernel_into_a_product():
    # P^1 -> P^1 x P^1, x -> (x, x): image is the diagonal
    L = make_ring(F, [1], names="s t".split())
    s, t = L.gens()
    S = make_ring(F, [1, 1])
    a0, a1, b0, b1 = S.gens()
    K = ring_map_kernel([[s, t], [s, t]], MHIdeal(L, []), S)
    assert scheme_equal(K, MHIdeal(S, [a0 * b1 - a1 * b0]))


def test_brute_force_saturation_small_field():
    # over GF(5), compare V(a : (x,y)^inf) with points of V(a) off x=y=0
    G = GF(5)
    R = make_ring(G, [2], names="x y z".split())
    x, y, z = R.gens()
    a = MHIdeal(R, [x * z - y * z, z ** 2 * (x - 2 * y)])
    S = saturate(a, MHIdeal(R, [x, y]))
    pts = [p for p in product(range(5), repeat=3) if any(p)]
    for p in pts:
        on_a = all(g.evaluate(p) == 0 for g in a.gens)
        on_S = all(g.evaluate(p) == 0 for g in S.gens)
        if p[0] or p[1]:
            assert on_a == on_S
