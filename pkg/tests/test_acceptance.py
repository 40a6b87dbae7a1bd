"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``.
The default field is GF(65537); the fiber test runs over GF(1000003).
"""

import random
import sys
from itertools import product
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from conftest import build_cubic_example, record_criterion  # noqa: E402
from mpvar.fields import GF, univariate_roots  # noqa: E402
from mpvar.hilbert import k_polynomial, segre_degree  # noqa: E402
from mpvar.idealcalc import MHIdeal, multi_saturate  # noqa: E402
from mpvar.polyring import make_ring  # noqa: E402
from mpvar.ratmaps import MultiRationalMap, compose, identity_map  # noqa: E402
from mpvar.varieties import point_of, segre_map  # noqa: E402

from test_hilbert import _hilbert_by_counting, _hilbert_from_k  # noqa: E402
from test_idealcalc import _monomial_ideal, _random_monomials  # noqa: E402
from test_ratmaps import _involution, _random_form, _random_map, _s11  # noqa: E402

F = GF(65537)


def _report(number, label, ok, detail=""):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {label}"
    if detail:
        line += f"  [{detail}]"
    record_criterion(line)
    print(line)
    assert ok, line


def test_criterion_1_image_is_target(cubic_example):
    _, phi = cubic_example
    _report(1, "image(Phi) == target(Phi)", phi.image() == phi.target)


def test_criterion_2_map_degree(cubic_example):
    _, phi = cubic_example
    d = phi.map_degree()
    _report(2, "degree(Phi) = 1", d == 1, f"got {d}")


def test_criterion_3_base_locus_of_inverse(cubic_example):
    _, phi = cubic_example
    B = phi.inverse().base_locus()
    got = (B.dim, B.codim, B.degree, str(B.multidegree), B.generator_tally(), B.describe().to_json()["dim sing. l."])
    want = (2, 2, 14, "2 T_0^2 + 5 T_0 T_1 + 2 T_1^2", "(2,1)^1 (1,2)^1", -1)
    _report(3, "base locus of the inverse is a smooth K3 surface of degree 14", got == want, str(got))


def test_criterion_4_projective_degrees(cubic_graph):
    p1, p2 = cubic_graph
    det = (p1.projective_degrees(), p2.projective_degrees())
    want = ([3, 9, 25, 63, 141], [6, 18, 40, 78, 141])
    prob = [(p1.projective_degrees("probabilistic", random.Random(seed)),
             p2.projective_degrees("probabilistic", random.Random(seed))) for seed in range(5)]
    ok = det == want and all(tuple(p) == det for p in prob)
    _report(4, "projective degrees of p1 and p2, deterministic and 5 probabilistic trials", ok, str(det))


def test_criterion_5_compositions(cubic_example, cubic_graph):
    _, phi = cubic_example
    p1, p2 = cubic_graph
    got = (compose(p2.inverse(), p1) == phi.inverse(), p2.is_morphism(), p2.is_isomorphism())
    _report(5, "p1 o p2^-1 == Phi^-1, p2 morphism, p2 not isomorphism", got == (True, True, False), str(got))


def test_criterion_6_exceptional_locus(cubic_example, cubic_graph):
    _, phi = cubic_example
    p1, _ = cubic_graph
    same = phi.base_locus() == p1.inverse().base_locus()
    E = p1.inverse_image(phi.base_locus())
    got = (same, E.dim, E.degree)
    _report(6, "base loci agree; exceptional locus has dim 3, degree 48", got == (True, 3, 48), str(got))


def test_criterion_7_graph_of_p2(cubic_graph):
    _, p2 = cubic_graph
    h = p2.graph().proj1
    got = (h.is_birational(), h.source.degree, h.target.degree)
    _report(7, "h = first(graph(p2)) birational, degrees (771, 141)", got == (True, 771, 141), str(got))


def test_criterion_8_fiber_of_h():
    _, phi = build_cubic_example(GF(1000003))
    _, p2 = phi.graph()
    h = p2.graph().proj1
    results = []
    for seed in range(3):
        p = point_of(h.source, random.Random(seed))
        results.append(p == h.inverse_image(h.direct_image(p)))
    _report(8, "over GF(1000003) a random point is its own fiber under h, 3 seeds", all(results), str(results))


def _suite_multi_saturation():
    for seed in range(50):
        rng = random.Random(seed)
        R = make_ring(F, [1, 2])
        S = multi_saturate(_monomial_ideal(R, _random_monomials(rng, R, rng.randint(1, 5), 4)))
        if not S.same_ideal(multi_saturate(MHIdeal(R, S.gens))):
            return False
    return True


def _suite_representative_independence():
    for seed in range(10):
        rng = random.Random(seed)
        phi = _random_map(rng)
        H = _random_form(phi.source.ring, rng, 1)
        scaled = MultiRationalMap(phi.source, phi.target, [[[H * f for f in c.rep]] for c in phi.comps])
        if phi.graph().variety != scaled.graph().variety:
            return False
    return True


def _suite_graph_routes(phi):
    return all(m.graph().variety == m.graph("elimination").variety for m in (_s11(), phi))


def _suite_inverse_identities(phi):
    for m in (_s11(), _involution(), phi):
        inv = m.inverse()
        if compose(m, inv) != identity_map(m.source) or compose(inv, m) != identity_map(m.target):
            return False
    return True


def _suite_degree_ladder(phi, graph):
    maps = [_s11(), _involution(), phi, *graph] + [_random_map(random.Random(200 + s)) for s in range(6)]
    for m in maps:
        d = m.projective_degrees()
        if d[-1] != m.source.degree:
            return False
        if m.image().dim == m.source.dim and d[0] != m.map_degree() * m.image().degree:
            return False
    return True


def _suite_k_polynomial():
    for seed in range(30):
        rng = random.Random(seed)
        R = make_ring(F, rng.choice([[2], [1, 1], [1, 2], [3], [1, 1, 1]]))
        gens = _random_monomials(rng, R, rng.randint(1, 5), 4)
        K = k_polynomial(MHIdeal(R, [R.monomial(g) for g in gens]))
        for d in product(range(7), repeat=R.r):
            if sum(d) <= 6 and _hilbert_from_k(R, K, d) != _hilbert_by_counting(R, gens, d):
                return False
    return True


def _suite_roots():
    # the field type covers odd primes only
    for p in range(3, 102):
        if any(p % q == 0 for q in range(2, p)):
            continue
        rng = random.Random(p)
        for _ in range(20):
            deg = rng.randint(1, 6)
            coeffs = [rng.randrange(p) for _ in range(deg)] + [rng.randrange(1, p)]
            brute = {a for a in range(p) if sum(c * pow(a, i, p) for i, c in enumerate(coeffs)) % p == 0}
            if univariate_roots(coeffs, GF(p), rng) != brute:
                return False
    return True


def test_criterion_9_property_suites(cubic_example, cubic_graph):
    _, phi = cubic_example
    suites = {
        "multi-saturation idempotence (50)": _suite_multi_saturation(),
        "graph independent of representative (10)": _suite_representative_independence(),
        "graph routes agree (S11, Phi)": _suite_graph_routes(phi),
        "inverse identities (S11, involution, Phi)": _suite_inverse_identities(phi),
        "degree ladder": _suite_degree_ladder(phi, tuple(cubic_graph)),
        "k-polynomial vs counting (30)": _suite_k_polynomial(),
        "roots vs brute scan (p <= 101)": _suite_roots(),
    }
    failed = [k for k, v in suites.items() if not v]
    _report(9, "property suites", not failed, "failed: " + ", ".join(failed) if failed else f"{len(suites)} suites")


def test_criterion_10_segre_oracle():
    S22 = segre_map(make_ring(F, [2, 2]))
    S11 = _s11()
    z00, z01, z10, z11 = S11.target.ring.gens()
    quadric = S11.target.ideal.mingens()
    rank_one = len(quadric) == 1 and segre_degree(S11.target.ideal) == 2 and \
        S11.target.ideal.contains(z01 * z10 - z00 * z11)
    T = S11.inverse()
    for c in T.comps:
        c.ensure_complete()
    structure = ({tuple(v) for v in T.comps[0].reps} == {(z00, z10), (z01, z11)}
                 and {tuple(v) for v in T.comps[1].reps} == {(z00, z01), (z10, z11)})
    got = (S22.image().degree, rank_one, structure)
    _report(10, "S22 image degree 6, S11 image rank-one quadric, S11 inverse columns/rows",
            got == (6, True, True), str(got))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
