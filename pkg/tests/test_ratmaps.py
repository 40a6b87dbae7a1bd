import random
from fractions import Fraction

import pytest

from mpvar.errors import BadReduction, InhomogeneousForms, NeedsFiniteField, NotBirational, NotComposable, \
    RestrictionUndefined, TargetMismatch, ZeroRepresentative
from mpvar.fields import GF, QQ
from mpvar.idealcalc import MHIdeal, scheme_equal
from mpvar.polyring import make_ring
from mpvar.ratmaps import MultiRationalMap, base_change, compose, identity_map
from mpvar.varieties import ambient_space, make_variety, segre_map

F = GF(65537)


def _plane(field=F):
    R = make_ring(field, [2], names="x y z".split())
    return ambient_space(R), R.gens()


def _s11(field=F):
    S = segre_map(make_ring(field, [1, 1]))
    return MultiRationalMap(S.source, S.image(), [S.comps[0].reps])


def _involution(field=F):
    P2, (x, y, z) = _plane(field)
    return MultiRationalMap(P2, P2, [[[y * z, x * z, x * y]]])


def _random_form(R, rng, deg, block=None):
    block = block if block is not None else list(range(R.nvars))
    f = R.zero()
    for _ in range(4):
        e = [0] * R.nvars
        for _ in range(deg):
            e[rng.choice(block)] += 1
        f = f + R.monomial(e, rng.randint(1, 50))
    return f


def _random_map(rng):
    """A random map P^2 -> P^1 x P^1 or P^2 -> P^2 with forms of degree 1 or 2."""
    P2, _ = _plane()
    R = P2.ring
    dims = rng.choice([[1, 1], [2]])
    target = ambient_space(make_ring(F, dims))
    comps = []
    for m in dims:
        d = rng.randint(1, 2)
        comps.append([[_random_form(R, rng, d) for _ in range(m + 1)]])
    return MultiRationalMap(P2, target, comps)


# -- representatives ---------------------------------------------------------


def test_segre_inverse_generator_structure():
    T = _s11().inverse()
    z00, z01, z10, z11 = T.source.ring.gens()
    first, second = T.comps
    first.ensure_complete()
    second.ensure_complete()
    # first factor: the columns of the 2x2 matrix, second factor: its rows
    assert {tuple(v) for v in first.reps} == {(z00, z10), (z01, z11)}
    assert {tuple(v) for v in second.reps} == {(z00, z01), (z10, z11)}


def test_representatives_module_of_the_involution():
    Q = _involution()
    comp = Q.comps[0]
    comp.ensure_complete()
    # the representative is unique up to proportionality; degree sequence is a single (2)
    assert comp.degree_sequence() == [(2,)]


@pytest.mark.parametrize("seed", range(10))
def test_graph_does_not_depend_on_representative(seed):
    rng = random.Random(seed)
    phi = _random_map(rng)
    R = phi.source.ring
    H = _random_form(R, rng, 1)
    scaled = MultiRationalMap(phi.source, phi.target, [[[H * f for f in c.rep]] for c in phi.comps])
    assert phi.graph().variety == scaled.graph().variety
    assert phi == scaled


@pytest.mark.parametrize("seed", range(4))
def test_graph_dimension_and_image(seed):
    phi = _random_map(random.Random(100 + seed))
    G = phi.graph()
    assert G.variety.dim == phi.source.dim
    assert G.proj2.image() == phi.image()


def test_graph_routes_agree_on_segre():
    S = _s11()
    assert S.graph().variety == S.graph("elimination").variety


# -- inverses and compositions ----------------------------------------------


@pytest.mark.parametrize("field", [F, QQ])
def test_involution_inverse(field):
    Q = _involution(field)
    inv = Q.inverse()
    x, y, z = Q.source.ring.gens()
    assert inv == MultiRationalMap(Q.target, Q.source, [[[y * z, x * z, x * y]]])
    assert compose(Q, inv) == identity_map(Q.source)
    assert compose(inv, Q) == identity_map(Q.target)
    assert Q.projective_degrees() == [1, 2, 1]
    assert Q.base_locus().degree == 3


def test_segre_is_an_isomorphism():
    S = _s11()
    assert S.is_morphism() and S.is_isomorphism()
    assert compose(S, S.inverse()) == identity_map(S.source)
    assert S.projective_degrees() == [2, 2, 2]


def test_non_birational_map():
    P2, (x, y, z) = _plane()
    D = MultiRationalMap(P2, P2, [[[x ** 2, y ** 2, z ** 2]]])
    assert D.map_degree() == 4
    assert not D.is_birational()
    with pytest.raises(NotBirational):
        D.inverse()


def test_conic_parametrization():
    L = make_ring(F, [1], names="s t".split())
    s, t = L.gens()
    C = MultiRationalMap(ambient_space(L), ambient_space(make_ring(F, [2])), [[[s * s, s * t, t * t]]])
    assert C.map_degree() == 1 and C.image().degree == 2
    assert C.projective_degrees() == [2, 1]


def test_compose_checks_targets():
    Q = _involution()
    with pytest.raises(NotComposable):
        compose(_s11(), Q)


# -- degrees ---------------------------------------------------------------------


def _ladder_holds(phi):
    d = phi.projective_degrees()
    img = phi.image()
    return d[-1] == phi.source.degree and d[0] == phi.map_degree() * img.degree


@pytest.mark.parametrize("seed", range(6))
def test_degree_ladder_random_maps(seed):
    phi = _random_map(random.Random(200 + seed))
    if phi.image().dim == phi.source.dim:
        assert _ladder_holds(phi)
    else:
        # a map with positive-dimensional fibres has d_0 = 0
        assert phi.projective_degrees()[0] == 0


def test_degree_ladder_examples():
    for phi in (_s11(), _involution()):
        assert _ladder_holds(phi)


@pytest.mark.parametrize("phi_factory", [_s11, _involution])
def test_probabilistic_degrees_agree(phi_factory):
    phi = phi_factory()
    for seed in range(3):
        assert phi.projective_degrees("probabilistic", random.Random(seed)) == phi.projective_degrees()


def test_to_segre_map_preserves_degrees():
    P2, (x, y, z) = _plane()
    phi = MultiRationalMap(P2, ambient_space(make_ring(F, [1, 1])), [[[x, y]], [[x, z]]])
    psi = phi.to_segre_map()
    assert psi.target.ring.r == 1 and psi.target.ring.factor_dims == (3,)
    assert psi.projective_degrees() == phi.projective_degrees()


def test_graph_symmetry_of_the_involution():
    Q = _involution()
    G = Q.graph()
    Gi = Q.inverse().graph()
    # swap the two factors of the inverse graph
    R = G.variety.ring
    n = Q.source.ring.nvars
    swapped = [g.substitute(R.gens()[n:] + R.gens()[:n]) for g in Gi.variety.ideal.gens]
    assert scheme_equal(MHIdeal(R, swapped), G.variety.ideal)


# -- errors ----------------------------------------------------------------------


def test_zero_representative():
    P2, (x, y, z) = _plane()
    C = make_variety(P2.ring, [x * z - y ** 2])
    with pytest.raises(ZeroRepresentative):
        MultiRationalMap(C, ambient_space(make_ring(F, [1])), [[[x * z - y ** 2, 3 * (x * z - y ** 2)]]])
    with pytest.raises(InhomogeneousForms):
        MultiRationalMap(C, ambient_space(make_ring(F, [1])), [[[x, y * z]]])


def test_target_mismatch():
    P2, (x, y, z) = _plane()
    C = make_variety(P2.ring, [x * z - y ** 2])
    with pytest.raises(TargetMismatch):
        MultiRationalMap(P2, C, [[[x, y, z]]])


def test_restriction_outside_source():
    P2, (x, y, z) = _plane()
    C = make_variety(P2.ring, [x * z - y ** 2])
    phi = MultiRationalMap(C, P2, [[[x, y, z]]])
    with pytest.raises(RestrictionUndefined):
        phi.restrict(make_variety(P2.ring, [x]))


def test_probabilistic_needs_finite_field():
    with pytest.raises(NeedsFiniteField):
        _involution(QQ).projective_degrees("probabilistic", random.Random(0))


def test_base_change_reduces_and_rejects_bad_primes():
    P2, (x, y, z) = _plane(QQ)
    phi = MultiRationalMap(P2, P2, [[[Fraction(1, 7) * y * z, x * z, x * y]]])
    with pytest.raises(BadReduction):
        base_change(phi, 7)
    psi = base_change(phi, 65537)
    assert psi.source.field == F
    assert psi.projective_degrees() == [1, 2, 1]
