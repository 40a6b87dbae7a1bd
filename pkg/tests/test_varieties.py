import random
from fractions import Fraction

import pytest

from mpvar.errors import EmptyVariety, NeedsFiniteField
from mpvar.fields import GF, QQ
from mpvar.polyring import make_ring
from mpvar.varieties import RationalPoint, ambient_space, describe, make_variety, point_of, point_to_variety, \
    sample_point, segre_map, singular_locus

F = GF(101)

K3_REPORT = """\
ambient:.............. PP^2 x PP^2
dim:.................. 2
codim:................ 2
degree:............... 14
multidegree:.......... 2 T_0^2 + 5 T_0 T_1 + 2 T_1^2
generators:........... (2,1)^1 (1,2)^1
purity:............... not computed
dim sing. l.:......... -1"""


def _plane(field=F):
    R = make_ring(field, [2], names="x y z".split())
    return R, R.gens()


def test_describe_k3_base_locus(cubic_example):
    _, phi = cubic_example
    B = phi.inverse().base_locus()
    assert str(describe(B)) == K3_REPORT
    assert repr(B) == "ProjectiveVariety, surface in PP^2 x PP^2"


def test_describe_cubic_fourfold(cubic_example):
    X, _ = cubic_example
    rep = describe(X).to_json()
    assert rep["dim"] == 4 and rep["degree"] == 3 and rep["dim sing. l."] == -1
    assert rep["generators"] == "(3)^1"


def test_describe_empty_variety():
    R, _ = _plane()
    E = make_variety(R, [R.one()])
    assert E.is_empty()
    rep = describe(E).to_json()
    assert rep["dim"] == -1 and rep["degree"] == 0
    with pytest.raises(EmptyVariety):
        singular_locus(E)


def test_phrases():
    R, (x, y, z) = _plane()
    assert ambient_space(R).phrase() == "PP^2"
    assert make_variety(R, [x * z - y ** 2]).phrase() == "hypersurface in PP^2"
    assert make_variety(R, [x, y]).phrase() == "a point in PP^2"
    S = make_ring(F, [3], names="a b c d".split())
    a, b, c, d = S.gens()
    cubic = make_variety(S, [a * c - b ** 2, b * d - c ** 2, a * d - b * c])
    assert cubic.phrase() == "curve in PP^3"
    assert cubic.dim == 1 and cubic.codim == 2 and cubic.degree == 3


def test_singular_locus_conic_and_cusp():
    R, (x, y, z) = _plane()
    assert singular_locus(make_variety(R, [x * z - y ** 2])).dim == -1
    cusp = make_variety(R, [y ** 2 * z - x ** 3])
    sing = singular_locus(cusp)
    assert sing.dim == 0
    # the only singular point is (0:0:1)
    assert all(g.evaluate([0, 0, 1]) == 0 for g in sing.ideal.gens)
    assert describe(cusp).to_json()["dim sing. l."] == 0


def test_rational_point_normalization():
    p = RationalPoint(F, [[0, 3, 6], [2, 4]])
    assert p.coords == ((0, 1, 2), (1, 2))
    assert p == RationalPoint(F, [[0, 5, 10], [7, 14]])
    assert repr(p) == "(0:1:2) x (1:2)"
    with pytest.raises(ValueError):
        RationalPoint(F, [[0, 0]])


def test_point_to_variety_is_the_point():
    R = make_ring(F, [2, 1])
    p = RationalPoint(F, [[1, 4, 9], [0, 1]])
    V = point_to_variety(p, R)
    assert V.dim == 0 and V.degree == 1
    assert all(g.evaluate(p.flat()) == 0 for g in V.ideal.gens)
    assert V.phrase() == "a point in PP^2 x PP^1"


@pytest.mark.parametrize("seed", range(5))
def test_sampled_points_lie_on_hypersurfaces(seed, cubic_example):
    rng = random.Random(seed)
    X, _ = cubic_example
    p = sample_point(X, rng)
    assert X.ideal.gens[0].evaluate(p.flat()) == 0
    R, (x, y, z) = _plane()
    C = make_variety(R, [x * z - y ** 2])
    q = sample_point(C, rng)
    assert (x * z - y ** 2).evaluate(q.flat()) == 0
    assert point_of(C, rng).degree == 1


def test_sampling_needs_a_finite_field():
    R, (x, y, z) = _plane(QQ)
    with pytest.raises(NeedsFiniteField):
        sample_point(ambient_space(R), random.Random(0))


def test_segre_map_images():
    S11 = segre_map(make_ring(F, [1, 1]))
    img = S11.image()
    assert img.degree == 2 and img.codim == 1
    z00, z01, z10, z11 = img.ring.gens()
    assert img.ideal.contains(z01 * z10 - z00 * z11)
    assert segre_map(make_ring(F, [2, 2])).image().degree == 6
    assert segre_map(make_ring(F, [1, 2])).image().degree == 3


def test_base_change_of_a_variety():
    R, (x, y, z) = _plane(QQ)
    C = make_variety(R, [x * z - Fraction(1, 2) * y ** 2])
    C7 = C.base_change(make_ring(GF(7), [2], names="x y z".split()))
    assert C7.field == GF(7)
    assert C7.degree == 2 and C7.dim == 1
