"""Multi-projective varieties: construction, invariants, reports, singular
loci, Segre embeddings and rational points over prime fields."""

from __future__ import annotations

import random
from collections import Counter
from itertools import combinations, product
from typing import Sequence

from .errors import EmptyVariety, MixedRings, NeedsFiniteField, SamplingFailed, UnsupportedClass
from .fields import Field, univariate_roots
from .hilbert import MultidegreePoly, krull_dim, multidegree, segre_degree_of
from .idealcalc import YES, MHIdeal, multi_saturate, scheme_equal
from .polyring import MPoly, MultiGradedRing

DEFAULT_RETRIES = 100


class RationalPoint:
    """A point of P^{n_1} x ... x P^{n_r}; each block normalized to start with 1."""

    def __init__(self, field: Field, coords: Sequence[Sequence]):
        blocks = []
        for block in coords:
            vals = [field.convert(c) for c in block]
            lead = next((c for c in vals if c), None)
            if lead is None:
                raise ValueError("a point needs a nonzero coordinate in every factor")
            inv = field.inv(lead)
            blocks.append(tuple(field.mul(c, inv) for c in vals))
        self.field = field
        self.coords = tuple(blocks)

    @property
    def factor_dims(self) -> tuple:
        return tuple(len(b) - 1 for b in self.coords)

    def flat(self) -> list:
        return [c for b in self.coords for c in b]

    def __eq__(self, other):
        return isinstance(other, RationalPoint) and self.field == other.field and self.coords == other.coords

    def __hash__(self):
        return hash((self.field, self.coords))

    def __repr__(self):
        F = self.field
        return " x ".join("(" + ":".join(F.to_str(c) for c in b) + ")" for b in self.coords)

    def to_json(self):
        F = self.field
        return [[F.to_json(c) for c in b] for b in self.coords]


_DIM_WORDS = {1: "curve", 2: "surface", 3: "threefold"}


class MultiProjVariety:
    """V(I) in a product of projective spaces, with I multi-saturated."""

    def __init__(self, ring: MultiGradedRing, ideal: MHIdeal, name: str | None = None):
        if ideal.ring != ring:
            raise MixedRings("ideal outside the variety's ring")
        self.ring = ring
        self.ideal = ideal
        self.name = name
        self.param = None  # (kind, map) for varieties swept out by a map
        self.point = None  # RationalPoint for point varieties
        self._cache: dict = {}

    # invariants ---------------------------------------------------------------
    @property
    def field(self) -> Field:
        return self.ring.field

    def is_empty(self) -> bool:
        v = self._cache.get("empty")
        if v is None:
            v = bool(self.ideal.gens) and self.ideal.is_unit()
            self._cache["empty"] = v
        return v

    def is_ambient(self) -> bool:
        return not self.ideal.gens

    @property
    def dim(self) -> int:
        if "dim" not in self._cache:
            if self.is_empty():
                self._cache["dim"] = -1
            else:
                self._cache["dim"] = krull_dim(self.ideal) - self.ring.r
        return self._cache["dim"]

    @property
    def ambient_dim(self) -> int:
        return sum(self.ring.factor_dims)

    @property
    def codim(self) -> int:
        return self.ambient_dim - self.dim

    @property
    def multidegree(self) -> MultidegreePoly:
        if "mdeg" not in self._cache:
            if self.is_empty():
                self._cache["mdeg"] = MultidegreePoly(self.ring.factor_dims, {})
            else:
                self._cache["mdeg"] = multidegree(self.ideal)
        return self._cache["mdeg"]

    @property
    def degree(self) -> int:
        """Degree of the image under the Segre embedding."""
        if "degree" not in self._cache:
            if self.is_empty():
                self._cache["degree"] = 0
            else:
                self._cache["degree"] = segre_degree_of(self.multidegree, self.dim)
        return self._cache["degree"]

    def invariants(self) -> tuple:
        if self.is_empty():
            raise EmptyVariety("the empty variety has no invariants")
        return self.dim, self.codim, self.multidegree, self.degree

    # comparisons ---------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, MultiProjVariety):
            return NotImplemented
        if self.ring != other.ring:
            return False
        return scheme_equal(self.ideal, other.ideal)

    __hash__ = object.__hash__

    def contains(self, other: "MultiProjVariety") -> bool:
        """Scheme containment other ⊆ self."""
        return all(other.ideal.contains(g) for g in self.ideal.gens)

    # text ---------------------------------------------------------------
    def ambient_str(self) -> str:
        return self.ring.ambient_str()

    def phrase(self) -> str:
        amb = self.ambient_str()
        if self.is_empty():
            return f"empty subscheme of {amb}"
        if self.is_ambient():
            return amb
        if self.codim == 1:
            return f"hypersurface in {amb}"
        d = self.dim
        if d == 0 and self.degree == 1:
            return f"a point in {amb}"
        if d in _DIM_WORDS:
            return f"{_DIM_WORDS[d]} in {amb}"
        return f"{d}-dimensional subvariety of {amb}"

    def short(self) -> str:
        if self.is_ambient():
            return self.ambient_str()
        if self.name:
            return self.name
        return self.phrase()

    def __repr__(self):
        return f"ProjectiveVariety, {self.phrase()}"

    def generator_tally(self) -> str:
        gens = self.ideal.mingens()
        counts = Counter(g.multidegree() for g in gens)
        keys = sorted(counts, key=lambda d: (sum(d), tuple(-x for x in d)))
        return " ".join(f"({','.join(map(str, d))})^{counts[d]}" for d in keys)

    def describe(self) -> "Report":
        return describe(self)

    def base_change(self, ring: MultiGradedRing) -> "MultiProjVariety":
        X = MultiProjVariety(ring, self.ideal.base_change(ring), self.name)
        return X


# ---------------------------------------------------------------------------
# constructors


def ambient_space(ring: MultiGradedRing, name: str | None = None) -> MultiProjVariety:
    return MultiProjVariety(ring, MHIdeal(ring, [], saturated=YES), name)


def make_variety(ring: MultiGradedRing, gens: Sequence[MPoly], name: str | None = None) -> MultiProjVariety:
    I = multi_saturate(MHIdeal(ring, gens))
    return MultiProjVariety(ring, I, name)


def variety_from_ideal(ideal: MHIdeal, name: str | None = None) -> MultiProjVariety:
    return MultiProjVariety(ideal.ring, multi_saturate(ideal), name)


def point_to_variety(pt: RationalPoint, ring: MultiGradedRing) -> MultiProjVariety:
    """V of the 2x2 minors of (variables | coordinates) in each factor."""
    if pt.factor_dims != ring.factor_dims:
        raise MixedRings("point and ring have different ambients")
    gens = []
    for block, coords in zip(ring.blocks, pt.coords):
        # coordinates start with 1 after the first nonzero one; use it as pivot
        k = next(i for i, c in enumerate(coords) if c)
        xk = ring.gen(block[k])
        for i, c in enumerate(coords):
            if i != k:
                gens.append(ring.gen(block[i]) - xk.scale(c))
    X = MultiProjVariety(ring, MHIdeal(ring, gens, saturated=YES))
    X.point = pt
    return X


# ---------------------------------------------------------------------------
# describe


class Report:
    """Ordered (label, value) pairs rendered like ``label:....... value``."""

    WIDTH = 22

    def __init__(self, items: list):
        self.items = items

    def lines(self) -> list:
        out = []
        for label, value in self.items:
            head = label + ":"
            out.append(head + "." * max(1, self.WIDTH - len(head)) + " " + str(value))
        return out

    def __str__(self):
        return "\n".join(self.lines())

    def to_json(self) -> dict:
        out = {}
        for label, value in self.items:
            if isinstance(value, MultidegreePoly):
                value = value.to_json()
            out[label] = value
        return out


def describe(X: MultiProjVariety) -> Report:
    if X.is_empty():
        return Report([("ambient", X.ambient_str()), ("dim", -1), ("codim", X.ambient_dim + 1), ("degree", 0),
                       ("multidegree", "0"), ("generators", "(" + ",".join("0" * X.ring.r) + ")^1"),
                       ("purity", "not computed"), ("dim sing. l.", -1)])
    sing = singular_locus(X)
    return Report([
        ("ambient", X.ambient_str()),
        ("dim", X.dim),
        ("codim", X.codim),
        ("degree", X.degree),
        ("multidegree", X.multidegree),
        ("generators", X.generator_tally() if X.ideal.gens else "none"),
        ("purity", "not computed"),
        ("dim sing. l.", sing.dim),
    ])


# ---------------------------------------------------------------------------
# singular locus


def determinant(M: list, reduce=None) -> MPoly:
    """Determinant of a square matrix of polynomials by expansion along the first row."""
    n = len(M)
    if n == 1:
        return M[0][0]
    minors = _all_minors(M, reduce)
    return minors[tuple(range(n))]


def _all_minors(M: list, reduce=None) -> dict:
    """Maximal minors of the k x c matrix M indexed by k-subsets of columns."""
    k = len(M)
    c = len(M[0])
    ring = next(f.ring for row in M for f in row if f is not None)
    prev = {(): ring.one()}
    for i in range(k):
        cur = {}
        for cols in combinations(range(c), i + 1):
            acc = ring.zero()
            for pos, col in enumerate(cols):
                sub = cols[:pos] + cols[pos + 1:]
                a = M[i][col]
                if not a:
                    continue
                m = prev.get(sub)
                if not m:
                    continue
                term = a * m
                acc = acc - term if pos % 2 else acc + term
            if reduce is not None and acc:
                acc = reduce(acc)
            cur[cols] = acc
        prev = cur
    return prev


def maximal_minors(M: list, reduce=None) -> dict:
    return _all_minors(M, reduce)


def jacobian(gens: Sequence[MPoly], ring: MultiGradedRing) -> list:
    return [[g.derivative(i) for i in range(ring.nvars)] for g in gens]


def singular_locus(X: MultiProjVariety) -> MultiProjVariety:
    if X.is_empty():
        raise EmptyVariety("singular locus of the empty variety")
    R = X.ring
    c = X.codim
    if c == 0:
        return MultiProjVariety(R, MHIdeal(R, [R.one()], saturated=YES))
    gens = X.ideal.mingens()
    Jac = jacobian(gens, R)
    red = X.ideal.reduce
    minors = []
    for rows in combinations(range(len(gens)), c):
        sub = [Jac[i] for i in rows]
        for cols in combinations(range(R.nvars), c):
            m = determinant([[row[j] for j in cols] for row in sub])
            if m:
                m = red(m)
                if m:
                    minors.append(m)
    I = multi_saturate(MHIdeal(R, X.ideal.gens + minors, check=False))
    return MultiProjVariety(R, I)


# ---------------------------------------------------------------------------
# sampling


def _random_block(F: Field, rng: random.Random, n: int) -> list:
    while True:
        v = [F.random(rng) for _ in range(n + 1)]
        if any(v):
            return v


def sample_point(X: MultiProjVariety, rng: random.Random, retries: int = DEFAULT_RETRIES) -> RationalPoint:
    """A random GF(p)-point of X, for the supported classes of varieties."""
    F = X.field
    if not F.is_finite:
        raise NeedsFiniteField("rational points are only sampled over prime fields")
    if X.is_empty():
        raise EmptyVariety("the empty variety has no points")
    if X.point is not None:
        return X.point
    for _ in range(retries):
        pt = _try_sample(X, rng)
        if pt is None:
            continue
        vals = pt.flat()
        if all(not g.evaluate(vals) for g in X.ideal.gens):
            return pt
        raise SamplingFailed("sampled point does not satisfy the equations")
    raise SamplingFailed(f"no point found after {retries} attempts")


def _try_sample(X: MultiProjVariety, rng: random.Random):
    R = X.ring
    F = X.field
    if X.is_ambient():
        return RationalPoint(F, [_random_block(F, rng, n) for n in R.factor_dims])
    if X.param is not None:
        kind, phi = X.param
        p = sample_point(phi.source, rng)
        q = phi.evaluate(p)
        if q is None:
            return None
        if kind == "graph":
            return RationalPoint(F, list(p.coords) + list(q.coords))
        return q
    gens = X.ideal.mingens()
    if len(gens) == 1:
        return _sample_hypersurface(X, gens[0], rng)
    raise UnsupportedClass("point sampling supports ambients, hypersurfaces, points and parameterized varieties")


def _sample_hypersurface(X: MultiProjVariety, f: MPoly, rng: random.Random):
    R = X.ring
    F = X.field
    deg = f.multidegree()
    j = max(range(R.r), key=lambda i: (deg[i] > 0, -i))
    blocks = [_random_block(F, rng, n) for n in R.factor_dims]
    a = _random_block(F, rng, R.factor_dims[j])
    b = _random_block(F, rng, R.factor_dims[j])
    # restrict f to the line s*a + b in factor j: a univariate polynomial in s
    p = F.characteristic
    U = MultiGradedRing(F, [0], ["_s"])
    s = U.gen(0)
    images = []
    for i in range(R.r):
        for k in range(R.factor_dims[i] + 1):
            if i == j:
                images.append(s.scale(a[k]) + U.constant(b[k]))
            else:
                images.append(U.constant(blocks[i][k]))
    g = f.substitute(images)
    if not g:
        return None
    coeffs = [0] * (g.total_degree() + 1)
    for m, c in g.terms.items():
        coeffs[m] = c
    roots = sorted(univariate_roots(coeffs, F, rng))
    if not roots:
        return None
    t = roots[rng.randrange(len(roots))]
    blocks[j] = [(t * a[k] + b[k]) % p for k in range(len(a))]
    if not any(blocks[j]):
        return None
    return RationalPoint(F, blocks)


def point_of(X: MultiProjVariety, rng: random.Random) -> MultiProjVariety:
    """The point variety of a sampled rational point of X."""
    return point_to_variety(sample_point(X, rng), X.ring)


# ---------------------------------------------------------------------------
# Segre embedding


def segre_indices(factor_dims: Sequence[int]) -> list:
    return list(product(*[range(n + 1) for n in factor_dims]))


def segre_map(ring: MultiGradedRing):
    """The Segre embedding of the ambient of ``ring`` into P^N."""
    from .ratmaps import MultiRationalMap

    idx = segre_indices(ring.factor_dims)
    forms = []
    for tup in idx:
        f = ring.one()
        for j, i in enumerate(tup):
            f = f * ring.gen(ring.blocks[j][i])
        forms.append(f)
    N = len(idx) - 1
    names = ["z" + "".join(map(str, t)) if max(ring.factor_dims) < 10 else "z_" + "_".join(map(str, t)) for t in idx]
    target = MultiGradedRing(ring.field, [N], names)
    return MultiRationalMap(ambient_space(ring), ambient_space(target), [[forms]])
