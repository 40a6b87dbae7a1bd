"""Rational and multi-rational maps between multi-projective varieties."""

from __future__ import annotations

import random
from itertools import combinations, product
from typing import Sequence

from .errors import (BadArity, BadReduction, InhomogeneousForms, MixedRings, NeedsFiniteField, NonIntegralDegree,
                     NotBirational, NotComposable, RestrictionUndefined, ShapeMismatch, TargetMismatch,
                     ZeroRepresentative)
from .fields import GF
from .groebner import _vec_to_engine, engine_from_basis, kernel_transpose, module_groebner, syzygies
from .hilbert import segre_convert
from .idealcalc import (YES, MHIdeal, _eliminate_in, extend_ring, intersect_all, multi_saturate, ring_map_kernel,
                        saturate)
from .polyring import EXP_BITS, MPoly, MultiGradedRing
from .varieties import (MultiProjVariety, RationalPoint, ambient_space, maximal_minors, point_to_variety,
                        segre_indices)

# cap on the number of representative tuples intersected in an inverse image
MAX_REP_TUPLES = 64


def _vec_degree(vec) -> tuple:
    degs = {f.multidegree() for f in vec if f}
    if len(degs) != 1:
        raise InhomogeneousForms("the forms of a representative must share one multidegree")
    return degs.pop()


class RationalMapComponent:
    """A rational map X ⇢ P^m given by representatives (vectors of m+1 forms)."""

    def __init__(self, source: MultiProjVariety, m: int, reps: Sequence[Sequence[MPoly]], complete: bool = False):
        self.source = source
        self.m = m
        self.reps = [list(v) for v in reps]
        self.complete = complete
        self._base = None

    @property
    def ring(self) -> MultiGradedRing:
        return self.source.ring

    @property
    def rep(self) -> list:
        return self.reps[0]

    def rep_degree(self) -> tuple:
        return _vec_degree(self.rep)

    def _ideal_gb(self):
        I = self.source.ideal
        return I.gb() if I.gens else None

    def ensure_complete(self):
        """Replace the representatives by minimal generators of the whole module of them."""
        if self.complete:
            return
        gb = self._ideal_gb()
        F = self.rep
        syz = syzygies(F, gb)
        reps = kernel_transpose(syz, len(F), gb, self.ring)
        reps = [v for v in reps if any(v)]
        if not reps:
            raise ZeroRepresentative("representative module came out empty")
        reps.sort(key=lambda v: (sum(_vec_degree(v)), _vec_degree(v)))
        if not _in_module(F, reps, gb, self.ring):
            raise ArithmeticError("completed representatives do not contain the given one")
        self.reps = reps
        self.complete = True

    def degree_sequence(self) -> list:
        self.ensure_complete()
        return [_vec_degree(v) for v in self.reps]

    def coordinate_factor(self) -> int | None:
        """Index j when some representative is c·(coordinates of source factor j)."""
        R = self.ring
        for v in self.reps:
            j = _coordinate_block(v, R)
            if j is not None:
                return j
        return None

    def base_ideal(self) -> MHIdeal:
        """Multi-saturated ideal of the base locus."""
        if self._base is not None:
            return self._base
        R = self.ring
        I = self.source.ideal
        if self.coordinate_factor() is not None:
            self._base = MHIdeal(R, [R.one()], saturated=YES)
            return self._base
        entries = [f for f in self.rep if f]
        quick = multi_saturate(MHIdeal(R, I.gens + entries, check=False))
        if quick.gens and quick.is_unit():
            self._base = quick
            return quick
        self.ensure_complete()
        entries = [f for v in self.reps for f in v if f]
        self._base = multi_saturate(MHIdeal(R, I.gens + entries, check=False))
        return self._base

    def evaluate(self, vals: Sequence) -> list | None:
        for v in self.reps:
            out = [f.evaluate(vals) for f in v]
            if any(out):
                return out
        if not self.complete:
            self.ensure_complete()
            return self.evaluate(vals)
        return None

    def reduce_reps(self, gb):
        return [[gb.reduce(f) for f in v] for v in self.reps]


def _coordinate_block(v, R: MultiGradedRing):
    if len(v) < 1:
        return None
    first = v[0]
    if len(first.terms) != 1:
        return None
    c0 = next(iter(first.terms.values()))
    for j, block in enumerate(R.blocks):
        if len(block) != len(v):
            continue
        ok = True
        for k, f in enumerate(v):
            if len(f.terms) != 1:
                ok = False
                break
            ((m, c),) = f.terms.items()
            if c != c0 or m != 1 << (EXP_BITS * block[k]):
                ok = False
                break
        if ok:
            return j
    return None


def _in_module(F, reps, gb, ring) -> bool:
    """Is F in the submodule of (R/I)^m generated by reps?"""
    m = len(F)
    vecs = [list(v) for v in reps]
    layout, basis, _ = module_groebner(ring, vecs, [0] * m, gb, relation_positions=range(m) if gb else ())
    eng = engine_from_basis(layout, ring.field.characteristic, basis)
    ms, cs = _vec_to_engine(layout, F)
    rm, _ = eng.reduce(dict(zip(ms, cs)))
    return not rm


class MultiRationalMap:
    """Φ: X ⇢ Y ⊆ P^{m_1} x ... x P^{m_s}, one component per target factor."""

    def __init__(self, source: MultiProjVariety, target: MultiProjVariety, components: Sequence, check: bool = True,
                 kind: str = "MultirationalMap"):
        S = target.ring
        R = source.ring
        if len(components) != S.r:
            raise BadArity(f"target has {S.r} factors, got {len(components)} components")
        comps = []
        for i, c in enumerate(components):
            if isinstance(c, RationalMapComponent):
                comps.append(c)
                continue
            reps = [list(v) for v in c]
            for v in reps:
                if len(v) != S.factor_dims[i] + 1:
                    raise BadArity(f"component {i + 1} needs {S.factor_dims[i] + 1} forms, got {len(v)}")
                for f in v:
                    if f.ring != R:
                        raise MixedRings("forms must live in the source ring")
            comps.append(RationalMapComponent(source, S.factor_dims[i], reps))
        self.source = source
        self.target = target
        self.comps = comps
        self.kind = kind
        self.name = None
        self._cache: dict = {}
        self._birational = None
        if check:
            self._validate()

    # validation ----------------------------------------------------------------
    def _validate(self):
        I = self.source.ideal
        for comp in self.comps:
            for v in comp.reps:
                _vec_degree(v)
            red = [I.reduce(f) if I.gens else f for f in comp.rep]
            if not any(red):
                raise ZeroRepresentative("a representative vanishes identically on the source")
        if self.target.ideal.gens:
            images = self._images()
            for g in self.target.ideal.gens:
                h = g.substitute(images)
                if h and (not I.gens or I.reduce(h)):
                    raise TargetMismatch("the image is not contained in the target")

    # basic data ----------------------------------------------------------------
    @property
    def s(self) -> int:
        return len(self.comps)

    def reps_tuple(self) -> list:
        return [c.rep for c in self.comps]

    def _images(self, reps=None) -> list:
        reps = reps if reps is not None else self.reps_tuple()
        return [f for v in reps for f in v]

    def degree_sequences(self) -> list:
        return [c.degree_sequence() for c in self.comps]

    def evaluate(self, pt: RationalPoint) -> RationalPoint | None:
        vals = pt.flat()
        out = []
        for c in self.comps:
            v = c.evaluate(vals)
            if v is None:
                return None
            out.append(v)
        return RationalPoint(self.source.field, out)

    def description(self) -> str:
        if self._birational:
            word = "birational map"
        elif self.kind == "RationalMap" and self.s == 1 and sum(self.comps[0].rep_degree()) == 1:
            word = "linear rational map"
        else:
            word = "rational map"
        return f"{word} from {self.source.short()} to {self.target.short()}"

    def __repr__(self):
        return f"{self.kind} ({self.description()})"

    def __eq__(self, other):
        if not isinstance(other, MultiRationalMap):
            return NotImplemented
        return maps_equal(self, other)

    __hash__ = object.__hash__

    # graph -------------------------------------------------------------------
    def graph(self, route: str = "saturation") -> "GraphVariety":
        key = ("graph", route)
        if key not in self._cache:
            self._cache[key] = _graph(self, route)
        return self._cache[key]

    # images ------------------------------------------------------------------
    def image(self) -> MultiProjVariety:
        if "image" not in self._cache:
            K = ring_map_kernel(self.reps_tuple(), self.source.ideal, self.target.ring,
                                self.target.ideal if self.target.ideal.gens else None)
            Y = MultiProjVariety(self.target.ring, K)
            Y.param = ("image", self)
            self._cache["image"] = Y
        return self._cache["image"]

    def is_dominant(self) -> bool:
        if "dominant" not in self._cache:
            self._cache["dominant"] = self.image() == self.target
        return self._cache["dominant"]

    def restrict(self, Z: MultiProjVariety) -> "MultiRationalMap":
        """Φ restricted to a subvariety Z of the source."""
        if Z.ring != self.source.ring:
            raise MixedRings("Z does not live in the source ambient")
        if not all(Z.ideal.contains(g) for g in self.source.ideal.gens):
            raise RestrictionUndefined("Z is not contained in the source")
        comps = []
        for comp in self.comps:
            chosen = _nonvanishing_rep(comp, Z.ideal)
            if chosen is None:
                comp.ensure_complete()
                chosen = _nonvanishing_rep(comp, Z.ideal)
            if chosen is None:
                raise RestrictionUndefined("every representative vanishes on Z")
            comps.append([chosen])
        out = MultiRationalMap(Z, self.target, comps, check=False, kind=self.kind)
        return out

    def direct_image(self, Z: MultiProjVariety) -> MultiProjVariety:
        if Z.point is not None:
            q = self.evaluate(Z.point)
            if q is not None:
                return point_to_variety(q, self.target.ring)
        return self.restrict(Z).image()

    def _rep_tuples(self, single: bool = False) -> list:
        if single:
            return [self.reps_tuple()]
        witness = []
        for c in self.comps:
            j = c.coordinate_factor()
            if j is None:
                break
            witness.append(next(v for v in c.reps if _coordinate_block(v, c.ring) is not None))
        else:
            return [witness]
        for c in self.comps:
            c.ensure_complete()
        tuples = list(product(*[c.reps for c in self.comps]))
        return [list(t) for t in tuples[:MAX_REP_TUPLES]]

    def inverse_image(self, W: MultiProjVariety, single: bool = False) -> MultiProjVariety:
        """Closure of Φ^{-1}(W) away from the base locus."""
        if W.ring != self.target.ring:
            raise MixedRings("W does not live in the target ambient")
        R = self.source.ring
        I = self.source.ideal
        ideals = []
        for reps in self._rep_tuples(single):
            images = self._images(reps)
            sub = [g.substitute(images) for g in W.ideal.gens]
            J = MHIdeal(R, I.gens + [h for h in sub if h], check=False)
            for v in reps:
                J = saturate(J, MHIdeal(R, [f for f in v if f], check=False))
            ideals.append(J)
        K = multi_saturate(intersect_all(ideals))
        return MultiProjVariety(R, K)

    # base locus and degrees -------------------------------------------------------
    def base_locus(self) -> MultiProjVariety:
        if "base" not in self._cache:
            R = self.source.ring
            ideals = [c.base_ideal() for c in self.comps]
            nonunit = [J for J in ideals if not (J.gens and J.is_unit())]
            if not nonunit:
                B = MHIdeal(R, [R.one()], saturated=YES)
            else:
                B = multi_saturate(intersect_all(nonunit))
            self._cache["base"] = MultiProjVariety(R, B)
        return self._cache["base"]

    def is_morphism(self) -> bool:
        return self.base_locus().is_empty()

    def projective_degrees(self, mode: str = "deterministic", rng: random.Random | None = None,
                           allow_rationals: bool = False) -> list:
        if mode == "deterministic":
            if "projdeg" not in self._cache:
                G = self.graph().variety
                P = G.multidegree
                self._cache["projdeg"] = segre_convert(P, self.source.dim,
                                                       (self.source.ring.factor_dims, self.target.ring.factor_dims))
            return list(self._cache["projdeg"])
        if mode != "probabilistic":
            raise ValueError(f"unknown mode {mode!r}")
        if not self.source.field.is_finite and not allow_rationals:
            raise NeedsFiniteField("probabilistic projective degrees need a prime field")
        rng = rng or random.Random(0)
        return _probabilistic_degrees(self, rng)

    def map_degree(self) -> int:
        if "degree" not in self._cache:
            d0 = self.projective_degrees()[0]
            e = self.image().degree
            if e == 0 or d0 % e:
                raise NonIntegralDegree(f"d_0 = {d0} is not a multiple of the image degree {e}")
            self._cache["degree"] = d0 // e
        return self._cache["degree"]

    def is_birational(self) -> bool:
        if self._birational is None:
            self._birational = self.is_dominant() and self.map_degree() == 1
        return self._birational

    def inverse(self) -> "MultiRationalMap":
        if "inverse" not in self._cache:
            self._cache["inverse"] = _inverse(self)
        return self._cache["inverse"]

    def is_isomorphism(self) -> bool:
        return self.is_morphism() and self.inverse().is_morphism()

    # composition --------------------------------------------------------------
    def then(self, other: "MultiRationalMap") -> "MultiRationalMap":
        return compose(self, other)

    def to_segre_map(self) -> "MultiRationalMap":
        return to_segre_map(self)

    def base_change(self, p: int) -> "MultiRationalMap":
        return base_change(self, p)


def _nonvanishing_rep(comp: RationalMapComponent, J: MHIdeal):
    for v in comp.reps:
        red = [J.reduce(f) if J.gens else f for f in v]
        if any(red):
            return red
    return None


# ---------------------------------------------------------------------------
# equality and composition


def maps_equal(phi: MultiRationalMap, psi: MultiRationalMap) -> bool:
    """Componentwise: the 2x2 minors of stacked representatives vanish on the source."""
    if phi.s != psi.s or phi.source.ring != psi.source.ring or phi.target.ring != psi.target.ring:
        raise ShapeMismatch("maps have different sources or targets")
    if phi.source is not psi.source and not (phi.source == psi.source):
        return False
    if phi.target is not psi.target and not (phi.target == psi.target):
        return False
    I = phi.source.ideal
    for a, b in zip(phi.comps, psi.comps):
        if not _proportional(a.rep, b.rep, I):
            return False
    return True


def _proportional(F, G, I: MHIdeal) -> bool:
    if len(F) != len(G):
        raise ShapeMismatch("representatives of different length")
    for i in range(len(F)):
        for j in range(i + 1, len(F)):
            m = F[i] * G[j] - F[j] * G[i]
            if m and (not I.gens or I.reduce(m)):
                return False
    return True


def _substitute_rep(G, images, I: MHIdeal):
    out = [g.substitute(images) for g in G]
    if I.gens:
        out = [I.reduce(h) for h in out]
    return out


def compose(phi: MultiRationalMap, psi: MultiRationalMap) -> MultiRationalMap:
    """ψ∘φ for φ: X ⇢ Y and ψ: Y ⇢ Z."""
    if psi.source.ring != phi.target.ring:
        raise NotComposable("the target of the first map is not the source of the second")
    I = phi.source.ideal
    comps = []
    for comp in psi.comps:
        rep = _compose_component(phi, comp, I, complete=False)
        if rep is None:
            rep = _compose_component(phi, comp, I, complete=True)
        if rep is None:
            raise NotComposable("every composed representative vanishes on the source")
        comps.append([rep])
    return MultiRationalMap(phi.source, psi.target, comps, check=False)


def _compose_component(phi, comp, I, complete: bool):
    if complete:
        comp.ensure_complete()
        for c in phi.comps:
            c.ensure_complete()
        tuples = list(product(*[c.reps for c in phi.comps]))[:MAX_REP_TUPLES]
    else:
        tuples = [phi.reps_tuple()]
    for reps in tuples:
        images = [f for v in reps for f in v]
        for G in comp.reps:
            out = _substitute_rep(G, images, I)
            if any(out):
                return out
    return None


def identity_map(X: MultiProjVariety) -> MultiRationalMap:
    R = X.ring
    return MultiRationalMap(X, X, [[R.factor_vars(j)] for j in range(R.r)], check=False)


# ---------------------------------------------------------------------------
# graphs


class GraphVariety:
    """The graph of Φ with its two coordinate projections."""

    def __init__(self, variety: MultiProjVariety, proj1: MultiRationalMap, proj2: MultiRationalMap):
        self.variety = variety
        self.proj1 = proj1
        self.proj2 = proj2

    def __iter__(self):
        return iter((self.proj1, self.proj2))


def _graph(phi: MultiRationalMap, route: str) -> GraphVariety:
    R = phi.source.ring
    S = phi.target.ring
    T = R.product(S)
    nR = R.nvars
    I = [g.change_ring(T) for g in phi.source.ideal.gens]
    reps = [[f.change_ring(T) for f in v] for v in phi.reps_tuple()]
    if route == "saturation":
        gens = list(I)
        for i, v in enumerate(reps):
            ys = [T.gen(nR + k) for k in S.blocks[i]]
            for a in range(len(v)):
                for b in range(a + 1, len(v)):
                    m = ys[a] * v[b] - ys[b] * v[a]
                    if m:
                        gens.append(m)
        J = MHIdeal(T, gens, check=False)
        for v in reps:
            J = saturate(J, MHIdeal(T, [f for f in v if f], check=False))
        G = multi_saturate(J)
    elif route == "elimination":
        G = multi_saturate(_graph_by_elimination(T, nR, S, I, reps))
    else:
        raise ValueError(f"unknown graph route {route!r}")
    var = MultiProjVariety(T, G)
    var.param = ("graph", phi)
    p1 = MultiRationalMap(var, phi.source, [[T.factor_vars(j)] for j in range(R.r)], check=False)
    p2 = MultiRationalMap(var, phi.target, [[T.factor_vars(R.r + i)] for i in range(S.r)], check=False)
    p1._birational = True
    return GraphVariety(var, p1, p2)


def _graph_by_elimination(T: MultiGradedRing, nR: int, S: MultiGradedRing, I: list, reps: list) -> MHIdeal:

    s = len(reps)
    E = extend_ring(T, s, "_t")
    lift = lambda f: MPoly(E, f.terms)  # noqa: E731
    gens = [lift(g) for g in I]
    for i, v in enumerate(reps):
        t = E.gen(T.nvars + i)
        for k, idx in enumerate(S.blocks[i]):
            gens.append(E.gen(nR + idx) - t * lift(v[k]))
    out = _eliminate_in(E, gens, list(range(T.nvars, T.nvars + s)))
    return MHIdeal(T, [MPoly(T, g.terms) for g in out])


# ---------------------------------------------------------------------------
# projective degrees, probabilistic


def _random_multilinear(S: MultiGradedRing, rng: random.Random) -> MPoly:
    F = S.field
    f = S.zero()
    for tup in product(*[range(len(b)) for b in S.blocks]):
        m = S.one()
        for i, k in enumerate(tup):
            m = m * S.gen(S.blocks[i][k])
        f = f + m.scale(F.random(rng))
    return f


def _probabilistic_degrees(phi: MultiRationalMap, rng: random.Random) -> list:
    k = phi.source.dim
    S = phi.target.ring
    out = []
    for i in range(k + 1):
        forms = [_random_multilinear(S, rng) for _ in range(k - i)]
        W = MultiProjVariety(S, MHIdeal(S, phi.target.ideal.gens + forms, check=False))
        pre = phi.inverse_image(W, single=True)
        out.append(pre.degree if pre.dim == i else 0)
    return out


# ---------------------------------------------------------------------------
# inverse via the Jacobian dual


def _coefficient_row(g: MPoly, block: Sequence[int], nR: int, S: MultiGradedRing) -> list:
    row = [dict() for _ in block]
    pos = {1 << (EXP_BITS * v): k for k, v in enumerate(block)}
    low = (1 << (EXP_BITS * nR)) - 1
    for m, c in g.terms.items():
        k = pos[m & low]
        row[k][m >> (EXP_BITS * nR)] = c
    return [MPoly(S, d) for d in row]


def _inverse(phi: MultiRationalMap) -> MultiRationalMap:
    if not phi.is_dominant():
        raise NotBirational("the map is not dominant onto its target")
    if not phi._birational and phi.map_degree() != 1:
        raise NotBirational(f"the map has degree {phi.map_degree()}")
    X, Y = phi.source, phi.target
    R, S = X.ring, Y.ring
    nR = R.nvars
    G = phi.graph().variety.ideal
    gens = G.mingens()
    Jy = Y.ideal
    reduce = Jy.reduce if Jy.gens else None
    reps = []
    for j in range(R.r):
        e = tuple(1 if i == j else 0 for i in range(R.r))
        sel = [g for g in gens if g.multidegree()[:R.r] == e]
        n = R.factor_dims[j]
        rows = [_coefficient_row(g, R.blocks[j], nR, S) for g in sel]
        if reduce is not None:
            rows = [[reduce(a) for a in row] for row in rows]
        rows = [row for row in rows if any(row)]
        found = None
        if n == 0:
            found = [S.one()]
        for subset in combinations(range(len(rows)), n):
            M = [rows[r] for r in subset]
            minors = maximal_minors(M, reduce)
            cols = tuple(range(n + 1))
            v = []
            for iota in range(n + 1):
                d = minors[cols[:iota] + cols[iota + 1:]]
                v.append(-d if iota % 2 else d)
            if any(v):
                found = v
                break
        if found is None:
            raise NotBirational(f"the Jacobian dual of factor {j + 1} does not have rank {n}")
        reps.append([found])
    psi = MultiRationalMap(Y, X, reps, check=False, kind="MultirationalMap")
    if not _is_identity(phi, psi) or not _is_identity(psi, phi):
        raise NotBirational("the candidate inverse does not compose to the identity")
    psi._birational = True
    phi._birational = True
    psi._cache["inverse"] = phi
    return psi


def _is_identity(phi: MultiRationalMap, psi: MultiRationalMap) -> bool:
    """Is ψ∘φ the identity of φ's source?"""
    X = phi.source
    I = X.ideal
    R = X.ring
    for j, comp in enumerate(psi.comps):
        rep = _compose_component(phi, comp, I, complete=False)
        if rep is None:
            rep = _compose_component(phi, comp, I, complete=True)
        if rep is None:
            return False
        if not _proportional(rep, R.factor_vars(j), I):
            return False
    return True


# ---------------------------------------------------------------------------
# Segre and base change


def to_segre_map(phi: MultiRationalMap) -> MultiRationalMap:
    """Φ followed by the Segre embedding of the target ambient, as a map to P^M."""
    if phi.s == 1:
        return phi
    S = phi.target.ring
    idx = segre_indices(S.factor_dims)
    reps = phi.reps_tuple()
    R = phi.source.ring
    forms = []
    for tup in idx:
        f = R.one()
        for i, k in enumerate(tup):
            f = f * reps[i][k]
        forms.append(f)
    I = phi.source.ideal
    if I.gens:
        forms = [I.reduce(f) for f in forms]
    M = len(idx) - 1
    target = ambient_space(MultiGradedRing(R.field, [M], [f"z{i}" for i in range(M + 1)]))
    return MultiRationalMap(phi.source, target, [[forms]], check=False)


def base_change(phi: MultiRationalMap, p: int, memo: dict | None = None) -> MultiRationalMap:
    """Reduce all data of φ modulo p."""
    F = phi.source.field
    if F.is_finite:
        if F.characteristic == p:
            return phi
        raise BadReduction(f"map is already defined over {F}; cannot move to GF({p})")
    memo = {} if memo is None else memo
    return _bc_map(phi, GF(p), memo)


def _bc_ring(R: MultiGradedRing, K, memo) -> MultiGradedRing:
    key = ("ring", id(R))
    if key not in memo:
        memo[key] = R.with_field(K)
    return memo[key]


def _bc_variety(X: MultiProjVariety, K, memo) -> MultiProjVariety:
    key = ("var", id(X))
    if key in memo:
        return memo[key]
    R = _bc_ring(X.ring, K, memo)
    gens = []
    for g in X.ideal.gens:
        h = g.base_change(R)
        if not h:
            raise BadReduction("a generator vanishes modulo p")
        gens.append(h)
    I = MHIdeal(R, gens, check=False)
    I = multi_saturate(I) if gens else MHIdeal(R, [], saturated=YES)
    if I.gens and I.is_unit():
        raise BadReduction("the ideal becomes the unit ideal modulo p")
    Y = MultiProjVariety(R, I, X.name)
    if X.point is not None:
        Y.point = RationalPoint(K, [[K.reduce(c) for c in b] for b in X.point.coords])
    memo[key] = Y
    if X.param is not None:
        kind, m = X.param
        Y.param = (kind, _bc_map(m, K, memo))
    return Y


def _bc_map(phi: MultiRationalMap, K, memo) -> MultiRationalMap:
    key = ("map", id(phi))
    if key in memo:
        return memo[key]
    X = _bc_variety(phi.source, K, memo)
    Y = _bc_variety(phi.target, K, memo)
    comps = []
    for c in phi.comps:
        reps = [[f.base_change(X.ring) for f in v] for v in c.reps]
        reps = [v for v in reps if any(v)]
        if not reps:
            raise BadReduction("a representative vanishes modulo p")
        comps.append(reps)
    out = MultiRationalMap(X, Y, comps, check=False, kind=phi.kind)
    out._birational = phi._birational
    out.name = phi.name
    memo[key] = out
    return out


# ---------------------------------------------------------------------------
# functional spellings


def make_map(source: MultiProjVariety, target: MultiProjVariety, forms: Sequence, kind: str = "MultirationalMap"):
    comps = [[list(f)] for f in forms]
    return MultiRationalMap(source, target, comps, kind=kind)


def base_locus(phi: MultiRationalMap) -> MultiProjVariety:
    return phi.base_locus()


def image(phi: MultiRationalMap) -> MultiProjVariety:
    return phi.image()


def is_dominant(phi: MultiRationalMap) -> bool:
    return phi.is_dominant()


def direct_image(phi: MultiRationalMap, Z: MultiProjVariety) -> MultiProjVariety:
    return phi.direct_image(Z)


def inverse_image(phi: MultiRationalMap, W: MultiProjVariety) -> MultiProjVariety:
    return phi.inverse_image(W)


def graph(phi: MultiRationalMap, route: str = "saturation") -> GraphVariety:
    return phi.graph(route)


def projective_degrees(phi: MultiRationalMap, mode: str = "deterministic", rng=None) -> list:
    return phi.projective_degrees(mode, rng)


def map_degree(phi: MultiRationalMap) -> int:
    return phi.map_degree()


def is_birational(phi: MultiRationalMap) -> bool:
    return phi.is_birational()


def inverse(phi: MultiRationalMap) -> MultiRationalMap:
    return phi.inverse()


def is_morphism(phi: MultiRationalMap) -> bool:
    return phi.is_morphism()


def is_isomorphism(phi: MultiRationalMap) -> bool:
    return phi.is_isomorphism()
