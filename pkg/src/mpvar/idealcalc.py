"""Ideal calculus on multi-homogeneous ideals: sums, products, intersections,
quotients, saturations and kernels of graded ring maps."""

from __future__ import annotations

import random
from typing import Sequence

from .errors import InhomogeneousImages, MixedRings, NotHomogeneous, ZeroDivisorInput, ZeroIdealDivisor
from .groebner import GREVLEX, GroebnerBasis, MonomialOrder, block_order, buchberger, grevlex, minimal_generators
from .polyring import EXP_BITS, EXP_MASK, MPoly, MultiGradedRing

YES, NO, UNKNOWN = "yes", "no", "unknown"

# how far saturation checks g * f^N in I before giving up on a shortcut
_VERIFY_POWER = 12


class MHIdeal:
    """Multi-homogeneous ideal with a per-order Groebner basis cache."""

    def __init__(self, ring: MultiGradedRing, gens: Sequence[MPoly] = (), saturated: str = UNKNOWN,
                 check: bool = True):
        gens = [g for g in gens if g]
        for g in gens:
            if g.ring != ring:
                raise MixedRings("generator outside the ideal's ring")
            if check and not g.is_homogeneous():
                raise NotHomogeneous(f"{g} is not multihomogeneous")
        self.ring = ring
        self.gens = gens
        self.saturated = saturated
        self._gb: dict = {}
        self._mingens = None

    def __repr__(self):
        return f"ideal({', '.join(map(str, self.gens))})"

    # groebner bases -----------------------------------------------------------
    def gb(self, order: MonomialOrder | None = None) -> GroebnerBasis:
        order = order or GREVLEX
        gb = self._gb.get(order)
        if gb is None:
            gb = buchberger(self.gens, order, self.ring)
            self._gb[order] = gb
        return gb

    def set_gb(self, gb: GroebnerBasis):
        self._gb[gb.order] = gb

    def reduce(self, f: MPoly) -> MPoly:
        return self.gb().reduce(f)

    def contains(self, f: MPoly) -> bool:
        return not f or self.gb().contains(f)

    def contains_ideal(self, other: "MHIdeal") -> bool:
        return all(self.contains(g) for g in other.gens)

    def is_unit(self) -> bool:
        return self.gb().is_unit()

    def is_zero(self) -> bool:
        return not self.gens

    def same_ideal(self, other: "MHIdeal") -> bool:
        if self.ring != other.ring:
            raise MixedRings("ideals live in different rings")
        a, b = self.gb(), other.gb()
        return [g.terms for g in a.gens] == [g.terms for g in b.gens]

    def mingens(self) -> list:
        """Minimal homogeneous generators (computed once)."""
        if self._mingens is None:
            self._mingens = minimal_generators(self.gb().gens)
        return self._mingens

    def base_change(self, ring: MultiGradedRing) -> "MHIdeal":
        return MHIdeal(ring, [g.base_change(ring) for g in self.gens], self.saturated, check=False)


def ideal(ring: MultiGradedRing, gens: Sequence[MPoly] = ()) -> MHIdeal:
    return MHIdeal(ring, gens)


def irrelevant_ideal(ring: MultiGradedRing, j: int) -> MHIdeal:
    return MHIdeal(ring, ring.factor_vars(j))


# ---------------------------------------------------------------------------
# auxiliary rings


def extend_ring(ring: MultiGradedRing, count: int, prefix: str = "_w") -> MultiGradedRing:
    """``ring`` with ``count`` extra variables appended (each its own P^0 factor)."""
    names = list(ring.names)
    taken = set(names)
    extra = []
    k = 0
    while len(extra) < count:
        s = f"{prefix}{k}"
        if s not in taken:
            extra.append(s)
        k += 1
    return MultiGradedRing(ring.field, ring.factor_dims + (0,) * count, names + extra)


def _lift(f: MPoly, ring: MultiGradedRing) -> MPoly:
    return MPoly(ring, f.terms)


def _restrict(f: MPoly, ring: MultiGradedRing) -> MPoly:
    return MPoly(ring, f.terms)


def _var_mask(indices) -> int:
    mask = 0
    for i in indices:
        mask |= EXP_MASK << (EXP_BITS * i)
    return mask


def _eliminate_in(ring: MultiGradedRing, gens: list, drop: Sequence[int], weights=None) -> list:
    gb = buchberger(gens, block_order(drop, weights), ring)
    mask = _var_mask(drop)
    return [g for g in gb.gens if not any(m & mask for m in g.terms)]


# ---------------------------------------------------------------------------
# basic operations


def ideal_sum(a: MHIdeal, b: MHIdeal) -> MHIdeal:
    _same(a, b)
    return MHIdeal(a.ring, a.gens + b.gens, check=False)


def ideal_product(a: MHIdeal, b: MHIdeal) -> MHIdeal:
    _same(a, b)
    return MHIdeal(a.ring, [f * g for f in a.gens for g in b.gens], check=False)


def intersect(a: MHIdeal, b: MHIdeal) -> MHIdeal:
    """a ∩ b by eliminating t from t·a + (1 - t)·b."""
    _same(a, b)
    if not a.gens or not b.gens:
        return MHIdeal(a.ring, [])
    if a.is_unit():
        return b
    if b.is_unit():
        return a
    R = a.ring
    E = extend_ring(R, 1)
    t = E.gen(R.nvars)
    gens = [t * _lift(f, E) for f in a.gens] + [(1 - t) * _lift(g, E) for g in b.gens]
    out = _eliminate_in(E, gens, [R.nvars])
    return MHIdeal(R, [_restrict(g, R) for g in out], check=False)


def intersect_all(ideals: Sequence[MHIdeal]) -> MHIdeal:
    ideals = list(ideals)
    acc = ideals[0]
    for b in ideals[1:]:
        acc = intersect(acc, b)
    return acc


def ideal_ops(a: MHIdeal, b: MHIdeal, op: str) -> MHIdeal:
    return {"sum": ideal_sum, "product": ideal_product, "intersect": intersect}[op](a, b)


def _same(a: MHIdeal, b: MHIdeal):
    if a.ring != b.ring:
        raise MixedRings("ideals live in different rings")


# ---------------------------------------------------------------------------
# quotients and saturation


def _divide_out(g: MPoly, i: int, limit: int | None = None) -> MPoly:
    s = EXP_BITS * i
    k = min((m >> s) & EXP_MASK for m in g.terms)
    if limit is not None:
        k = min(k, limit)
    if not k:
        return g
    return MPoly(g.ring, {m - (k << s): c for m, c in g.terms.items()})


def _last_order(ring: MultiGradedRing, i: int, weights=None) -> MonomialOrder:
    seq = [j for j in range(ring.nvars) if j != i] + [i]
    return grevlex(seq, weights)


def _exact_quotient(g: MPoly, f: MPoly) -> MPoly:
    q = g.exact_div(f)
    if q is None:
        raise ArithmeticError("inexact division")
    return q


def colon(a: MHIdeal, f: MPoly) -> MHIdeal:
    """{g : g f in a}."""
    if not f:
        raise ZeroDivisorInput("colon by the zero polynomial")
    R = a.ring
    if f.is_constant():
        return a
    i = f.as_variable()
    if i is not None:
        gb = a.gb(_last_order(R, i))
        return MHIdeal(R, [_divide_out(g, i, 1) for g in gb.gens], check=False)
    inter = intersect(a, MHIdeal(R, [f], check=False))
    return MHIdeal(R, [_exact_quotient(g, f) for g in inter.gens], check=False)


def colon_ideal(a: MHIdeal, b: MHIdeal) -> MHIdeal:
    if not b.gens:
        raise ZeroIdealDivisor("colon by the zero ideal")
    return intersect_all([colon(a, f) for f in b.gens])


def saturate_element(a: MHIdeal, f: MPoly) -> MHIdeal:
    """a : f^∞ (Bayer's trick, with an auxiliary variable when f is not a variable)."""
    if not f:
        raise ZeroDivisorInput("saturation by the zero polynomial")
    R = a.ring
    if f.is_constant() or not a.gens:
        return a
    i = f.as_variable()
    if i is not None:
        gb = a.gb(_last_order(R, i))
        if not any(g.terms and all((m >> (EXP_BITS * i)) & EXP_MASK for m in g.terms) for g in gb.gens):
            return a
        return MHIdeal(R, [_divide_out(g, i) for g in gb.gens], check=False)
    d = f.total_degree()
    E = extend_ring(R, 1)
    w = R.nvars
    weights = [1] * R.nvars + [d]
    gens = [_lift(g, E) for g in a.gens] + [E.gen(w) - _lift(f, E)]
    gb = buchberger(gens, _last_order(E, w, weights), E)
    images = R.gens() + [f]
    out = []
    for g in gb.gens:
        g = _divide_out(g, w)
        if any((m >> (EXP_BITS * w)) & EXP_MASK for m in g.terms):
            g = g.substitute(images)
        else:
            g = _restrict(g, R)
        if g:
            out.append(g)
    return MHIdeal(R, out, check=False)


def _in_saturation(a_gb: GroebnerBasis, g: MPoly, f: MPoly, bound: int = _VERIFY_POWER) -> bool:
    """Is g f^N in a for some N <= bound?"""
    h = a_gb.reduce(g)
    for _ in range(bound + 1):
        if not h:
            return True
        h = a_gb.reduce(h * f)
    return not h


def saturate(a: MHIdeal, b: MHIdeal) -> MHIdeal:
    """a : b^∞.

    Saturates by a single element of b first (a variable when possible) and
    certifies that the result lies in a : f^∞ for every generator f of b.
    When that certificate fails it falls back to the intersection of the
    a : f^∞.
    """
    if a.ring != b.ring:
        raise MixedRings("ideals live in different rings")
    gens = [f for f in b.gens if f]
    if not gens:
        raise ZeroIdealDivisor("saturation by the zero ideal")
    if not a.gens:
        return a
    if any(f.is_constant() for f in gens):
        return a
    R = a.ring
    agb = a.gb()
    if all(agb.contains(f) for f in gens):
        return MHIdeal(R, [R.one()], check=False)
    cands = [f for f in gens if f.as_variable() is not None] + [f for f in gens if f.as_variable() is None]
    tried = 0
    for f in cands:
        if agb.contains(f):
            continue
        S = saturate_element(a, f)
        if S is a:
            return a
        tried += 1
        if _certify(a, S, gens):
            return S
        if tried >= 2:
            break
    degs = {f.total_degree() for f in gens}
    if len(gens) > 1 and len(degs) == 1:
        rng = random.Random(0x5A7)
        F = R.field
        for _ in range(2):
            l = R.zero()
            for f in gens:
                l = l + f.scale(F.convert(rng.randint(1, 1000)))
            if not l:
                continue
            S = saturate_element(a, l)
            if _certify(a, S, gens):
                return S
    return intersect_all([saturate_element(a, f) for f in gens])


def _certify(a: MHIdeal, S: MHIdeal, gens: list) -> bool:
    if S.is_unit():
        # unit saturation only if every generator is nilpotent mod a
        one = S.ring.one()
        return all(_in_saturation(a.gb(), one, f) for f in gens)
    agb = a.gb()
    new = [g for g in minimal_generators(S.gb().gens) if not agb.contains(g)]
    for f in gens:
        for g in new:
            if not _in_saturation(agb, g, f):
                return False
    return True


def multi_saturate(a: MHIdeal) -> MHIdeal:
    """Chained saturation by each factor's irrelevant ideal, in factor order."""
    if a.saturated == YES:
        return a
    R = a.ring
    cur = a
    for j in range(R.r):
        if cur.gens and cur.is_unit():
            break
        cur = saturate(cur, irrelevant_ideal(R, j))
    if cur.gens and cur.is_unit():
        cur = MHIdeal(R, [R.one()], check=False)
    cur.saturated = YES
    return cur


def scheme_equal(a: MHIdeal, b: MHIdeal) -> bool:
    """Do a and b define the same subscheme of the multiprojective space?"""
    if a.ring != b.ring:
        raise MixedRings("ideals live in different rings")
    sa, sb = multi_saturate(a), multi_saturate(b)
    return sa.gb().contains_all(sb.gens) and sb.gb().contains_all(sa.gens)


def vanishes_on(f: MPoly, a: MHIdeal) -> bool:
    """Is f in the radical of a?  (Rabinowitsch: 1 in a + (1 - w f).)"""
    if not f or a.contains(f):
        return True
    R = a.ring
    E = extend_ring(R, 1)
    w = E.gen(R.nvars)
    gens = [_lift(g, E) for g in a.gens] + [1 - w * _lift(f, E)]
    return buchberger(gens, GREVLEX, E).is_unit()


def set_contained(a: MHIdeal, b: MHIdeal) -> bool:
    """V(b) ⊆ V(a) as sets: every generator of a vanishes on V(b) (up to the irrelevant loci)."""
    sb = multi_saturate(b)
    return all(vanishes_on(g, sb) for g in multi_saturate(a).gens)


def ring_map_kernel(images: Sequence[Sequence[MPoly]], source_ideal: MHIdeal, target_ring: MultiGradedRing,
                    target_ideal: MHIdeal | None = None) -> MHIdeal:
    """Kernel of S/J -> R/I sending the i-th group of target variables to images[i].

    With one group the images are substituted directly (y - F, y of weight
    deg F); with several, y^(i) - t_i F^(i) keeps the kernel multihomogeneous.
    """
    R = source_ideal.ring
    S = target_ring
    if len(images) != S.r or any(len(F) != len(S.blocks[i]) for i, F in enumerate(images)):
        raise InhomogeneousImages("images do not match the target factors")
    degs = []
    for F in images:
        nz = [f for f in F if f]
        if not nz:
            raise InhomogeneousImages("a group of images is identically zero")
        ds = {f.multidegree() for f in nz}
        if len(ds) != 1:
            raise InhomogeneousImages("images within a factor must share a multidegree")
        degs.append(nz[0].total_degree())
    s = S.r
    naux = 0 if s == 1 else s
    nt, ns = S.nvars, R.nvars
    joint = MultiGradedRing(R.field, S.factor_dims + R.factor_dims + (0,) * naux,
                            [f"_y{i}" for i in range(nt)] + [f"_x{i}" for i in range(ns)]
                            + [f"_t{i}" for i in range(naux)])
    weights = [0] * (nt + ns + naux)
    for i, block in enumerate(S.blocks):
        for k in block:
            weights[k] = degs[i] + (1 if naux else 0)
    for k in range(ns):
        weights[nt + k] = 1
    for i in range(naux):
        weights[nt + ns + i] = 1
    gens = [g.change_ring(joint, nt) for g in source_ideal.gens]
    for i, block in enumerate(S.blocks):
        for k, idx in enumerate(block):
            Fk = images[i][k].change_ring(joint, nt)
            if naux:
                Fk = joint.gen(nt + ns + i) * Fk
            gens.append(joint.gen(idx) - Fk)
    if target_ideal is not None:
        gens += [MPoly(joint, g.terms) for g in target_ideal.gens]
    drop = list(range(nt, nt + ns + naux))
    out = _eliminate_in(joint, gens, drop, weights)
    K = MHIdeal(S, [MPoly(S, g.terms) for g in out])
    return multi_saturate(K)
