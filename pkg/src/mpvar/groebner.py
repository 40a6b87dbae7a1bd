"""Buchberger engine for ideals and submodules of free modules.

Internally a monomial is one Python int made of 16-bit fields (least
significant first):

* field 0: the grading degree (drives the sugar strategy),
* fields 1..N: exponents of the ring variables, then of the module
  position markers E_0, E_1, ... (each at most 1 in a vector term),
* the remaining fields: rows of a nonnegative weight matrix defining the
  monomial order, first row in the most significant field.

Integer comparison is then the monomial order, monomial multiplication is
addition and ``a | b`` iff no field of ``b - a`` borrows, which is checked
by masking the top bit of every field.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Sequence

from .errors import ExponentOverflow, MixedRings, ZeroVector
from .polyring import EXP_BITS, EXP_MASK, MPoly, MultiGradedRing

FIELD = EXP_BITS
FMASK = (1 << (FIELD - 1)) - 1  # value bits of one field
_DIVCACHE_LIMIT = 3_000_000


# ---------------------------------------------------------------------------
# monomial orders


@dataclass(frozen=True)
class MonomialOrder:
    """A global order on the monomials of a ring with ``nvars`` variables.

    ``kind`` is ``"grevlex"`` (optionally with a variable priority order and
    positive weights for the first row) or ``"block"`` (eliminates the
    variables in ``block``: anything involving them is larger).
    """

    kind: str = "grevlex"
    var_order: tuple | None = None
    weights: tuple | None = None
    block: tuple = ()

    def rows(self, nvars: int) -> list:
        w = list(self.weights) if self.weights else [1] * nvars
        if self.kind == "grevlex":
            seq = list(self.var_order) if self.var_order else list(range(nvars))
            return _grevlex_rows(seq, w, nvars)
        if self.kind == "block":
            first = [i for i in (self.var_order or range(nvars)) if i in set(self.block)]
            rest = [i for i in (self.var_order or range(nvars)) if i not in set(self.block)]
            return _grevlex_rows(first, w, nvars) + _grevlex_rows(rest, w, nvars)
        raise ValueError(f"unknown order kind {self.kind!r}")


def _grevlex_rows(seq: list, w: list, nvars: int) -> list:
    if not seq:
        return []
    rows = []
    r = [0] * nvars
    for i in seq:
        r[i] = w[i]
    rows.append(r)
    for k in range(len(seq) - 1, 0, -1):
        r = [0] * nvars
        for i in seq[:k]:
            r[i] = 1
        rows.append(r)
    return rows


GREVLEX = MonomialOrder()


def grevlex(var_order: Sequence[int] | None = None, weights: Sequence[int] | None = None) -> MonomialOrder:
    return MonomialOrder("grevlex", tuple(var_order) if var_order else None, tuple(weights) if weights else None)


def block_order(block: Sequence[int], weights: Sequence[int] | None = None) -> MonomialOrder:
    return MonomialOrder("block", None, tuple(weights) if weights else None, tuple(sorted(block)))


# ---------------------------------------------------------------------------
# packing


class Layout:
    """Packing of monomials of a ring (plus ``npos`` module positions) under an order."""

    def __init__(self, nvars: int, order: MonomialOrder, grading: Sequence[int] | None = None,
                 npos: int = 0, shifts: Sequence[int] | None = None):
        self.nvars = nvars
        self.npos = npos
        self.order = order
        grading = list(grading) if grading else list(order.weights or [1] * nvars)
        shifts = list(shifts) if shifts else [0] * npos
        if min(shifts, default=0) < 0:
            base = -min(shifts)
            shifts = [s + base for s in shifts]
        N = nvars + npos
        rows = [r + [0] * npos for r in order.rows(nvars)]
        if npos:
            # position over term: E_0 highest
            rows = [[0] * nvars + [npos - k for k in range(npos)]] + rows
        self.N = N
        self.nrows = len(rows)
        nfields = 1 + N + len(rows)
        self.nfields = nfields
        top = nfields - 1
        units = []
        for i in range(N):
            u = (grading[i] if i < nvars else shifts[i - nvars])
            u |= 1 << (FIELD * (1 + i))
            for r, row in enumerate(rows):
                if row[i]:
                    u += row[i] << (FIELD * (top - r))
            units.append(u)
        self.units = units
        self.rest = [units[i] - (1 << (FIELD * (1 + i))) for i in range(N)]
        self.gmask = sum(1 << (FIELD * f + FIELD - 1) for f in range(nfields))
        self.var_mask = ((1 << (FIELD * nvars)) - 1) << FIELD
        self.pos_fields = [FIELD * (1 + nvars + k) for k in range(npos)]
        self._cache: dict = {}

    def deg(self, m: int) -> int:
        return m & FMASK

    def from_user(self, mu: int, pos: int = -1) -> int:
        key = (mu, pos)
        e = self._cache.get(key)
        if e is not None:
            return e
        e = mu << FIELD
        i = 0
        rest = self.rest
        x = mu
        while x:
            k = x & EXP_MASK
            if k:
                e += k * rest[i]
            x >>= EXP_BITS
            i += 1
        if pos >= 0:
            e += self.units[self.nvars + pos]
        self._cache[key] = e
        return e

    def to_user(self, e: int) -> tuple:
        """(user monomial, position or -1)."""
        mu = (e & self.var_mask) >> FIELD
        pos = -1
        for k, s in enumerate(self.pos_fields):
            if (e >> s) & FMASK:
                pos = k
                break
        return mu, pos

    def position(self, e: int) -> int:
        for k, s in enumerate(self.pos_fields):
            if (e >> s) & FMASK:
                return k
        return -1

    def poskey(self, e: int) -> int:
        if not self.npos:
            return 0
        return self.position(e)

    def lcm(self, a: int, b: int) -> int:
        r = a
        units = self.units
        s = FIELD
        for i in range(self.N):
            ea = (a >> s) & FMASK
            eb = (b >> s) & FMASK
            if eb > ea:
                r += (eb - ea) * units[i]
            s += FIELD
        return r

    def exponents(self, e: int) -> list:
        return [(e >> (FIELD * (1 + i))) & FMASK for i in range(self.N)]


# ---------------------------------------------------------------------------
# the engine


class Engine:
    """Buchberger's algorithm with the sugar strategy and Gebauer-Moller pair updates.

    Polynomials are pairs of lists (monomials descending, coefficients);
    basis elements are monic.
    """

    def __init__(self, layout: Layout, p: int):
        self.L = layout
        self.p = p
        self.lms: list = []
        self.gms: list = []
        self.gcs: list = []
        self.sugar: list = []
        self.active: list = []
        self.divcache: dict = {}
        self.stats = {"pairs": 0, "zero": 0, "reductions": 0}

    # -- coefficient helpers -------------------------------------------------
    def _inv(self, c):
        return pow(c, -1, self.p) if self.p else 1 / c

    def _normalize(self, ms, cs):
        p = self.p
        if p:
            inv = pow(cs[0], -1, p)
            if inv != 1:
                cs = [c * inv % p for c in cs]
        else:
            lc = cs[0]
            if lc != 1:
                cs = [c / lc for c in cs]
        return ms, cs

    # -- reduction -----------------------------------------------------------
    def _find(self, m: int) -> int:
        cache = self.divcache
        v = cache.get(m)
        if v is not None:
            if v >= 0:
                return v
            start = -v - 1
        else:
            start = 0
        lms = self.lms
        gmask = self.L.gmask
        n = len(lms)
        for idx in range(start, n):
            if not ((m - lms[idx]) & gmask):
                cache[m] = idx
                return idx
        cache[m] = -n - 1
        return -1

    def reduce(self, acc: dict, full: bool = True):
        """Reduce the polynomial held in ``acc`` (monomial -> unreduced coefficient)."""
        p = self.p
        heap = [-m for m in acc]
        heapq.heapify(heap)
        pop = heapq.heappop
        push = heapq.heappush
        gms, gcs, lms = self.gms, self.gcs, self.lms
        cache = self.divcache
        out_m, out_c = [], []
        find = self._find
        nred = 0
        while heap:
            m = -pop(heap)
            c = acc.pop(m)
            if p:
                c %= p
            if not c:
                continue
            v = cache.get(m)
            if v is not None and v >= 0:
                j = v
            else:
                j = find(m)
            if j < 0:
                out_m.append(m)
                out_c.append(c)
                if not full:
                    break
                continue
            nred += 1
            shift = m - lms[j]
            tm = gms[j]
            tc = gcs[j]
            get = acc.get
            for k in range(1, len(tm)):
                mm = tm[k] + shift
                old = get(mm)
                if old is None:
                    acc[mm] = -c * tc[k]
                    push(heap, -mm)
                else:
                    acc[mm] = old - c * tc[k]
        if not full and heap:
            # keep the unreduced tail as is
            rest = sorted(acc.items(), reverse=True)
            for m, c in rest:
                if p:
                    c %= p
                if c:
                    out_m.append(m)
                    out_c.append(c)
        self.stats["reductions"] += nred
        if len(cache) > _DIVCACHE_LIMIT:
            cache.clear()
        return out_m, out_c

    def _spoly_acc(self, i: int, j: int, lcm: int) -> dict:
        acc: dict = {}
        si = lcm - self.lms[i]
        sj = lcm - self.lms[j]
        for m, c in zip(self.gms[i][1:], self.gcs[i][1:]):
            acc[m + si] = c
        get = acc.get
        for m, c in zip(self.gms[j][1:], self.gcs[j][1:]):
            mm = m + sj
            old = get(mm)
            acc[mm] = -c if old is None else old - c
        return acc

    # -- main loop -----------------------------------------------------------
    def run(self, relations: list, candidates: list = ()) -> list:
        """Compute a Groebner basis of relations + candidates.

        Each input is a (monomials, coefficients) pair.  Returns one flag per
        candidate: True when its remainder was nonzero at insertion time,
        which for homogeneous input marks a minimal generating set of the
        candidates modulo the relations.
        """
        queue = []
        seq = 0
        for kind, polys in ((1, relations), (2, candidates)):
            for idx, (ms, cs) in enumerate(polys):
                if not ms:
                    continue
                sug = max(m & FMASK for m in ms)
                queue.append((sug, kind, ms[0], seq, idx))
                seq += 1
        heapq.heapify(queue)
        flags = [False] * len(candidates)
        live: dict = {}
        pop = heapq.heappop
        while queue:
            sug, kind, key, _, payload = pop(queue)
            if kind == 0:
                i, j = payload
                if live.pop((i, j), None) is None:
                    continue
                self.stats["pairs"] += 1
                acc = self._spoly_acc(i, j, key)
            else:
                src = relations if kind == 1 else candidates
                ms, cs = src[payload]
                acc = dict(zip(ms, cs))
            ms, cs = self.reduce(acc)
            if not ms:
                if kind == 0:
                    self.stats["zero"] += 1
                continue
            if kind == 2:
                flags[payload] = True
            ms, cs = self._normalize(ms, cs)
            if kind == 0:
                sugar = sug
            else:
                sugar = max(sug, ms[0] & FMASK)
            h = self._insert(ms, cs, max(sugar, ms[0] & FMASK))
            for pair, lcm, s in self._update(h, live):
                seq += 1
                heapq.heappush(queue, (s, 0, lcm, seq, pair))
        return flags

    def _insert(self, ms, cs, sugar) -> int:
        gmask = self.L.gmask
        if any(m & gmask for m in ms):
            raise ExponentOverflow("a degree or exponent outgrew the packed monomial fields")
        self.lms.append(ms[0])
        self.gms.append(ms)
        self.gcs.append(cs)
        self.sugar.append(sugar)
        self.active.append(True)
        return len(self.lms) - 1

    def _update(self, h: int, live: dict) -> list:
        L = self.L
        gmask = L.gmask
        lms = self.lms
        lmh = lms[h]
        pkh = L.poskey(lmh)
        cand = []
        lcm_with = {}
        for g in range(h):
            if not self.active[g]:
                continue
            lmg = lms[g]
            if L.npos and L.poskey(lmg) != pkh:
                continue
            lc = L.lcm(lmg, lmh)
            lcm_with[g] = lc
            cand.append(((lc & FMASK), lc, lc != lmg + lmh, g))
        # chain criterion on old pairs
        for (g1, g2), lc in list(live.items()):
            if (lc - lmh) & gmask:
                continue
            l1 = lcm_with.get(g1)
            l2 = lcm_with.get(g2)
            if l1 is None:
                l1 = L.lcm(lms[g1], lmh)
            if l2 is None:
                l2 = L.lcm(lms[g2], lmh)
            if l1 != lc and l2 != lc:
                del live[(g1, g2)]
        # minimal new lcms; coprime pairs go first within equal lcm and are then dropped
        cand.sort(key=lambda t: (t[0], t[1], t[2]))
        kept = []
        out = []
        for _, lc, not_coprime, g in cand:
            if any(not ((lc - k) & gmask) for k in kept):
                continue
            kept.append(lc)
            if not_coprime:
                out.append(g)
        new_pairs = []
        for g in out:
            lc = lcm_with[g]
            s = max(self.sugar[g] + ((lc - lms[g]) & FMASK), self.sugar[h] + ((lc - lmh) & FMASK))
            live[(g, h)] = lc
            new_pairs.append(((g, h), lc, s))
        for g in range(h):
            if self.active[g] and not ((lms[g] - lmh) & gmask):
                if not L.npos or L.poskey(lms[g]) == pkh:
                    self.active[g] = False
        return new_pairs

    def reduced_basis(self) -> list:
        """Interreduce the active elements into the reduced Groebner basis."""
        gmask = self.L.gmask
        idx = [i for i, a in enumerate(self.active) if a]
        lms = self.lms
        # drop elements whose leading monomial is divisible by another one
        minimal = []
        for i in sorted(idx, key=lambda i: lms[i]):
            if not any(not ((lms[i] - lms[j]) & gmask) for j in minimal):
                minimal.append(i)
        minimal.sort(key=lambda i: lms[i])
        red = Engine(self.L, self.p)
        for i in minimal:
            red._insert(self.gms[i], self.gcs[i], self.sugar[i])
        out = []
        for k, i in enumerate(minimal):
            ms, cs = self.gms[i], self.gcs[i]
            if len(ms) > 1:
                acc = dict(zip(ms[1:], cs[1:]))
                tm, tc = red.reduce(acc)
                ms = [ms[0]] + tm
                cs = [cs[0]] + tc
            out.append((ms, cs))
        return out


def engine_from_basis(layout: Layout, p: int, basis: list) -> Engine:
    """A reducer over an existing Groebner basis (no pair processing)."""
    eng = Engine(layout, p)
    for ms, cs in basis:
        eng._insert(ms, cs, ms[0] & FMASK)
    return eng


# ---------------------------------------------------------------------------
# conversions between MPoly / vectors and engine polynomials


def _to_engine(layout: Layout, f: MPoly, pos: int = -1):
    items = [(layout.from_user(m, pos), c) for m, c in f.terms.items()]
    items.sort(reverse=True)
    return [m for m, _ in items], [c for _, c in items]


def _vec_to_engine(layout: Layout, vec: Sequence[MPoly], positions: Sequence[int] | None = None):
    items = []
    for k, f in enumerate(vec):
        pos = positions[k] if positions is not None else k
        for m, c in f.terms.items():
            items.append((layout.from_user(m, pos), c))
    items.sort(reverse=True)
    return [m for m, _ in items], [c for _, c in items]


def _from_engine(layout: Layout, ring: MultiGradedRing, ms, cs) -> MPoly:
    return MPoly(ring, {layout.to_user(m)[0]: c for m, c in zip(ms, cs)})


def _vec_from_engine(layout: Layout, ring: MultiGradedRing, ms, cs, npos: int, offset: int = 0) -> list:
    parts = [dict() for _ in range(npos)]
    for m, c in zip(ms, cs):
        mu, pos = layout.to_user(m)
        parts[pos - offset][mu] = c
    return [MPoly(ring, d) for d in parts]


# ---------------------------------------------------------------------------
# public API


class GroebnerBasis:
    """Reduced Groebner basis of an ideal of ``ring`` under ``order``."""

    def __init__(self, ring: MultiGradedRing, order: MonomialOrder, layout: Layout, basis: list):
        self.ring = ring
        self.order = order
        self.layout = layout
        self._basis = basis
        self._engine = None
        self._gens = None
        self.is_reduced = True

    @property
    def gens(self) -> list:
        if self._gens is None:
            self._gens = [_from_engine(self.layout, self.ring, ms, cs) for ms, cs in self._basis]
        return self._gens

    def __len__(self):
        return len(self._basis)

    def __iter__(self):
        return iter(self.gens)

    def is_unit(self) -> bool:
        return any(ms[0] >> FIELD == 0 for ms, _ in self._basis)

    def is_zero(self) -> bool:
        return not self._basis

    def leading_monomials(self) -> list:
        """Leading monomials in the user packing."""
        return [self.layout.to_user(ms[0])[0] for ms, _ in self._basis]

    def engine(self) -> Engine:
        if self._engine is None:
            self._engine = engine_from_basis(self.layout, self.ring.field.characteristic, self._basis)
        return self._engine

    def reduce(self, f: MPoly) -> MPoly:
        if f.ring != self.ring:
            raise MixedRings("polynomial and basis live in different rings")
        if not f.terms or not self._basis:
            return f
        ms, cs = _to_engine(self.layout, f)
        tm, tc = self.engine().reduce(dict(zip(ms, cs)))
        return _from_engine(self.layout, self.ring, tm, tc)

    def contains(self, f: MPoly) -> bool:
        return not self.reduce(f)

    def contains_all(self, fs) -> bool:
        return all(self.contains(f) for f in fs)


def _check_ring(gens):
    rings = {f.ring for f in gens}
    if len(rings) > 1:
        raise MixedRings("generators live in different rings")


def _sorted_inputs(layout, polys, pos=-1):
    conv = [_to_engine(layout, f, pos) for f in polys if f.terms]
    conv.sort(key=lambda t: (max(m & FMASK for m in t[0]), t[0][0]))
    return conv


def buchberger(gens: Sequence[MPoly], order: MonomialOrder | None = None,
               ring: MultiGradedRing | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``."""
    gens = list(gens)
    _check_ring(gens)
    if ring is None:
        if not gens:
            raise ValueError("need a ring for an empty generator list")
        ring = gens[0].ring
    order = order or GREVLEX
    layout = Layout(ring.nvars, order)
    eng = Engine(layout, ring.field.characteristic)
    eng.run(_sorted_inputs(layout, gens))
    return GroebnerBasis(ring, order, layout, eng.reduced_basis())


def normal_form(f: MPoly, gb: GroebnerBasis) -> MPoly:
    return gb.reduce(f)


def eliminate(gens: Sequence[MPoly], drop_vars: Sequence[int], ring: MultiGradedRing | None = None,
              weights: Sequence[int] | None = None) -> list:
    """Generators of the elimination ideal (ideal) ∩ K[remaining variables]."""
    gens = list(gens)
    if not drop_vars:
        return [f for f in gens if f]
    ring = ring or gens[0].ring
    gb = buchberger(gens, block_order(drop_vars, weights), ring)
    dropped = 0
    for i in drop_vars:
        dropped |= EXP_MASK << (EXP_BITS * i)
    return [g for g in gb.gens if not any(m & dropped for m in g.terms)]


# -- modules -----------------------------------------------------------------


def _vector_degree(vec) -> int:
    for f in vec:
        if f.terms:
            return f.total_degree()
    return -1


def module_groebner(ring: MultiGradedRing, vectors: Sequence[Sequence[MPoly]], shifts: Sequence[int],
                    ideal_gb: GroebnerBasis | None = None, relation_positions: Sequence[int] = (),
                    order: MonomialOrder | None = None):
    """Groebner basis of a submodule of R^npos under position-over-term order.

    Position 0 is the highest.  ``shifts[k]`` is the grading degree of the
    basis vector e_k.  When ``ideal_gb`` is given, ``g e_k`` is added for
    each of its elements and each k in ``relation_positions``.  Returns the
    layout, the reduced basis (engine polys) and minimality flags of the
    input vectors.
    """
    npos = len(shifts)
    order = order or GREVLEX
    layout = Layout(ring.nvars, order, npos=npos, shifts=shifts)
    p = ring.field.characteristic
    cands = [_vec_to_engine(layout, v) for v in vectors]
    rels = []
    if ideal_gb is not None:
        for k in relation_positions:
            for g in ideal_gb.gens:
                rels.append(_to_engine(layout, g, k))
    eng = Engine(layout, p)
    order_idx = sorted(range(len(cands)), key=lambda i: (max((m & FMASK for m in cands[i][0]), default=0),
                                                          cands[i][0][0] if cands[i][0] else 0))
    sorted_cands = [cands[i] for i in order_idx]
    flags_sorted = eng.run(rels, sorted_cands)
    flags = [False] * len(cands)
    for k, i in enumerate(order_idx):
        flags[i] = flags_sorted[k]
    return layout, eng.reduced_basis(), flags


def syzygies(F: Sequence[MPoly], ideal_gb: GroebnerBasis | None = None) -> list:
    """Homogeneous generators of {H : sum H_i F_i in I}, modulo I.

    Vectors whose entries all lie in I are dropped; the rest are reduced
    entrywise modulo I.
    """
    F = list(F)
    if not any(F):
        raise ZeroVector("syzygies of the zero vector")
    ring = F[0].ring
    m = len(F)
    degs = [f.total_degree() for f in F if f]
    d = max(degs)
    one = ring.one()
    zero = ring.zero()
    vecs = []
    for i, f in enumerate(F):
        v = [f] + [zero] * m
        v[1 + i] = one
        vecs.append(v)
    shifts = [0] + [d] * m
    layout, basis, _ = module_groebner(ring, vecs, shifts, ideal_gb, relation_positions=(0,))
    out = []
    for ms, cs in basis:
        if layout.position(ms[0]) == 0:
            continue
        vec = _vec_from_engine(layout, ring, ms, cs, m + 1)[1:]
        if ideal_gb is not None:
            vec = [ideal_gb.reduce(h) for h in vec]
        if any(vec):
            out.append(vec)
    return minimal_vectors(out, ideal_gb) if out else []


def kernel_transpose(columns: Sequence[Sequence[MPoly]], length: int, ideal_gb: GroebnerBasis | None = None,
                     ring: MultiGradedRing | None = None) -> list:
    """Minimal homogeneous generators of {G in (R/I)^length : sum_k G_k s_k = 0 for every column s}.

    ``columns`` are vectors of the given ``length`` (for instance the
    syzygies of a representative).
    """
    columns = [list(c) for c in columns if any(c)]
    if ring is None:
        ring = columns[0][0].ring
    q = len(columns)
    zero = ring.zero()
    one = ring.one()
    if q == 0:
        vecs = []
        for k in range(length):
            v = [zero] * length
            v[k] = one
            vecs.append(v)
        return vecs
    col_deg = [_vector_degree(c) for c in columns]
    C = max(col_deg)
    # G has entries of some degree delta; sum_k G_k s_{l,k} lands in degree delta + col_deg[l]
    shifts = [C - cd for cd in col_deg] + [C] * length
    vecs = []
    for k in range(length):
        v = [columns[l][k] for l in range(q)] + [zero] * length
        v[q + k] = one
        vecs.append(v)
    layout, basis, _ = module_groebner(ring, vecs, shifts, ideal_gb, relation_positions=range(q))
    out = []
    for ms, cs in basis:
        if layout.position(ms[0]) < q:
            continue
        vec = _vec_from_engine(layout, ring, ms, cs, q + length)[q:]
        if ideal_gb is not None:
            vec = [ideal_gb.reduce(h) for h in vec]
        if any(vec):
            out.append(vec)
    return minimal_vectors(out, ideal_gb)


def minimal_vectors(vecs: Sequence[Sequence[MPoly]], ideal_gb: GroebnerBasis | None = None) -> list:
    """Minimal homogeneous generators of the submodule of (R/I)^m spanned by ``vecs``."""
    vecs = [list(v) for v in vecs if any(v)]
    if not vecs:
        return []
    ring = next(f.ring for v in vecs for f in v if f)
    m = len(vecs[0])
    if m == 1:
        gens = minimal_generators([v[0] for v in vecs], ideal_gb)
        return [[g] for g in gens]
    # every position has degree shift 0: entries of a homogeneous vector share a degree
    _, _, flags = module_groebner(ring, vecs, [0] * m, ideal_gb, relation_positions=range(m))
    return [v for v, keep in zip(vecs, flags) if keep]


def minimal_generators(gens: Sequence[MPoly], ideal_gb: GroebnerBasis | None = None) -> list:
    """Minimal subset of homogeneous ``gens`` generating the same ideal modulo I."""
    gens = [f for f in gens if f]
    if not gens:
        return []
    ring = gens[0].ring
    layout = Layout(ring.nvars, GREVLEX)
    p = ring.field.characteristic
    cands = [_to_engine(layout, f) for f in gens]
    order_idx = sorted(range(len(cands)), key=lambda i: (max(m & FMASK for m in cands[i][0]), cands[i][0][0]))
    rels = [_to_engine(layout, g) for g in ideal_gb.gens] if ideal_gb is not None else []
    eng = Engine(layout, p)
    flags = eng.run(rels, [cands[i] for i in order_idx])
    keep = sorted(order_idx[k] for k, f in enumerate(flags) if f)
    return [gens[i] for i in keep]
