"""Multigraded Hilbert series data: K-polynomials of monomial ideals,
Krull dimension, multidegrees and their conversion under Segre embeddings."""

from __future__ import annotations

from collections import Counter
from math import comb, factorial
from typing import Sequence

from .errors import DegreeMismatch, NotMonomial, UnitIdeal
from .polyring import MultiGradedRing

# ---------------------------------------------------------------------------
# small integer polynomials in r variables: dict exponent tuple -> int


def _padd(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        w = out.get(k, 0) + v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def _pmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            out[k] = out.get(k, 0) + va * vb
    return {k: v for k, v in out.items() if v}


def _pshift(a: dict, d: tuple) -> dict:
    return {tuple(x + y for x, y in zip(k, d)): v for k, v in a.items()}


class KPolynomial:
    """Numerator of the Z^r-graded Hilbert series, a polynomial in t_1..t_r."""

    def __init__(self, r: int, terms: dict):
        self.r = r
        self.terms = {k: v for k, v in terms.items() if v}

    def __eq__(self, other):
        return isinstance(other, KPolynomial) and self.r == other.r and self.terms == other.terms

    def __repr__(self):
        return _format(self.terms, [f"t_{j + 1}" for j in range(self.r)])

    def specialize(self) -> dict:
        """All t_j = t: returns {exponent: coefficient}."""
        out: Counter = Counter()
        for k, v in self.terms.items():
            out[sum(k)] += v
        return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# monomial ideals as tuples of exponent vectors


def _minimalize(gens) -> tuple:
    gens = sorted(set(gens), key=sum)
    out = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return tuple(sorted(out))


class _KComputer:
    def __init__(self, group: Sequence[int], r: int):
        self.group = list(group)
        self.r = r
        self.memo: dict = {}
        self.zero = (0,) * r

    def deg(self, a) -> tuple:
        d = [0] * self.r
        for i, e in enumerate(a):
            if e:
                d[self.group[i]] += e
        return tuple(d)

    def one_minus(self, a) -> dict:
        d = self.deg(a)
        if d == self.zero:
            return {}
        return {self.zero: 1, d: -1}

    def k(self, gens: tuple) -> dict:
        if not gens:
            return {self.zero: 1}
        if len(gens) == 1:
            return self.one_minus(gens[0])
        hit = self.memo.get(gens)
        if hit is not None:
            return hit
        comps = self._components(gens)
        if len(comps) > 1:
            res = {self.zero: 1}
            for c in comps:
                res = _pmul(res, self.k(c))
        else:
            res = self._pivot(gens)
        self.memo[gens] = res
        return res

    def _components(self, gens):
        n = len(gens[0])
        supports = [frozenset(i for i in range(n) if g[i]) for g in gens]
        parent = list(range(len(gens)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        owner = {}
        for gi, s in enumerate(supports):
            for v in s:
                if v in owner:
                    a, b = find(owner[v]), find(gi)
                    if a != b:
                        parent[a] = b
                else:
                    owner[v] = gi
        groups: dict = {}
        for gi in range(len(gens)):
            groups.setdefault(find(gi), []).append(gens[gi])
        return [tuple(v) for v in groups.values()]

    def _pivot(self, gens):
        n = len(gens[0])
        counts = [0] * n
        for g in gens:
            for i, e in enumerate(g):
                if e:
                    counts[i] += 1
        x = max(range(n), key=lambda i: (counts[i], -i))
        exps = sorted(g[x] for g in gens if g[x])
        e = exps[(len(exps) - 1) // 2]
        p = tuple(e if i == x else 0 for i in range(n))
        # K(m) = K(m + (p)) + t^deg(p) K(m : p)
        plus = _minimalize([g for g in gens if g[x] < e] + [p])
        quot = _minimalize([tuple(max(0, a - e) if i == x else a for i, a in enumerate(g)) for g in gens])
        return _padd(self.k(plus), _pshift(self.k(quot), self.deg(p)))


def monomial_exponents(ring: MultiGradedRing, monos: Sequence[int]) -> list:
    return [tuple(ring.unpack(m)) for m in monos]


def k_polynomial_of_monomials(ring: MultiGradedRing, exps: Sequence[tuple]) -> KPolynomial:
    comp = _KComputer(ring.group, ring.r)
    return KPolynomial(ring.r, comp.k(_minimalize(exps)))


def k_polynomial(ideal) -> KPolynomial:
    """K-polynomial of R/m for an ideal ``m`` generated by monomials."""
    ring = ideal.ring
    exps = []
    for g in ideal.gens:
        if len(g.terms) != 1:
            raise NotMonomial(f"{g} is not a monomial")
        exps.append(tuple(ring.unpack(next(iter(g.terms)))))
    return k_polynomial_of_monomials(ring, exps)


def initial_exponents(ideal) -> list:
    """Exponent vectors of the leading monomials of the (grevlex) Groebner basis."""
    gb = ideal.gb()
    return monomial_exponents(ideal.ring, gb.leading_monomials())


# ---------------------------------------------------------------------------
# dimension


def _min_cover(edges: list, n: int) -> int:
    """Minimum number of variables meeting every support set."""
    edges = sorted({frozenset(e) for e in edges}, key=len)
    # drop supersets: covering the smaller edge covers them
    reduced = []
    for e in edges:
        if not any(f <= e for f in reduced):
            reduced.append(e)
    best = [n + 1]

    def search(chosen: frozenset, k: int):
        if k >= best[0]:
            return
        for e in reduced:
            if not (e & chosen):
                for v in sorted(e):
                    search(chosen | {v}, k + 1)
                return
        best[0] = k

    search(frozenset(), 0)
    return best[0]


def krull_dim_of_monomials(n: int, exps: Sequence[tuple]) -> int:
    if any(sum(a) == 0 for a in exps):
        raise UnitIdeal("the unit ideal has no dimension")
    edges = [[i for i, e in enumerate(a) if e] for a in exps]
    if not edges:
        return n
    return n - _min_cover(edges, n)


def krull_dim(ideal) -> int:
    """Krull dimension of R/a, from the independent sets of the initial ideal."""
    if ideal.gens and ideal.is_unit():
        raise UnitIdeal("the unit ideal has no dimension")
    return krull_dim_of_monomials(ideal.ring.nvars, initial_exponents(ideal))


# ---------------------------------------------------------------------------
# multidegree


class MultidegreePoly:
    """Integer homogeneous polynomial in T_0..T_{r-1}."""

    def __init__(self, factor_dims: Sequence[int], terms: dict):
        self.factor_dims = tuple(factor_dims)
        self.terms = {tuple(k): v for k, v in terms.items() if v}

    @property
    def r(self) -> int:
        return len(self.factor_dims)

    @property
    def codim(self) -> int:
        if not self.terms:
            return -1
        return sum(next(iter(self.terms)))

    def __eq__(self, other):
        if isinstance(other, MultidegreePoly):
            return self.terms == other.terms and self.factor_dims == other.factor_dims
        if isinstance(other, int) and other and self.terms == {(0,) * self.r: other}:
            return True
        return NotImplemented

    def __hash__(self):
        return hash((self.factor_dims, frozenset(self.terms.items())))

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), reverse=True)

    def __str__(self):
        return _format(self.terms, [f"T_{j}" for j in range(self.r)], sep=" ")

    __repr__ = __str__

    def to_json(self) -> dict:
        return {"codim": self.codim,
                "terms": [{"exponents": list(k), "coefficient": v} for k, v in self.sorted_terms()]}


def _format(terms: dict, names: list, sep: str = "*") -> str:
    if not terms:
        return "0"
    parts = []
    for k, v in sorted(terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True):
        mono = sep.join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, k) if e)
        mag = abs(v)
        if mono:
            body = mono if mag == 1 else f"{mag}{sep}{mono}"
        else:
            body = str(mag)
        parts.append(("-" if v < 0 else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, b in parts[1:]:
        out += f" {s} {b}"
    return out


def multidegree_from_k(kpoly: KPolynomial, factor_dims: Sequence[int], codim: int) -> MultidegreePoly:
    """Degree-``codim`` part of K(1 - T_1, ..., 1 - T_r)."""
    r = len(factor_dims)
    out: Counter = Counter()
    for a, c in kpoly.terms.items():
        for b in _compositions(codim, r, a):
            coef = c
            for aj, bj in zip(a, b):
                coef *= comb(aj, bj)
            if sum(b) % 2:
                coef = -coef
            out[b] += coef
    return MultidegreePoly(factor_dims, {k: v for k, v in out.items() if v})


def _compositions(total: int, r: int, bound: Sequence[int]):
    if r == 0:
        if total == 0:
            yield ()
        return
    for b0 in range(min(total, bound[0]) + 1):
        for rest in _compositions(total - b0, r - 1, bound[1:]):
            yield (b0,) + rest


def multidegree(ideal) -> MultidegreePoly:
    """Multidegree of R/a via the initial ideal of a."""
    ring = ideal.ring
    if ideal.gens and ideal.is_unit():
        raise UnitIdeal("the unit ideal has no multidegree")
    exps = initial_exponents(ideal)
    codim = ring.nvars - krull_dim_of_monomials(ring.nvars, exps)
    k = k_polynomial_of_monomials(ring, exps)
    P = multidegree_from_k(k, ring.factor_dims, codim)
    if not P.terms:
        raise DegreeMismatch("multidegree vanished in the expected codimension")
    return P


# ---------------------------------------------------------------------------
# Segre conversion


def _multinomial(parts: Sequence[int]) -> int:
    out = factorial(sum(parts))
    for p in parts:
        out //= factorial(p)
    return out


def segre_convert(P: MultidegreePoly, k: int, split: tuple) -> list:
    """Multidegree of the same variety inside Segre(A) x Segre(B) ⊂ P^N x P^M.

    ``split`` is (dims of the first group, dims of the second group); the
    returned list holds d_0..d_k, where d_i is the coefficient of
    a^(N-i) b^(M-k+i).
    """
    dims_a, dims_b = tuple(split[0]), tuple(split[1])
    ra = len(dims_a)
    if tuple(dims_a + dims_b) != P.factor_dims:
        raise DegreeMismatch("split does not match the ambient factors")
    total = sum(P.factor_dims)
    if P.terms and P.codim != total - k:
        raise DegreeMismatch(f"multidegree has degree {P.codim}, expected {total - k}")
    d = [0] * (k + 1)
    for expo, c in P.terms.items():
        ea = [n - e for n, e in zip(dims_a, expo[:ra])]
        eb = [m - e for m, e in zip(dims_b, expo[ra:])]
        if min(ea + eb, default=0) < 0:
            continue
        i = sum(ea)
        if i > k:
            continue
        d[i] += c * _multinomial(ea) * _multinomial(eb)
    return d


def segre_degree_of(P: MultidegreePoly, dim: int) -> int:
    return segre_convert(P, dim, (P.factor_dims, ()))[dim]


def segre_degree(ideal) -> int:
    ring = ideal.ring
    P = multidegree(ideal)
    dim = ring.nvars - P.codim - ring.r
    return segre_degree_of(P, dim)
