"""Multigraded polynomial rings and sparse polynomials.

A ring has ``r`` groups of variables, group ``j`` holding ``n_j + 1``
variables of degree ``e_j`` (the standard Z^r-grading).  Monomials are
packed into Python ints, ``EXP_BITS`` bits per variable with variable 0 in
the lowest bits, so multiplying monomials is integer addition.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BadArity, BadReduction, DuplicateName, ExponentOverflow, InhomogeneousImages, MixedRings, NotHomogeneous, ZeroPolynomial
from .fields import Field, FieldElem

EXP_BITS = 16
EXP_MASK = (1 << EXP_BITS) - 1
# the top bit of each field is a guard: exponents stay below MAX_EXP
MAX_EXP = 1 << (EXP_BITS - 1)


class MultiGradedRing:
    """K[x^(1); ...; x^(r)] with the standard Z^r-grading."""

    def __init__(self, field: Field, factor_dims: Sequence[int], names: Sequence[str] | None = None):
        factor_dims = tuple(int(n) for n in factor_dims)
        if not factor_dims:
            raise BadArity("a multigraded ring needs at least one group of variables")
        if any(n < 0 for n in factor_dims):
            raise BadArity(f"factor dimensions must be nonnegative: {factor_dims}")
        nvars = sum(n + 1 for n in factor_dims)
        if names is None:
            names = [f"x{j + 1}_{i}" for j, n in enumerate(factor_dims) for i in range(n + 1)]
        names = tuple(str(s) for s in names)
        if len(names) != nvars:
            raise BadArity(f"expected {nvars} variable names, got {len(names)}")
        if len(set(names)) != nvars:
            raise DuplicateName(f"variable names must be unique: {names}")
        self.field = field
        self.factor_dims = factor_dims
        self.names = names
        self.nvars = nvars
        self.r = len(factor_dims)
        group, blocks, start = [], [], 0
        for j, n in enumerate(factor_dims):
            blocks.append(tuple(range(start, start + n + 1)))
            group.extend([j] * (n + 1))
            start += n + 1
        self.group = tuple(group)
        self.blocks = tuple(blocks)
        self.index = {s: i for i, s in enumerate(names)}
        self._shifts = tuple(EXP_BITS * i for i in range(nvars))
        self.guard = _guard_mask(nvars)
        self._key = (field, factor_dims, names)
        self._hash = hash(self._key)

    # identity ---------------------------------------------------------------
    def __eq__(self, other):
        return self is other or (isinstance(other, MultiGradedRing) and self._key == other._key)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"{self.field}[{', '.join(self.names)}] graded by {self.factor_dims}"

    def ambient_str(self) -> str:
        return " x ".join(f"PP^{n}" for n in self.factor_dims)

    # monomials --------------------------------------------------------------
    def pack(self, exps: Sequence[int]) -> int:
        m = 0
        for e, s in zip(exps, self._shifts):
            if e:
                if not 0 < e < MAX_EXP:
                    raise ExponentOverflow(f"exponent {e} outside [0, {MAX_EXP})")
                m |= e << s
        return m

    def unpack(self, m: int) -> list:
        return [(m >> s) & EXP_MASK for s in self._shifts]

    def mono_multidegree(self, m: int) -> tuple:
        d = [0] * self.r
        for i, s in enumerate(self._shifts):
            e = (m >> s) & EXP_MASK
            if e:
                d[self.group[i]] += e
        return tuple(d)

    def grevlex_key(self, m: int):
        e = self.unpack(m)
        return (sum(e), tuple(-x for x in reversed(e)))

    # constructors -------------------------------------------------------------
    def poly(self, terms: dict) -> "MPoly":
        return MPoly(self, {m: c for m, c in terms.items() if c})

    def zero(self) -> "MPoly":
        return MPoly(self, {})

    def one(self) -> "MPoly":
        return MPoly(self, {0: self.field.one})

    def constant(self, c) -> "MPoly":
        c = self.field.convert(c)
        return MPoly(self, {0: c} if c else {})

    def gen(self, i: int) -> "MPoly":
        return MPoly(self, {1 << self._shifts[i]: self.field.one})

    def var(self, name: str) -> "MPoly":
        return self.gen(self.index[name])

    def gens(self) -> list:
        return [self.gen(i) for i in range(self.nvars)]

    def factor_vars(self, j: int) -> list:
        return [self.gen(i) for i in self.blocks[j]]

    def monomial(self, exps: Sequence[int], coeff=1) -> "MPoly":
        return MPoly(self, {self.pack(exps): self.field.convert(coeff)})

    def parse(self, text: str) -> "MPoly":
        return _PolyParser(self, text).parse()

    # derived rings -----------------------------------------------------------
    def with_field(self, field: Field) -> "MultiGradedRing":
        return MultiGradedRing(field, self.factor_dims, self.names)

    def product(self, other: "MultiGradedRing") -> "MultiGradedRing":
        """Ring of the product of the two ambients; clashing names of ``other`` get a suffix."""
        if self.field != other.field:
            raise MixedRings("rings over different fields")
        taken = set(self.names)
        names = list(other.names)
        if taken & set(names):
            k = 1
            while True:
                cand = [f"{s}_{k}" for s in other.names]
                if not taken & set(cand):
                    names = cand
                    break
                k += 1
        return MultiGradedRing(self.field, self.factor_dims + other.factor_dims, self.names + tuple(names))

    def embed_shift(self, offset: int) -> int:
        """Bit shift that moves a monomial of this ring to variables starting at ``offset``."""
        return EXP_BITS * offset


def _guard_mask(nvars: int) -> int:
    return sum(1 << (EXP_BITS * i + EXP_BITS - 1) for i in range(nvars))


def _check_guard(terms: dict, guard: int):
    for m in terms:
        if m & guard:
            raise ExponentOverflow(f"an exponent reached {MAX_EXP}")


def make_ring(field: Field, factor_dims: Sequence[int], names: Sequence[str] | None = None) -> MultiGradedRing:
    return MultiGradedRing(field, factor_dims, names)


class MPoly:
    """Sparse polynomial: dict from packed monomial to nonzero raw coefficient."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: MultiGradedRing, terms: dict):
        self.ring = ring
        self.terms = terms

    # basic protocol ----------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction, FieldElem)):
            return self == self.ring.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def _check(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.ring != self.ring:
                raise MixedRings("polynomials live in different rings")
            return other
        return self.ring.constant(other)

    # arithmetic ------------------------------------------------------------
    def __add__(self, other):
        other = self._check(other)
        F = self.ring.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = F.add(out.get(m, F.zero), c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return MPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.ring.field
        return MPoly(self.ring, {m: F.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            return self.scale(self.ring.field.convert(other))
        other = self._check(other)
        if len(other.terms) == 1:
            ((m2, c2),) = other.terms.items()
            return self.mul_term(m2, c2)
        if len(self.terms) == 1:
            ((m1, c1),) = self.terms.items()
            return other.mul_term(m1, c1)
        p = self.ring.field.characteristic
        acc: dict = {}
        get = acc.get
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 + m2
                acc[m] = get(m, 0) + c1 * c2
        if p:
            out = {m: c % p for m, c in acc.items() if c % p}
        else:
            out = {m: c for m, c in acc.items() if c}
        _check_guard(out, self.ring.guard)
        return MPoly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale(self, c) -> "MPoly":
        F = self.ring.field
        if not c:
            return self.ring.zero()
        return MPoly(self.ring, {m: F.mul(v, c) for m, v in self.terms.items()})

    def mul_term(self, mono: int, c) -> "MPoly":
        F = self.ring.field
        if not c:
            return self.ring.zero()
        out = {m + mono: F.mul(v, c) for m, v in self.terms.items()}
        _check_guard(out, self.ring.guard)
        return MPoly(self.ring, out)

    def monic(self) -> "MPoly":
        """Divide by the leading coefficient (default grevlex order)."""
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.terms[self.leading_monomial()]))

    # structure -------------------------------------------------------------
    def leading_monomial(self) -> int:
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no leading monomial")
        return max(self.terms, key=self.ring.grevlex_key)

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: self.ring.grevlex_key(t[0]), reverse=True)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(self.ring.unpack(m)) for m in self.terms)

    def multidegree(self) -> tuple:
        """Common Z^r-degree of all terms; raises NotHomogeneous otherwise."""
        if not self.terms:
            raise ZeroPolynomial("the zero polynomial has no multidegree")
        degs = {self.ring.mono_multidegree(m) for m in self.terms}
        if len(degs) != 1:
            raise NotHomogeneous(f"{self} is not multihomogeneous")
        return degs.pop()

    def is_homogeneous(self) -> bool:
        if not self.terms:
            return True
        it = iter(self.terms)
        d0 = self.ring.mono_multidegree(next(it))
        return all(self.ring.mono_multidegree(m) == d0 for m in it)

    def support(self) -> set:
        """Indices of the variables that occur."""
        acc = 0
        for m in self.terms:
            acc |= m
        return {i for i, s in enumerate(self.ring._shifts) if (acc >> s) & EXP_MASK}

    def is_constant(self) -> bool:
        return not self.terms or list(self.terms) == [0]

    def as_variable(self) -> int | None:
        """Index of the variable if this polynomial is a scalar multiple of one."""
        if len(self.terms) != 1:
            return None
        (m,) = self.terms
        e = self.ring.unpack(m)
        if sum(e) == 1:
            return e.index(1)
        return None

    def exact_div(self, f: "MPoly") -> "MPoly | None":
        """Quotient self / f when f divides self exactly, else None."""
        R = self.ring
        F = R.field
        if not f:
            raise ZeroPolynomial("division by the zero polynomial")
        lmf = f.leading_monomial()
        inv = F.inv(f.terms[lmf])
        guard = _guard_mask(R.nvars)
        rem = MPoly(R, dict(self.terms))
        q: dict = {}
        while rem.terms:
            m = rem.leading_monomial()
            if (m - lmf) & guard or m < lmf:
                return None
            c = F.mul(rem.terms[m], inv)
            q[m - lmf] = c
            rem = rem - f.mul_term(m - lmf, c)
        return MPoly(R, q)

    def derivative(self, i: int) -> "MPoly":
        F = self.ring.field
        s = self.ring._shifts[i]
        out = {}
        for m, c in self.terms.items():
            e = (m >> s) & EXP_MASK
            if e:
                v = F.mul(c, F.convert(e))
                if v:
                    out[m - (1 << s)] = v
        return MPoly(self.ring, out)

    def coefficient(self, mono: int):
        return self.terms.get(mono, self.ring.field.zero)

    # evaluation and substitution --------------------------------------------
    def evaluate(self, point: Sequence) -> object:
        """Value at a point given as raw coefficients or FieldElems, one per variable."""
        R = self.ring
        if len(point) != R.nvars:
            raise BadArity(f"point has {len(point)} coordinates, ring has {R.nvars} variables")
        F = R.field
        vals = [F.convert(v) for v in point]
        p = F.characteristic
        total = 0 if p else Fraction(0)
        for m, c in self.terms.items():
            t = c
            for i, s in enumerate(R._shifts):
                e = (m >> s) & EXP_MASK
                if e:
                    t = t * (pow(vals[i], e, p) if p else vals[i] ** e)
                    if p:
                        t %= p
            total += t
        return total % p if p else total

    def substitute(self, images: Sequence["MPoly"], check: bool = False) -> "MPoly":
        """Replace variable i by images[i] (all images in one common ring)."""
        R = self.ring
        if len(images) != R.nvars:
            raise BadArity(f"need {R.nvars} images, got {len(images)}")
        if not images:
            raise BadArity("no images given")
        S = images[0].ring
        if check:
            for block in R.blocks:
                degs = {images[i].multidegree() for i in block if images[i]}
                if len(degs) > 1:
                    raise InhomogeneousImages("images within a factor must share a multidegree")
        powers = [dict() for _ in range(R.nvars)]
        F = S.field
        acc: dict = {}
        for m, c in self.terms.items():
            term = None
            for i, s in enumerate(R._shifts):
                e = (m >> s) & EXP_MASK
                if not e:
                    continue
                cache = powers[i]
                pw = cache.get(e)
                if pw is None:
                    pw = images[i] ** e
                    cache[e] = pw
                term = pw if term is None else term * pw
            if term is None:
                term = S.one()
            if F != R.field:
                c = F.convert(c)
            for mm, cc in term.terms.items():
                acc[mm] = F.add(acc.get(mm, F.zero), F.mul(cc, c))
        return MPoly(S, {mm: cc for mm, cc in acc.items() if cc})

    def change_ring(self, ring: MultiGradedRing, shift: int = 0) -> "MPoly":
        """Reinterpret in ``ring`` (same field), moving variables up by ``shift`` positions."""
        if ring.field != self.ring.field:
            raise MixedRings("change_ring keeps the field; use base_change")
        b = EXP_BITS * shift
        return MPoly(ring, {m << b: c for m, c in self.terms.items()})

    def base_change(self, ring: MultiGradedRing) -> "MPoly":
        F, G = self.ring.field, ring.field
        if F == G:
            return MPoly(ring, dict(self.terms))
        if F.characteristic:
            raise BadReduction(f"cannot move coefficients from {F} to {G}")
        out = {}
        for m, c in self.terms.items():
            v = G.reduce(c)
            if v:
                out[m] = v
        return MPoly(ring, out)

    # printing ----------------------------------------------------------------
    def __repr__(self):
        return self.to_str()

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        R = self.ring
        F = R.field
        parts = []
        for m, c in self.sorted_terms():
            e = R.unpack(m)
            mono = "*".join(
                (R.names[i] if k == 1 else f"{R.names[i]}^{k}") for i, k in enumerate(e) if k
            )
            if F.characteristic:
                sc = F.symmetric(c)
                neg, mag = sc < 0, str(abs(sc))
            else:
                neg = c < 0
                a = -c if neg else c
                mag = str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
            if mono:
                body = mono if mag == "1" else f"{mag}*{mono}"
            else:
                body = mag
            parts.append(("-" if neg else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


# ---------------------------------------------------------------------------
# text syntax: integer/rational coefficients, *, ^ (or **), + -, parentheses

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


class PolySyntaxError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at column {pos + 1}")
        self.pos = pos


class _PolyParser:
    def __init__(self, ring: MultiGradedRing, text: str):
        self.ring = ring
        self.text = text
        self.tokens = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            mt = _TOKEN.match(text, pos)
            if not mt:
                raise PolySyntaxError(f"unexpected character {text[pos]!r}", pos)
            kind = "num" if mt.group(1) else "name" if mt.group(2) else "op"
            self.tokens.append((kind, mt.group(mt.lastindex), mt.start(mt.lastindex)))
            pos = mt.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> MPoly:
        if not self.tokens:
            raise PolySyntaxError("empty polynomial", 0)
        f = self.expr()
        kind, val, pos = self.peek()
        if kind is not None:
            raise PolySyntaxError(f"unexpected {val!r}", pos)
        return f

    def expr(self):
        kind, val, _ = self.peek()
        neg = False
        if kind == "op" and val in "+-":
            self.take()
            neg = val == "-"
        f = self.term()
        if neg:
            f = -f
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in ("+", "-"):
                self.take()
                g = self.term()
                f = f + g if val == "+" else f - g
            else:
                return f

    def term(self):
        f = self.power()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val == "*":
                self.take()
                f = f * self.power()
            elif kind == "op" and val == "/":
                self.take()
                d = self.power()
                if not d.is_constant() or not d:
                    raise PolySyntaxError("can only divide by a nonzero constant", pos)
                f = f.scale(self.ring.field.inv(d.terms[0]))
            elif kind in ("num", "name") or (kind == "op" and val == "("):
                f = f * self.power()  # implicit product
            else:
                return f

    def power(self):
        f = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val in ("^", "**"):
            self.take()
            k2, v2, p2 = self.take()
            if k2 != "num":
                raise PolySyntaxError("exponent must be a nonnegative integer", p2)
            f = f ** int(v2)
        return f

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return self.ring.constant(int(val))
        if kind == "name":
            if val not in self.ring.index:
                raise PolySyntaxError(f"unknown variable {val!r}", pos)
            return self.ring.var(val)
        if kind == "op" and val == "(":
            f = self.expr()
            k2, v2, p2 = self.take()
            if v2 != ")":
                raise PolySyntaxError("expected ')'", p2)
            return f
        if kind == "op" and val == "-":
            return -self.atom()
        raise PolySyntaxError(f"unexpected {val!r}" if val else "unexpected end of input", pos)


def poly_arith(f: MPoly, g: MPoly, op: str) -> MPoly:
    if f.ring != g.ring:
        raise MixedRings("polynomials live in different rings")
    return {"add": f.__add__, "sub": f.__sub__, "mul": f.__mul__}[op](g)


def multidegree_of(f: MPoly) -> tuple:
    return f.multidegree()


def evaluate(f: MPoly, point: Sequence) -> object:
    return f.evaluate(point)


def substitute(f: MPoly, images: Sequence[MPoly]) -> MPoly:
    return f.substitute(images, check=True)


def sum_polys(ring: MultiGradedRing, polys: Iterable[MPoly]) -> MPoly:
    F = ring.field
    out: dict = {}
    for f in polys:
        for m, c in f.terms.items():
            v = F.add(out.get(m, F.zero), c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return MPoly(ring, out)
