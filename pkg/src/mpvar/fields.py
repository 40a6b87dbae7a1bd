"""Exact coefficient fields: the rationals and prime fields GF(p).

Polynomial code works on *raw* coefficients for speed: ``Fraction`` values
for QQ and canonical residues ``0 <= a < p`` for GF(p).  A :class:`Field`
knows how to combine raw values; :class:`FieldElem` wraps a raw value with
its field for the public, operator-based API.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache

from .errors import BadReduction, DivisionByZero, MixedFields, ZeroPolynomial

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Field:
    """A coefficient field, either QQ (characteristic 0) or GF(p)."""

    __slots__ = ("characteristic",)

    MAX_PRIME = 1 << 62

    def __init__(self, characteristic: int = 0):
        if characteristic:
            if not (2 < characteristic < self.MAX_PRIME and is_prime(characteristic)):
                raise ValueError(f"characteristic must be an odd prime below 2^62, got {characteristic}")
        self.characteristic = characteristic

    @property
    def kind(self) -> str:
        return "PrimeField" if self.characteristic else "Rationals"

    @property
    def is_finite(self) -> bool:
        return self.characteristic != 0

    def __eq__(self, other):
        return isinstance(other, Field) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("Field", self.characteristic))

    def __repr__(self):
        return f"GF({self.characteristic})" if self.characteristic else "QQ"

    __str__ = __repr__

    # raw-value arithmetic -------------------------------------------------
    @property
    def zero(self):
        return 0 if self.characteristic else Fraction(0)

    @property
    def one(self):
        return 1 if self.characteristic else Fraction(1)

    def convert(self, value):
        """Bring an int, Fraction or FieldElem into canonical raw form."""
        if isinstance(value, FieldElem):
            if value.field != self:
                if value.field.characteristic == 0 and self.characteristic:
                    return self.reduce(value.value)
                raise MixedFields(f"cannot convert element of {value.field} into {self}")
            return value.value
        p = self.characteristic
        if p:
            if isinstance(value, Fraction):
                return self.reduce(value)
            return int(value) % p
        return Fraction(value)

    def reduce(self, q) -> int:
        """Image of a rational number under QQ -> GF(p)."""
        p = self.characteristic
        if not p:
            return Fraction(q)
        q = Fraction(q)
        den = q.denominator % p
        if den == 0:
            raise BadReduction(f"denominator of {q} is divisible by {p}")
        return q.numerator * pow(den, -1, p) % p

    def add(self, a, b):
        p = self.characteristic
        return (a + b) % p if p else a + b

    def sub(self, a, b):
        p = self.characteristic
        return (a - b) % p if p else a - b

    def mul(self, a, b):
        p = self.characteristic
        return a * b % p if p else a * b

    def neg(self, a):
        p = self.characteristic
        return -a % p if p else -a

    def inv(self, a):
        if not a:
            raise DivisionByZero("inverse of zero")
        p = self.characteristic
        return pow(a, -1, p) if p else 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def random(self, rng: random.Random, height: int = 10):
        """Uniform element of GF(p); uniform integer in [-height, height] for QQ."""
        p = self.characteristic
        if p:
            return rng.randrange(p)
        return Fraction(rng.randint(-height, height))

    def to_str(self, a) -> str:
        if self.characteristic:
            return str(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def to_json(self, a):
        if self.characteristic or a.denominator == 1:
            return int(a)
        return f"{a.numerator}/{a.denominator}"

    def symmetric(self, a) -> int:
        """Symmetric integer lift of a residue (GF(p) only)."""
        p = self.characteristic
        return a - p if a > p // 2 else a

    def __call__(self, value) -> "FieldElem":
        return FieldElem(self, self.convert(value))


QQ = Field(0)


@lru_cache(maxsize=None)
def GF(p: int) -> Field:
    return Field(p)


def field_from_string(text: str) -> Field:
    """Parse ``QQ``, ``GF:p``, ``GF p`` or ``GF(p)``."""
    t = text.strip().replace("(", " ").replace(")", " ").replace(":", " ")
    parts = t.split()
    if parts == ["QQ"]:
        return QQ
    if len(parts) == 2 and parts[0] in ("GF", "ZZ/"):
        return GF(int(parts[1]))
    raise ValueError(f"unrecognised field {text!r}")


class FieldElem:
    """Immutable field element with arithmetic operators."""

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value):
        self.field = field
        self.value = value

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise MixedFields(f"{self.field} vs {other.field}")
            return other.value
        return self.field.convert(other)

    def __add__(self, other):
        return FieldElem(self.field, self.field.add(self.value, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.field, self.field.sub(self.value, self._coerce(other)))

    def __rsub__(self, other):
        return FieldElem(self.field, self.field.sub(self._coerce(other), self.value))

    def __mul__(self, other):
        return FieldElem(self.field, self.field.mul(self.value, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElem(self.field, self.field.div(self.value, self._coerce(other)))

    def __rtruediv__(self, other):
        return FieldElem(self.field, self.field.div(self._coerce(other), self.value))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.value))

    def inv(self) -> "FieldElem":
        return FieldElem(self.field, self.field.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field == other.field and self.value == other.value
        try:
            return self.value == self.field.convert(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return bool(self.value)

    def __repr__(self):
        return self.field.to_str(self.value)


def field_arith(a: FieldElem, b: FieldElem | None, op: str) -> FieldElem:
    """Apply ``op`` in {add, sub, mul, div, inv, neg}; unary ops ignore ``b``."""
    if op == "inv":
        return a.inv()
    if op == "neg":
        return -a
    if b is None or a.field != b.field:
        raise MixedFields("operands live in different fields")
    return {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__, "div": a.__truediv__}[op](b)


def reduce_mod_p(a, p: int) -> FieldElem:
    """Reduce a rational (Fraction, int or QQ element) modulo ``p``."""
    if isinstance(a, FieldElem):
        if a.field.characteristic:
            raise MixedFields("reduce_mod_p expects a rational number")
        a = a.value
    F = GF(p)
    return FieldElem(F, F.reduce(a))


def random_elem(field: Field, rng: random.Random, height: int = 10) -> FieldElem:
    return FieldElem(field, field.random(rng, height))


# ---------------------------------------------------------------------------
# dense univariate polynomials over GF(p): lists, lowest degree first

def _trim(f):
    while f and not f[-1]:
        f.pop()
    return f


def _polymod(f, g, p):
    f = list(f)
    dg = len(g) - 1
    inv_lc = pow(g[-1], -1, p)
    while len(f) - 1 >= dg and f:
        c = f[-1] * inv_lc % p
        if c:
            shift = len(f) - 1 - dg
            for i, gi in enumerate(g):
                f[shift + i] = (f[shift + i] - c * gi) % p
        f.pop()
        _trim(f)
    return f


def _polymulmod(f, g, m, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _polymod(_trim(out), m, p)


def _polypowmod(base, e, m, p):
    result = [1]
    base = _polymod(base, m, p)
    while e:
        if e & 1:
            result = _polymulmod(result, base, m, p)
        e >>= 1
        if e:
            base = _polymulmod(base, base, m, p)
    return result


def _polygcd(f, g, p):
    f, g = _trim(list(f)), _trim(list(g))
    while g:
        f, g = g, _polymod(f, g, p)
    if f:
        inv = pow(f[-1], -1, p)
        f = [c * inv % p for c in f]
    return f


def _polysub(f, g, p):
    n = max(len(f), len(g))
    out = [((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % p for i in range(n)]
    return _trim(out)


def _polydiv_exact(f, g, p):
    f = list(f)
    q = [0] * (len(f) - len(g) + 1)
    inv_lc = pow(g[-1], -1, p)
    for k in range(len(q) - 1, -1, -1):
        c = f[k + len(g) - 1] * inv_lc % p
        q[k] = c
        if c:
            for i, gi in enumerate(g):
                f[k + i] = (f[k + i] - c * gi) % p
    return _trim(q)


def univariate_roots(coeffs, field: Field, rng: random.Random | None = None) -> set:
    """All roots in GF(p) of the polynomial with coefficients ``coeffs`` (lowest first).

    Takes gcd(f, x^p - x) to isolate the split part, then splits it with
    random gcds against (x + a)^((p-1)/2) - 1.
    """
    p = field.characteristic
    if not p:
        raise ValueError("univariate_roots needs a prime field")
    f = _trim([field.convert(c) for c in coeffs])
    if not f:
        raise ZeroPolynomial("cannot find roots of the zero polynomial")
    if len(f) == 1:
        return set()
    rng = rng or random.Random(0)
    roots = set()
    if f[0] == 0:
        roots.add(0)
        while f and f[0] == 0:
            f.pop(0)
    if len(f) == 1:
        return roots
    xp = _polypowmod([0, 1], p, f, p)
    split = _polygcd(f, _polysub(xp, [0, 1], p), p)
    stack = [split]
    while stack:
        g = stack.pop()
        d = len(g) - 1
        if d <= 0:
            continue
        if d == 1:
            roots.add(-g[0] * pow(g[1], -1, p) % p)
            continue
        while True:
            a = rng.randrange(p)
            h = _polypowmod([a, 1], (p - 1) // 2, g, p)
            h = _polysub(h, [1], p)
            c = _polygcd(g, h, p)
            if 0 < len(c) - 1 < d:
                stack.append(c)
                stack.append(_polydiv_exact(g, c, p))
                break
    return roots
