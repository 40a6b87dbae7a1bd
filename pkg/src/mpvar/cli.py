"""Script runner: ``mpv run script.mpv``.

A script is a sequence of statements, one per line (a statement continues on
following lines while brackets are open).  ``#`` starts a comment.

    field QQ | field GF 65537
    space P5 = PP(5) vars t,u,v,x,y,z
    variety X = V(P5; <poly>, ...)
    map f : P5 -> PP(2) = [t, u, v]
    mmap Phi = (f, g)
    let Phi = restrict(Phi, X)
    let (p1, p2) = graph(Phi)
    print <expr> | describe <expr> | assert <expr> == <expr>
"""

from __future__ import annotations

import argparse
import json
import random
import re
import signal
import sys
from dataclasses import dataclass, field as dc_field
from typing import Any

from . import ratmaps as rm
from .errors import AssertionFailed, BadArity, DuplicateName, MixedRings, MPVError, ParseError, ScriptError
from .fields import GF, QQ, Field, field_from_string
from .hilbert import MultidegreePoly
from .polyring import PolySyntaxError, make_ring
from .ratmaps import GraphVariety, MultiRationalMap
from .varieties import MultiProjVariety, Report, ambient_space, make_variety, point_of, singular_locus

# ---------------------------------------------------------------------------
# syntax tree


@dataclass
class Name:
    ident: str

    def render(self) -> str:
        return self.ident


@dataclass
class Int:
    value: int

    def render(self) -> str:
        return str(self.value)


@dataclass
class Bool:
    value: bool

    def render(self) -> str:
        return "true" if self.value else "false"


@dataclass
class Call:
    func: str
    args: list

    def render(self) -> str:
        return f"{self.func}({', '.join(a.render() for a in self.args)})"


@dataclass
class Tuple:
    items: list

    def render(self) -> str:
        return f"({', '.join(a.render() for a in self.items)})"


@dataclass
class Eq:
    left: Any
    right: Any

    def render(self) -> str:
        return f"{self.left.render()} == {self.right.render()}"


@dataclass
class Stmt:
    line: int


@dataclass
class FieldStmt(Stmt):
    field_text: str

    def render(self) -> str:
        return "field QQ" if self.field_text == "QQ" else f"field GF {self.field_text[3:]}"


@dataclass
class SpaceStmt(Stmt):
    name: str
    dims: list
    names: list | None = None

    def render(self) -> str:
        out = f"space {self.name} = PP({','.join(map(str, self.dims))})"
        if self.names:
            out += " vars " + ",".join(self.names)
        return out


@dataclass
class VarietyStmt(Stmt):
    name: str
    space: str
    polys: list

    def render(self) -> str:
        return f"variety {self.name} = V({self.space}; {', '.join(self.polys)})"


@dataclass
class MapStmt(Stmt):
    name: str
    source: str
    target: Any  # list of dims or a name
    polys: list

    def render(self) -> str:
        tgt = self.target if isinstance(self.target, str) else f"PP({','.join(map(str, self.target))})"
        return f"map {self.name} : {self.source} -> {tgt} = [{', '.join(self.polys)}]"


@dataclass
class MMapStmt(Stmt):
    name: str
    maps: list

    def render(self) -> str:
        return f"mmap {self.name} = ({', '.join(self.maps)})"


@dataclass
class LetStmt(Stmt):
    names: list
    expr: Any
    tuple_form: bool = False

    def render(self) -> str:
        lhs = f"({', '.join(self.names)})" if self.tuple_form else self.names[0]
        return f"let {lhs} = {self.expr.render()}"


@dataclass
class QueryStmt(Stmt):
    verb: str  # print | describe | assert
    expr: Any

    def render(self) -> str:
        return f"{self.verb} {self.expr.render()}"


def render_script(stmts: list) -> str:
    return "".join(s.render() + "\n" for s in stmts)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>==|->|[(),;\[\]:=]))")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*$")


def _logical_lines(text: str):
    """Yield (first line number, text), joining lines while brackets are open."""
    buf, start, depth = [], 0, 0
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not buf:
            if not line.strip():
                continue
            start = no
        buf.append(line)
        depth += sum(line.count(c) for c in "([") - sum(line.count(c) for c in ")]")
        if depth <= 0:
            yield start, " ".join(buf).strip()
            buf, depth = [], 0
    if buf:
        raise ParseError("unbalanced brackets at end of script", start)


class _Cursor:
    def __init__(self, text: str, line: int):
        self.text = text
        self.pos = 0
        self.line = line

    def error(self, msg: str):
        raise ParseError(msg, self.line, self.pos + 1)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        m = _TOKEN.match(self.text, self.pos)
        if not m or m.end() == self.pos:
            self.skip_ws()
            return None if self.pos >= len(self.text) else ("?", self.text[self.pos])
        kind = m.lastgroup
        return kind, m.group(kind)

    def next(self):
        m = _TOKEN.match(self.text, self.pos)
        if not m:
            self.skip_ws()
            if self.pos >= len(self.text):
                self.error("unexpected end of statement")
            self.error(f"unexpected character {self.text[self.pos]!r}")
        self.pos = m.end()
        kind = m.lastgroup
        return kind, m.group(kind)

    def expect(self, value: str):
        tok = self.next()
        if tok[1] != value:
            self.pos -= len(tok[1])
            self.error(f"expected {value!r}, found {tok[1]!r}")

    def name(self) -> str:
        kind, val = self.next()
        if kind != "name":
            self.pos -= len(val)
            self.error(f"expected a name, found {val!r}")
        return val

    def integer(self) -> int:
        kind, val = self.next()
        if kind != "int":
            self.pos -= len(val)
            self.error(f"expected an integer, found {val!r}")
        return int(val)

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def raw_until(self, closer: str) -> str:
        """Raw text up to the matching closing bracket, which is consumed."""
        depth = 0
        start = self.pos
        for i in range(self.pos, len(self.text)):
            c = self.text[i]
            if c in "([":
                depth += 1
            elif c in ")]":
                if depth == 0:
                    if c != closer:
                        self.pos = i
                        self.error(f"expected {closer!r}")
                    self.pos = i + 1
                    return self.text[start:i]
                depth -= 1
        self.pos = len(self.text)
        self.error(f"missing {closer!r}")


def _split_top(text: str) -> list:
    parts, depth, cur = [], 0, []
    for c in text:
        if c in "([":
            depth += 1
        elif c in ")]":
            depth -= 1
        if c == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(c)
    parts.append("".join(cur))
    return [" ".join(p.split()) for p in parts if p.strip()]


def _parse_dims(cur: _Cursor) -> list:
    cur.expect("PP")
    cur.expect("(")
    dims = [cur.integer()]
    while cur.peek() and cur.peek()[1] == ",":
        cur.next()
        dims.append(cur.integer())
    cur.expect(")")
    return dims


def _parse_expr(cur: _Cursor):
    left = _parse_atom(cur)
    if cur.peek() and cur.peek()[1] == "==":
        cur.next()
        return Eq(left, _parse_atom(cur))
    return left


def _parse_atom(cur: _Cursor):
    tok = cur.peek()
    if tok is None:
        cur.error("expected an expression")
    kind, val = tok
    if kind == "int":
        cur.next()
        return Int(int(val))
    if kind == "name":
        cur.next()
        if val in ("true", "false"):
            return Bool(val == "true")
        if cur.peek() and cur.peek()[1] == "(":
            cur.next()
            args = []
            if cur.peek() and cur.peek()[1] == ")":
                cur.next()
                return Call(val, args)
            while True:
                args.append(_parse_expr(cur))
                sep = cur.next()[1]
                if sep == ")":
                    return Call(val, args)
                if sep != ",":
                    cur.pos -= len(sep)
                    cur.error("expected ',' or ')'")
        return Name(val)
    if val == "(":
        cur.next()
        items = [_parse_expr(cur)]
        while True:
            sep = cur.next()[1]
            if sep == ")":
                break
            if sep != ",":
                cur.pos -= len(sep)
                cur.error("expected ',' or ')'")
            items.append(_parse_expr(cur))
        return items[0] if len(items) == 1 else Tuple(items)
    cur.error(f"unexpected {val!r}")


def _parse_statement(text: str, line: int):
    cur = _Cursor(text, line)
    head = cur.name()
    if head == "field":
        kind = cur.name()
        if kind == "QQ":
            stmt = FieldStmt(line, "QQ")
        elif kind == "GF":
            stmt = FieldStmt(line, f"GF:{cur.integer()}")
        else:
            cur.error("field must be QQ or GF <p>")
    elif head == "space":
        name = cur.name()
        cur.expect("=")
        dims = _parse_dims(cur)
        names = None
        if not cur.at_end():
            if cur.name() != "vars":
                cur.error("expected 'vars'")
            names = [cur.name()]
            while not cur.at_end():
                cur.expect(",")
                names.append(cur.name())
        stmt = SpaceStmt(line, name, dims, names)
    elif head == "variety":
        name = cur.name()
        cur.expect("=")
        cur.expect("V")
        cur.expect("(")
        space = cur.name()
        cur.expect(";")
        polys = _split_top(cur.raw_until(")"))
        stmt = VarietyStmt(line, name, space, polys)
    elif head == "map":
        name = cur.name()
        cur.expect(":")
        source = cur.name()
        cur.expect("->")
        if cur.peek() and cur.peek()[1] == "PP":
            target = _parse_dims(cur)
        else:
            target = cur.name()
        cur.expect("=")
        cur.expect("[")
        polys = _split_top(cur.raw_until("]"))
        stmt = MapStmt(line, name, source, target, polys)
    elif head == "mmap":
        name = cur.name()
        cur.expect("=")
        cur.expect("(")
        maps = [cur.name()]
        while cur.next()[1] == ",":
            maps.append(cur.name())
        stmt = MMapStmt(line, name, maps)
    elif head == "let":
        if cur.peek() and cur.peek()[1] == "(":
            cur.next()
            names = [cur.name()]
            while cur.next()[1] == ",":
                names.append(cur.name())
            tuple_form = True
        else:
            names = [cur.name()]
            tuple_form = False
        cur.expect("=")
        stmt = LetStmt(line, names, _parse_expr(cur), tuple_form)
    elif head in ("print", "describe", "assert"):
        expr = _parse_expr(cur)
        if head == "assert" and not isinstance(expr, Eq):
            cur.error("assert needs an equality 'a == b'")
        stmt = QueryStmt(line, head, expr)
    else:
        cur.pos = 0
        cur.error(f"unknown statement {head!r}")
    if not cur.at_end():
        cur.error(f"unexpected trailing text {cur.text[cur.pos:]!r}")
    return stmt


def parse_script(text: str) -> list:
    """Parse a script into statements; raises ParseError with line and column."""
    return [_parse_statement(body, line) for line, body in _logical_lines(text)]


# ---------------------------------------------------------------------------
# values


def type_name(v) -> str:
    if isinstance(v, MultiProjVariety):
        return "ProjectiveVariety"
    if isinstance(v, MultiRationalMap):
        return v.kind
    if isinstance(v, (GraphVariety, tuple)):
        return "Sequence"
    if isinstance(v, MultidegreePoly):
        return "MultidegreePoly"
    if isinstance(v, bool):
        return "Boolean"
    if isinstance(v, int):
        return "ZZ"
    if isinstance(v, list):
        return "List"
    return type(v).__name__


def render_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, GraphVariety):
        v = (v.proj1, v.proj2)
    if isinstance(v, tuple):
        return "(" + ", ".join(render_value(x) for x in v) + ")"
    if isinstance(v, list):
        return "{" + ", ".join(render_value(x) for x in v) + "}"
    return str(v) if not isinstance(v, (MultiProjVariety, MultiRationalMap)) else repr(v)


def value_json(v):
    if isinstance(v, bool) or isinstance(v, int):
        return v
    if isinstance(v, GraphVariety):
        v = (v.proj1, v.proj2)
    if isinstance(v, (tuple, list)):
        return [value_json(x) for x in v]
    if isinstance(v, (MultidegreePoly, Report)):
        return v.to_json()
    if isinstance(v, MultiProjVariety):
        out = {"type": "ProjectiveVariety", "description": v.phrase()}
        if v.point is not None:
            out["point"] = v.point.to_json()
        return out
    if isinstance(v, MultiRationalMap):
        return {"type": v.kind, "description": v.description()}
    return str(v)


def values_equal(a, b) -> bool:
    if isinstance(a, GraphVariety):
        a = (a.proj1, a.proj2)
    if isinstance(b, GraphVariety):
        b = (b.proj1, b.proj2)
    if isinstance(a, (tuple, list)) and isinstance(b, (tuple, list)):
        return len(a) == len(b) and all(values_equal(x, y) for x, y in zip(a, b))
    if isinstance(a, MultiProjVariety) and isinstance(b, MultiProjVariety):
        return a.ring == b.ring and a == b
    if isinstance(a, MultiRationalMap) and isinstance(b, MultiRationalMap):
        if a.s != b.s or a.source.ring != b.source.ring or a.target.ring != b.target.ring:
            return False
        return rm.maps_equal(a, b)
    if isinstance(a, bool) != isinstance(b, bool):
        return False
    return a == b


# ---------------------------------------------------------------------------
# execution


class _Timeout(Exception):
    pass


@dataclass
class Record:
    line: int
    number: int
    kind: str
    value: Any
    name: str | None = None
    text: list = dc_field(default_factory=list)
    snapshot: dict | None = None

    def to_json(self) -> dict:
        # descriptions can change as later statements learn more (e.g. birationality)
        if self.snapshot is not None:
            return self.snapshot
        out = {"line": self.line, "kind": self.kind}
        if self.name is not None:
            out["name"] = self.name
        out["value"] = value_json(self.value)
        return out


class Session:
    """Executes statements in order, keeping bindings and output records."""

    def __init__(self, field: Field | None = None, seed: int = 0, timeout: float | None = None,
                 field_override: bool = False):
        self.field = field or QQ
        self.field_override = field_override
        self.seed = seed
        self.timeout = timeout
        self.bindings: dict = {}
        self.records: list = []
        self.stmts: list = []
        self.index = 0

    # public -------------------------------------------------------------------
    def run(self, stmts: list, upto: int | None = None, out=None) -> list:
        self.stmts = stmts
        stop = len(stmts) if upto is None else upto
        for i in range(stop):
            self.index = i
            stmt = stmts[i]
            rec = self._run_one(stmt, i + 1)
            if rec is not None:
                rec.snapshot = rec.to_json()
                self.records.append(rec)
                if out is not None:
                    for line in rec.text:
                        print(line, file=out, flush=True)
        return self.records

    # dispatch ---------------------------------------------------------------------
    def _run_one(self, stmt, number: int):
        try:
            if self.timeout:
                signal.signal(signal.SIGALRM, _raise_timeout)
                signal.setitimer(signal.ITIMER_REAL, self.timeout)
            try:
                return self._exec(stmt, number)
            finally:
                if self.timeout:
                    signal.setitimer(signal.ITIMER_REAL, 0)
        except (ScriptError, ParseError):
            raise
        except _Timeout:
            raise ScriptError(f"timed out after {self.timeout} s", stmt.line)
        except PolySyntaxError as exc:
            raise ScriptError(f"PolySyntaxError: {exc}", stmt.line, exc)
        except MPVError as exc:
            raise ScriptError(f"{type(exc).__name__}: {exc}", stmt.line, exc)

    def _bind(self, name: str, value, line: int, rebind: bool = False):
        if name in self.bindings and not rebind:
            raise DuplicateName(f"{name!r} is already bound (use let to rebind)")
        self.bindings[name] = value

    def _exec(self, stmt, number: int):
        if isinstance(stmt, FieldStmt):
            if not self.field_override:
                self.field = field_from_string(stmt.field_text)
            return None
        if isinstance(stmt, SpaceStmt):
            R = make_ring(self.field, stmt.dims, names=stmt.names)
            self._bind(stmt.name, ambient_space(R), stmt.line)
            return None
        if isinstance(stmt, VarietyStmt):
            R = self._space(stmt.space, stmt.line).ring
            X = make_variety(R, [R.parse(p) for p in stmt.polys], stmt.name)
            self._bind(stmt.name, X, stmt.line)
            return self._binding_record(stmt, number, stmt.name, X)
        if isinstance(stmt, MapStmt):
            src = self._space(stmt.source, stmt.line)
            if isinstance(stmt.target, str):
                tgt = self._space(stmt.target, stmt.line)
            else:
                tgt = ambient_space(make_ring(self.field, stmt.target))
            forms = [src.ring.parse(p) for p in stmt.polys]
            phi = _map_from_forms(src, tgt, forms)
            phi.name = stmt.name
            self._bind(stmt.name, phi, stmt.line)
            return self._binding_record(stmt, number, stmt.name, phi)
        if isinstance(stmt, MMapStmt):
            maps = [self._lookup(n, stmt.line) for n in stmt.maps]
            phi = _combine(maps)
            phi.name = stmt.name
            self._bind(stmt.name, phi, stmt.line)
            return self._binding_record(stmt, number, stmt.name, phi)
        if isinstance(stmt, LetStmt):
            value = self.eval(stmt.expr, stmt.line)
            if stmt.tuple_form:
                items = _as_tuple(value)
                if len(items) != len(stmt.names):
                    raise ScriptError(f"cannot unpack {len(items)} values into {len(stmt.names)} names", stmt.line)
                for n, v in zip(stmt.names, items):
                    self._name(v, n)
                    self._bind(n, v, stmt.line, rebind=True)
                return Record(stmt.line, number, "let", value, ",".join(stmt.names))
            name = stmt.names[0]
            self._name(value, name)
            self._bind(name, value, stmt.line, rebind=True)
            return self._binding_record(stmt, number, name, value, kind="let")
        if isinstance(stmt, QueryStmt):
            if stmt.verb == "assert":
                a = self.eval(stmt.expr.left, stmt.line)
                b = self.eval(stmt.expr.right, stmt.line)
                ok = values_equal(a, b)
                if not ok:
                    raise AssertionFailed(f"assertion failed: {stmt.expr.render()} "
                                          f"(left = {render_value(a)}, right = {render_value(b)})", stmt.line)
                return Record(stmt.line, number, "assert", True)
            value = self.eval(stmt.expr, stmt.line)
            if stmt.verb == "describe":
                if not isinstance(value, MultiProjVariety):
                    raise ScriptError("describe needs a variety", stmt.line)
                value = value.describe()
            head = f"o{number} = "
            body = str(value) if isinstance(value, Report) else render_value(value)
            lines = body.split("\n")
            text = [head + lines[0]] + [" " * len(head) + ln for ln in lines[1:]]
            return Record(stmt.line, number, stmt.verb, value, text=text)
        raise ScriptError(f"cannot execute {stmt!r}", stmt.line)

    def _binding_record(self, stmt, number, name, value, kind="bind"):
        desc = value.description() if isinstance(value, MultiRationalMap) else None
        if isinstance(value, MultiProjVariety):
            text = f"o{number} : {repr(value)}"
        elif desc is not None:
            text = f"o{number} : {value.kind} ({desc})"
        else:
            text = f"o{number} : {type_name(value)}"
        return Record(stmt.line, number, kind, value, name, [text])

    @staticmethod
    def _name(value, name):
        if isinstance(value, MultiProjVariety) and value.name is None and not value.is_ambient():
            value.name = name
        elif isinstance(value, MultiRationalMap) and value.name is None:
            value.name = name

    def _lookup(self, name: str, line: int):
        if name not in self.bindings:
            raise ScriptError(f"unknown name {name!r}", line)
        return self.bindings[name]

    def _space(self, name: str, line: int) -> MultiProjVariety:
        v = self._lookup(name, line)
        if not isinstance(v, MultiProjVariety):
            raise ScriptError(f"{name!r} is not a space or variety", line)
        return v

    def _rng(self) -> random.Random:
        return random.Random(f"{self.seed}:{self.index}")

    # expressions -----------------------------------------------------------------
    def eval(self, e, line: int):
        if isinstance(e, Int):
            return e.value
        if isinstance(e, Bool):
            return e.value
        if isinstance(e, Name):
            return self._lookup(e.ident, line)
        if isinstance(e, Tuple):
            return tuple(self.eval(x, line) for x in e.items)
        if isinstance(e, Eq):
            return values_equal(self.eval(e.left, line), self.eval(e.right, line))
        if isinstance(e, Call):
            if e.func == "basechange":
                return self._basechange(e, line)
            fn = _FUNCS.get(e.func)
            if fn is None:
                raise ScriptError(f"unknown function {e.func!r}", line)
            if e.func == "projdegrees" and len(e.args) == 2 and isinstance(e.args[1], Name):
                args = [self.eval(e.args[0], line), e.args[1].ident]
            else:
                args = [self.eval(a, line) for a in e.args]
            return fn(self, *args)
        raise ScriptError(f"cannot evaluate {e!r}", line)

    def _basechange(self, e: Call, line: int):
        if len(e.args) != 2:
            raise ScriptError("basechange takes a map and a prime", line)
        obj = self.eval(e.args[0], line)
        p = self.eval(e.args[1], line)
        F = obj.source.field if isinstance(obj, MultiRationalMap) else obj.field
        if not F.is_finite or F.characteristic == p:
            return obj.base_change(p) if isinstance(obj, MultiRationalMap) else _bc_variety(obj, p)
        # already over another prime field: rebuild the object from the script over GF(p)
        sub = Session(GF(p), self.seed, self.timeout, field_override=True)
        sub.run(self.stmts, upto=self.index)
        sub.index = self.index
        return sub.eval(e.args[0], line)


def _raise_timeout(signum, frame):
    raise _Timeout()


def _bc_variety(X: MultiProjVariety, p: int):
    return rm._bc_variety(X, GF(p), {}) if not X.field.is_finite else X


def _as_tuple(v) -> tuple:
    if isinstance(v, GraphVariety):
        return (v.proj1, v.proj2)
    if isinstance(v, tuple):
        return v
    raise MPVError("value is not a sequence")


def _map_from_forms(src: MultiProjVariety, tgt: MultiProjVariety, forms: list) -> MultiRationalMap:
    S = tgt.ring
    comps, k = [], 0
    for n in S.factor_dims:
        comps.append([forms[k:k + n + 1]])
        k += n + 1
    if k != len(forms):
        raise BadArity(f"target needs {k} forms, got {len(forms)}")
    kind = "RationalMap" if S.r == 1 else "MultirationalMap"
    return MultiRationalMap(src, tgt, comps, kind=kind)


def _combine(maps: list) -> MultiRationalMap:
    """(f_1, ..., f_s): the multi-rational map to the product of the targets."""
    src = maps[0].source
    for m in maps:
        if not isinstance(m, MultiRationalMap):
            raise MPVError("mmap expects maps")
        if m.source.ring != src.ring:
            raise MixedRings("maps in an mmap must share a source")
    dims = [d for m in maps for d in m.target.ring.factor_dims]
    if any(not m.target.is_ambient() for m in maps):
        raise MPVError("mmap needs maps to projective spaces")
    S = make_ring(src.field, dims)
    comps = [[list(v) for v in c.reps] for m in maps for c in m.comps]
    return MultiRationalMap(src, ambient_space(S), comps)


def _f_degree(s, x):
    if isinstance(x, MultiRationalMap):
        return x.map_degree()
    return x.degree


def _f_point(s, X):
    return point_of(X, s._rng())


def _f_fiber(s, phi, p):
    return phi.inverse_image(phi.direct_image(p))


def _f_projdegrees(s, phi, mode="deterministic"):
    return phi.projective_degrees(mode, s._rng())


def _f_graph(s, phi, route=None):
    return phi.graph()


def _first(s, v):
    return _as_tuple(v)[0]


def _second(s, v):
    return _as_tuple(v)[1]


_FUNCS = {
    "restrict": lambda s, phi, X: phi.restrict(X),
    "graph": _f_graph,
    "inverse": lambda s, phi: phi.inverse(),
    "compose": lambda s, phi, psi: rm.compose(phi, psi),
    "image": lambda s, phi: phi.image(),
    "baselocus": lambda s, phi: phi.base_locus(),
    "preimage": lambda s, phi, W: phi.inverse_image(W),
    "pushforward": lambda s, phi, Z: phi.direct_image(Z),
    "point": _f_point,
    "fiber": _f_fiber,
    "source": lambda s, phi: phi.source,
    "target": lambda s, phi: phi.target,
    "first": _first,
    "second": _second,
    "segre": lambda s, phi: phi.to_segre_map(),
    "singularlocus": lambda s, X: singular_locus(X),
    "dim": lambda s, X: X.dim,
    "codim": lambda s, X: X.codim,
    "degree": _f_degree,
    "multidegree": lambda s, X: X.multidegree,
    "projdegrees": _f_projdegrees,
    "mapdegree": lambda s, phi: phi.map_degree(),
    "ismorphism": lambda s, phi: phi.is_morphism(),
    "isisomorphism": lambda s, phi: phi.is_isomorphism(),
    "isbirational": lambda s, phi: phi.is_birational(),
    "isdominant": lambda s, phi: phi.is_dominant(),
    "isempty": lambda s, X: X.is_empty(),
}


def emit_json(records: list) -> str:
    return json.dumps([r.to_json() for r in records], indent=2)


# ---------------------------------------------------------------------------
# entry point


def run_script(text: str, seed: int = 0, field: str | None = None, timeout: float | None = None,
               out=None) -> Session:
    stmts = parse_script(text)
    F = field_from_string(field) if field else None
    sess = Session(F, seed, timeout, field_override=F is not None)
    sess.run(stmts, out=out)
    return sess


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="mpv", description="Run multi-projective variety scripts.")
    sub = ap.add_subparsers(dest="cmd", required=True)
    runp = sub.add_parser("run", help="execute a script")
    runp.add_argument("script")
    runp.add_argument("--json", action="store_true", help="print a JSON array of records")
    runp.add_argument("--seed", type=int, default=0)
    runp.add_argument("--field", default=None, help="GF:<p> or QQ; overrides the script's field")
    runp.add_argument("--timeout", type=float, default=None, help="per-statement limit in seconds")
    args = ap.parse_args(argv)
    try:
        with open(args.script, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.field:
            field_from_string(args.field)
        sess = run_script(text, args.seed, args.field, args.timeout, out=None if args.json else sys.stdout)
    except AssertionFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ParseError, ScriptError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MPVError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if args.json:
        print(emit_json(sess.records))
    return 0


if __name__ == "__main__":
    sys.exit(main())
