"""A small line-oriented language for spaces, sets, windows, ideals and jobs.

    space Z grid dim=1 step=1
    set A = geom(2)
    set B = ball(A, 1) on Z
    window w = ball(0, 1048576)
    ideal I = closure(A; bounded=true; cap=8)
    job thin A r=4 in w

Numbers are exact: ``1/4`` is a rational, never a float. ``#`` starts a
comment. Inside ``seq`` and ``interval_union`` the variable ``n`` ranges over
0, 1, 2, ...
"""
from __future__ import annotations

import difflib
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from . import pointset as ps
from .ideals import Ideal, closure_ball_invariant
from .space import (
    Ballean,
    FiniteMetric,
    FreeGroup,
    GraphMetric,
    IntegerGrid,
    RationalGrid,
    Window,
    ZdGroup,
    norm,
)

KEYWORDS = ("space", "set", "window", "ideal", "job")
SPACE_KINDS = {
    "grid": ("dim", "step", "metric"),
    "rational": ("step",),
    "graph": ("edges", "path", "nodes"),
    "finite": ("n", "d"),
    "zgroup": ("dim",),
    "freegroup": ("rank",),
}
SET_FUNCS = {
    "list": None,
    "arith": 2,
    "geom": 1,
    "seq": 1,
    "interval_union": 2,
    "interval": 2,
    "ray": 1,
    "all": 0,
    "empty": 0,
    "ball": 2,
    "union": None,
    "inter": None,
    "diff": 2,
    "complement": 1,
}


@dataclass(frozen=True)
class JobKind:
    args: tuple  # "set", "sets", "ideal"
    params: tuple
    required: tuple = ()


JOB_KINDS = {
    "bounded": JobKind(("set",), ("rho",), ("rho",)),
    "large": JobKind(("set",), ("r",), ("r",)),
    "thick": JobKind(("set",), ("r",), ("r",)),
    "prethick": JobKind(("set",), ("r", "r2"), ("r", "r2")),
    "prethick_sweep": JobKind(("set",), ("r_max", "r2_max"), ("r_max",)),
    "small": JobKind(("set",), ("r", "r2_max"), ("r",)),
    "small_sweep": JobKind(("set",), ("r_max", "r2_max"), ("r_max",)),
    "duality": JobKind(("set",), ("r", "r2"), ("r", "r2")),
    "thin": JobKind(("set",), ("r", "rho_max", "domain"), ("r",)),
    "asden": JobKind((), ("r", "cover"), ("r",)),
    "linked": JobKind(("set", "set"), ("r",), ("r",)),
    "member": JobKind(("ideal", "set"), ("rho",)),
    "invariant": JobKind(("ideal", "sets"), ("scales", "rho"), ("scales",)),
    "prop3": JobKind(("set", "ideal"), ("cap", "bounded_radius", "rho_unbounded"), ("cap",)),
    "sparsity": JobKind(("set",), ("shifts", "bands"), ("shifts",)),
    "sparse": JobKind(("sets",), ("shifts", "bands"), ("shifts",)),
    "ulf": JobKind((), ("r",), ("r",)),
    "wobble": JobKind((), ("r",), ("r",)),
}


class DslError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0, expected: tuple = (), suggestions: tuple = ()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = tuple(expected)
        self.suggestions = tuple(suggestions)
        text = f"line {line}, col {col}: {message}"
        if self.expected:
            text += "; expected one of: " + ", ".join(self.expected)
        if self.suggestions:
            text += "; did you mean: " + ", ".join(self.suggestions)
        super().__init__(text)


# ---------------------------------------------------------------------------
# syntax tree


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Str:
    text: str


@dataclass(frozen=True)
class Neg:
    x: Any


@dataclass(frozen=True)
class Bin:
    op: str
    left: Any
    right: Any


@dataclass(frozen=True)
class Fact:
    x: Any


@dataclass(frozen=True)
class Call:
    fn: str
    args: tuple


@dataclass(frozen=True)
class Tup:
    items: tuple


@dataclass(frozen=True)
class Range:
    lo: Any
    hi: Any


@dataclass(frozen=True)
class SpaceStmt:
    name: str
    kind: str
    params: tuple  # ((key, (value, ...)), ...)
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class SetStmt:
    name: str
    expr: Any
    on: str | None = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class WindowStmt:
    name: str
    center: Any
    radius: Any
    on: str | None = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class IdealStmt:
    name: str
    generators: tuple
    bounded: bool = True
    cap: Any = Num(0)  # None is "inf"
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class JobStmt:
    kind: str
    args: tuple  # ((name, ...), ...)
    params: tuple = ()
    windows: tuple = ()
    line: int = field(default=0, compare=False)

    def param(self, key: str, default: Any = None) -> Any:
        for k, v in self.params:
            if k == key:
                return v
        return default


@dataclass(frozen=True)
class Program:
    statements: tuple = ()

    @property
    def declarations(self) -> list:
        return [s for s in self.statements if not isinstance(s, JobStmt)]

    @property
    def jobs(self) -> list:
        return [s for s in self.statements if isinstance(s, JobStmt)]


# ---------------------------------------------------------------------------
# lexer

_TOKEN = re.compile(
    r"""(?P<ws>[ \t\r]+)|(?P<comment>\#.*)|(?P<num>\d+)|(?P<id>[A-Za-z_][A-Za-z0-9_]*)
        |(?P<str>"[^"\n]*")|(?P<range>\.\.)|(?P<op>[()=,;+\-*/^!])""",
    re.X,
)


@dataclass(frozen=True)
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize_line(text: str, line: int) -> list[Tok]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DslError(f"unexpected character {text[pos]!r}", line, pos + 1)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            out.append(Tok(kind, m.group(), line, pos + 1))
        pos = m.end()
    out.append(Tok("eol", "", line, len(text) + 1))
    return out


class _Cursor:
    def __init__(self, toks: list[Tok]):
        self.toks = toks
        self.i = 0

    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        t = self.tok
        return t.text == text and t.kind in ("op", "range", "id")

    def take(self) -> Tok:
        t = self.tok
        self.i += 1
        return t

    def fail(self, what: str, expected: tuple = ()) -> DslError:
        t = self.tok
        found = "end of line" if t.kind == "eol" else repr(t.text)
        return DslError(f"{what}, found {found}", t.line, t.col, expected)

    def expect(self, text: str) -> Tok:
        if not self.at(text):
            raise self.fail("syntax error", (repr(text),))
        return self.take()

    def ident(self, expected: tuple = ("identifier",)) -> Tok:
        if self.tok.kind != "id":
            raise self.fail("syntax error", expected)
        return self.take()

    def end(self) -> None:
        if self.tok.kind != "eol":
            raise self.fail("unexpected trailing input", ("end of line",))


# ---------------------------------------------------------------------------
# expressions


def _expr(c: _Cursor) -> Any:
    left = _prod(c)
    while c.at("+") or c.at("-"):
        op = c.take().text
        left = Bin(op, left, _prod(c))
    return left


def _prod(c: _Cursor) -> Any:
    left = _unary(c)
    while c.at("*") or c.at("/"):
        op = c.take().text
        left = Bin(op, left, _unary(c))
    return left


def _unary(c: _Cursor) -> Any:
    if c.at("-"):
        c.take()
        return Neg(_unary(c))
    return _power(c)


def _power(c: _Cursor) -> Any:
    base = _postfix(c)
    if c.at("^"):
        c.take()
        return Bin("^", base, _unary(c))
    return base


def _postfix(c: _Cursor) -> Any:
    x = _atom(c)
    while c.at("!"):
        c.take()
        x = Fact(x)
    return x


def _atom(c: _Cursor) -> Any:
    t = c.tok
    if t.kind == "num":
        c.take()
        return Num(int(t.text))
    if t.kind == "str":
        c.take()
        return Str(t.text[1:-1])
    if t.kind == "id":
        c.take()
        if c.at("("):
            return Call(t.text, _group(c))
        return Var(t.text)
    if c.at("("):
        items = _group(c, tuples=True)
        if isinstance(items, Tup):
            return items
        return items[0]
    raise c.fail("syntax error", ("number", "identifier", "string", "'('"))


def _group(c: _Cursor, tuples: bool = False) -> Any:
    c.expect("(")
    items = []
    trailing = False
    while not c.at(")"):
        items.append(_expr(c))
        trailing = False
        if c.at(","):
            c.take()
            trailing = True
        elif not c.at(")"):
            raise c.fail("syntax error", ("','", "')'"))
    c.expect(")")
    if tuples:
        if len(items) == 1 and not trailing:
            return [items[0]]
        return Tup(tuple(items))
    return tuple(items)


def _value(c: _Cursor) -> tuple:
    """``item (',' item)*`` with ``item := expr ['..' expr]``."""
    items = []
    while True:
        x = _expr(c)
        if c.at(".."):
            c.take()
            x = Range(x, _expr(c))
        items.append(x)
        if not c.at(","):
            return tuple(items)
        c.take()


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def show(e: Any, need: int = 0) -> str:
    """Render an expression; parentheses only where precedence requires."""
    if isinstance(e, Num):
        s, p = str(e.value), 6
    elif isinstance(e, Var):
        s, p = e.name, 6
    elif isinstance(e, Str):
        s, p = f'"{e.text}"', 6
    elif isinstance(e, Call):
        s, p = f"{e.fn}(" + ", ".join(show(a) for a in e.args) + ")", 6
    elif isinstance(e, Tup):
        inner = ", ".join(show(a) for a in e.items)
        s, p = ("(" + inner + ",)" if len(e.items) == 1 else "(" + inner + ")"), 6
    elif isinstance(e, Fact):
        s, p = show(e.x, 5) + "!", 5
    elif isinstance(e, Neg):
        s, p = "-" + show(e.x, 3), 3
    elif isinstance(e, Bin) and e.op == "^":
        s, p = show(e.left, 5) + "^" + show(e.right, 3), 4
    elif isinstance(e, Bin):
        q = _PREC[e.op]
        s, p = f"{show(e.left, q)} {e.op} {show(e.right, q + 1)}", q
    elif isinstance(e, Range):
        return f"{show(e.lo)}..{show(e.hi)}"
    else:
        raise TypeError(f"not an expression: {e!r}")
    return f"({s})" if p < need else s


# ---------------------------------------------------------------------------
# statements


def _params(c: _Cursor, stop: tuple = ()) -> tuple:
    out = []
    while c.tok.kind == "id" and c.peek().text == "=" and c.tok.text not in stop:
        key = c.take().text
        c.expect("=")
        out.append((key, _value(c)))
    return tuple(out)


def _names(c: _Cursor) -> tuple:
    names = [c.ident().text]
    while c.at(","):
        c.take()
        names.append(c.ident().text)
    return tuple(names)


def _statement(c: _Cursor) -> Any:
    t = c.tok
    if t.kind != "id" or t.text not in KEYWORDS:
        raise c.fail("syntax error", KEYWORDS)
    c.take()
    line = t.line
    if t.text == "space":
        name = c.ident().text
        kind_tok = c.tok
        kind = c.ident(tuple(SPACE_KINDS)).text
        if kind not in SPACE_KINDS:
            raise DslError(f"unknown space kind {kind!r}", kind_tok.line, kind_tok.col, tuple(SPACE_KINDS))
        params = _params(c)
        c.end()
        return SpaceStmt(name, kind, params, line)
    if t.text == "set":
        name = c.ident().text
        c.expect("=")
        expr = _expr(c)
        on = _on(c)
        c.end()
        return SetStmt(name, expr, on, line)
    if t.text == "window":
        name = c.ident().text
        c.expect("=")
        at = c.tok
        e = _expr(c)
        if not (isinstance(e, Call) and e.fn == "ball" and len(e.args) == 2):
            raise DslError("a window is written ball(<point>, <radius>)", at.line, at.col, ("ball(",))
        on = _on(c)
        c.end()
        return WindowStmt(name, e.args[0], e.args[1], on, line)
    if t.text == "ideal":
        name = c.ident().text
        c.expect("=")
        if c.tok.text != "closure":
            raise c.fail("syntax error", ("closure",))
        c.take()
        c.expect("(")
        gens = _names(c) if c.tok.kind == "id" else ()
        bounded, cap = True, Num(0)
        while c.at(";"):
            c.take()
            key = c.ident(("bounded", "cap"))
            c.expect("=")
            if key.text == "bounded":
                v = c.ident(("true", "false"))
                if v.text not in ("true", "false"):
                    raise DslError("bounded takes true or false", v.line, v.col, ("true", "false"))
                bounded = v.text == "true"
            elif key.text == "cap":
                if c.tok.text == "inf":
                    c.take()
                    cap = None
                else:
                    cap = _expr(c)
            else:
                raise DslError(f"unknown closure option {key.text!r}", key.line, key.col, ("bounded", "cap"))
        c.expect(")")
        c.end()
        return IdealStmt(name, gens, bounded, cap, line)
    # job
    kt = c.ident(tuple(JOB_KINDS))
    if kt.text not in JOB_KINDS:
        close = tuple(difflib.get_close_matches(kt.text, JOB_KINDS, n=3, cutoff=0.5))
        raise DslError(f"unknown job kind {kt.text!r}", kt.line, kt.col, tuple(JOB_KINDS), close)
    args = []
    while c.tok.kind == "id" and c.tok.text != "in" and c.peek().text != "=":
        args.append(_names(c))
    params = _params(c, stop=("in",))
    windows = ()
    if c.tok.kind == "id" and c.tok.text == "in":
        c.take()
        windows = _names(c)
    c.end()
    return JobStmt(kt.text, tuple(args), params, windows, line)


def _on(c: _Cursor) -> str | None:
    if c.tok.kind == "id" and c.tok.text == "on":
        c.take()
        return c.ident().text
    return None


def parse(text: str) -> Program:
    """Parse and check a program; raises DslError with line and column."""
    stmts = []
    for n, raw in enumerate(text.splitlines(), start=1):
        toks = tokenize_line(raw, n)
        if toks[0].kind == "eol":
            continue
        stmts.append(_statement(_Cursor(toks)))
    prog = Program(tuple(stmts))
    check(prog)
    return prog


def pretty_print(P: Program) -> str:
    lines = []
    for s in P.statements:
        if isinstance(s, SpaceStmt):
            parts = [f"space {s.name} {s.kind}"] + [f"{k}={_show_value(v)}" for k, v in s.params]
            lines.append(" ".join(parts))
        elif isinstance(s, SetStmt):
            lines.append(f"set {s.name} = {show(s.expr)}" + (f" on {s.on}" if s.on else ""))
        elif isinstance(s, WindowStmt):
            lines.append(f"window {s.name} = ball({show(s.center)}, {show(s.radius)})" + (f" on {s.on}" if s.on else ""))
        elif isinstance(s, IdealStmt):
            cap = "inf" if s.cap is None else show(s.cap)
            lines.append(
                f"ideal {s.name} = closure({', '.join(s.generators)}; "
                f"bounded={'true' if s.bounded else 'false'}; cap={cap})"
            )
        else:
            parts = [f"job {s.kind}"] + [",".join(a) for a in s.args]
            parts += [f"{k}={_show_value(v)}" for k, v in s.params]
            if s.windows:
                parts.append("in " + ",".join(s.windows))
            lines.append(" ".join(parts))
    return "\n".join(lines) + ("\n" if lines else "")


def _show_value(v: tuple) -> str:
    return ",".join(show(x) for x in v)


# ---------------------------------------------------------------------------
# evaluation


def evaluate(e: Any, env: dict[str, Any] | None = None) -> Any:
    """Exact value of an arithmetic expression (ints and Fractions)."""
    env = env or {}
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        if e.name in env:
            return env[e.name]
        raise KeyError(e.name)
    if isinstance(e, Neg):
        return -evaluate(e.x, env)
    if isinstance(e, Fact):
        v = evaluate(e.x, env)
        if v != int(v) or v < 0:
            raise ValueError("factorial of a non-natural number")
        return math.factorial(int(v))
    if isinstance(e, Bin):
        a, b = evaluate(e.left, env), evaluate(e.right, env)
        if e.op == "+":
            return norm(Fraction(a) + b)
        if e.op == "-":
            return norm(Fraction(a) - b)
        if e.op == "*":
            return norm(Fraction(a) * b)
        if e.op == "/":
            if b == 0:
                raise ZeroDivisionError("division by zero")
            return norm(Fraction(a) / b)
        if Fraction(b).denominator != 1:
            raise ValueError("exponents must be integers")
        return norm(Fraction(a) ** int(b))
    if isinstance(e, Tup):
        return tuple(evaluate(x, env) for x in e.items)
    raise ValueError(f"{show(e)} is not a number")


def _free_vars(e: Any) -> set:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, (Neg, Fact)):
        return _free_vars(e.x)
    if isinstance(e, Bin):
        return _free_vars(e.left) | _free_vars(e.right)
    if isinstance(e, (Call, Tup)):
        return set().union(*(_free_vars(a) for a in (e.args if isinstance(e, Call) else e.items)))
    return set()


def sequence_fn(e: Any) -> Callable[[int], Any]:
    extra = _free_vars(e) - {"n"}
    if extra:
        raise ValueError(f"only n may appear in {show(e)}, not {sorted(extra)}")
    return lambda n: evaluate(e, {"n": n})


class Env:
    """Declared objects by name, built in program order."""

    def __init__(self) -> None:
        self.spaces: dict[str, Ballean] = {}
        self.sets: dict[str, ps.PointSet] = {}
        self.windows: dict[str, Window] = {}
        self.ideals: dict[str, Ideal] = {}
        self.current: str | None = None

    def taken(self, name: str) -> bool:
        return any(name in d for d in (self.spaces, self.sets, self.windows, self.ideals))

    def space_of(self, on: str | None, what: str, line: int) -> Ballean:
        if on is None:
            if self.current is None:
                raise DslError(f"{what} before space", line, 1)
            return self.spaces[self.current]
        if on not in self.spaces:
            raise DslError(f"unknown space {on!r}", line, 1, tuple(self.spaces))
        return self.spaces[on]

    def point(self, sp: Ballean, e: Any) -> Any:
        if isinstance(e, Str):
            if not isinstance(sp, FreeGroup):
                raise ValueError("quoted words need a free group")
            return sp.parse_word(e.text)
        if isinstance(sp, FreeGroup) and isinstance(e, Var) and e.name == "e":
            return sp.e
        if unknown := sorted(_free_vars(e)):
            sugg = tuple(difflib.get_close_matches(unknown[0], self.sets, n=3))
            raise DslError(f"unknown identifier {unknown[0]!r}", 0, 1, (), sugg)
        return sp.point(evaluate(e))

    def scale(self, sp: Ballean, e: Any) -> Any:
        return sp.scale(evaluate(e))

    def build(self, s: Any) -> None:
        if self.taken(s.name if not isinstance(s, JobStmt) else ""):
            raise DslError(f"{s.name!r} is already declared", s.line, 1)
        try:
            if isinstance(s, SpaceStmt):
                self.spaces[s.name] = build_space(s)
                self.current = s.name
            elif isinstance(s, SetStmt):
                sp = self.space_of(s.on, "set", s.line)
                self.sets[s.name] = self.set_expr(sp, s.expr, s.line)
            elif isinstance(s, WindowStmt):
                sp = self.space_of(s.on, "window", s.line)
                self.windows[s.name] = Window(sp, self.point(sp, s.center), self.scale(sp, s.radius))
            elif isinstance(s, IdealStmt):
                gens = [self.lookup_set(g, s.line) for g in s.generators]
                sp = gens[0].space if gens else self.space_of(None, "ideal", s.line)
                cap = None if s.cap is None else self.scale(sp, s.cap)
                self.ideals[s.name] = closure_ball_invariant(gens, s.bounded, cap, space=sp)
        except DslError as exc:
            if exc.line == 0:
                raise DslError(exc.message, s.line, exc.col, exc.expected, exc.suggestions) from None
            raise
        except (ValueError, TypeError, KeyError, ZeroDivisionError) as exc:
            raise DslError(f"{type(exc).__name__}: {exc}", s.line, 1) from None

    def lookup_set(self, name: str, line: int) -> ps.PointSet:
        if name not in self.sets:
            sugg = tuple(difflib.get_close_matches(name, self.sets, n=3))
            raise DslError(f"unknown set {name!r}", line, 1, (), sugg)
        return self.sets[name]

    def set_expr(self, sp: Ballean, e: Any, line: int) -> ps.PointSet:
        if isinstance(e, Var):
            A = self.lookup_set(e.name, line)
            if A.space is not sp:
                raise DslError(f"set {e.name!r} lives on another space", line, 1)
            return A
        if not isinstance(e, Call):
            raise DslError(f"{show(e)} is not a set expression", line, 1, tuple(SET_FUNCS))
        fn, args = e.fn, e.args
        if fn not in SET_FUNCS:
            sugg = tuple(difflib.get_close_matches(fn, SET_FUNCS, n=3))
            raise DslError(f"unknown set function {fn!r}", line, 1, tuple(SET_FUNCS), sugg)
        arity = SET_FUNCS[fn]
        if arity is not None and len(args) != arity:
            raise DslError(f"{fn} takes {arity} argument(s), got {len(args)}", line, 1)
        text = show(e)
        if fn == "list":
            return ps.Explicit(sp, [self.point(sp, a) for a in args])
        if fn == "arith":
            return ps.arith(sp, evaluate(args[0]), evaluate(args[1]))
        if fn == "geom":
            return ps.geom(sp, evaluate(args[0]))
        if fn == "seq":
            return ps.seq(sp, sequence_fn(args[0]), text)
        if fn == "interval_union":
            return ps.interval_union(sp, sequence_fn(args[0]), sequence_fn(args[1]), text)
        if fn == "interval":
            return ps.interval(sp, *(None if _is_inf(a) else evaluate(a) for a in args))
        if fn == "ray":
            return ps.ray(sp, evaluate(args[0]))
        if fn == "all":
            return ps.everything(sp)
        if fn == "empty":
            return ps.nothing(sp)
        if fn == "ball":
            inner = args[0]
            is_set = isinstance(inner, Call) or isinstance(inner, Var) and inner.name in self.sets
            if not is_set:
                return ps.ball(sp, self.point(sp, inner), self.scale(sp, args[1]))
            return ps.BallOf(self.set_expr(sp, inner, line), self.scale(sp, args[1]))
        if fn in ("union", "inter"):
            if not args:
                raise DslError(f"{fn} needs at least one set", line, 1)
            parts = [self.set_expr(sp, a, line) for a in args]
            return ps.union(*parts) if fn == "union" else ps.inter(*parts)
        if fn == "diff":
            return ps.diff(self.set_expr(sp, args[0], line), self.set_expr(sp, args[1], line))
        return ps.complement(self.set_expr(sp, args[0], line))


def _is_inf(e: Any) -> bool:
    return isinstance(e, Var) and e.name == "inf" or isinstance(e, Neg) and _is_inf(e.x)


def build_space(s: SpaceStmt) -> Ballean:
    allowed = SPACE_KINDS[s.kind]
    p = dict(s.params)
    for k in p:
        if k not in allowed:
            raise DslError(f"space kind {s.kind} has no parameter {k!r}", s.line, 1, allowed)

    def one(key: str, default: Any = None) -> Any:
        if key not in p:
            return default
        if len(p[key]) != 1:
            raise DslError(f"{key} takes a single value", s.line, 1)
        return p[key][0]

    if s.kind == "grid":
        metric = one("metric", Var("sup"))
        if not isinstance(metric, Var) or metric.name not in ("sup", "l1"):
            raise DslError("metric is sup or l1", s.line, 1, ("sup", "l1"))
        return IntegerGrid(evaluate(one("dim", Num(1))), evaluate(one("step", Num(1))), metric.name)
    if s.kind == "rational":
        step = one("step")
        return RationalGrid(None if step is None else evaluate(step))
    if s.kind == "graph":
        if "path" in p:
            return GraphMetric.path(evaluate(one("path")))
        edges = [evaluate(t) for t in p.get("edges", ())]
        nodes = [evaluate(x) for x in p.get("nodes", ())]
        for e in edges:
            if not (isinstance(e, tuple) and len(e) == 2):
                raise DslError("edges are pairs (u, v)", s.line, 1)
        return GraphMetric.from_edges(edges, nodes)
    if s.kind == "finite":
        n = evaluate(one("n"))
        table = [[Fraction(0)] * n for _ in range(n)]
        for t in p.get("d", ()):
            i, j, d = evaluate(t)
            table[i][j] = table[j][i] = Fraction(d)
        return FiniteMetric(table)
    if s.kind == "zgroup":
        return ZdGroup(evaluate(one("dim", Num(1))))
    return FreeGroup(evaluate(one("rank", Num(2))))


def check(P: Program) -> Env:
    """Name resolution and type checks; returns the built environment."""
    env = Env()
    for s in P.statements:
        if isinstance(s, JobStmt):
            check_job(env, s)
        else:
            env.build(s)
    return env


def check_job(env: Env, j: JobStmt) -> None:
    spec = JOB_KINDS[j.kind]
    if len(j.args) != len(spec.args):
        raise DslError(f"job {j.kind} takes {len(spec.args)} argument(s), got {len(j.args)}", j.line, 1)
    for kind, names in zip(spec.args, j.args):
        if kind != "sets" and len(names) != 1:
            raise DslError(f"job {j.kind} takes a single {kind} here", j.line, 1)
        for name in names:
            if kind == "ideal":
                if name not in env.ideals:
                    raise DslError(f"unknown ideal {name!r}", j.line, 1, (), tuple(difflib.get_close_matches(name, env.ideals)))
            else:
                env.lookup_set(name, j.line)
    keys = [k for k, _ in j.params]
    for k in keys:
        if k not in spec.params:
            raise DslError(f"job {j.kind} has no parameter {k!r}", j.line, 1, spec.params)
    for k in spec.required:
        if k not in keys:
            raise DslError(f"job {j.kind} needs {k}=", j.line, 1, spec.params)
    if len(set(keys)) != len(keys):
        raise DslError("repeated parameter", j.line, 1)
    for w in j.windows:
        if w not in env.windows:
            raise DslError(f"unknown window {w!r}", j.line, 1, (), tuple(difflib.get_close_matches(w, env.windows)))
    if not spec.args and not j.windows:
        raise DslError(f"job {j.kind} needs a window: in <window>", j.line, 1)
