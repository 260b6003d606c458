"""Syntax, parser and reference semantics of CRPDL over finite MSCs.

The evaluator works on explicit event sets and relations; it is slow but
transparent and serves as the oracle the automata are checked against.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

import networkx as nx

from .msc import Action, Direction, Msc

__all__ = [
    "Local", "Atom", "TT", "Proc", "Not", "Path", "Repeat", "And", "Or",
    "PathExpr", "Dir", "Test", "Seq", "Alt", "Star",
    "Global", "Exists", "Forall", "GAnd", "GOr",
    "FormulaSyntaxError", "parse_local", "parse_global", "parse_path",
    "size", "reach", "relation", "sat_set", "eval_local", "eval_global",
    "normalize_path", "expand", "is_path_formula", "max_process", "beta",
]


# --------------------------------------------------------------------------
# abstract syntax

class Local:
    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)


class PathExpr:
    pass


class Global:
    pass


@dataclass(frozen=True)
class Atom(Local):
    action: Action

    def __str__(self):
        return str(self.action)


@dataclass(frozen=True)
class TT(Local):
    def __str__(self):
        return "tt"


@dataclass(frozen=True)
class Proc(Local):
    """Holds at the events of process ``q``."""

    q: int

    def __str__(self):
        return f"P{self.q}"


@dataclass(frozen=True)
class Not(Local):
    inner: Local

    def __str__(self):
        return f"~{_wrap_unary(self.inner)}"


@dataclass(frozen=True)
class Path(Local):
    path: PathExpr
    inner: Local

    def __str__(self):
        return f"<{self.path}>{_wrap_unary(self.inner)}"


@dataclass(frozen=True)
class Repeat(Local):
    path: PathExpr

    def __str__(self):
        return f"<{self.path}>^w"


@dataclass(frozen=True)
class And(Local):
    left: Local
    right: Local

    def __str__(self):
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class Or(Local):
    left: Local
    right: Local

    def __str__(self):
        return f"({self.left} | {self.right})"


def _wrap_unary(a: Local) -> str:
    return str(a)


@dataclass(frozen=True)
class Dir(PathExpr):
    d: Direction

    def __str__(self):
        return str(self.d)


@dataclass(frozen=True)
class Test(PathExpr):
    inner: Local

    def __str__(self):
        return "{" + str(self.inner) + "}"


@dataclass(frozen=True)
class Seq(PathExpr):
    left: PathExpr
    right: PathExpr

    def __str__(self):
        return f"({self.left};{self.right})"


@dataclass(frozen=True)
class Alt(PathExpr):
    left: PathExpr
    right: PathExpr

    def __str__(self):
        return f"({self.left}+{self.right})"


@dataclass(frozen=True)
class Star(PathExpr):
    inner: PathExpr

    def __str__(self):
        return f"{self.inner}*"


@dataclass(frozen=True)
class Exists(Global):
    inner: Local

    def __str__(self):
        return f"E {self.inner}"


@dataclass(frozen=True)
class Forall(Global):
    inner: Local

    def __str__(self):
        return f"A {self.inner}"


@dataclass(frozen=True)
class GAnd(Global):
    left: Global
    right: Global

    def __str__(self):
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class GOr(Global):
    left: Global
    right: Global

    def __str__(self):
        return f"({self.left} | {self.right})"


def beta(p: int) -> Local:
    """``<proc*;msg;proc*;msg>Pp``: two message hops back to process ``p``."""
    star = Star(Dir(Direction.PROC))
    msg = Dir(Direction.MSG)
    return Path(Seq(Seq(Seq(star, msg), star), msg), Proc(p))


# --------------------------------------------------------------------------
# derived forms and size

def expand(a: Local) -> Local:
    """Rewrite conjunction and disjunction into the core constructors."""
    if isinstance(a, And):
        return Path(Test(expand(a.left)), expand(a.right))
    if isinstance(a, Or):
        return Not(Path(Test(Not(expand(a.left))), Not(expand(a.right))))
    if isinstance(a, Not):
        return Not(expand(a.inner))
    if isinstance(a, Path):
        return Path(_expand_path(a.path), expand(a.inner))
    if isinstance(a, Repeat):
        return Repeat(_expand_path(a.path))
    return a


def _expand_path(p: PathExpr) -> PathExpr:
    if isinstance(p, Test):
        return Test(expand(p.inner))
    if isinstance(p, (Seq, Alt)):
        return type(p)(_expand_path(p.left), _expand_path(p.right))
    if isinstance(p, Star):
        return Star(_expand_path(p.inner))
    return p


def size(x) -> int:
    """Symbol count of the core (expanded) formula.

    Actions, directions, ``tt`` and ``Pq`` count one symbol each; so do the
    operators and each bracket of ``<..>`` and ``{..}``.
    """
    if isinstance(x, (Atom, TT, Proc, Dir)):
        return 1
    if isinstance(x, Not):
        return 1 + size(x.inner)
    if isinstance(x, Path):
        return 2 + size(x.path) + size(x.inner)
    if isinstance(x, Repeat):
        return 3 + size(x.path)
    if isinstance(x, And):
        return 4 + size(x.left) + size(x.right)
    if isinstance(x, Or):
        return 7 + size(x.left) + size(x.right)
    if isinstance(x, Test):
        return 2 + size(x.inner)
    if isinstance(x, (Seq, Alt)):
        return 1 + size(x.left) + size(x.right)
    if isinstance(x, Star):
        return 1 + size(x.inner)
    if isinstance(x, (Exists, Forall)):
        return 1 + size(x.inner)
    if isinstance(x, (GAnd, GOr)):
        return 1 + size(x.left) + size(x.right)
    raise TypeError(x)


def is_path_formula(a: Local) -> bool:
    return isinstance(a, Path) and isinstance(a.inner, TT)


def max_process(x) -> int:
    """Largest process number mentioned in a formula (0 if none)."""
    if isinstance(x, Atom):
        return max(x.action.owner, x.action.peer)
    if isinstance(x, Proc):
        return x.q
    if isinstance(x, (TT, Dir)):
        return 0
    kids = [getattr(x, f) for f in ("inner", "path", "left", "right") if hasattr(x, f)]
    return max((max_process(k) for k in kids), default=0)


def normalize_path(a: Local) -> Local:
    """Push every non-trivial modal argument into a trailing test."""
    if isinstance(a, Path):
        path = _normalize_in_path(a.path)
        if isinstance(a.inner, TT):
            return Path(path, a.inner)
        return Path(Seq(path, Test(normalize_path(a.inner))), TT())
    if isinstance(a, Not):
        return Not(normalize_path(a.inner))
    if isinstance(a, Repeat):
        return Repeat(_normalize_in_path(a.path))
    if isinstance(a, (And, Or)):
        return type(a)(normalize_path(a.left), normalize_path(a.right))
    return a


def _normalize_in_path(p: PathExpr) -> PathExpr:
    if isinstance(p, Test):
        return Test(normalize_path(p.inner))
    if isinstance(p, (Seq, Alt)):
        return type(p)(_normalize_in_path(p.left), _normalize_in_path(p.right))
    if isinstance(p, Star):
        return Star(_normalize_in_path(p.inner))
    return p


# --------------------------------------------------------------------------
# parser

class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<action>\d+[!?]\d+)|(?P<word>proc-|msg-|proc|msg|id|tt|P\s*\d+|E|A)"
    r"|(?P<omega>\^w)|(?P<sym>[<>{}();+*~&|]))"
)

_DIRS = {"proc": Direction.PROC, "proc-": Direction.PROC_INV, "msg": Direction.MSG,
         "msg-": Direction.MSG_INV, "id": Direction.ID}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        value = m.group(kind)
        out.append((kind, value, m.start(kind)))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def peek(self, value: str) -> bool:
        return self.tok[1] == value and self.tok[0] != "eof"

    def expect(self, value: str):
        if not self.peek(value):
            self.fail(f"expected {value!r}")
        self.i += 1

    def fail(self, message: str):
        kind, value, pos = self.tok
        found = "end of input" if kind == "eof" else repr(value)
        raise FormulaSyntaxError(f"{message}, found {found}", pos)

    def done(self):
        if self.tok[0] != "eof":
            self.fail("unexpected trailing input")

    # global := gconj ('|' gconj)* ; gconj := gunary ('&' gunary)*
    def global_(self) -> Global:
        left = self.gconj()
        while self.peek("|"):
            self.i += 1
            left = GOr(left, self.gconj())
        return left

    def gconj(self) -> Global:
        left = self.gunary()
        while self.peek("&"):
            self.i += 1
            left = GAnd(left, self.gunary())
        return left

    def gunary(self) -> Global:
        if self.peek("E"):
            self.i += 1
            return Exists(self.unary())
        if self.peek("A"):
            self.i += 1
            return Forall(self.unary())
        if self.peek("("):
            self.i += 1
            g = self.global_()
            self.expect(")")
            return g
        self.fail("expected 'E', 'A' or '('")

    # local := conj ('|' conj)* ; conj := unary ('&' unary)*
    def local(self) -> Local:
        left = self.conj()
        while self.peek("|"):
            self.i += 1
            left = Or(left, self.conj())
        return left

    def conj(self) -> Local:
        left = self.unary()
        while self.peek("&"):
            self.i += 1
            left = And(left, self.unary())
        return left

    def unary(self) -> Local:
        kind, value, _ = self.tok
        if kind == "action":
            self.i += 1
            from .msc import parse_action
            return Atom(parse_action(value))
        if value == "tt" and kind == "word":
            self.i += 1
            return TT()
        if kind == "word" and value.startswith("P"):
            self.i += 1
            return Proc(int(value[1:].strip()))
        if self.peek("~"):
            self.i += 1
            return Not(self.unary())
        if self.peek("<"):
            self.i += 1
            path = self.path()
            self.expect(">")
            if self.tok[0] == "omega":
                self.i += 1
                return Repeat(path)
            return Path(path, self.unary())
        if self.peek("("):
            self.i += 1
            a = self.local()
            self.expect(")")
            return a
        self.fail("expected a local formula")

    # path := pseq ('+' pseq)* ; pseq := pstar (';' pstar)* ; pstar := patom '*'*
    def path(self) -> PathExpr:
        left = self.pseq()
        while self.peek("+"):
            self.i += 1
            left = Alt(left, self.pseq())
        return left

    def pseq(self) -> PathExpr:
        left = self.pstar()
        while self.peek(";"):
            self.i += 1
            left = Seq(left, self.pstar())
        return left

    def pstar(self) -> PathExpr:
        p = self.patom()
        while self.peek("*"):
            self.i += 1
            p = Star(p)
        return p

    def patom(self) -> PathExpr:
        kind, value, _ = self.tok
        if kind == "word" and value in _DIRS:
            self.i += 1
            return Dir(_DIRS[value])
        if self.peek("{"):
            self.i += 1
            a = self.local()
            self.expect("}")
            return Test(a)
        if self.peek("("):
            self.i += 1
            p = self.path()
            self.expect(")")
            return p
        self.fail("expected a path expression")


def parse_local(text: str) -> Local:
    p = _Parser(text)
    a = p.local()
    p.done()
    return a


def parse_path(text: str) -> PathExpr:
    p = _Parser(text)
    a = p.path()
    p.done()
    return a


def parse_global(text: str) -> Global:
    p = _Parser(text)
    g = p.global_()
    p.done()
    return g


# --------------------------------------------------------------------------
# semantics

@lru_cache(maxsize=None)
def sat_set(m: Msc, a: Local) -> frozenset:
    """Events of ``m`` at which ``a`` holds."""
    events = m.events
    if isinstance(a, Atom):
        return frozenset(v for v in events if m.label(v) == a.action)
    if isinstance(a, TT):
        return frozenset(events)
    if isinstance(a, Proc):
        return frozenset(v for v in events if v[0] == a.q)
    if isinstance(a, Not):
        return frozenset(events) - sat_set(m, a.inner)
    if isinstance(a, And):
        return sat_set(m, a.left) & sat_set(m, a.right)
    if isinstance(a, Or):
        return sat_set(m, a.left) | sat_set(m, a.right)
    if isinstance(a, Path):
        target = sat_set(m, a.inner)
        rel = relation(m, a.path)
        return frozenset(v for v, ws in rel.items() if ws & target)
    if isinstance(a, Repeat):
        return _repeat_set(m, a.path)
    raise TypeError(a)


@lru_cache(maxsize=None)
def relation(m: Msc, p: PathExpr) -> dict:
    """Map each event ``v`` to ``reach(m, v, p)``."""
    events = m.events
    if isinstance(p, Dir):
        out = {}
        for v in events:
            w = m.step(v, p.d)
            out[v] = frozenset() if w is None else frozenset([w])
        return out
    if isinstance(p, Test):
        good = sat_set(m, p.inner)
        return {v: frozenset([v]) if v in good else frozenset() for v in events}
    if isinstance(p, Seq):
        r1, r2 = relation(m, p.left), relation(m, p.right)
        return {v: frozenset().union(*(r2[w] for w in r1[v])) for v in events}
    if isinstance(p, Alt):
        r1, r2 = relation(m, p.left), relation(m, p.right)
        return {v: r1[v] | r2[v] for v in events}
    if isinstance(p, Star):
        r = relation(m, p.inner)
        out = {}
        for v in events:
            seen = {v}
            todo = [v]
            while todo:
                u = todo.pop()
                for w in r[u]:
                    if w not in seen:
                        seen.add(w)
                        todo.append(w)
            out[v] = frozenset(seen)
        return out
    raise TypeError(p)


def _repeat_set(m: Msc, p: PathExpr) -> frozenset:
    # an infinite chain exists from v iff v reaches an event lying on a cycle
    rel = relation(m, p)
    g = nx.DiGraph()
    g.add_nodes_from(m.events)
    g.add_edges_from((v, w) for v, ws in rel.items() for w in ws)
    on_cycle = set()
    for comp in nx.strongly_connected_components(g):
        if len(comp) > 1 or any(g.has_edge(v, v) for v in comp):
            on_cycle |= comp
    good = set(on_cycle)
    for v in on_cycle:
        good |= nx.ancestors(g, v)
    return frozenset(good)


def reach(m: Msc, v, p: PathExpr) -> frozenset:
    return relation(m, p)[v]


def eval_local(m: Msc, v, a: Local) -> bool:
    return v in sat_set(m, a)


def eval_global(m: Msc, phi: Global) -> bool:
    if isinstance(phi, Exists):
        return bool(sat_set(m, phi.inner))
    if isinstance(phi, Forall):
        return len(sat_set(m, phi.inner)) == len(m.events)
    if isinstance(phi, GAnd):
        return eval_global(m, phi.left) and eval_global(m, phi.right)
    if isinstance(phi, GOr):
        return eval_global(m, phi.left) or eval_global(m, phi.right)
    raise TypeError(phi)
