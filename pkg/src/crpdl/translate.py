"""Compile CRPDL formulas into local and global MSC automata.

Every gadget introduces a fresh initial state ``iota`` (rank 1) and a fresh
concatenation state ``c`` (rank 0).  Sub-automata are renamed with the prefix
``L.``, ``R.`` or ``I.`` so that state names record where they came from.
"""

from __future__ import annotations

from .logic import (Alt, And, Atom, Dir, Exists, Forall, GAnd, Global, GOr, Local,
                    Not, Or, Path, PathExpr, Proc, Repeat, Seq, Star, Test, TT, expand)
from .msc import Direction
from .msca import (ANY, GlobalMsca, LocalMsca, On, OnProc, PreconditionViolated,
                   dualize, move)

__all__ = [
    "translate_local", "translate_path", "translate_global", "build_atom",
    "build_true", "build_proc", "build_dir", "build_neg", "build_concat",
    "build_test", "build_choice", "build_star", "build_omega",
]

IOTA, CONCAT = "iota", "c"


def _gadget(guard, expr) -> LocalMsca:
    return LocalMsca([IOTA, CONCAT], {IOTA: [(guard, expr)], CONCAT: []},
                     IOTA, CONCAT, {IOTA: 1, CONCAT: 0})


def build_atom(action) -> LocalMsca:
    return _gadget(On(action), move(Direction.ID, CONCAT))


def build_true() -> LocalMsca:
    return _gadget(ANY, move(Direction.ID, CONCAT))


def build_proc(q: int) -> LocalMsca:
    return _gadget(OnProc(q), move(Direction.ID, CONCAT))


def build_dir(d: Direction) -> LocalMsca:
    return _gadget(ANY, move(d, CONCAT))


def build_neg(inner: LocalMsca) -> LocalMsca:
    return dualize(inner)


def _require_quiet_concat(a: LocalMsca):
    if not a.is_bot(a.concat):
        raise PreconditionViolated(f"concatenation state {a.concat} has transitions")


def _merge(*parts: LocalMsca):
    states, table, rank = [], {}, {}
    for a in parts:
        states.extend(a.states)
        table.update(a.table)
        rank.update(a.rank)
    return states, table, rank


def build_concat(a1: LocalMsca, a2: LocalMsca, rerank: bool = True) -> LocalMsca:
    """Run ``a1`` and continue with ``a2`` from where ``a1`` reached its concatenation state.

    With ``rerank`` the old concatenation state of ``a1`` gets rank 1, so that
    only the final concatenation state of a path automaton has rank 0.
    """
    _require_quiet_concat(a1)
    l, r = a1.renamed("L."), a2.renamed("R.")
    states, table, rank = _merge(l, r)
    table[l.concat] = [(ANY, move(Direction.ID, r.initial))]
    if rerank:
        rank[l.concat] = 1
    return LocalMsca(states, table, l.initial, r.concat, rank)


def build_test(inner: LocalMsca) -> LocalMsca:
    """Check ``inner`` at the current event and stay there."""
    i = inner.renamed("I.")
    states, table, rank = _merge(i)
    states += [IOTA, CONCAT]
    table[IOTA] = [(ANY, move(Direction.ID, i.initial) & move(Direction.ID, CONCAT))]
    table[CONCAT] = []
    rank.update({IOTA: 1, CONCAT: 0})
    return LocalMsca(states, table, IOTA, CONCAT, rank)


def build_choice(a1: LocalMsca, a2: LocalMsca, rerank: bool = True) -> LocalMsca:
    _require_quiet_concat(a1)
    _require_quiet_concat(a2)
    l, r = a1.renamed("L."), a2.renamed("R.")
    states, table, rank = _merge(l, r)
    states += [IOTA, CONCAT]
    table[IOTA] = [(ANY, move(Direction.ID, l.initial) | move(Direction.ID, r.initial))]
    table[l.concat] = [(ANY, move(Direction.ID, CONCAT))]
    table[r.concat] = [(ANY, move(Direction.ID, CONCAT))]
    table[CONCAT] = []
    rank.update({IOTA: 1, CONCAT: 0})
    if rerank:
        rank[l.concat] = rank[r.concat] = 1
    return LocalMsca(states, table, IOTA, CONCAT, rank)


def build_star(inner: LocalMsca) -> LocalMsca:
    _require_quiet_concat(inner)
    i = inner.renamed("I.")
    states, table, rank = _merge(i)
    states += [IOTA, CONCAT]
    table[i.concat] = [(ANY, move(Direction.ID, IOTA))]
    table[IOTA] = [(ANY, move(Direction.ID, i.initial) | move(Direction.ID, CONCAT))]
    table[CONCAT] = []
    rank.update({IOTA: 1, CONCAT: 0, i.concat: 1})
    return LocalMsca(states, table, IOTA, CONCAT, rank)


def build_omega(inner: LocalMsca) -> LocalMsca:
    """Restart ``inner`` forever; its concatenation state keeps rank 0."""
    _require_quiet_concat(inner)
    table = dict(inner.table)
    table[inner.concat] = [(ANY, move(Direction.ID, inner.initial))]
    return LocalMsca(inner.states, table, inner.initial, inner.concat, inner.rank)


def translate_path(p: PathExpr, rerank: bool = True) -> LocalMsca:
    """Automaton for ``<p>tt`` whose concatenation state marks the end of the path."""
    if isinstance(p, Dir):
        return build_dir(p.d)
    if isinstance(p, Test):
        return build_test(translate_local(p.inner, rerank))
    if isinstance(p, Seq):
        return build_concat(translate_path(p.left, rerank), translate_path(p.right, rerank), rerank)
    if isinstance(p, Alt):
        return build_choice(translate_path(p.left, rerank), translate_path(p.right, rerank), rerank)
    if isinstance(p, Star):
        return build_star(translate_path(p.inner, rerank))
    raise TypeError(p)


def translate_local(a: Local, rerank: bool = True) -> LocalMsca:
    """Local MSCA accepting exactly the pointed MSCs satisfying ``a``."""
    if isinstance(a, Atom):
        return build_atom(a.action)
    if isinstance(a, TT):
        return build_true()
    if isinstance(a, Proc):
        return build_proc(a.q)
    if isinstance(a, Not):
        return build_neg(translate_local(a.inner, rerank))
    if isinstance(a, (And, Or)):
        return translate_local(expand(a), rerank)
    if isinstance(a, Path):
        if isinstance(a.inner, TT):
            return translate_path(a.path, rerank)
        return translate_path(Seq(a.path, Test(a.inner)), rerank)
    if isinstance(a, Repeat):
        return build_omega(translate_path(a.path, rerank))
    raise TypeError(a)


# --------------------------------------------------------------------------
# global formulas

def _exists(inner: LocalMsca, procs: int) -> GlobalMsca:
    i = inner.renamed("I.")
    states, table, rank = _merge(i)
    start, idle = "E.iota", "E.f"
    states += [start, idle]
    table[start] = [(ANY, move(Direction.PROC, start) | move(Direction.ID, i.initial))]
    table[idle] = []
    rank.update({start: 1, idle: 0})
    local = LocalMsca(states, table, start, i.concat, rank)
    tuples = tuple(tuple(start if q == p else idle for q in range(1, procs + 1))
                   for p in range(1, procs + 1))
    return GlobalMsca(local, tuples)


def _forall(inner: LocalMsca, procs: int) -> GlobalMsca:
    i = inner.renamed("I.")
    states, table, rank = _merge(i)
    check, advance = "A.iota1", "A.iota2"
    states += [check, advance]
    table[check] = [(ANY, move(Direction.ID, advance) & move(Direction.ID, i.initial))]
    table[advance] = [(ANY, move(Direction.PROC, check))]
    rank.update({check: 1, advance: 0})
    local = LocalMsca(states, table, check, i.concat, rank)
    return GlobalMsca(local, ((check,) * procs,))


def _rename_global(g: GlobalMsca, prefix: str) -> GlobalMsca:
    return GlobalMsca(g.local.renamed(prefix),
                      tuple(tuple(f"{prefix}{s}" for s in t) for t in g.initials))


def translate_global(phi: Global, procs: int, rerank: bool = True) -> GlobalMsca:
    if isinstance(phi, Exists):
        return _exists(translate_local(phi.inner, rerank), procs)
    if isinstance(phi, Forall):
        return _forall(translate_local(phi.inner, rerank), procs)
    if isinstance(phi, (GAnd, GOr)):
        g1 = _rename_global(translate_global(phi.left, procs, rerank), "L.")
        g2 = _rename_global(translate_global(phi.right, procs, rerank), "R.")
        states, table, rank = _merge(g1.local, g2.local)
        if isinstance(phi, GOr):
            local = LocalMsca(states, table, g1.local.initial, g1.local.concat, rank)
            return GlobalMsca(local, g1.initials + g2.initials)
        tuples = []
        for t1 in g1.initials:
            for t2 in g2.initials:
                tup = []
                for s1, s2 in zip(t1, t2):
                    pair = f"[{s1},{s2}]"
                    if pair not in table:
                        states.append(pair)
                        table[pair] = [(ANY, move(Direction.ID, s1) & move(Direction.ID, s2))]
                        rank[pair] = 1
                    tup.append(pair)
                tuples.append(tuple(tup))
        local = LocalMsca(states, table, g1.local.initial, g1.local.concat, rank)
        return GlobalMsca(local, tuple(tuples))
    raise TypeError(phi)
