"""Two-way alternating word automata over encoded linearizations, and Büchi automata.

A two-way automaton reads a finite or infinite word and moves with ``prev``,
``next`` and ``id``.  Transitions are positive Boolean expressions over
``(WordDirection, state)`` atoms, exactly like local MSCAs.  Büchi automata
are explicit or lazily generated; they keep separate acceptance tests for
finite words (``fin``) and for infinite runs (``inf``) so that products and
complements stay correct for both kinds of words.
"""

from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping, Sequence

import networkx as nx

from . import boolexpr as bx
from .msc import Action, Direction, alphabet
from .msca import (AUTOMATON, PATHFINDER, WIN_A, WIN_P, GameArena, GlobalMsca,
                   solve_game)

__all__ = [
    "WordDirection", "TwoWayAPA", "TwoWayABA", "BudgetExceeded", "letters",
    "msca_to_2apa", "word_membership_2apa", "lasso_membership_2apa",
    "apa_to_aba", "apa_combine", "BuchiAutomaton", "LassoWitness", "Empty",
    "ba_intersect", "ba_project", "ba_map", "ba_accepts", "ba_emptiness",
    "complement_ba", "alternation_eliminate", "build_function_2ba",
    "build_legal_ba", "build_accept_ba", "dump_2way", "dump_ba",
    "normalize_ranks", "ba_emptiness_dfs", "function_route_ba", "EMPTY", "BOTTOM",
]


class WordDirection(enum.Enum):
    PREV = "prev"
    NEXT = "next"
    ID = "id"

    def __str__(self) -> str:
        return self.value

    def __lt__(self, other):
        return _WORDER[self] < _WORDER[other]


_WORDER = {d: i for i, d in enumerate(WordDirection)}
PREV, NEXT, ID = WordDirection.PREV, WordDirection.NEXT, WordDirection.ID


class BudgetExceeded(RuntimeError):
    """A construction or search touched more states than allowed."""


def wmove(d: WordDirection, s: Hashable) -> bx.Atom:
    return bx.Atom((d, s))


def letters(procs: int, bound: int) -> tuple:
    """The encoding alphabet: every action paired with a counter below ``bound``."""
    return tuple((a, i) for a in alphabet(procs) for i in range(bound))


# --------------------------------------------------------------------------
# two-way automata

class _TwoWay:
    """Shared behaviour; ``delta`` is a mapping or a function ``(s, letter) -> Expr``."""

    def __init__(self, states, alphabet_, delta, initial):
        self.states = tuple(states)
        self.alphabet = tuple(alphabet_)
        self.initial = initial
        if callable(delta):
            self._fn = delta
        else:
            table = dict(delta)
            self._fn = lambda s, x: table.get((s, x), bx.BOT)
        self._cache: dict = {}
        self._mm: dict = {}

    def delta(self, s, x) -> bx.Expr:
        key = (s, x)
        e = self._cache.get(key)
        if e is None:
            e = self._cache[key] = self._fn(s, x)
        return e

    def minmod(self, s, x) -> tuple[frozenset, ...]:
        key = (s, x)
        hit = self._mm.get(key)
        if hit is None:
            hit = self._mm[key] = bx.minimal_models(self.delta(s, x))
        return hit

    def priority(self, s) -> int:
        raise NotImplementedError

    def reachable_states(self) -> list:
        seen, order, queue = {self.initial}, [self.initial], deque([self.initial])
        while queue:
            s = queue.popleft()
            for x in self.alphabet:
                for tau in self.minmod(s, x):
                    for _, t in sorted(tau, key=bx._key):
                        if t not in seen:
                            seen.add(t)
                            order.append(t)
                            queue.append(t)
        return order

    @property
    def size(self) -> int:
        return len(self.states)


class TwoWayAPA(_TwoWay):
    """Two-way alternating parity automaton (min-even acceptance)."""

    def __init__(self, states, alphabet_, delta, initial, rank: Mapping):
        super().__init__(states, alphabet_, delta, initial)
        self.rank = dict(rank)

    def priority(self, s) -> int:
        return self.rank[s]


class TwoWayABA(_TwoWay):
    """Two-way alternating Büchi automaton; also used for the non-alternating case."""

    def __init__(self, states, alphabet_, delta, initial, finals: Iterable):
        super().__init__(states, alphabet_, delta, initial)
        self.finals = frozenset(finals)

    def priority(self, s) -> int:
        return 0 if s in self.finals else 1

    def is_nondeterministic(self) -> bool:
        return all(len(tau) == 1 for s in self.states for x in self.alphabet
                   for tau in self.minmod(s, x))


# --------------------------------------------------------------------------
# MSCA -> 2APA

INIT, SINK, ACC = "@init", "@sink", "@accept"


def msca_to_2apa(g: GlobalMsca, bound: int, procs: int | None = None,
                 literal: bool = False) -> TwoWayAPA:
    """2APA over encoded linearizations that simulates ``g`` on the underlying MSC.

    Local states keep their names; the process seekers are ``(s, p, dir)``
    and the message seekers ``(s, action, i, dir)``.  With ``literal`` the
    state set is exactly the standard one.  Otherwise an even-ranked local
    state may additionally accept by showing that some movement of every
    minimal model has no target, using the helper states ``("@end", p, dir)``,
    ``("@noproc", p, dir)`` and ``@accept``.
    """
    local = g.local
    procs = procs if procs is not None else len(g.initials[0])
    sigma = alphabet(procs)
    gamma = letters(procs, bound)
    top = local.max_rank()
    m = top + 1 if top % 2 == 0 else top + 2
    dirs = (NEXT, PREV)
    states = [INIT, SINK] + list(local.states)
    states += [(s, p, d.value) for s in local.states for p in range(1, procs + 1) for d in dirs]
    states += [(s, a, i, d.value) for s in local.states for a in sigma
               for i in range(bound) for d in dirs]
    rank = {s: m for s in states}
    rank.update(local.rank)
    if not literal:
        helpers = [ACC] + [(tag, p, d.value) for tag in ("@end", "@noproc")
                           for p in range(1, procs + 1) for d in dirs]
        states += helpers
        combined = [("@seekend", s, p, d.value) for s in local.states
                    for p in range(1, procs + 1) for d in dirs]
        helpers += combined
        states += combined
        rank.update({h: m + 1 for h in helpers})
    local_states = frozenset(local.states)
    wdir = {"next": NEXT, "prev": PREV}

    def substitute(atom, a: Action, i: int):
        d, s2 = atom
        p = a.owner
        if d is Direction.ID:
            return wmove(ID, s2)
        if d is Direction.PROC:
            return wmove(NEXT, (s2, p, "next"))
        if d is Direction.PROC_INV:
            return wmove(PREV, (s2, p, "prev"))
        if d is Direction.MSG:
            return wmove(NEXT, (s2, a.partner(), i, "next")) if a.is_send else wmove(ID, SINK)
        return wmove(PREV, (s2, a.partner(), i, "prev")) if not a.is_send else wmove(ID, SINK)

    def not_executable(atom, a: Action):
        """Expression claiming that the MSC movement ``atom`` has no target, or None."""
        d = atom[0]
        p = a.owner
        if d is Direction.PROC:
            return wmove(ID, ("@end", p, "next"))
        if d is Direction.PROC_INV:
            return wmove(ID, ("@end", p, "prev"))
        if d is Direction.MSG and not a.is_send:
            return wmove(ID, ACC)
        if d is Direction.MSG_INV and a.is_send:
            return wmove(ID, ACC)
        return None

    def delta(s, x):
        a, i = x
        if s == INIT:
            return bx.disj(bx.conj(wmove(ID, (t, p, "next")) for p, t in enumerate(tup, start=1))
                           for tup in g.initials)
        if s == SINK or s == ACC:
            return bx.BOT
        if s in local_states:
            e = local.delta(s, a)
            out = bx.substitute(e, lambda atom: substitute(atom, a, i))
            if not literal and local.rank[s] % 2 == 0:
                models = bx.minimal_models(e)
                if len(models) == 1 and len(models[0]) == 1:
                    (d, s2), = models[0]
                    if d in (Direction.PROC, Direction.PROC_INV):
                        dv = "next" if d is Direction.PROC else "prev"
                        return wmove(wdir[dv], ("@seekend", s2, a.owner, dv))
                stuck = []
                for tau in bx.minimal_models(e):
                    claims = [c for c in (not_executable(t, a) for t in sorted(tau, key=bx._key))
                              if c is not None]
                    if not claims:
                        stuck = None
                        break
                    stuck.append(bx.disj(claims))
                if stuck:
                    out = out | bx.conj(stuck)
            return out
        if len(s) == 3 and s[0] in ("@end", "@noproc"):
            tag, p, dv = s
            d = wdir[dv]
            if tag == "@end":
                return wmove(d, ("@noproc", p, dv))
            return wmove(ID, SINK) if a.owner == p else wmove(d, s)
        if len(s) == 4 and s[0] == "@seekend":
            _, s2, p, dv = s
            return wmove(ID, s2) if a.owner == p else wmove(wdir[dv], s)
        if len(s) == 3:
            s2, p, dv = s
            return wmove(ID, s2) if a.owner == p else wmove(wdir[dv], s)
        s2, b, j, dv = s
        return wmove(ID, s2) if (a, i) == (b, j) else wmove(wdir[dv], s)

    return TwoWayAPA(states, gamma, delta, INIT, rank)


# --------------------------------------------------------------------------
# membership games on words

def _exec(tau, i: int, n: int | None, fold: int | None) -> bool:
    for d, _ in tau:
        if d is PREV and i == 0:
            return False
        if d is NEXT and n is not None and fold is None and i == n - 1:
            return False
    return True


def _word_game(a: _TwoWay, word: Sequence, fold: int | None = None,
               start_pos: int = 0, start_state=None) -> GameArena:
    """Arena on positions ``0..len(word)-1``.

    ``fold`` set means the word is infinite and ``next`` from the last position
    jumps back to position ``fold``.
    """
    n = len(word)
    g = GameArena()
    neutral = max((a.priority(s) for s in a.states), default=0) + 1
    g.add(WIN_A, AUTOMATON, 0)
    g.add(WIN_P, PATHFINDER, 1)
    g.succ[WIN_A].append(WIN_A)
    g.succ[WIN_P].append(WIN_P)

    def step(i, d):
        if d is ID:
            return i
        if d is PREV:
            return i - 1
        return fold if i == n - 1 else i + 1

    s0 = a.initial if start_state is None else start_state
    g.initial = ("A", start_pos, s0)
    queue = deque([g.initial])
    g.add(g.initial, AUTOMATON, a.priority(s0))
    while queue:
        node = queue.popleft()
        _, i, s = node
        taus = [t for t in a.minmod(s, word[i]) if _exec(t, i, n, fold)]
        if not taus:
            g.succ[node].append(WIN_A if a.priority(s) % 2 == 0 else WIN_P)
            continue
        for tau in taus:
            pnode = ("P", i, tau)
            if pnode not in g.owner:
                g.add(pnode, PATHFINDER, neutral)
                for d, t in sorted(tau, key=bx._key):
                    nxt = ("A", step(i, d), t)
                    if nxt not in g.owner:
                        g.add(nxt, AUTOMATON, a.priority(t))
                        queue.append(nxt)
                    g.succ[pnode].append(nxt)
            g.succ[node].append(pnode)
    return g


def word_membership_2apa(a: _TwoWay, word: Sequence) -> bool:
    """Whether ``a`` has an accepting run on the finite ``word`` (the empty word is rejected)."""
    if not word:
        return False
    g = _word_game(a, list(word))
    (w0, _), _ = solve_game(g)
    return g.initial in w0


# Left-context types for ultimately periodic words.  The type of a prefix x
# records, for every state entering the last position of x from the right,
# the minimal sets of exit outcomes (state after leaving to the right, least
# priority seen inside) the Automaton can force, where the empty set means
# it wins inside x.  Equal types are interchangeable, which lets an infinite
# word u w^omega be folded into a finite arena.

def _outcomes(a: _TwoWay):
    prios = sorted({a.priority(s) for s in a.states})
    return [(t, r) for t in a.states for r in prios]


def _type_step(a: _TwoWay, left, x):
    """Type of ``prefix + x`` given the type ``left`` of ``prefix`` (None for the empty prefix)."""
    outs = _outcomes(a)
    neutral = max((a.priority(s) for s in a.states), default=0) + 1
    result = {}
    for s in a.states:
        family = []
        for size in range(len(outs) + 1):
            for exits in itertools.combinations(outs, size):
                ex = frozenset(exits)
                if any(f <= ex for f in family):
                    continue
                if _forces(a, left, x, s, ex, neutral):
                    family.append(ex)
        result[s] = frozenset(family)
    return tuple(sorted(result.items(), key=lambda kv: bx._key(kv[0])))


def _forces(a, left, x, s, exits, neutral) -> bool:
    g = GameArena()
    g.add(WIN_A, AUTOMATON, 0)
    g.add(WIN_P, PATHFINDER, 1)
    g.succ[WIN_A].append(WIN_A)
    g.succ[WIN_P].append(WIN_P)
    left_map = dict(left) if left is not None else None
    start = ("at", s, a.priority(s))
    g.add(start, AUTOMATON, a.priority(s))
    queue = deque([start])

    def at(t, rec):
        node = ("at", t, min(rec, a.priority(t)))
        if node not in g.owner:
            g.add(node, AUTOMATON, a.priority(t))
            queue.append(node)
        return node

    while queue:
        node = queue.popleft()
        kind = node[0]
        if kind == "at":
            _, t, rec = node
            taus = [tau for tau in a.minmod(t, x)
                    if left_map is not None or all(d is not PREV for d, _ in tau)]
            if not taus:
                g.succ[node].append(WIN_A if a.priority(t) % 2 == 0 else WIN_P)
                continue
            for tau in taus:
                pn = ("P", tau, rec)
                if pn not in g.owner:
                    g.add(pn, PATHFINDER, neutral)
                    for d, u in sorted(tau, key=bx._key):
                        if d is ID:
                            g.succ[pn].append(at(u, rec))
                        elif d is NEXT:
                            g.succ[pn].append(WIN_A if (u, rec) in exits else WIN_P)
                        else:
                            cn = ("choose", u, rec)
                            if cn not in g.owner:
                                g.add(cn, AUTOMATON, neutral)
                                queue.append(cn)
                            g.succ[pn].append(cn)
                g.succ[node].append(pn)
        elif kind == "choose":
            _, u, rec = node
            for fam in sorted(left_map[u], key=lambda f: sorted(map(bx._key, f))):
                if not fam:
                    g.succ[node].append(WIN_A)
                    continue
                pn = ("pick", fam, rec)
                if pn not in g.owner:
                    g.add(pn, PATHFINDER, neutral)
                    for t, r in sorted(fam, key=bx._key):
                        back = ("back", t, r, rec)
                        if back not in g.owner:
                            g.add(back, PATHFINDER, r)
                            g.succ[back].append(at(t, min(rec, r)))
                        g.succ[pn].append(back)
                g.succ[node].append(pn)
            if not g.succ[node]:
                g.succ[node].append(WIN_P)
    (w0, _), _ = solve_game(g)
    return start in w0


def lasso_membership_2apa(a: _TwoWay, stem: Sequence, loop: Sequence) -> bool:
    """Whether ``a`` accepts ``stem`` followed by ``loop`` repeated forever.

    With an empty ``loop`` this is finite-word membership of ``stem``.
    """
    stem, loop = list(stem), list(loop)
    if not loop:
        return word_membership_2apa(a, stem)
    cache = _type_cache(a)

    def step(t, x):
        key = (t, x)
        hit = cache.get(key)
        if hit is None:
            hit = cache[key] = _type_step(a, t, x)
        return hit

    t = None
    for x in stem:
        t = step(t, x)
    seen = {t: 0}
    k = 0
    while True:
        for x in loop:
            t = step(t, x)
        k += 1
        if t in seen:
            k0 = seen[t]
            break
        seen[t] = k
    word = stem + loop * k
    fold = len(stem) + k0 * len(loop)
    g = _word_game(a, word, fold=fold)
    (w0, _), _ = solve_game(g)
    return g.initial in w0


_TYPE_CACHES: dict = {}


def _type_cache(a) -> dict:
    hit = _TYPE_CACHES.get(id(a))
    if hit is None or hit[0] is not a:
        if len(_TYPE_CACHES) > 256:
            _TYPE_CACHES.clear()
        hit = _TYPE_CACHES[id(a)] = (a, {})
    return hit[1]


# --------------------------------------------------------------------------
# parity -> Büchi, Boolean combination

REJ = "@reject"


def normalize_ranks(a: TwoWayAPA) -> TwoWayAPA:
    """Equivalent 2APA whose ranks are compressed inside each strongly connected component.

    An infinite branch eventually stays inside one component of the state
    graph.  Inside a component the states of least rank get the smallest
    value of that parity; the rest is split into components again and
    handled recursively from that value on.  States on no cycle only keep
    the parity of their rank.
    """
    graph = nx.DiGraph()
    graph.add_nodes_from(a.states)
    for s in a.states:
        for x in a.alphabet:
            for tau in a.minmod(s, x):
                graph.add_edges_from((s, t) for _, t in tau)
    rank = {}

    def assign(nodes, base):
        sub = graph.subgraph(nodes)
        for comp in nx.strongly_connected_components(sub):
            cyclic = len(comp) > 1 or any(sub.has_edge(s, s) for s in comp)
            if not cyclic:
                (s,) = comp
                rank[s] = a.rank[s] % 2
                continue
            # the smallest rank decides every cycle through its states
            low = min(a.rank[s] for s in comp)
            value = base if base % 2 == low % 2 else base + 1
            for s in comp:
                if a.rank[s] == low:
                    rank[s] = value
            assign([s for s in comp if a.rank[s] != low], value)

    assign(list(a.states), 0)
    return TwoWayAPA(a.states, a.alphabet, a.delta, a.initial, rank)


def apa_to_aba(a: TwoWayAPA, normalize: bool = True, rank_bound: int | None = None) -> TwoWayABA:
    """Equivalent 2ABA.

    After rank normalization, ranks within {0, 1} are read directly as a
    Büchi condition.  Otherwise each copy carries, for every odd rank ``2l+1``,
    a ranking value in ``0..rank_bound`` (default twice the number of states)
    that may only decrease, is reset by visits to even ranks at most ``2l``,
    and must be even whenever an odd rank at most ``2l+1`` is visited.  A copy
    is final at rank ``2e`` when all its values below level ``e`` are odd.
    Entering an even rank may also spawn a probe copy that is final but can
    only survive by being stuck.
    """
    if normalize:
        a = normalize_ranks(a)
    ranks = {a.rank[s] for s in a.states}
    if ranks <= {0, 1}:
        return TwoWayABA(a.states, a.alphabet, a.delta, a.initial,
                         [s for s in a.states if a.rank[s] == 0])
    top = max(ranks)
    levels = (top + 1) // 2
    bound = 2 * len(a.states) if rank_bound is None else rank_bound
    values = range(bound + 1)

    def choices(t, rho):
        r = a.rank[t]
        per_level = []
        for l in range(levels):
            if r % 2 == 0 and r <= 2 * l:
                opts = list(values)
            else:
                opts = list(range(rho[l] + 1)) if rho is not None else list(values)
            if r % 2 == 1 and r <= 2 * l + 1:
                opts = [v for v in opts if v % 2 == 0]
            # a larger value of the same parity leaves every later option open
            per_level.append(sorted({max((v for v in opts if v % 2 == par), default=None)
                                     for par in (0, 1)} - {None}))
        return itertools.product(*per_level)

    def target(d, t, rho):
        parts = [wmove(d, ("r", t, new)) for new in choices(t, rho)]
        if a.rank[t] % 2 == 0:
            parts.append(wmove(d, ("probe", t)))
        return bx.disj(parts)

    def delta(q, x):
        if q == REJ:
            return bx.BOT
        if q[0] == "probe":
            return bx.substitute(a.delta(q[1], x), lambda atom: wmove(atom[0], REJ))
        if q[0] == "start":
            return bx.disj([delta(("r", a.initial, rho), x) for rho in choices(a.initial, None)]
                           + ([delta(("probe", a.initial), x)] if a.rank[a.initial] % 2 == 0 else []))
        _, s, rho = q
        return bx.substitute(a.delta(s, x), lambda atom: target(atom[0], atom[1], rho))

    states = [("r", s, rho) for s in a.states for rho in itertools.product(values, repeat=levels)]
    states += [("probe", s) for s in a.states if a.rank[s] % 2 == 0]
    states += [REJ, ("start",)]

    def final(q):
        if q[0] == "probe":
            return True
        if q[0] == "start":
            return a.rank[a.initial] % 2 == 0
        if q[0] != "r":
            return False
        _, s, rho = q
        r = a.rank[s]
        return r % 2 == 0 and all(v % 2 == 1 for v in rho[: r // 2])

    return TwoWayABA(states, a.alphabet, delta, ("start",), [q for q in states if final(q)])


# --------------------------------------------------------------------------
# Büchi automata

def _canon(items) -> tuple:
    return tuple(sorted(items, key=bx._key))


class BuchiAutomaton:
    """Lazily generated Büchi automaton over finite and infinite words.

    ``post(q, x)`` yields the successors of ``q`` on letter ``x``.  Successor
    letters come from ``alphabet`` unless ``letters(q)`` is given, which lets
    automata over huge alphabets offer only the letters that matter.
    ``fin(q)`` decides acceptance of finite words ending in ``q`` and ``inf(q)``
    marks the states an infinite run has to visit infinitely often.
    """

    def __init__(self, initial, post: Callable, alphabet: Sequence | None,
                 fin: Callable, inf: Callable, letters: Callable | None = None,
                 name: str = "ba"):
        self.initial = initial
        self._post = post
        self.alphabet = tuple(alphabet) if alphabet is not None else None
        self.fin = fin
        self.inf = inf
        self._letters = letters
        self.name = name
        self._succ: dict = {}

    @classmethod
    def explicit(cls, states, transitions, initial, finals, alphabet=None, name="ba"):
        """Automaton from a list of ``(q, letter, q')`` triples and one final set."""
        table: dict = {}
        for q, x, r in transitions:
            table.setdefault((q, x), []).append(r)
        letters_ = alphabet if alphabet is not None else sorted({x for _, x, _ in transitions},
                                                                key=bx._key)
        finals = frozenset(finals)
        ba = cls(initial, lambda q, x: table.get((q, x), ()), letters_,
                 lambda q: q in finals, lambda q: q in finals, name=name)
        ba.states = tuple(states)
        return ba

    def post(self, q, x):
        return self._post(q, x)

    def successors(self, q) -> tuple:
        hit = self._succ.get(q)
        if hit is None:
            out = []
            if self._letters is not None:
                for x, r in self._letters(q):
                    out.append((x, r))
            else:
                for x in self.alphabet:
                    for r in self.post(q, x):
                        out.append((x, r))
            hit = self._succ[q] = tuple(out)
        return hit


def ba_intersect(a: BuchiAutomaton, b: BuchiAutomaton) -> BuchiAutomaton:
    """Two-flag product; finite words need both components to accept."""
    if a.alphabet is not None and b.alphabet is not None and set(a.alphabet) != set(b.alphabet):
        raise ValueError("alphabets of the intersected automata differ")

    def step(q, x, r1, r2):
        q1, q2, flag = q
        if flag == 0 and a.inf(q1):
            flag = 1
        elif flag == 1 and b.inf(q2):
            flag = 0
        return (r1, r2, flag)

    def post(q, x):
        return [step(q, x, r1, r2) for r1 in a.post(q[0], x) for r2 in b.post(q[1], x)]

    def letters_(q):
        for x, r1 in a.successors(q[0]):
            for r2 in b.post(q[1], x):
                yield x, step(q, x, r1, r2)

    return BuchiAutomaton((a.initial, b.initial, 0), post, a.alphabet if a.alphabet is not None else b.alphabet,
                          lambda q: a.fin(q[0]) and b.fin(q[1]),
                          lambda q: q[2] == 0 and a.inf(q[0]), letters_,
                          name=f"({a.name} x {b.name})")


def ba_project(a: BuchiAutomaton, component: Callable | int) -> BuchiAutomaton:
    """Automaton reading ``component(x)`` for every letter ``x`` of ``a``.

    ``component`` may be a tuple index, in which case letters are tuples.
    """
    f = (lambda x: x[component]) if isinstance(component, int) else component

    def letters_(q):
        for x, r in a.successors(q):
            yield f(x), r

    def post(q, y):
        return [r for x, r in a.successors(q) if f(x) == y]

    image = None
    if a.alphabet is not None:
        image = []
        for x in a.alphabet:
            y = f(x)
            if y not in image:
                image.append(y)
    return BuchiAutomaton(a.initial, post, image, a.fin, a.inf, letters_,
                          name=f"proj({a.name})")


def ba_map(a: BuchiAutomaton, encode: Callable, decode: Callable, alphabet) -> BuchiAutomaton:
    """Same automaton over a renamed alphabet (``decode`` maps new letters to old)."""

    def letters_(q):
        for x, r in a.successors(q):
            yield encode(x), r

    return BuchiAutomaton(a.initial, lambda q, y: a.post(q, decode(y)), alphabet,
                          a.fin, a.inf, letters_, name=a.name)


def ba_accepts(a: BuchiAutomaton, stem: Sequence, loop: Sequence = ()) -> bool:
    """Membership of ``stem`` (if ``loop`` is empty) or of ``stem loop loop ...``."""
    current = {a.initial}
    for x in stem:
        current = {r for q in current for r in a.post(q, x)}
    if not loop:
        return any(a.fin(q) for q in current)
    loop = list(loop)
    graph = nx.DiGraph()
    seen = {(q, 0) for q in current}
    queue = deque(seen)
    while queue:
        node = queue.popleft()
        q, j = node
        graph.add_node(node)
        for r in a.post(q, loop[j]):
            nxt = (r, (j + 1) % len(loop))
            graph.add_edge(node, nxt)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    for comp in nx.strongly_connected_components(graph):
        if len(comp) == 1:
            (n,) = comp
            if not graph.has_edge(n, n):
                continue
        if any(a.inf(q) for q, _ in comp):
            return True
    return False


@dataclass(frozen=True)
class LassoWitness:
    """``stem`` followed by ``loop`` repeated forever; an empty loop means the finite word ``stem``."""

    stem: tuple
    loop: tuple = ()

    @property
    def is_finite(self) -> bool:
        return not self.loop


class Empty:
    """Result of an emptiness check on an empty language."""

    def __repr__(self):
        return "Empty()"

    def __bool__(self):
        return False


EMPTY = Empty()


def ba_emptiness(a: BuchiAutomaton, max_states: int | None = None,
                 deadline: float | None = None, stats: dict | None = None):
    """``EMPTY`` or a shortest-stem witness.

    The reachable part is explored breadth first in a canonical order; a
    reachable state accepting finite words yields a finite witness right away.
    Otherwise the strongly connected components of the explored graph are
    searched for a cycle through a state accepting infinite runs.
    """
    import time
    parent = {a.initial: None}
    order = [a.initial]
    queue = deque([a.initial])
    graph_succ: dict = {}
    if a.fin(a.initial):
        return LassoWitness(())
    while queue:
        q = queue.popleft()
        succ = a.successors(q)
        graph_succ[q] = succ
        for x, r in succ:
            if r in parent:
                continue
            parent[r] = (q, x)
            order.append(r)
            if a.fin(r):
                if stats is not None:
                    stats["states"] = len(parent)
                return LassoWitness(_path(parent, r))
            queue.append(r)
            if max_states is not None and len(parent) > max_states:
                raise BudgetExceeded(f"more than {max_states} automaton states")
        if deadline is not None and time.monotonic() > deadline:
            raise BudgetExceeded("time budget exhausted")
    if stats is not None:
        stats["states"] = len(parent)
    graph = nx.DiGraph()
    graph.add_nodes_from(order)
    for q, succ in graph_succ.items():
        graph.add_edges_from((q, r) for _, r in succ)
    index = {q: i for i, q in enumerate(order)}
    best = None
    for comp in nx.strongly_connected_components(graph):
        if len(comp) == 1:
            (n,) = comp
            if not graph.has_edge(n, n):
                continue
        finals = [q for q in comp if a.inf(q)]
        if finals:
            cand = min(finals, key=index.__getitem__)
            if best is None or index[cand] < index[best[0]]:
                best = (cand, comp)
    if best is None:
        return EMPTY
    q, comp = best
    stem = _path(parent, q)
    back = {q: None}
    queue = deque([q])
    loop = None
    while queue and loop is None:
        u = queue.popleft()
        for x, r in graph_succ[u]:
            if r not in comp:
                continue
            if r == q:
                loop = _path(back, u) + (x,)
                break
            if r not in back:
                back[r] = (u, x)
                queue.append(r)
    return LassoWitness(stem, loop)


def _path(parent, q) -> tuple:
    out = []
    while parent[q] is not None:
        q, x = parent[q]
        out.append(x)
    return tuple(reversed(out))


# --------------------------------------------------------------------------
# two-way alternating Büchi -> Büchi

_START, _DONE = ("@start",), ("@done",)


class _Eliminator:
    """Bookkeeping for :func:`alternation_eliminate`; states of ``b`` become integers."""

    def __init__(self, b: TwoWayABA):
        self.b = b
        self.ids: dict = {}
        self.names: list = []
        self.finals: set = set()
        self._models: dict = {}
        self._closures: dict = {}
        self.sid(b.initial)
        entry = set()
        for s in b.reachable_states():
            for x in b.alphabet:
                for tau in b.minmod(s, x):
                    entry.update(self.sid(t) for d, t in tau if d is PREV)
        self.entry = tuple(sorted(entry))

    def sid(self, s) -> int:
        i = self.ids.get(s)
        if i is None:
            i = self.ids[s] = len(self.ids)
            self.names.append(s)
            if s in self.b.finals:
                self.finals.add(i)
        return i

    def models(self, i: int, x, name) -> tuple:
        """Minimal models of ``delta(name, x)`` as ``(id, next, prev)`` target tuples."""
        key = (i, x)
        hit = self._models.get(key)
        if hit is None:
            out = []
            for tau in sorted(self.b.minmod(name, x), key=lambda t: repr(_canon(t))):
                parts = {ID: [], NEXT: [], PREV: []}
                for d, t in tau:
                    parts[d].append(self.sid(t))
                out.append(tuple(tuple(sorted(parts[d])) for d in (ID, NEXT, PREV)))
            hit = self._models[key] = tuple(out)
        return hit

    def closures(self, x, seeds: tuple, allowed: frozenset, first: bool, last: bool) -> list:
        """Every positional choice of minimal models for the id-closure of ``seeds``.

        States without an executable model are stuck, which is only allowed
        for final states.  Models may only send ``prev`` into ``allowed``.
        """
        key = (x, seeds, allowed, first, last)
        hit = self._closures.get(key)
        if hit is not None:
            return hit
        results: list = []
        assigned: dict = {}

        def rec(pending):
            while pending and pending[0] in assigned:
                pending = pending[1:]
            if not pending:
                results.append(dict(assigned))
                return
            i, rest = pending[0], pending[1:]
            ex = [m for m in self.models(i, x, self.names[i])
                  if not (first and m[2]) and not (last and m[1])]
            if not ex:
                if i in self.finals:
                    assigned[i] = None
                    rec(rest)
                    del assigned[i]
                return
            for m in ex:
                if all(t in allowed for t in m[2]):
                    assigned[i] = m
                    rec(rest + list(m[0]))
                    del assigned[i]

        rec(list(seeds))
        self._closures[key] = results
        return results

def _reach(edges: dict, s) -> set:
    seen, stack = {s}, [s]
    while stack:
        u = stack.pop()
        for v in edges.get(u, ()):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def _on_cycle(edges: dict, s) -> bool:
    seen, stack = set(), list(edges.get(s, ()))
    while stack:
        u = stack.pop()
        if u == s:
            return True
        if u not in seen:
            seen.add(u)
            stack.extend(edges.get(u, ()))
    return False


def _dominates(p, q) -> bool:
    """``p`` carries no more obligations than ``q``, so it accepts at least as much."""
    return (set(p[0]) >= set(q[0]) and set(p[1]) <= set(q[1]) and set(p[2]) <= set(q[2])
            and set(p[3]) <= set(q[3]) and bool(p[3]) == bool(q[3]))


def _undominated(states) -> list:
    states = sorted(states)
    keep = []
    for i, q in enumerate(states):
        if not any(j != i and _dominates(p, q) and (not _dominates(q, p) or j < i)
                   for j, p in enumerate(states)):
            keep.append(q)
    return keep


def alternation_eliminate(b, max_states: int | None = None) -> BuchiAutomaton:
    """Büchi automaton with the same finite and infinite language as ``b``.

    ``b`` may be a two-way alternating Büchi automaton or a 2APA (converted
    with :func:`apa_to_aba`).  A state of the result after reading position
    ``i`` records the copies active at ``i`` that may be revisited from the
    right (``R``), the copies they send to
    ``i+1`` (``N``), the paths avoiding final states that leave ``i`` to the
    right after wandering left (``X``, only kept when copies can move left),
    and a breakpoint set ``O`` of copies at ``i+1`` that tracks whether some
    chain of such paths could avoid final states forever.  Copies
    sent backwards are guessed in advance and checked against ``R`` one step
    later; cycles that avoid final states are rejected on the spot.
    """
    if isinstance(b, TwoWayAPA):
        b = apa_to_aba(b)
    el = _Eliminator(b)
    finals = el.finals
    entry = frozenset(el.entry)
    subsets = [c for k in range(len(el.entry) + 1) for c in itertools.combinations(el.entry, k)]

    def step(q, x, last):
        if q == _START:
            base, R, X, O, first = (el.sid(b.initial),), (), (), (), True
        else:
            R, base, X, O = q
            first = False
        allowed = frozenset(R)
        xmap: dict = {}
        for u, t in X:
            xmap.setdefault(u, []).append(t)
        out = set()
        for extra in ([()] if last else subsets):
            seeds = tuple(sorted(set(base) | set(extra)))
            for f in el.closures(x, seeds, allowed, first, last):
                edges: dict = {}
                for s, m in f.items():
                    if s in finals or m is None:
                        continue
                    tgt = [t for t in m[0] if t not in finals]
                    for u in m[2]:
                        if u not in finals:
                            tgt.extend(xmap.get(u, ()))
                    if tgt:
                        edges[s] = tgt
                if any(_on_cycle(edges, s) for s in edges):
                    continue
                if last:
                    return [_DONE]
                nxt = tuple(sorted({t for m in f.values() if m for t in m[1]}))
                xs = set()
                for s in f:
                    if s in finals:
                        continue
                    for s2 in _reach(edges, s):
                        m = f[s2]
                        if m:
                            xs.update((s, t) for t in m[1] if t not in finals)
                new_o = tuple(sorted({t for u, t in xs if not O or u in O}))
                out.add((tuple(sorted(t for t in f if t in entry)), nxt,
                         tuple(sorted(xs)) if entry else (), new_o))
        return _undominated(out)

    def post(q, x):
        if q == _DONE:
            return ()
        return step(q, x, False) + step(q, x, True)

    nba = BuchiAutomaton(_START, post, b.alphabet, lambda q: q == _DONE,
                         lambda q: q not in (_START, _DONE) and not q[3], name="nba")
    nba.source_ids = el.ids
    return nba


# --------------------------------------------------------------------------
# complementation

def _explore_states(a: BuchiAutomaton, limit: int = 100_000) -> list:
    seen, order, queue = {a.initial}, [a.initial], deque([a.initial])
    while queue:
        q = queue.popleft()
        for _, r in a.successors(q):
            if r not in seen:
                seen.add(r)
                order.append(r)
                queue.append(r)
                if len(order) > limit:
                    raise BudgetExceeded("automaton too large to complement")
    return order


def complement_ba(a: BuchiAutomaton, states: Sequence | None = None,
                  max_rank: int | None = None) -> BuchiAutomaton:
    """Complement by level rankings with a breakpoint set.

    A state is ``(g, O)`` where ``g`` maps every state reachable on the input
    so far to a rank; ranks never increase along transitions and states that
    accept infinite runs only carry even ranks.  ``O`` collects the
    even-ranked states still owing an odd rank.  Finite words are handled by
    the domain of ``g``, which is exactly the subset construction.
    """
    if states is None:
        states = _explore_states(a)
    top = 2 * sum(1 for q in states if not a.inf(q)) if max_rank is None else max_rank

    def rank_opts(q, cap):
        return [r for r in range(cap + 1) if not (a.inf(q) and r % 2)]

    init_opts = rank_opts(a.initial, top)
    inits = [(((a.initial, r),), ()) for r in init_opts]
    start = ("@cstart",)

    def successors_of(g, O, x):
        caps: dict = {}
        for q, r in g:
            for q2 in a.post(q, x):
                caps[q2] = min(caps.get(q2, r), r)
        dom = _canon(caps)
        out = []
        for ranks in itertools.product(*[rank_opts(q, caps[q]) for q in dom]):
            g2 = tuple(zip(dom, ranks))
            even = {q for q, r in g2 if r % 2 == 0}
            if O:
                owed = {q2 for q in O for q2 in a.post(q, x)}
                o2 = _canon(owed & even)
            else:
                o2 = _canon(even)
            out.append((g2, o2))
        return out

    def post(q, x):
        if q == start:
            seen, out = set(), []
            for g, O in inits:
                for r in successors_of(g, _canon(q2 for q2, rr in g if rr % 2 == 0), x):
                    if r not in seen:
                        seen.add(r)
                        out.append(r)
            return out
        return successors_of(q[0], q[1], x)

    def letters_for(q):
        if a.alphabet is not None:
            for x in a.alphabet:
                for r in post(q, x):
                    yield x, r
            return
        raise ValueError("complement needs an enumerable alphabet to list successors")

    def fin(q):
        if q == start:
            return not a.fin(a.initial)
        return not any(a.fin(s) for s, _ in q[0])

    def inf(q):
        return q != start and not q[1]

    return BuchiAutomaton(start, post, a.alphabet, fin, inf, letters_for,
                          name=f"co({a.name})")


# --------------------------------------------------------------------------
# the three-automaton route through a function alphabet

def build_function_2ba(b: TwoWayABA) -> TwoWayABA:
    """Non-alternating 2BA over letters ``(sigma, f)``.

    ``f`` assigns every state one of its minimal models at ``sigma`` or
    ``None``.  The automaton follows one atom of ``f(s)`` and on ``None``
    simply moves right; its final states are the non-final states of ``b``.
    It is meant to accept exactly the annotations that do not describe an
    accepting run of ``b``.
    """
    order = _canon(b.states)
    fn_letters = []
    for x in b.alphabet:
        per_state = [list(b.minmod(s, x)) + [None] for s in order]
        for choice in itertools.product(*per_state):
            fn_letters.append((x, tuple(zip(order, choice))))

    def delta(s, letter):
        f = dict(letter[1])
        tau = f.get(s)
        if tau is None:
            return wmove(NEXT, s)
        return bx.disj([wmove(d, t) for d, t in _canon(tau)])

    return TwoWayABA(order, fn_letters, delta, b.initial,
                     [s for s in order if s not in b.finals])


def _single_moves(b2: TwoWayABA, s, x, direction) -> list:
    return [t for tau in b2.minmod(s, x) if len(tau) == 1
            for d, t in tau if d is direction]


def _closure3(ell: set) -> frozenset:
    """Transitive closure of flagged edges; a path carries flag 1 if any edge does."""
    best: dict = {}
    for s, t, f in ell:
        best[(s, t)] = max(best.get((s, t), 0), f)
    changed = True
    while changed:
        changed = False
        for (s, t), f1 in list(best.items()):
            for (t2, u), f2 in list(best.items()):
                if t2 != t:
                    continue
                f = max(f1, f2)
                if best.get((s, u), -1) < f:
                    best[(s, u)] = f
                    changed = True
    out = set()
    for (s, t), f in best.items():
        out.add((s, t, 0))
        if f:
            out.add((s, t, 1))
    return frozenset(out)


def build_legal_ba(b2: TwoWayABA) -> BuchiAutomaton:
    """Deterministic automaton checking the loop annotations ``(sigma, m, n)``.

    ``m`` holds triples ``(s, t, flag)``: from ``s`` the automaton can wander
    left of the current position and come back in ``t``, visiting a final
    state if ``flag`` is 1.  ``n`` holds the states from which a run can stay
    in the prefix forever while accepting.  Every state is accepting.
    """
    F = b2.finals
    init = ("@legal",)

    def annotate(q, x):
        if q == init:
            p_prev, m_prev, n_prev, first = frozenset(), frozenset(), frozenset(), True
        else:
            p_prev, m_prev, n_prev = q
            first = False
        ell = set()
        for s in b2.states:
            for t in _single_moves(b2, s, x, ID):
                ell.add((s, t, 0))
                if t in F:
                    ell.add((s, t, 1))
            for s1 in _single_moves(b2, s, x, PREV):
                for (u, t1, flag) in m_prev:
                    if u != s1:
                        continue
                    for (v, t) in p_prev:
                        if v != t1:
                            continue
                        ell.add((s, t, 0))
                        if flag or {s1, t1, t} & F:
                            ell.add((s, t, 1))
        m = _closure3(ell)

        def stuck(s):
            models = b2.minmod(s, x)
            if first:
                models = [tau for tau in models if not any(d is PREV for d, _ in tau)]
            return not models

        n = set()
        for (s, s1, _) in m:
            if ((s1, s1, 1) in m or (s1 in F and stuck(s1))
                    or any(t in n_prev for t in _single_moves(b2, s1, x, PREV))):
                n.add(s)
        p = frozenset((s, t) for s in b2.states for t in _single_moves(b2, s, x, NEXT))
        return m, frozenset(n), p

    def post(q, letter):
        x, m, n = letter
        m2, n2, p = annotate(q, x)
        return [(p, m2, n2)] if (m, n) == (m2, n2) else []

    def letters_(q):
        for x in b2.alphabet:
            m, n, p = annotate(q, x)
            yield (x, m, n), (p, m, n)

    return BuchiAutomaton(init, post, None, lambda q: True, lambda q: True, letters_,
                          name="legal")


BOTTOM = "@bottom"


def build_accept_ba(b2: TwoWayABA) -> BuchiAutomaton:
    """Automaton over annotated letters that follows ``b2`` using the loop shortcuts.

    Besides the shortcut moves recorded in ``m`` it may also move right
    directly, and it may drop into ``BOTTOM`` from a state listed in ``n``.
    """
    F = b2.finals

    def post(q, letter):
        x, m, n = letter
        s, flag = q
        if s == BOTTOM:
            return [(BOTTOM, 0), (BOTTOM, 1)]
        out = set()
        mids = [(s, 0)] + [(t, f) for (u, t, f) in m if u == s]
        for mid, f in mids:
            for t in _single_moves(b2, mid, x, NEXT):
                out.add((t, 1 if (f or t in F) else 0))
        if s in n:
            out.update({(BOTTOM, 0), (BOTTOM, 1)})
        return sorted(out, key=bx._key)

    states = [(s, f) for s in list(b2.states) + [BOTTOM] for f in (0, 1)]
    ba = BuchiAutomaton((b2.initial, 1 if b2.initial in F else 0), post, None,
                        lambda q: q[1] == 1, lambda q: q[1] == 1, name="accept")
    ba.states = tuple(states)
    return ba


def function_route_ba(b: TwoWayABA) -> BuchiAutomaton:
    """Büchi automaton obtained by composing the three constructions above.

    It reads ``sigma`` and guesses ``f`` and the annotation, accepting when the
    annotation is legal and the function 2BA does not accept.
    """
    b2 = build_function_2ba(b)
    legal = build_legal_ba(b2)
    acc = build_accept_ba(b2)
    co = complement_ba(acc, states=acc.states)

    def post(q, x):
        q1, q2, flag = q
        out = []
        for letter, r1 in legal.successors(q1):
            if letter[0][0] != x:
                continue
            for r2 in co.post(q2, letter):
                out.append(_flag_step(legal, co, q, r1, r2))
        return out

    def letters_(q):
        q1, q2, _ = q
        for letter, r1 in legal.successors(q1):
            for r2 in co.post(q2, letter):
                yield letter[0][0], _flag_step(legal, co, q, r1, r2)

    return BuchiAutomaton((legal.initial, co.initial, 0), post, b.alphabet,
                          lambda q: legal.fin(q[0]) and co.fin(q[1]),
                          lambda q: q[2] == 0 and legal.inf(q[0]), letters_,
                          name="function-route")


def _flag_step(a, b, q, r1, r2):
    q1, q2, flag = q
    if flag == 0 and a.inf(q1):
        flag = 1
    elif flag == 1 and b.inf(q2):
        flag = 0
    return (r1, r2, flag)


# --------------------------------------------------------------------------
# Boolean combination and dumps

def apa_combine(parts: Sequence[TwoWayAPA], shape: bx.Expr) -> TwoWayAPA:
    """2APA accepting the words for which ``shape`` holds.

    ``shape`` is a positive Boolean expression whose atoms are indices into
    ``parts``.  The parts run side by side from the first position.
    """
    alpha = parts[0].alphabet
    if any(set(p.alphabet) != set(alpha) for p in parts):
        raise ValueError("parts read different alphabets")
    start = ("@combine",)
    states = [start] + [(i, s) for i, p in enumerate(parts) for s in p.states]
    rank = {start: 1}
    for i, p in enumerate(parts):
        rank.update({(i, s): p.rank[s] for s in p.states})

    def lift(i, e):
        return bx.substitute(e, lambda atom: wmove(atom[0], (i, atom[1])))

    def delta(q, x):
        if q == start:
            return bx.substitute(shape, lambda i: lift(i, parts[i].delta(parts[i].initial, x)))
        i, s = q
        return lift(i, parts[i].delta(s, x))

    return TwoWayAPA(states, alpha, delta, start, rank)


def dump_2way(a: _TwoWay, states: Sequence | None = None) -> str:
    """Deterministic text listing of a two-way automaton (reachable part by default)."""
    order = list(states) if states is not None else a.reachable_states()
    lines = [f"initial {a.initial!r}"]
    for s in order:
        lines.append(f"state {s!r} priority {a.priority(s)}")
        for x in a.alphabet:
            e = a.delta(s, x)
            if e != bx.BOT:
                lines.append(f"  {_letter_str(x)} -> {e}")
    return "\n".join(lines) + "\n"


def _letter_str(x) -> str:
    if isinstance(x, tuple) and len(x) == 2 and isinstance(x[0], Action):
        return f"{x[0]}#{x[1]}"
    return str(x)


def dump_ba(a: BuchiAutomaton, limit: int = 10_000) -> str:
    """Reachable part of a Büchi automaton in breadth-first order with numbered states."""
    order = _explore_states(a, limit)
    num = {q: i for i, q in enumerate(order)}
    lines = [f"states {len(order)}", "initial 0"]
    for q in order:
        flags = ("F" if a.inf(q) else "") + ("f" if a.fin(q) else "")
        lines.append(f"{num[q]} {flags}".rstrip())
        for x, r in a.successors(q):
            lines.append(f"  {_letter_str(x)} -> {num[r]}")
    return "\n".join(lines) + "\n"


def ba_emptiness_dfs(a: BuchiAutomaton, max_states: int | None = None,
                     deadline: float | None = None, stats: dict | None = None):
    """``EMPTY`` or a witness, found by an on-the-fly depth-first SCC search.

    Strongly connected components are merged as back edges close cycles
    (Couvreur's algorithm); the search stops as soon as a component with a
    state accepting infinite runs closes, or a state accepting finite words is
    reached.  Witnesses are not necessarily shortest.
    """
    import time
    index: dict = {}
    parent: dict = {a.initial: None}
    roots: list = []  # (dfs index, has_inf, node)
    active: list = []
    done: set = set()
    stack = []

    def found(q):
        return LassoWitness(_path(parent, q))

    def push(q):
        index[q] = len(index)
        active.append(q)
        roots.append((index[q], a.inf(q), q))
        stack.append((q, iter(a.successors(q))))

    if a.fin(a.initial):
        return LassoWitness(())
    push(a.initial)
    while stack:
        q, it = stack[-1]
        step = next(it, None)
        if step is None:
            stack.pop()
            if roots[-1][2] == q:
                roots.pop()
                while True:
                    u = active.pop()
                    done.add(u)
                    if u == q:
                        break
            continue
        x, r = step
        if r in done:
            continue
        if r not in index:
            parent[r] = (q, x)
            if a.fin(r):
                if stats is not None:
                    stats["states"] = len(index) + 1
                return found(r)
            if max_states is not None and len(index) >= max_states:
                raise BudgetExceeded(f"more than {max_states} automaton states")
            if deadline is not None and len(index) % 1024 == 0 and time.monotonic() > deadline:
                raise BudgetExceeded("time budget exhausted")
            push(r)
            continue
        # back or cross edge into the active part: merge components
        has_inf = False
        while roots[-1][0] > index[r]:
            has_inf |= roots.pop()[1]
        i, f, node = roots.pop()
        roots.append((i, f or has_inf, node))
        if f or has_inf:
            if stats is not None:
                stats["states"] = len(index)
            return _lasso_in(a, parent, set(active[active.index(node):]))
    if stats is not None:
        stats["states"] = len(index)
    return EMPTY


def _lasso_in(a: BuchiAutomaton, parent: dict, comp: set) -> LassoWitness:
    """Lasso through an accepting state of the strongly connected set ``comp``."""
    target = next(q for q in sorted(comp, key=lambda q: len(_path(parent, q))) if a.inf(q))
    back = {target: None}
    queue = deque([target])
    while queue:
        u = queue.popleft()
        for x, r in a.successors(u):
            if r not in comp:
                continue
            if r == target:
                return LassoWitness(_path(parent, target), _path(back, u) + (x,))
            if r not in back:
                back[r] = (u, x)
                queue.append(r)
    raise AssertionError("component without a cycle")
