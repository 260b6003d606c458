"""Alternating parity automata walking on MSCs, and their membership games.

A transition of a local MSCA is a positive Boolean expression over moves
``(Direction, state)``.  Transition tables are stored as ordered lists of
``(guard, expression)`` pairs per state; the first guard matching the current
action wins and a state without a matching guard has transition ``BOT``.
Guards keep the automata independent of the number of processes.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

import networkx as nx

from . import boolexpr as bx
from .msc import Action, Direction, Msc, PointedMsc, eta

__all__ = [
    "Guard", "ANY", "On", "OnProc", "SendsTo", "move", "LocalMsca", "GlobalMsca",
    "PreconditionViolated", "NotWinning", "is_stuck", "executable_models",
    "GameArena", "build_game", "solve_game", "winning_region", "accepts_pointed",
    "accepting_events", "accepts_global", "dualize", "main_states", "RunTree",
    "extract_run", "validate_run", "run_violations", "dump", "two_hop_automaton",
    "forall_two_hop",
]


class PreconditionViolated(ValueError):
    pass


class NotWinning(ValueError):
    pass


# --------------------------------------------------------------------------
# guards

class Guard:
    def matches(self, a: Action) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class _Any(Guard):
    def matches(self, a):
        return True

    def __str__(self):
        return "*"


ANY = _Any()


@dataclass(frozen=True)
class On(Guard):
    action: Action

    def matches(self, a):
        return a == self.action

    def __str__(self):
        return str(self.action)


@dataclass(frozen=True)
class OnProc(Guard):
    q: int

    def matches(self, a):
        return a.owner == self.q

    def __str__(self):
        return f"P{self.q}"


@dataclass(frozen=True)
class SendsTo(Guard):
    q: int

    def matches(self, a):
        return a.is_send and a.peer == self.q

    def __str__(self):
        return f"!{self.q}"


def move(d: Direction, s: Hashable) -> bx.Atom:
    return bx.Atom((d, s))


# --------------------------------------------------------------------------
# automata

class LocalMsca:
    """A local MSCA ``(S, delta, initial, concat, rank)``."""

    def __init__(self, states: Iterable[Hashable],
                 table: Mapping[Hashable, Sequence[tuple[Guard, bx.Expr]]],
                 initial: Hashable, concat: Hashable, rank: Mapping[Hashable, int]):
        self.states = tuple(states)
        self.table = {s: tuple(table.get(s, ())) for s in self.states}
        self.initial = initial
        self.concat = concat
        self.rank = dict(rank)
        known = set(self.states)
        if initial not in known or concat not in known:
            raise ValueError("initial and concatenation state must be states")
        if set(self.rank) != known:
            raise ValueError("rank must be total on the states")
        for s, entries in self.table.items():
            for _, e in entries:
                for d, t in bx.atoms(e):
                    if t not in known or not isinstance(d, Direction):
                        raise ValueError(f"bad move ({d},{t}) in state {s}")
        self._delta_cache: dict = {}

    def delta(self, s: Hashable, a: Action) -> bx.Expr:
        key = (s, a)
        hit = self._delta_cache.get(key)
        if hit is None:
            hit = bx.BOT
            for guard, e in self.table[s]:
                if guard.matches(a):
                    hit = e
                    break
            self._delta_cache[key] = hit
        return hit

    def expressions(self, s: Hashable) -> tuple[bx.Expr, ...]:
        """Every expression ``delta(s, .)`` can take (``BOT`` included)."""
        return tuple(e for _, e in self.table[s]) + (bx.BOT,)

    def is_bot(self, s: Hashable) -> bool:
        return all(isinstance(e, bx.Bot) for _, e in self.table[s])

    @property
    def size(self) -> int:
        return len(self.states) + sum(bx.expr_size(e) for es in self.table.values() for _, e in es)

    def max_rank(self) -> int:
        return max(self.rank.values())

    def renamed(self, prefix: str) -> "LocalMsca":
        f = lambda s: f"{prefix}{s}"
        table = {f(s): [(g, bx.substitute(e, lambda x: move(x[0], f(x[1])))) for g, e in es]
                 for s, es in self.table.items()}
        return LocalMsca(map(f, self.states), table, f(self.initial), f(self.concat),
                         {f(s): r for s, r in self.rank.items()})

    def __repr__(self):
        return f"<LocalMsca {len(self.states)} states, init {self.initial}>"


@dataclass
class GlobalMsca:
    local: LocalMsca
    initials: tuple[tuple[Hashable, ...], ...]

    def __post_init__(self):
        self.initials = tuple(tuple(t) for t in self.initials)
        arities = {len(t) for t in self.initials}
        if len(arities) > 1:
            raise ValueError("initial tuples must share one arity")


def dualize(a: LocalMsca) -> LocalMsca:
    """Swap conjunction and disjunction everywhere and shift every rank by one."""
    table = {s: [(g, bx.dual(e)) for g, e in es] for s, es in a.table.items()}
    return LocalMsca(a.states, table, a.initial, a.concat, {s: r + 1 for s, r in a.rank.items()})


def main_states(a: LocalMsca) -> frozenset:
    """Least set containing the concatenation state, closed backwards along moves."""
    main = {a.concat}
    changed = True
    while changed:
        changed = False
        for s in a.states:
            if s in main:
                continue
            for e in a.expressions(s):
                if any(t in main for tau in bx.minimal_models(e) for _, t in tau):
                    main.add(s)
                    changed = True
                    break
    return frozenset(main)


# --------------------------------------------------------------------------
# stuckness

def executable_models(a: LocalMsca, m: Msc, v, s) -> tuple[frozenset, ...]:
    """Minimal models of ``delta(s, label(v))`` whose moves all have a target."""
    return tuple(tau for tau in bx.minimal_models(a.delta(s, m.label(v)))
                 if all(m.step(v, d) is not None for d, _ in tau))


def is_stuck(a: LocalMsca, m: Msc, v, s) -> bool:
    return not executable_models(a, m, v, s)


# --------------------------------------------------------------------------
# games

AUTOMATON, PATHFINDER = 0, 1
WIN_A = ("win", AUTOMATON)
WIN_P = ("win", PATHFINDER)


@dataclass
class GameArena:
    """Parity game with min-even winning condition for the Automaton player."""

    owner: dict = field(default_factory=dict)
    priority: dict = field(default_factory=dict)
    succ: dict = field(default_factory=dict)
    initial: Hashable = None

    def add(self, node, owner: int, priority: int):
        if node not in self.owner:
            self.owner[node] = owner
            self.priority[node] = priority
            self.succ[node] = []

    @property
    def automaton_positions(self):
        return [n for n in self.owner if n[0] == "A"]

    @property
    def pathfinder_positions(self):
        return [n for n in self.owner if n[0] == "P"]


def build_game(a: LocalMsca, m: Msc, v=None, start=None, concat_target=None) -> GameArena:
    """Arena over all positions ``("A", event, state)`` plus reachable choices.

    With ``concat_target`` set, the concatenation state counts as a losing
    dead end at every other event; this restricts the Automaton to runs whose
    concatenation configuration sits at the target.
    """
    g = GameArena()
    neutral = a.max_rank() + 1
    g.add(WIN_A, AUTOMATON, 0)
    g.add(WIN_P, PATHFINDER, 1)
    g.succ[WIN_A].append(WIN_A)
    g.succ[WIN_P].append(WIN_P)
    for w in m.events:
        for s in a.states:
            g.add(("A", w, s), AUTOMATON, a.rank[s])
    for w in m.events:
        for s in a.states:
            node = ("A", w, s)
            if concat_target is not None and s == a.concat and w != concat_target:
                g.succ[node].append(WIN_P)
                continue
            taus = executable_models(a, m, w, s)
            if not taus:
                g.succ[node].append(WIN_A if a.rank[s] % 2 == 0 else WIN_P)
                continue
            for tau in taus:
                pnode = ("P", w, tau)
                if pnode not in g.owner:
                    g.add(pnode, PATHFINDER, neutral)
                    for d, t in sorted(tau, key=bx._key):
                        g.succ[pnode].append(("A", m.step(w, d), t))
                g.succ[node].append(pnode)
    if v is not None:
        g.initial = ("A", v, a.initial if start is None else start)
    return g


def _attractor(nodes: set, succ: dict, pred: dict, owner: dict, target: set, player: int):
    attr = set(target)
    strategy = {}
    count = {n: sum(1 for w in succ[n] if w in nodes) for n in nodes}
    queue = deque(target)
    while queue:
        w = queue.popleft()
        for u in pred[w]:
            if u not in nodes or u in attr:
                continue
            if owner[u] == player:
                attr.add(u)
                strategy[u] = w
                queue.append(u)
            else:
                count[u] -= 1
                if count[u] == 0:
                    attr.add(u)
                    queue.append(u)
    return attr, strategy


def _zielonka(nodes: frozenset, succ, pred, owner, priority):
    if not nodes:
        return (set(), set()), ({}, {})
    d = min(priority[n] for n in nodes)
    i = d % 2
    top = {n for n in nodes if priority[n] == d}
    attr_i, str_attr = _attractor(nodes, succ, pred, owner, top, i)
    (w0, w1), (s0, s1) = _zielonka(frozenset(nodes - attr_i), succ, pred, owner, priority)
    win, strat = [w0, w1], [s0, s1]
    if not win[1 - i]:
        strat_i = dict(strat[i])
        strat_i.update(str_attr)
        for n in top:
            if owner[n] == i:
                strat_i[n] = next(w for w in succ[n] if w in nodes)
        result_win = [set(), set()]
        result_win[i] = set(nodes)
        result_str = [{}, {}]
        result_str[i] = strat_i
        return tuple(result_win), tuple(result_str)
    attr_o, str_o = _attractor(nodes, succ, pred, owner, win[1 - i], 1 - i)
    (v0, v1), (t0, t1) = _zielonka(frozenset(nodes - attr_o), succ, pred, owner, priority)
    win2, strat2 = [set(v0), set(v1)], [dict(t0), dict(t1)]
    win2[1 - i] |= attr_o
    strat2[1 - i].update(strat[1 - i])
    strat2[1 - i].update({k: w for k, w in str_o.items() if k not in win[1 - i]})
    return tuple(win2), tuple(strat2)


def solve_game(g: GameArena):
    """Return ``((win_automaton, win_pathfinder), (strategy_a, strategy_p))``.

    Strategies are memoryless: they map a position of the respective player
    inside its winning region to a successor.
    """
    pred = defaultdict(list)
    for n, ws in g.succ.items():
        for w in ws:
            pred[w].append(n)
    nodes = frozenset(g.owner)
    return _zielonka(nodes, g.succ, pred, g.owner, g.priority)


_SOLVED: dict = {}


def winning_region(a: LocalMsca, m: Msc, concat_target=None):
    """Cached Automaton winning positions and strategy for ``a`` on ``m``."""
    key = (id(a), m, concat_target)
    hit = _SOLVED.get(key)
    if hit is None or hit[0] is not a:
        g = build_game(a, m, concat_target=concat_target)
        (w0, _), (s0, _) = solve_game(g)
        hit = (a, frozenset(w0), s0, g)
        if len(_SOLVED) > 20000:
            _SOLVED.clear()
        _SOLVED[key] = hit
    return hit[1], hit[2], hit[3]


def accepts_pointed(a: LocalMsca, pm: PointedMsc, start=None) -> bool:
    win, _, _ = winning_region(a, pm.msc)
    return ("A", pm.focus, a.initial if start is None else start) in win


def accepting_events(a: LocalMsca, m: Msc, start=None) -> frozenset:
    win, _, _ = winning_region(a, m)
    s = a.initial if start is None else start
    return frozenset(v for v in m.events if ("A", v, s) in win)


def accepts_global(g: GlobalMsca, m: Msc) -> bool:
    win, _, _ = winning_region(g.local, m)
    for tup in g.initials:
        if len(tup) != m.procs:
            raise ValueError("initial tuple arity differs from the process count")
        if all(("A", m.first(p), s) in win for p, s in enumerate(tup, start=1)):
            return True
    return False


# --------------------------------------------------------------------------
# runs

@dataclass
class RunTree:
    """A run folded into a finite graph.

    ``nodes[i]`` is ``(state, event)``; ``children[i]`` lists node indices.
    The run itself is the unfolding from ``root``.
    """

    nodes: list
    children: dict
    root: int = 0

    def mu(self, x):
        return self.nodes[x][0]

    def nu(self, x):
        return self.nodes[x][1]


def extract_run(a: LocalMsca, pm: PointedMsc, strategy=None, start=None,
                concat_target=None) -> RunTree:
    """Fold the winning memoryless strategy into a run graph."""
    m, v = pm.msc, pm.focus
    s0 = a.initial if start is None else start
    if strategy is None:
        win, strategy, _ = winning_region(a, m, concat_target)
        if ("A", v, s0) not in win:
            raise NotWinning(f"Automaton does not win from ({v}, {s0})")
    index: dict = {}
    nodes: list = []
    children: dict = {}
    todo = deque()

    def node(s, w):
        if (s, w) not in index:
            index[(s, w)] = len(nodes)
            nodes.append((s, w))
            todo.append((s, w))
        return index[(s, w)]

    node(s0, v)
    while todo:
        s, w = todo.popleft()
        x = index[(s, w)]
        choice = strategy.get(("A", w, s))
        if choice is None or choice[0] != "P":
            if choice is None and not is_stuck(a, m, w, s):
                raise NotWinning(f"strategy undefined at ({w}, {s})")
            children[x] = ()
            continue
        tau = choice[2]
        children[x] = tuple(node(t, m.step(w, d)) for d, t in sorted(tau, key=bx._key))
    return RunTree(nodes, children, 0)


def run_violations(a: LocalMsca, pm: PointedMsc, rho: RunTree, start=None) -> list[str]:
    """Reasons why ``rho`` is not an accepting run (empty list if it is)."""
    m = pm.msc
    s0 = a.initial if start is None else start
    problems = []
    if rho.nodes[rho.root] != (s0, pm.focus):
        problems.append("root is not labelled with the initial state at the focus")
    known = set(a.states)
    for x, (s, w) in enumerate(rho.nodes):
        if s not in known or w not in m.events:
            problems.append(f"node {x} has an unknown label")
            continue
        kids = rho.children.get(x, ())
        labels = [rho.nodes[y] for y in kids]
        if len(set(labels)) != len(labels):
            problems.append(f"node {x} has two children with equal labels")
        tr = set()
        for t, u in labels:
            d = eta(m, w, u)
            if d is None:
                problems.append(f"edge from node {x} does not follow the MSC")
            else:
                tr.add((d, t))
        if kids:
            if frozenset(tr) not in bx.minimal_models(a.delta(s, m.label(w))):
                problems.append(f"node {x} does not take a minimal model")
        elif not is_stuck(a, m, w, s):
            problems.append(f"leaf {x} is not stuck")
        elif a.rank[s] % 2:
            problems.append(f"leaf {x} is stuck in an odd rank")
    g = nx.DiGraph()
    g.add_nodes_from(range(len(rho.nodes)))
    g.add_edges_from((x, y) for x, ys in rho.children.items() for y in ys)
    live = nx.descendants(g, rho.root) | {rho.root}
    for r in sorted({a.rank.get(s, 0) for s, _ in rho.nodes}):
        if r % 2 == 0:
            continue
        sub = g.subgraph(x for x in live if a.rank.get(rho.nodes[x][0], 0) >= r)
        for comp in nx.strongly_connected_components(sub):
            cyclic = len(comp) > 1 or any(sub.has_edge(x, x) for x in comp)
            if cyclic and any(a.rank.get(rho.nodes[x][0]) == r for x in comp):
                problems.append(f"an infinite branch has minimal recurring rank {r}")
                break
    return problems


def validate_run(a: LocalMsca, pm: PointedMsc, rho: RunTree, start=None) -> bool:
    return not run_violations(a, pm, rho, start)


def count_labelled(rho: RunTree, state) -> float:
    """Number of configurations labelled ``state`` in the unfolded run."""
    g = nx.DiGraph()
    g.add_nodes_from(range(len(rho.nodes)))
    g.add_edges_from((x, y) for x, ys in rho.children.items() for y in ys)
    live = nx.descendants(g, rho.root) | {rho.root}
    hits = [x for x in live if rho.nodes[x][0] == state]
    if not hits:
        return 0
    sub = g.subgraph(live)
    if not nx.is_directed_acyclic_graph(sub):
        # a labelled node below a cycle occurs infinitely often
        cyc = set()
        for comp in nx.strongly_connected_components(sub):
            if len(comp) > 1 or any(sub.has_edge(x, x) for x in comp):
                cyc |= comp
        below = set(cyc)
        for x in cyc:
            below |= nx.descendants(sub, x)
        if any(x in below for x in hits):
            return float("inf")
        sub = sub.subgraph(live - cyc)
    paths = {rho.root: 1}
    for x in nx.topological_sort(sub):
        for y in sub.successors(x):
            paths[y] = paths.get(y, 0) + paths.get(x, 0)
    return sum(paths.get(x, 0) for x in hits)


__all__.append("count_labelled")


# --------------------------------------------------------------------------
# text dump

def _state_order(a: LocalMsca):
    return list(a.states)


def dump(a: LocalMsca) -> str:
    lines = [f"{s} | {a.rank[s]}" for s in _state_order(a)]
    lines.append(f"init {a.initial}")
    lines.append(f"concat {a.concat}")
    for s in _state_order(a):
        for guard, e in a.table[s]:
            lines.append(f"{s} , {guard} -> {e}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# sample automata

def two_hop_automaton(p: int) -> LocalMsca:
    """Three-state automaton checking two message hops that end on process ``p``."""
    table = {
        "s1": [(ANY, move(Direction.PROC, "s1") | move(Direction.MSG, "s2"))],
        "s2": [(SendsTo(p), move(Direction.ID, "s3")), (ANY, move(Direction.PROC, "s2"))],
        "s3": [],
    }
    return LocalMsca(["s1", "s2", "s3"], table, "s1", "s3", {"s1": 1, "s2": 1, "s3": 0})


def forall_two_hop(p: int, procs: int) -> GlobalMsca:
    """Global automaton checking the two-hop property at every event."""
    base = two_hop_automaton(p)
    table = dict(base.table)
    table["t1"] = [(ANY, move(Direction.ID, "t2") & move(Direction.ID, "s1"))]
    table["t2"] = [(ANY, move(Direction.PROC, "t1"))]
    rank = dict(base.rank, t1=1, t2=0)
    local = LocalMsca(list(base.states) + ["t1", "t2"], table, "t1", "s3", rank)
    return GlobalMsca(local, (("t1",) * procs,))
