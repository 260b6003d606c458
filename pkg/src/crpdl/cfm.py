"""Communicating finite-state machines, bounded satisfiability and model checking.

A CFM has one finite transition system per process.  Transitions carry an
action of the owning process together with a message content; a send and
its matching receive must agree on the content.  Acceptance asks, for some
global final tuple, that every process visits its component infinitely
often, so only infinite behaviours are ever accepted.
"""

from __future__ import annotations

import itertools
import re
import time
from dataclasses import dataclass, field
from typing import Mapping

from . import word_automata as wa
from .logic import Global, eval_global
from .msc import Action, Msc, MscError, alphabet, channels, decode_wb, msc_from_word, parse_action
from .msca import GlobalMsca
from .translate import translate_global

__all__ = [
    "Cfm", "CfmError", "Transition", "RunLabeling", "parse_cfm", "read_cfm_file",
    "check_run", "find_run", "cfm_accepts_finite", "cofin_lasso",
    "cfm_to_linearization_ba", "wellformed_ba", "formula_ba", "satisfiability",
    "model_check", "Verdict", "validate_finite_witness",
]


class CfmError(ValueError):
    """Malformed CFM description."""


@dataclass(frozen=True)
class Transition:
    source: str
    action: Action
    content: str
    target: str

    def __str__(self):
        return f"{self.source} -- {self.action} / {self.content} -> {self.target}"


@dataclass
class Cfm:
    """Per-process transition systems plus global final tuples."""

    procs: int
    transitions: dict  # process -> list[Transition]
    initial: dict  # process -> state
    finals: tuple = ()

    def __post_init__(self):
        for p in range(1, self.procs + 1):
            if p not in self.initial:
                raise CfmError(f"process {p} has no initial state")
            for t in self.transitions.get(p, []):
                if t.action.owner != p:
                    raise CfmError(f"transition {t} does not belong to process {p}")
                if not 1 <= t.action.peer <= self.procs:
                    raise CfmError(f"transition {t} names an unknown process")
        for tup in self.finals:
            if len(tup) != self.procs:
                raise CfmError(f"final tuple {tup} has the wrong length")

    @property
    def contents(self) -> tuple:
        return tuple(sorted({t.content for ts in self.transitions.values() for t in ts}))

    def moves(self, p: int, state: str, action: Action) -> list[Transition]:
        return [t for t in self.transitions.get(p, []) if t.source == state and t.action == action]


_TRANS_RE = re.compile(r"^(\S+)\s+--\s+(\S+)\s*/\s*(\S+)\s+->\s+(\S+)$")


def parse_cfm(text: str) -> Cfm:
    """Read the line based CFM format; ``#`` starts a comment."""
    current = None
    transitions: dict = {}
    initial: dict = {}
    finals = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("process "):
                current = int(line.split()[1])
                transitions.setdefault(current, [])
            elif line.startswith("initial "):
                if current is None:
                    raise CfmError("initial before any process")
                initial[current] = line.split(None, 1)[1].strip()
            elif line.startswith("final"):
                body = line[len("final"):].strip()
                if not (body.startswith("(") and body.endswith(")")):
                    raise CfmError("final tuple must be parenthesised")
                finals.append(tuple(s.strip() for s in body[1:-1].split(",")))
            else:
                m = _TRANS_RE.match(line)
                if not m or current is None:
                    raise CfmError(f"cannot read {line!r}")
                src, act, content, dst = m.groups()
                transitions[current].append(Transition(src, parse_action(act), content, dst))
        except (CfmError, MscError, ValueError) as exc:
            raise CfmError(f"line {lineno}: {exc}") from None
    if not transitions:
        raise CfmError("no process declared")
    procs = max(transitions)
    if sorted(transitions) != list(range(1, procs + 1)):
        raise CfmError("processes must be numbered 1..n")
    return Cfm(procs, transitions, initial, tuple(finals))


def read_cfm_file(path) -> Cfm:
    with open(path, encoding="utf-8") as fh:
        return parse_cfm(fh.read())


# --------------------------------------------------------------------------
# runs on finite MSCs

@dataclass
class RunLabeling:
    """Local state ``zeta[v]`` reached by event ``v`` and its message content ``chi[v]``."""

    zeta: Mapping
    chi: Mapping = field(default_factory=dict)


def check_run(c: Cfm, m: Msc, labeling: RunLabeling) -> bool:
    if m.procs != c.procs:
        return False
    for v in m.events:
        if v not in labeling.zeta or v not in labeling.chi:
            return False
        p = m.process(v)
        pred = m.proc_pred(v)
        src = c.initial[p] if pred is None else labeling.zeta[pred]
        if Transition(src, m.label(v), labeling.chi[v], labeling.zeta[v]) not in c.transitions.get(p, []):
            return False
    for v, w in m.messages:
        if labeling.chi[v] != labeling.chi[w]:
            return False
    return True


def find_run(c: Cfm, m: Msc) -> RunLabeling | None:
    """Some labeling satisfying the run conditions, by exhaustive search."""
    per_proc = []
    for p in range(1, m.procs + 1):
        line = m.lines[p - 1]
        runs = []

        def rec(state, i, zeta, chi):
            if i == len(line):
                runs.append((dict(zeta), dict(chi)))
                return
            for t in c.moves(p, state, line[i]):
                zeta[(p, i + 1)] = t.target
                chi[(p, i + 1)] = t.content
                rec(t.target, i + 1, zeta, chi)
            zeta.pop((p, i + 1), None)
            chi.pop((p, i + 1), None)

        rec(c.initial[p], 0, {}, {})
        per_proc.append(runs)
    for combo in itertools.product(*per_proc):
        zeta, chi = {}, {}
        for z, h in combo:
            zeta.update(z)
            chi.update(h)
        lab = RunLabeling(zeta, chi)
        if check_run(c, m, lab):
            return lab
    return None


def cofin_lasso(stem_states, loop_states) -> frozenset:
    """States occurring infinitely often on a process line ``stem loop loop ...``."""
    return frozenset(loop_states)


def cfm_accepts_finite(c: Cfm, m: Msc) -> bool:
    """Acceptance of a finite MSC read literally.

    Every process line is finite and non-empty, so no state occurs
    infinitely often and no final tuple can be met.
    """
    if find_run(c, m) is None:
        return False
    cofin = {p: frozenset() for p in range(1, m.procs + 1)}
    return any(all(tup[p - 1] in cofin[p] for p in cofin) for tup in c.finals)


# --------------------------------------------------------------------------
# Büchi automata over encoded linearizations

def _degeneralize_step(k: int, conds, *args) -> int:
    """Advance the rotating counter past every satisfied obligation; ``len(conds)`` marks a full round."""
    n = len(conds)
    if k == n:
        k = 0
    while k < n and conds[k](*args):
        k += 1
    return k


def cfm_to_linearization_ba(c: Cfm, bound: int) -> wa.BuchiAutomaton:
    """Automaton for the ``bound``-bounded linearizations of the behaviours of ``c``.

    A state holds the local states, the channel queues of ``(content, index)``
    pairs, the next index per action, the guessed final tuple and a rotating
    obligation counter.  The obligations are: every process takes a
    transition into its final component, and every channel is empty or just
    received.  Finite words are not accepted.
    """
    chans = channels(c.procs)
    cidx = {ch: i for i, ch in enumerate(chans)}
    acts = alphabet(c.procs)
    aidx = {a: i for i, a in enumerate(acts)}
    gamma = wa.letters(c.procs, bound)
    finals = tuple(c.finals)
    start = ("@cfm",)
    n_obl = c.procs + len(chans)

    def obligations(tup):
        conds = []
        for p in range(1, c.procs + 1):
            conds.append(lambda t, queues, p=p: t.action.owner == p and t.target == tup[p - 1])
        for ch in chans:
            conds.append(lambda t, queues, ch=ch: not queues[cidx[ch]]
                         or (not t.action.is_send and t.action.channel == ch))
        return conds

    obls = [obligations(tup) for tup in finals]

    def fire(q, letter):
        locals_, queues, counters, fi, k = q
        a, i = letter
        if counters[aidx[a]] != i:
            return []
        p = a.owner
        ch = cidx[a.channel]
        out = []
        for t in c.moves(p, locals_[p - 1], a):
            queue = queues[ch]
            if a.is_send:
                if len(queue) >= bound:
                    continue
                new_queue = queue + ((t.content, i),)
            else:
                if not queue or queue[0] != (t.content, i):
                    continue
                new_queue = queue[1:]
            new_queues = queues[:ch] + (new_queue,) + queues[ch + 1:]
            new_locals = locals_[:p - 1] + (t.target,) + locals_[p:]
            new_counters = list(counters)
            new_counters[aidx[a]] = (i + 1) % bound
            k2 = _degeneralize_step(k, obls[fi], t, new_queues)
            out.append((new_locals, new_queues, tuple(new_counters), fi, k2))
        return out

    def post(q, letter):
        if q == start:
            init = (tuple(c.initial[p] for p in range(1, c.procs + 1)),
                    tuple(() for _ in chans), tuple(0 for _ in acts))
            res = []
            for fi in range(len(finals)):
                for r in fire(init + (fi, 0), letter):
                    if r not in res:
                        res.append(r)
            return res
        return fire(q, letter)

    return wa.BuchiAutomaton(start, post, gamma, lambda q: False,
                             lambda q: q != start and q[4] == n_obl, name="cfm")


def wellformed_ba(procs: int, bound: int) -> wa.BuchiAutomaton:
    """Automaton for the encodings ``W_B`` of ``bound``-bounded linearizations of MSCs.

    It tracks channel loads, the next index of every action and the
    processes seen so far.  Finite words need empty channels and every
    process seen.  Infinite words need every process seen and every channel
    infinitely often empty or receiving, so no message stays in transit.
    """
    chans = channels(procs)
    cidx = {ch: i for i, ch in enumerate(chans)}
    acts = alphabet(procs)
    aidx = {a: i for i, a in enumerate(acts)}
    full = (1 << procs) - 1
    conds = [lambda loads, seen, a: seen == full]
    for ch in chans:
        conds.append(lambda loads, seen, a, ch=ch: loads[cidx[ch]] == 0
                     or (not a.is_send and a.channel == ch))
    n_obl = len(conds)
    start = (tuple(0 for _ in chans), tuple(0 for _ in acts), 0, 0)

    def post(q, letter):
        loads, counters, seen, k = q
        a, i = letter
        if counters[aidx[a]] != i:
            return []
        ch = cidx[a.channel]
        load = loads[ch] + (1 if a.is_send else -1)
        if load < 0 or load > bound:
            return []
        new_loads = loads[:ch] + (load,) + loads[ch + 1:]
        new_counters = counters[:aidx[a]] + ((i + 1) % bound,) + counters[aidx[a] + 1:]
        new_seen = seen | (1 << (a.owner - 1))
        return [(new_loads, new_counters, new_seen,
                 _degeneralize_step(k, conds, new_loads, new_seen, a))]

    return wa.BuchiAutomaton(start, post, wa.letters(procs, bound),
                             lambda q: q[2] == full and not any(q[0]),
                             lambda q: q[3] == n_obl, name="wellformed")


def formula_ba(phi: Global | GlobalMsca, procs: int, bound: int, stages: dict | None = None):
    """Büchi automaton for the encodings ``W_B`` of linearizations satisfying ``phi``."""
    g = phi if isinstance(phi, GlobalMsca) else translate_global(phi, procs)
    apa = wa.msca_to_2apa(g, bound, procs)
    aba = wa.apa_to_aba(apa)
    nba = wa.alternation_eliminate(aba)
    if stages is not None:
        stages.update({"msca": g, "2apa": apa, "2aba": aba, "nba": nba})
    return nba


# --------------------------------------------------------------------------
# decision procedures

@dataclass
class Verdict:
    """Outcome of a satisfiability or model-checking run."""

    witness: wa.LassoWitness | None
    states: int = 0
    seconds: float = 0.0
    stages: dict = field(default_factory=dict)

    @property
    def sat(self) -> bool:
        return self.witness is not None


def validate_finite_witness(phi: Global, procs: int, witness: wa.LassoWitness) -> bool:
    """Decode a finite witness into an MSC and re-check it with the semantic evaluator."""
    try:
        m = msc_from_word(decode_wb(witness.stem), procs)
    except MscError:
        return False
    return eval_global(m, phi)


def _run(parts, max_states, timeout, stages):
    product = parts[0]
    for p in parts[1:]:
        product = wa.ba_intersect(product, p)
    t0 = time.monotonic()
    deadline = None if timeout is None else t0 + timeout
    stats: dict = {}
    res = wa.ba_emptiness(product, max_states=max_states, deadline=deadline, stats=stats)
    if stages is not None:
        stages["product"] = product
    witness = None if isinstance(res, wa.Empty) else res
    if witness is not None:
        for part in parts:
            if not wa.ba_accepts(part, witness.stem, witness.loop):
                raise AssertionError(f"witness rejected by {part.name}")
    return Verdict(witness, stats.get("states", 0), time.monotonic() - t0,
                   stages if stages is not None else {})


def satisfiability(phi: Global, procs: int, bound: int, max_states: int | None = 1_000_000,
                   timeout: float | None = None, stages: dict | None = None) -> Verdict:
    """Search for a ``bound``-bounded MSC satisfying ``phi`` through its encoded linearizations.

    Finite witnesses are decoded and re-evaluated; lasso witnesses are
    re-simulated on both factors of the product.
    """
    stages = {} if stages is None else stages
    nba = formula_ba(phi, procs, bound, stages)
    wf = wellformed_ba(procs, bound)
    stages["wellformed"] = wf
    verdict = _run([wf, nba], max_states, timeout, stages)
    w = verdict.witness
    if w is not None and w.is_finite and not validate_finite_witness(phi, procs, w):
        raise AssertionError("finite witness fails the semantic check")
    return verdict


def model_check(c: Cfm, phi: Global, bound: int, max_states: int | None = 1_000_000,
                timeout: float | None = None, stages: dict | None = None) -> Verdict:
    """Search for a behaviour of ``c`` with a ``bound``-bounded linearization satisfying ``phi``."""
    stages = {} if stages is None else stages
    lin = cfm_to_linearization_ba(c, bound)
    stages["cfm"] = lin
    nba = formula_ba(phi, c.procs, bound, stages)
    return _run([lin, nba], max_states, timeout, stages)
