"""Message sequence charts, linearizations and the channel-bounded encoding.

Events are identified by ``(process, index)`` with 1-based indices along the
process line.  An MSC is fully determined by the action sequence of each
process, because FIFO matching pairs the k-th send ``p!q`` with the k-th
receive ``q?p``.
"""

from __future__ import annotations

import enum
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Action", "Direction", "Msc", "PointedMsc", "Linearization",
    "MscError", "UnmatchedReceive", "PendingSend", "EmptyProcess", "BadPeer",
    "NotBBounded", "parse_action", "parse_word", "alphabet", "process_alphabet",
    "channels", "msc_from_word", "eta", "is_b_bounded",
    "is_existentially_b_bounded", "encode_wb", "decode_wb", "linearizations",
    "enumerate_mscs", "read_msc_file",
]


class MscError(ValueError):
    """Raised when a word does not describe a valid MSC."""


class UnmatchedReceive(MscError):
    pass


class PendingSend(MscError):
    pass


class EmptyProcess(MscError):
    pass


class BadPeer(MscError):
    pass


class NotBBounded(MscError):
    pass


@dataclass(frozen=True, order=True)
class Action:
    """``p!q`` (kind ``'!'``) or ``p?q`` (kind ``'?'``) executed by ``owner``."""

    owner: int
    kind: str
    peer: int

    def __post_init__(self):
        if self.kind not in ("!", "?"):
            raise ValueError(f"bad action kind {self.kind!r}")
        if self.owner == self.peer:
            raise BadPeer(f"action {self} talks to itself")

    @property
    def is_send(self) -> bool:
        return self.kind == "!"

    @property
    def channel(self) -> tuple[int, int]:
        """The channel (sender, receiver) this action uses."""
        return (self.owner, self.peer) if self.is_send else (self.peer, self.owner)

    def partner(self) -> "Action":
        """The action at the other end of the message."""
        return Action(self.peer, "?" if self.is_send else "!", self.owner)

    def __str__(self) -> str:
        return f"{self.owner}{self.kind}{self.peer}"


_ACTION_RE = re.compile(r"^(\d+)([!?])(\d+)$")


def parse_action(text: str) -> Action:
    m = _ACTION_RE.match(text.strip())
    if not m:
        raise MscError(f"not an action: {text!r}")
    return Action(int(m.group(1)), m.group(2), int(m.group(3)))


def parse_word(text: str) -> list[Action]:
    """Parse whitespace separated actions; ``#`` starts a comment."""
    tokens = []
    for line in text.splitlines():
        tokens.extend(line.split("#", 1)[0].split())
    return [parse_action(t) for t in tokens]


def read_msc_file(path, procs: int) -> "Msc":
    with open(path, encoding="utf-8") as fh:
        return msc_from_word(parse_word(fh.read()), procs)


def process_alphabet(p: int, procs: int) -> tuple[Action, ...]:
    return tuple(Action(p, k, q) for q in range(1, procs + 1) if q != p for k in "!?")


def alphabet(procs: int) -> tuple[Action, ...]:
    """All actions over processes ``1..procs`` in a fixed order."""
    return tuple(a for p in range(1, procs + 1) for a in process_alphabet(p, procs))


def channels(procs: int) -> tuple[tuple[int, int], ...]:
    return tuple((p, q) for p in range(1, procs + 1) for q in range(1, procs + 1) if p != q)


class Direction(enum.Enum):
    PROC = "proc"
    PROC_INV = "proc-"
    MSG = "msg"
    MSG_INV = "msg-"
    ID = "id"

    def __str__(self) -> str:
        return self.value

    def __lt__(self, other):
        return _DIR_ORDER[self] < _DIR_ORDER[other]


_DIR_ORDER = {d: i for i, d in enumerate(Direction)}

Event = tuple[int, int]


@dataclass(frozen=True)
class Msc:
    """A finite MSC given by the action sequence of every process."""

    procs: int
    lines: tuple[tuple[Action, ...], ...]  # lines[p-1] is process p

    def __post_init__(self):
        if self.procs < 2:
            raise MscError("at least two processes are required")
        if len(self.lines) != self.procs:
            raise MscError("one line per process expected")
        for p, line in enumerate(self.lines, start=1):
            if not line:
                raise EmptyProcess(f"process {p} has no event")
            for a in line:
                if a.owner != p:
                    raise MscError(f"action {a} placed on process {p}")
                if not 1 <= a.peer <= self.procs:
                    raise BadPeer(f"action {a} names an unknown process")
        # the counting condition must pair every send with a receive
        sends = Counter(a.channel for line in self.lines for a in line if a.is_send)
        recvs = Counter(a.channel for line in self.lines for a in line if not a.is_send)
        if sends != recvs:
            raise MscError("sends and receives do not match up")
        # acyclicity of proc ∪ msg is checked by building a linearization
        if self.some_linearization() is None:
            raise MscError("message order contradicts process order")

    # -- structure -------------------------------------------------------
    @cached_property
    def events(self) -> tuple[Event, ...]:
        return tuple((p, i) for p in range(1, self.procs + 1)
                     for i in range(1, len(self.lines[p - 1]) + 1))

    def __len__(self) -> int:
        return sum(len(line) for line in self.lines)

    def label(self, v: Event) -> Action:
        return self.lines[v[0] - 1][v[1] - 1]

    def process(self, v: Event) -> int:
        return v[0]

    def first(self, p: int) -> Event:
        return (p, 1)

    def proc_succ(self, v: Event) -> Event | None:
        p, i = v
        return (p, i + 1) if i < len(self.lines[p - 1]) else None

    def proc_pred(self, v: Event) -> Event | None:
        p, i = v
        return (p, i - 1) if i > 1 else None

    @cached_property
    def _matching(self) -> dict[Event, Event]:
        pending: dict[tuple[int, int], list[Event]] = {}
        order: dict[tuple[int, int], list[Event]] = {}
        for v in self.events:
            a = self.label(v)
            (pending if a.is_send else order).setdefault(a.channel, []).append(v)
        match = {}
        for ch, sends in pending.items():
            for s, r in zip(sends, order.get(ch, [])):
                match[s] = r
                match[r] = s
        return match

    def msg_partner(self, v: Event) -> Event:
        return self._matching[v]

    def msg_succ(self, v: Event) -> Event | None:
        return self._matching[v] if self.label(v).is_send else None

    def msg_pred(self, v: Event) -> Event | None:
        return None if self.label(v).is_send else self._matching[v]

    @cached_property
    def messages(self) -> tuple[tuple[Event, Event], ...]:
        return tuple(sorted((v, w) for v, w in self._matching.items() if self.label(v).is_send))

    def step(self, v: Event, d: Direction) -> Event | None:
        """The unique event ``w`` with ``eta(v, w) == d``, if any."""
        if d is Direction.ID:
            return v
        if d is Direction.PROC:
            return self.proc_succ(v)
        if d is Direction.PROC_INV:
            return self.proc_pred(v)
        if d is Direction.MSG:
            return self.msg_succ(v)
        return self.msg_pred(v)

    # -- linearizations --------------------------------------------------
    def _predecessors(self, v: Event) -> list[Event]:
        preds = []
        if v[1] > 1:
            preds.append((v[0], v[1] - 1))
        if not self.label(v).is_send:
            preds.append(self._matching[v])
        return preds

    def some_linearization(self) -> tuple[Event, ...] | None:
        if len(self._matching) != len(self):
            return None
        pos = [0] * self.procs
        out: list[Event] = []
        done: set[Event] = set()
        total = len(self)
        while len(out) < total:
            for p in range(1, self.procs + 1):
                i = pos[p - 1]
                if i < len(self.lines[p - 1]):
                    v = (p, i + 1)
                    if all(w in done for w in self._predecessors(v)):
                        out.append(v)
                        done.add(v)
                        pos[p - 1] += 1
                        break
            else:
                return None
        return tuple(out)

    @property
    def word(self) -> tuple[Action, ...]:
        return tuple(self.label(v) for v in self.some_linearization())

    def __str__(self) -> str:
        return " ".join(map(str, self.word))


@dataclass(frozen=True)
class PointedMsc:
    msc: Msc
    focus: Event

    def __post_init__(self):
        if self.focus not in self.msc.events:
            raise MscError(f"{self.focus} is not an event")


@dataclass(frozen=True)
class Linearization:
    """A linear arrangement of the events of an MSC."""

    msc: Msc
    order: tuple[Event, ...] = field()

    @property
    def word(self) -> tuple[Action, ...]:
        return tuple(self.msc.label(v) for v in self.order)


def msc_from_word(word: Iterable[Action], procs: int) -> Msc:
    """Build the MSC induced by a word, checking FIFO matching on the way."""
    word = list(word)
    if procs < 2:
        raise MscError("at least two processes are required")
    queues: Counter = Counter()
    lines: list[list[Action]] = [[] for _ in range(procs)]
    for pos, a in enumerate(word):
        if not (1 <= a.owner <= procs and 1 <= a.peer <= procs):
            raise BadPeer(f"action {a} at position {pos} names an unknown process")
        if a.is_send:
            queues[a.channel] += 1
        else:
            if queues[a.channel] == 0:
                raise UnmatchedReceive(f"receive {a} at position {pos} has no pending send")
            queues[a.channel] -= 1
        lines[a.owner - 1].append(a)
    pending = [ch for ch, n in queues.items() if n]
    if pending:
        raise PendingSend(f"messages still in transit on {sorted(pending)}")
    for p, line in enumerate(lines, start=1):
        if not line:
            raise EmptyProcess(f"process {p} has no event")
    return Msc(procs, tuple(tuple(line) for line in lines))


def eta(m: Msc, v: Event, w: Event) -> Direction | None:
    """Direction leading from ``v`` to ``w`` in one step, or ``None``."""
    for d in (Direction.ID, Direction.PROC, Direction.PROC_INV, Direction.MSG, Direction.MSG_INV):
        if m.step(v, d) == w:
            return d
    return None


def is_b_bounded(word: Sequence[Action], bound: int) -> bool:
    """Every prefix keeps at most ``bound`` messages in each channel."""
    load: Counter = Counter()
    for a in word:
        load[a.channel] += 1 if a.is_send else -1
        if load[a.channel] > bound:
            return False
    return True


def linearizations(m: Msc) -> Iterator[Linearization]:
    """All linearizations of ``m`` in a deterministic order."""
    pos = [0] * m.procs
    done: set[Event] = set()
    out: list[Event] = []

    def rec():
        if len(out) == len(m):
            yield Linearization(m, tuple(out))
            return
        for p in range(1, m.procs + 1):
            i = pos[p - 1]
            if i >= len(m.lines[p - 1]):
                continue
            v = (p, i + 1)
            if all(w in done for w in m._predecessors(v)):
                pos[p - 1] += 1
                done.add(v)
                out.append(v)
                yield from rec()
                out.pop()
                done.discard(v)
                pos[p - 1] -= 1

    yield from rec()


def is_existentially_b_bounded(m: Msc, bound: int) -> tuple[bool, Linearization | None]:
    """Search for a ``bound``-bounded linearization; returns it as witness."""
    failed: set[tuple[int, ...]] = set()

    def load_after(pos: tuple[int, ...]) -> Counter:
        load: Counter = Counter()
        for p in range(1, m.procs + 1):
            for a in m.lines[p - 1][: pos[p - 1]]:
                load[a.channel] += 1 if a.is_send else -1
        return load

    def rec(pos: tuple[int, ...], out: list[Event]) -> bool:
        if len(out) == len(m):
            return True
        if pos in failed:
            return False
        load = load_after(pos)
        for p in range(1, m.procs + 1):
            i = pos[p - 1]
            if i >= len(m.lines[p - 1]):
                continue
            v = (p, i + 1)
            a = m.label(v)
            if not a.is_send:
                src = m.msg_partner(v)
                if pos[src[0] - 1] < src[1]:
                    continue
            elif load[a.channel] + 1 > bound:
                continue
            out.append(v)
            if rec(pos[: p - 1] + (i + 1,) + pos[p:], out):
                return True
            out.pop()
        failed.add(pos)
        return False

    out: list[Event] = []
    if rec(tuple([0] * m.procs), out):
        return True, Linearization(m, tuple(out))
    return False, None


Letter = tuple[Action, int]


def encode_wb(word: Sequence[Action], bound: int) -> tuple[Letter, ...]:
    """Attach to each action its occurrence count modulo ``bound``."""
    if bound < 1 or not is_b_bounded(word, bound):
        raise NotBBounded(f"word is not {bound}-bounded")
    seen: Counter = Counter()
    out = []
    for a in word:
        out.append((a, seen[a] % bound))
        seen[a] += 1
    return tuple(out)


def decode_wb(letters: Sequence[Letter]) -> tuple[Action, ...]:
    return tuple(a for a, _ in letters)


def enumerate_mscs(procs: int, max_events: int) -> Iterator[Msc]:
    """Every MSC with at most ``max_events`` events, each exactly once.

    MSCs are produced in order of size, then in the order in which a
    depth-first walk over words (actions in alphabet order) first meets them.
    """
    sigma = alphabet(procs)
    seen: set[Msc] = set()
    for n in range(2, max_events + 1, 2):
        batch: list[Msc] = []
        load: Counter = Counter()
        word: list[Action] = []

        def rec():
            if len(word) == n:
                if not any(load.values()):
                    try:
                        m = msc_from_word(word, procs)
                    except EmptyProcess:
                        return
                    if m not in seen:
                        seen.add(m)
                        batch.append(m)
                return
            left = n - len(word)
            if sum(load.values()) > left:
                return
            for a in sigma:
                ch = a.channel
                if not a.is_send and load[ch] == 0:
                    continue
                load[ch] += 1 if a.is_send else -1
                word.append(a)
                rec()
                word.pop()
                load[ch] -= 1 if a.is_send else -1

        rec()
        yield from batch
