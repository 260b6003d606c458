"""Positive Boolean expressions over an arbitrary hashable atom set."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable, Hashable, Iterable

__all__ = [
    "Expr", "Atom", "And", "Or", "Bot", "BOT", "conj", "disj", "is_model",
    "models", "minimal_models", "dual", "atoms", "substitute", "expr_size",
    "from_models",
]


class Expr:
    """Base class; instances are immutable and hashable."""

    def __and__(self, other: "Expr") -> "Expr":
        return And(self, other)

    def __or__(self, other: "Expr") -> "Expr":
        return Or(self, other)


@dataclass(frozen=True)
class Atom(Expr):
    value: Hashable

    def __str__(self) -> str:
        v = self.value
        if isinstance(v, tuple):
            return "(" + ",".join(map(str, v)) + ")"
        return str(v)


@dataclass(frozen=True)
class And(Expr):
    left: Expr
    right: Expr

    def __str__(self) -> str:
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class Or(Expr):
    left: Expr
    right: Expr

    def __str__(self) -> str:
        return f"({self.left} | {self.right})"


@dataclass(frozen=True)
class Bot(Expr):
    def __str__(self) -> str:
        return "false"


BOT = Bot()


def conj(parts: Iterable[Expr]) -> Expr:
    """Conjunction of ``parts``; the empty conjunction is not expressible."""
    parts = list(parts)
    if not parts:
        raise ValueError("empty conjunction has no positive representation")
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts: Iterable[Expr]) -> Expr:
    """Disjunction of ``parts``; the empty disjunction is ``BOT``."""
    parts = list(parts)
    if not parts:
        return BOT
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def from_models(family: Iterable[Iterable[Hashable]]) -> Expr:
    """Disjunction over the given sets of atoms (each read as a conjunction)."""
    return disj(conj(Atom(x) for x in sorted(m, key=_key)) for m in family)


def is_model(e: Expr, chosen) -> bool:
    if isinstance(e, Atom):
        return e.value in chosen
    if isinstance(e, And):
        return is_model(e.left, chosen) and is_model(e.right, chosen)
    if isinstance(e, Or):
        return is_model(e.left, chosen) or is_model(e.right, chosen)
    return False


@lru_cache(maxsize=None)
def atoms(e: Expr) -> frozenset:
    if isinstance(e, Atom):
        return frozenset([e.value])
    if isinstance(e, (And, Or)):
        return atoms(e.left) | atoms(e.right)
    return frozenset()


def _key(x) -> str:
    return repr(x)


def _minimize(family: set[frozenset]) -> set[frozenset]:
    ordered = sorted(family, key=len)
    kept: list[frozenset] = []
    for m in ordered:
        if not any(k <= m for k in kept):
            kept.append(m)
    return set(kept)


@lru_cache(maxsize=None)
def _minmod(e: Expr) -> frozenset:
    if isinstance(e, Atom):
        return frozenset([frozenset([e.value])])
    if isinstance(e, Or):
        return frozenset(_minimize(set(_minmod(e.left)) | set(_minmod(e.right))))
    if isinstance(e, And):
        left, right = _minmod(e.left), _minmod(e.right)
        return frozenset(_minimize({a | b for a, b in product(left, right)}))
    return frozenset()


def _sort_family(family) -> tuple[frozenset, ...]:
    return tuple(sorted(family, key=lambda m: (len(m), sorted(map(_key, m)))))


def minimal_models(e: Expr) -> tuple[frozenset, ...]:
    """The subset-minimal models of ``e`` in a deterministic order."""
    return _sort_family(_minmod(e))


def models(e: Expr, universe: Iterable[Hashable] | None = None) -> tuple[frozenset, ...]:
    """All models of ``e`` inside ``universe`` (defaults to the atoms of ``e``)."""
    universe = sorted(set(atoms(e) if universe is None else universe), key=_key)
    out = []
    for bits in product((False, True), repeat=len(universe)):
        chosen = frozenset(x for x, b in zip(universe, bits) if b)
        if is_model(e, chosen):
            out.append(chosen)
    return _sort_family(out)


@lru_cache(maxsize=None)
def dual(e: Expr) -> Expr:
    """Swap conjunction and disjunction."""
    if isinstance(e, And):
        return Or(dual(e.left), dual(e.right))
    if isinstance(e, Or):
        return And(dual(e.left), dual(e.right))
    return e


def substitute(e: Expr, f: Callable[[Hashable], Expr]) -> Expr:
    """Replace every atom ``x`` by the expression ``f(x)``."""
    if isinstance(e, Atom):
        return f(e.value)
    if isinstance(e, And):
        return And(substitute(e.left, f), substitute(e.right, f))
    if isinstance(e, Or):
        return Or(substitute(e.left, f), substitute(e.right, f))
    return e


def expr_size(e: Expr) -> int:
    """Number of atoms and connectives (``BOT`` counts zero)."""
    if isinstance(e, Atom):
        return 1
    if isinstance(e, (And, Or)):
        return 1 + expr_size(e.left) + expr_size(e.right)
    return 0
