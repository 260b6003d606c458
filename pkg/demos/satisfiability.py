"""
Bounded satisfiability
======================

Each formula goes through MSC automaton -> two-way parity automaton ->
two-way Buchi automaton -> Buchi automaton, and is intersected with the
automaton of well-formed encodings.
"""

from crpdl import cfm, word_automata as wa
from crpdl.logic import parse_global
from crpdl.msc import parse_word


def show(text, procs=2, bound=1):
    v = cfm.satisfiability(parse_global(text), procs, bound)
    if not v.sat:
        print(f"{text:32} UNSAT  ({v.states} product states)")
        return
    w = v.witness
    word = lambda xs: " ".join(f"{a}#{i}" for a, i in xs)
    kind = f"finite: {word(w.stem)}" if w.is_finite else f"lasso: {word(w.stem)} ({word(w.loop)})^w"
    print(f"{text:32} SAT    {kind}")


show("E 1!2")
show("E (1!2 & ~1!2)")
show("E <msg>tt & A ~<proc;proc>tt")
show("A (<msg>tt | <msg->tt)")

# every event reaches process 1 in two message hops: impossible with two
# processes, since two hops from process 2 land on process 2 again
show("A <proc*;msg;proc*;msg>P1")

# with three processes a ten-letter cycle works; the emptiness search is
# too large for a demo, so check the known lasso directly
phi = parse_global("A <proc*;msg;proc*;msg>P1")
loop = [(a, 0) for a in parse_word("1!2 2?1 2!3 3?2 3!1 1?3 3!2 2?3 2!1 1?2")]
print("three processes, known lasso accepted:",
      wa.ba_accepts(cfm.formula_ba(phi, 3, 1), (), loop)
      and wa.ba_accepts(cfm.wellformed_ba(3, 1), (), loop))
