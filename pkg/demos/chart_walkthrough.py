"""
Two message hops on the twelve-event chart
====================================

Reads the 12-event chart, evaluates beta_1 by brute force and with its
automaton, prints an accepting run and the bounded encodings.
"""

import os

from crpdl import logic as L, msca
from crpdl.msc import PointedMsc, encode_wb, is_existentially_b_bounded, read_msc_file
from crpdl.translate import translate_local

here = os.path.dirname(os.path.abspath(__file__))
m = read_msc_file(os.path.join(here, os.pardir, "src", "crpdl", "data", "chart12.msc"), 2)
print("chart:", m)

# beta_1: some proc*;msg;proc*;msg walk ends on process 1
beta = L.beta(1)
print("formula:", beta)
print("true at (oracle):", [v for v in m.events if L.eval_local(m, v, beta)])

a = translate_local(beta)
print(f"automaton: {len(a.states)} states")
print("true at (automaton):", sorted(msca.accepting_events(a, m)))

# the run from the first event; exactly one node carries the concat state
rho = msca.extract_run(a, PointedMsc(m, (1, 1)))
for k, (state, event) in enumerate(rho.nodes):
    print(f"  {k:2}: {state:<14} at {event} -> {rho.children.get(k, [])}")

ok, lin = is_existentially_b_bounded(m, 1)
print("1-bounded linearization:", " ".join(map(str, lin.word)))
print("encoded with B=2:", " ".join(f"{a}#{i}" for a, i in encode_wb(lin.word, 2)[:6]), "...")
