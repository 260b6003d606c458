"""
Model checking the ping-pong machine
====================================
"""

import os

from crpdl import cfm
from crpdl.logic import parse_global

here = os.path.dirname(os.path.abspath(__file__))
c = cfm.read_cfm_file(os.path.join(here, os.pardir, "src", "crpdl", "data", "pingpong.cfm"))
for p, ts in c.transitions.items():
    print(f"process {p}:", "; ".join(map(str, ts)))

for text in ["E <msg>tt", "E (1!2 & <proc>1!2)", "A (1!2 | <proc->1!2 | <proc>tt)"]:
    v = cfm.model_check(c, parse_global(text), 1)
    if v.sat:
        loop = " ".join(str(a) for a, _ in v.witness.loop)
        print(f"{text:34} behaviour found, loop {loop}")
    else:
        print(f"{text:34} no behaviour")
