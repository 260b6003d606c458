"""Command line driver.

Exit codes: 0 for true/SAT, 1 for false/UNSAT, 2 for errors and 3 when a
state or time budget runs out.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import cfm as cfm_mod
from . import msca
from . import word_automata as wa
from .corpus import GLOBAL_CORPUS, LOCAL_CORPUS
from .logic import FormulaSyntaxError as LogicError, eval_global, eval_local, parse_global, parse_local
from .msc import MscError, PointedMsc, enumerate_mscs, parse_word, msc_from_word
from .translate import translate_global, translate_local

EXIT_TRUE, EXIT_FALSE, EXIT_ERROR, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read_msc(path: str, procs: int):
    with open(path, encoding="utf-8") as fh:
        return msc_from_word(parse_word(fh.read()), procs)


def _event(text: str):
    try:
        p, i = (int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"event must look like P,I (got {text!r})") from None
    return (p, i)


def _is_global(text: str) -> bool:
    head = text.lstrip()[:1]
    return head in ("E", "A") or (head == "(" and _try_global(text))


def _try_global(text: str) -> bool:
    try:
        parse_global(text)
        return True
    except LogicError:
        return False


def _word(letters) -> str:
    return " ".join(f"{a}#{i}" for a, i in letters)


def _report_witness(out, w: wa.LassoWitness):
    if w.is_finite:
        out.write("witness finite\n")
        out.write(f"word {_word(w.stem)}\n")
    else:
        out.write("witness lasso\n")
        out.write(f"stem {_word(w.stem)}\n")
        out.write(f"loop {_word(w.loop)}\n")


def cmd_eval(args, out) -> int:
    m = _read_msc(args.msc, args.procs)
    if _is_global(args.formula):
        val = eval_global(m, parse_global(args.formula))
        out.write(f"{str(val).lower()}\n")
        return EXIT_TRUE if val else EXIT_FALSE
    alpha = parse_local(args.formula)
    if args.all_events:
        any_true = False
        for v in m.events:
            val = eval_local(m, v, alpha)
            any_true |= val
            out.write(f"{v[0]},{v[1]} {m.label(v)} {str(val).lower()}\n")
        return EXIT_TRUE if any_true else EXIT_FALSE
    if args.event is None:
        raise UsageError("a local formula needs --event or --all-events")
    val = eval_local(m, _event(args.event), alpha)
    out.write(f"{str(val).lower()}\n")
    return EXIT_TRUE if val else EXIT_FALSE


def cmd_member(args, out) -> int:
    m = _read_msc(args.msc, args.procs)
    alpha = parse_local(args.formula)
    a = translate_local(alpha)
    if args.negate:
        a = msca.dualize(a)
    v = _event(args.event)
    pm = PointedMsc(m, v)
    val = msca.accepts_pointed(a, pm)
    out.write(f"{'accepted' if val else 'rejected'}\n")
    if args.both:
        expected = eval_local(m, v, alpha) != args.negate
        out.write(f"oracle {str(expected).lower()}\n")
        if expected != val:
            out.write("DISAGREEMENT\n")
            return EXIT_ERROR
    if val:
        rho = msca.extract_run(a, pm)
        out.write(f"run {len(rho.nodes)} nodes\n")
        for x, (s, w) in enumerate(rho.nodes):
            kids = " ".join(str(k) for k in rho.children.get(x, ()))
            out.write(f"  {x}: {s} @ {w[0]},{w[1]} -> [{kids}]\n")
    return EXIT_TRUE if val else EXIT_FALSE


def cmd_translate(args, out) -> int:
    if _is_global(args.formula):
        g = translate_global(parse_global(args.formula), args.procs)
        out.write(msca.dump(g.local))
        for tup in g.initials:
            out.write(f"initial ({', '.join(tup)})\n")
    else:
        out.write(msca.dump(translate_local(parse_local(args.formula))))
    return EXIT_TRUE


def _dump_stages(directory: str, stages: dict):
    os.makedirs(directory, exist_ok=True)
    for name, obj in stages.items():
        path = os.path.join(directory, f"{name}.txt")
        with open(path, "w", encoding="utf-8") as fh:
            if isinstance(obj, msca.GlobalMsca):
                fh.write(msca.dump(obj.local))
                for tup in obj.initials:
                    fh.write(f"initial ({', '.join(tup)})\n")
            elif isinstance(obj, wa._TwoWay):
                fh.write(wa.dump_2way(obj))
            elif isinstance(obj, wa.BuchiAutomaton):
                try:
                    fh.write(wa.dump_ba(obj, limit=20_000))
                except wa.BudgetExceeded:
                    fh.write("# too large to dump\n")


def _verdict(args, out, verdict) -> int:
    if verdict.sat:
        out.write("SAT\n")
        _report_witness(out, verdict.witness)
    else:
        out.write("UNSAT\n")
    out.write(f"states {verdict.states}\n")
    if args.dump_stages:
        _dump_stages(args.dump_stages, verdict.stages)
    return EXIT_TRUE if verdict.sat else EXIT_FALSE


def cmd_sat(args, out) -> int:
    phi = parse_global(args.formula)
    v = cfm_mod.satisfiability(phi, args.procs, args.bound, args.max_states, args.timeout)
    return _verdict(args, out, v)


def cmd_mc(args, out) -> int:
    c = cfm_mod.read_cfm_file(args.cfm)
    phi = parse_global(args.formula)
    v = cfm_mod.model_check(c, phi, args.bound, args.max_states, args.timeout)
    return _verdict(args, out, v)


def cmd_enumerate(args, out) -> int:
    for m in enumerate_mscs(args.procs, args.max_events):
        out.write(f"{m}\n")
    return EXIT_TRUE


def cmd_selftest(args, out) -> int:
    """Compare the automata with the semantic evaluator on small MSCs."""
    mscs = [m for m in enumerate_mscs(args.procs, args.max_events)]
    bad = 0
    for text in LOCAL_CORPUS:
        alpha = parse_local(text)
        a = translate_local(alpha)
        for m in mscs:
            acc = msca.accepting_events(a, m)
            for v in m.events:
                if (v in acc) != eval_local(m, v, alpha):
                    bad += 1
    for text in GLOBAL_CORPUS:
        phi = parse_global(text)
        g = translate_global(phi, args.procs)
        for m in mscs:
            if msca.accepts_global(g, m) != eval_global(m, phi):
                bad += 1
    out.write(f"formulas {len(LOCAL_CORPUS) + len(GLOBAL_CORPUS)} mscs {len(mscs)} "
              f"disagreements {bad}\n")
    return EXIT_TRUE if bad == 0 else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="crpdl", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, bound=False):
        p.add_argument("--procs", type=int, default=2, help="number of processes (default 2)")
        if bound:
            p.add_argument("--bound", type=int, default=1, help="channel bound B (default 1)")
            p.add_argument("--max-states", type=int, default=1_000_000)
            p.add_argument("--timeout", type=float, default=None, help="seconds")
            p.add_argument("--dump-stages", metavar="DIR", default=None,
                           help="write every pipeline stage into DIR")

    p = sub.add_parser("eval", help="evaluate a formula on an MSC file")
    p.add_argument("msc")
    p.add_argument("formula")
    p.add_argument("--event", help="event as P,I")
    p.add_argument("--all-events", action="store_true")
    common(p)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("member", help="run the local MSC automaton of a formula")
    p.add_argument("msc")
    p.add_argument("formula")
    p.add_argument("--event", required=True, help="event as P,I")
    p.add_argument("--both", action="store_true", help="also run the evaluator and compare")
    p.add_argument("--negate", action="store_true", help="use the dual automaton")
    common(p)
    p.set_defaults(fn=cmd_member)

    p = sub.add_parser("translate", help="print the MSC automaton of a formula")
    p.add_argument("formula")
    common(p)
    p.set_defaults(fn=cmd_translate)

    p = sub.add_parser("sat", help="bounded satisfiability")
    p.add_argument("formula")
    common(p, bound=True)
    p.set_defaults(fn=cmd_sat)

    p = sub.add_parser("mc", help="bounded model checking of a CFM")
    p.add_argument("cfm")
    p.add_argument("formula")
    common(p, bound=True)
    p.set_defaults(fn=cmd_mc)

    p = sub.add_parser("enumerate", help="list all MSCs up to a size")
    p.add_argument("--max-events", type=int, default=4)
    common(p)
    p.set_defaults(fn=cmd_enumerate)

    p = sub.add_parser("selftest", help="automata versus evaluator on small MSCs")
    p.add_argument("--max-events", type=int, default=4)
    common(p)
    p.set_defaults(fn=cmd_selftest)
    return ap


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_TRUE
    if getattr(args, "procs", 2) < 2:
        sys.stderr.write("error: at least two processes are required\n")
        return EXIT_ERROR
    if getattr(args, "bound", 1) < 1:
        sys.stderr.write("error: the bound must be positive\n")
        return EXIT_ERROR
    try:
        return args.fn(args, out)
    except wa.BudgetExceeded as exc:
        out.write(f"BUDGET {exc}\n")
        return EXIT_BUDGET
    except (LogicError, MscError, cfm_mod.CfmError, UsageError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
