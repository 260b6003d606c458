"""Acceptance criteria, one PASS/FAIL line each.

Run with pytest (the lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

import itertools
import os
import random
import sys
import time

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from crpdl import cfm  # noqa: E402
from crpdl import logic as L  # noqa: E402
from crpdl import msca  # noqa: E402
from crpdl import word_automata as wa  # noqa: E402
from crpdl.corpus import GLOBAL_CORPUS, LOCAL_CORPUS  # noqa: E402
from crpdl.msc import (PointedMsc, encode_wb, enumerate_mscs, is_b_bounded,  # noqa: E402
                       linearizations, parse_word, read_msc_file)
from crpdl.translate import translate_global, translate_local  # noqa: E402

from conftest import CHART, PINGPONG  # noqa: E402

RESULTS: list = []


def report(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    RESULTS.append(line)
    print(line)
    return ok


def timed(fn):
    t0 = time.monotonic()
    value = fn()
    return value, time.monotonic() - t0


# ---------------------------------------------------------------- criteria

def criterion_1():
    def work():
        m = read_msc_file(CHART, 2)
        beta = L.beta(1)
        by_oracle = [v for v in m.events if L.eval_local(m, v, beta)]
        by_automaton = sorted(msca.accepting_events(translate_local(beta), m))
        return len(m), by_oracle, by_automaton
    (n, oracle, automaton), secs = timed(work)
    want = [(1, 1), (1, 2), (1, 3)]
    ok = n == 12 and oracle == automaton == want and secs < 1
    return report(1, ok, f"the chart has {n} events, beta_1 true at {oracle} (oracle) "
                         f"and {automaton} (automaton), {secs:.2f}s")


def criterion_2():
    def letters(text):
        return tuple((parse_word(a)[0], int(i)) for a, i in
                     (x.strip("()").split(",") for x in text.split(")(")))
    w = parse_word("1!2 1!2 1!2 2?1 2!1 2?1 2!1 2?1 2!1 1?2 1?2 1?2")
    w_prime = parse_word("1!2 2?1 1!2 2!1 2?1 1!2 1?2 2!1 2?1 1?2 2!1 1?2")
    (got3, got2), secs = timed(lambda: (encode_wb(w, 3), encode_wb(w_prime, 2)))
    ok3 = got3 == letters("(1!2,0)(1!2,1)(1!2,2)(2?1,0)(2!1,0)(2?1,1)(2!1,1)(2?1,2)"
                          "(2!1,2)(1?2,0)(1?2,1)(1?2,2)")
    ok2 = got2 == letters("(1!2,0)(2?1,0)(1!2,1)(2!1,0)(2?1,1)(1!2,0)(1?2,0)(2!1,1)"
                          "(2?1,0)(1?2,1)(2!1,0)(1?2,0)")
    return report(2, ok3 and ok2 and secs < 1, f"sequential word, B=3 {'exact' if ok3 else 'differs'}, "
                                               f"interleaved word, B=2 {'exact' if ok2 else 'differs'}, {secs:.3f}s")


MSCS6 = [m for m in enumerate_mscs(2, 6)]


def criterion_3():
    def work():
        bad = checks = 0
        for text in LOCAL_CORPUS:
            a = translate_local(L.parse_local(text))
            d = msca.dualize(a)
            for m in MSCS6:
                acc, dual = msca.accepting_events(a, m), msca.accepting_events(d, m)
                for v in m.events:
                    checks += 1
                    bad += (v in acc) == (v in dual)
        return bad, checks
    (bad, checks), secs = timed(work)
    return report(3, bad == 0 and secs < 300,
                  f"{len(LOCAL_CORPUS)} formulas x {len(MSCS6)} MSCs, {checks} events, "
                  f"{bad} XOR violations, {secs:.1f}s")


def criterion_4():
    def work():
        bad = over = 0
        for text in LOCAL_CORPUS:
            alpha = L.parse_local(text)
            a = translate_local(alpha)
            over += len(a.states) > 2 * L.size(alpha) + 2
            for m in MSCS6:
                bad += msca.accepting_events(a, m) != L.sat_set(m, alpha)
        return bad, over
    (bad, over), secs = timed(work)
    return report(4, bad == 0 and over == 0 and secs < 300,
                  f"{bad} disagreeing (formula, MSC) pairs, {over} formulas above "
                  f"2*size+2 states, {secs:.1f}s")


def criterion_5():
    mscs = [m for m in enumerate_mscs(2, 4)]
    path_formulas = []
    for text in LOCAL_CORPUS:
        a = L.parse_local(text)
        if isinstance(a, L.Path):
            a = L.normalize_path(a)
            if a not in path_formulas:
                path_formulas.append(a)

    def work():
        runs = bad = 0
        for alpha in path_formulas:
            a = translate_local(alpha)
            for m in mscs:
                for v in msca.accepting_events(a, m):
                    rho = msca.extract_run(a, PointedMsc(m, v))
                    runs += 1
                    hits = [w for s, w in rho.nodes if s == a.concat]
                    if msca.count_labelled(rho, a.concat) != 1 or \
                            hits[0] not in L.reach(m, v, alpha.path):
                        bad += 1
        return runs, bad
    (runs, bad), secs = timed(work)
    return report(5, bad == 0 and runs > 0 and secs < 120,
                  f"{len(path_formulas)} path formulas, {runs} accepting runs, "
                  f"{bad} violations, {secs:.1f}s")


def criterion_6():
    mscs = [m for k in range(1, 5) for m in enumerate_mscs(2, k)]

    def work():
        words = bad = 0
        for text in GLOBAL_CORPUS:
            phi = L.parse_global(text)
            g = translate_global(phi, 2)
            for bound in (1, 2):
                p = wa.msca_to_2apa(g, bound, 2)
                nba = wa.alternation_eliminate(wa.apa_to_aba(p))
                for m in mscs:
                    want = msca.accepts_global(g, m)
                    if want != L.eval_global(m, phi):
                        bad += 1
                    for lin in linearizations(m):
                        if not is_b_bounded(lin.word, bound):
                            continue
                        w = encode_wb(lin.word, bound)
                        words += 1
                        if not (want == wa.word_membership_2apa(p, w) == wa.ba_accepts(nba, w)):
                            bad += 1
        return words, bad
    (words, bad), secs = timed(work)
    return report(6, bad == 0 and secs < 600,
                  f"{len(GLOBAL_CORPUS)} global formulas, {words} encoded words, "
                  f"{bad} disagreements, {secs:.1f}s")


def criterion_7():
    notes, ok = [], True
    limit = 1_000_000

    v, secs = timed(lambda: cfm.satisfiability(L.parse_global("E 1!2"), 2, 1, limit, 120))
    good = v.sat and v.witness.is_finite and \
        cfm.validate_finite_witness(L.parse_global("E 1!2"), 2, v.witness)
    ok &= good and secs < 120
    notes.append(f"E 1!2 {'SAT finite, validated' if good else 'wrong'} ({secs:.1f}s)")

    v, secs = timed(lambda: cfm.satisfiability(L.parse_global("E (1!2 & ~1!2)"), 2, 1, limit, 120))
    ok &= not v.sat and secs < 120
    notes.append(f"E (1!2 & ~1!2) {'SAT' if v.sat else 'UNSAT'} ({secs:.1f}s)")

    phi = L.parse_global("A <proc*;msg;proc*;msg>P1")
    try:
        v, secs = timed(lambda: cfm.satisfiability(phi, 2, 1, limit, 120))
        lasso = v.sat and not v.witness.is_finite
        ok &= lasso and secs < 120
        notes.append(f"A beta_1 {'SAT lasso' if lasso else 'SAT finite' if v.sat else 'UNSAT'} "
                     f"({v.states} states, {secs:.1f}s)")
    except wa.BudgetExceeded as exc:
        ok = False
        notes.append(f"A beta_1 budget exceeded: {exc}")
    return report(7, ok, "; ".join(notes))


def criterion_8():
    c = cfm.read_cfm_file(PINGPONG)
    lin = cfm.cfm_to_linearization_ba(c, 1)
    v1, s1 = timed(lambda: cfm.model_check(c, L.parse_global("E <msg>tt"), 1))
    good1 = v1.sat and not v1.witness.is_finite and \
        wa.ba_accepts(lin, v1.witness.stem, v1.witness.loop)
    v2, s2 = timed(lambda: cfm.model_check(c, L.parse_global("E (1!2 & <proc>1!2)"), 1))
    ok = good1 and not v2.sat and s1 < 120 and s2 < 120
    return report(8, ok, f"E <msg>tt {'SAT lasso, validated' if good1 else 'wrong'} ({s1:.1f}s); "
                         f"E (1!2 & <proc>1!2) {'SAT' if v2.sat else 'UNSAT'} ({s2:.1f}s)")


def criterion_9(count=200, seed=2024):
    from test_word_automata import random_aba
    rng = random.Random(seed)
    ab = ("a", "b")
    words = [(s, l) for ls in range(4) for s in itertools.product(ab, repeat=ls)
             for ll in range(1, 4) for l in itertools.product(ab, repeat=ll)]

    def work():
        bad = 0
        for _ in range(count):
            b = random_aba(rng)
            nba = wa.alternation_eliminate(b)
            for stem, loop in words:
                bad += wa.ba_accepts(nba, stem, loop) != wa.lasso_membership_2apa(b, stem, loop)
        return bad
    bad, secs = timed(work)
    return report(9, bad == 0 and secs < 300,
                  f"{count} random 2ABAs x {len(words)} lasso words, {bad} disagreements, "
                  f"{secs:.1f}s")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{k}" for k in range(1, 10)])
def test_criterion(criterion):
    assert criterion()


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
