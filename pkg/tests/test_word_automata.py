import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from crpdl import boolexpr as bx
from crpdl import logic as L
from crpdl import msca
from crpdl import word_automata as wa
from crpdl.msc import Direction, encode_wb, is_existentially_b_bounded, linearizations, parse_word
from crpdl.translate import translate_global
from crpdl.word_automata import ID, NEXT, PREV, wmove

AB = ("a", "b")


def lassos(max_stem=3, max_loop=3, finite=True):
    for ls in range(max_stem + 1):
        for stem in itertools.product(AB, repeat=ls):
            for ll in range(0 if finite else 1, max_loop + 1):
                for loop in itertools.product(AB, repeat=ll):
                    if ls + ll:
                        yield stem, loop


def random_aba(rng, n_max=3):
    def expr(states, depth=2):
        if depth == 0 or rng.random() < 0.4:
            if rng.random() < 0.05:
                return bx.BOT
            return wmove(rng.choice([PREV, NEXT, NEXT, ID]), rng.choice(states))
        op = bx.conj if rng.random() < 0.5 else bx.disj
        return op([expr(states, depth - 1), expr(states, depth - 1)])

    n = rng.randint(1, n_max)
    states = list(range(n))
    delta = {(s, x): expr(states) for s in states for x in AB}
    return wa.TwoWayABA(states, AB, delta, 0, [s for s in states if rng.random() < 0.5])


# ---------------------------------------------------------------- 2APA

def test_letters():
    assert len(wa.letters(2, 1)) == 4 and len(wa.letters(3, 2)) == 24


def test_literal_state_count():
    g = msca.GlobalMsca(msca.two_hop_automaton(1), (("s1", "s1"),))
    assert len(wa.msca_to_2apa(g, 1, 2, literal=True).states) == 41


def test_chart_encoding_accepted(chart):
    g = translate_global(L.parse_global("E <proc*;msg;proc*;msg>P1"), 2)
    p = wa.msca_to_2apa(g, 1, 2)
    ok, lin = is_existentially_b_bounded(chart, 1)
    assert wa.word_membership_2apa(p, encode_wb(lin.word, 1))


def test_receive_in_message_simulation_is_sink():
    table = {"i": [(msca.ANY, msca.move(Direction.MSG, "c"))], "c": []}
    local = msca.LocalMsca(["i", "c"], table, "i", "c", {"i": 1, "c": 0})
    p = wa.msca_to_2apa(msca.GlobalMsca(local, (("i", "i"),)), 1, 2, literal=True)
    send, recv = parse_word("1!2 2?1")
    assert p.delta("i", (recv, 0)) == wmove(ID, wa.SINK)
    assert p.delta("i", (send, 0)) == wmove(NEXT, ("c", recv, 0, "next"))
    assert p.rank[wa.SINK] % 2 == 1


def test_wrong_counters_rejected():
    g = translate_global(L.parse_global("E <msg>tt"), 2)
    p = wa.msca_to_2apa(g, 2, 2)
    s, r = parse_word("1!2 2?1")
    assert wa.word_membership_2apa(p, [(s, 0), (r, 0)])
    assert not wa.word_membership_2apa(p, [(s, 0), (r, 1)])


def test_stuck_even_initial_accepts():
    p = wa.TwoWayAPA([0], AB, {}, 0, {0: 0})
    assert all(wa.word_membership_2apa(p, w) for w in [("a",), ("b", "a")])
    assert not wa.word_membership_2apa(p, ())


def test_literal_construction_rejects_stuck_even_states():
    phi = L.parse_global("A (<msg>tt | <msg->tt)")
    g = translate_global(phi, 2)
    w = encode_wb(parse_word("1!2 2?1"), 1)
    assert wa.word_membership_2apa(wa.msca_to_2apa(g, 1, 2), w)
    assert not wa.word_membership_2apa(wa.msca_to_2apa(g, 1, 2, literal=True), w)


@pytest.mark.parametrize("text", ["E 1!2", "A <proc*;msg;proc*;msg>P1", "A (P1 | <msg->tt)",
                                  "E <msg>tt & A ~<proc;proc>tt"])
def test_word_membership_matches_msc_semantics(text):
    from strategies import SMALL_MSCS
    phi = L.parse_global(text)
    g = translate_global(phi, 2)
    p = wa.msca_to_2apa(g, 1, 2)
    for m in SMALL_MSCS:
        want = L.eval_global(m, phi)
        for lin in linearizations(m):
            try:
                w = encode_wb(lin.word, 1)
            except Exception:
                continue
            assert wa.word_membership_2apa(p, w) == want


# ---------------------------------------------------------------- parity to Büchi

def test_buchi_fast_path():
    d = {(0, "a"): wmove(NEXT, 1), (1, "b"): wmove(NEXT, 0)}
    p = wa.TwoWayAPA([0, 1], AB, d, 0, {0: 1, 1: 0})
    b = wa.apa_to_aba(p)
    assert b.finals == {1}
    assert b.delta(0, "a") == d[(0, "a")]


def test_normalize_ranks_recursive():
    # 0 -> 1 -> 0 with ranks 0 and 5; 1 also loops alone through 1 (rank 5)
    d = {(0, "a"): wmove(NEXT, 1), (1, "a"): wmove(NEXT, 0) | wmove(NEXT, 1)}
    p = wa.TwoWayAPA([0, 1], AB, d, 0, {0: 0, 1: 5})
    assert wa.normalize_ranks(p).rank == {0: 0, 1: 1}


def test_empty_automaton_stays_empty():
    p = wa.TwoWayAPA([0], AB, {}, 0, {0: 1})
    nba = wa.alternation_eliminate(wa.apa_to_aba(p))
    assert isinstance(wa.ba_emptiness(nba), wa.Empty)


def test_three_priorities_preserved():
    d = {(0, "a"): wmove(NEXT, 0) & wmove(NEXT, 1), (0, "b"): wmove(NEXT, 0),
         (1, "a"): wmove(NEXT, 1), (1, "b"): wmove(NEXT, 2),
         (2, "a"): wmove(NEXT, 2), (2, "b"): wmove(NEXT, 1)}
    p = wa.TwoWayAPA([0, 1, 2], AB, d, 0, {0: 1, 1: 2, 2: 1})
    nba = wa.alternation_eliminate(wa.apa_to_aba(p))
    for stem, loop in [((), ("b",)), ((), ("a",)), (("a",), ("b", "a")),
                       (("a",), ("a", "b", "b")), (("b", "a"), ("a",))]:
        assert wa.ba_accepts(nba, stem, loop) == wa.lasso_membership_2apa(p, stem, loop)


# ---------------------------------------------------------------- Büchi toolkit

def explicit(trans, finals, initial=0):
    states = sorted({q for q, _, _ in trans} | {r for _, _, r in trans} | {initial})
    return wa.BuchiAutomaton.explicit(states, trans, initial, finals, alphabet=AB)


INF_A = explicit([(0, "a", 1), (0, "b", 0), (1, "a", 1), (1, "b", 0)], [1])
EMPTY = explicit([], [])
ALL = explicit([(0, "a", 0), (0, "b", 0)], [0])


def test_emptiness_examples():
    assert isinstance(wa.ba_emptiness(explicit([(0, "a", 0)], [])), wa.Empty)
    w = wa.ba_emptiness(explicit([(0, "a", 0)], [0]))
    assert w == wa.LassoWitness((), ()) and w.is_finite
    loop_only = wa.BuchiAutomaton(0, lambda q, x: (0,) if x == "a" else (), AB,
                                  lambda q: False, lambda q: True)
    assert wa.ba_emptiness(loop_only) == wa.LassoWitness((), ("a",))


def test_budget():
    counter = wa.BuchiAutomaton(0, lambda q, x: (q + 1,), AB, lambda q: False, lambda q: False)
    with pytest.raises(wa.BudgetExceeded):
        wa.ba_emptiness(counter, max_states=100)


def test_emptiness_dfs_agrees():
    for a in (INF_A, EMPTY, ALL):
        assert isinstance(wa.ba_emptiness_dfs(a), wa.Empty) == isinstance(wa.ba_emptiness(a), wa.Empty)


def test_intersection():
    words = list(lassos(2, 2))
    b_inf = explicit([(0, "b", 1), (0, "a", 0), (1, "b", 1), (1, "a", 0)], [1])
    both = wa.ba_intersect(INF_A, b_inf)
    for stem, loop in words:
        assert wa.ba_accepts(wa.ba_intersect(INF_A, ALL), stem, loop) == wa.ba_accepts(INF_A, stem, loop)
        assert not wa.ba_accepts(wa.ba_intersect(INF_A, EMPTY), stem, loop)
        want = wa.ba_accepts(INF_A, stem, loop) and wa.ba_accepts(b_inf, stem, loop)
        assert wa.ba_accepts(both, stem, loop) == want
    assert wa.ba_accepts(both, (), ("a", "b"))


def test_complement_examples():
    c = wa.complement_ba(EMPTY)
    assert wa.ba_accepts(c, ()) and wa.ba_accepts(c, ("a", "b")) and wa.ba_accepts(c, (), ("a",))
    co = wa.complement_ba(INF_A)
    assert not wa.ba_accepts(co, (), ("a",))
    assert wa.ba_accepts(co, (), ("b",))
    assert not wa.ba_accepts(co, (), ("a", "b"))


def test_project_and_map():
    pair = explicit([(0, ("a", 1), 0), (0, ("b", 2), 0)], [0])
    pair.alphabet = (("a", 1), ("b", 2))
    proj = wa.ba_project(pair, 0)
    assert wa.ba_accepts(proj, (), ("a", "b"))
    up = wa.ba_map(INF_A, str.upper, str.lower, ("A", "B"))
    assert wa.ba_accepts(up, (), ("A",)) and not wa.ba_accepts(up, (), ("B",))


def nondeterministic(rng):
    n = rng.randint(1, 3)
    trans = [(q, x, r) for q in range(n) for x in AB for r in range(n) if rng.random() < 0.4]
    return explicit(trans, [q for q in range(n) if rng.random() < 0.5])


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_complement_flips_membership(seed):
    a = nondeterministic(random.Random(seed))
    c = wa.complement_ba(a)
    for stem, loop in lassos(2, 2):
        assert wa.ba_accepts(c, stem, loop) != wa.ba_accepts(a, stem, loop)


# ---------------------------------------------------------------- alternation elimination

def test_always_accepting():
    b = wa.TwoWayABA([0], AB, {(0, x): wmove(NEXT, 0) for x in AB}, 0, [0])
    nba = wa.alternation_eliminate(b)
    assert all(wa.ba_accepts(nba, s, l) for s, l in lassos(2, 2))


def test_empty_aba():
    b = wa.TwoWayABA([0], AB, {}, 0, [])
    assert isinstance(wa.ba_emptiness(wa.alternation_eliminate(b)), wa.Empty)


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10_000))
def test_elimination_matches_lasso_oracle(seed):
    b = random_aba(random.Random(seed))
    nba = wa.alternation_eliminate(b)
    for stem, loop in lassos(2, 2):
        assert wa.ba_accepts(nba, stem, loop) == wa.lasso_membership_2apa(b, stem, loop)


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10_000))
def test_finite_words_match_game(seed):
    b = random_aba(random.Random(seed))
    nba = wa.alternation_eliminate(b)
    for n in range(4):
        for w in itertools.product(AB, repeat=n):
            assert wa.ba_accepts(nba, w) == wa.word_membership_2apa(b, w)


def test_function_route_forward_automaton():
    b = wa.TwoWayABA([0], AB, {(0, x): wmove(NEXT, 0) for x in AB}, 0, [0])
    route = wa.function_route_ba(b)
    for stem, loop in [((), ("a",)), (("a",), ("b",))]:
        assert wa.ba_accepts(route, stem, loop)


def test_function_route_accepts_too_much():
    # state 1 dies on b, yet the route accepts: the function automaton's
    # final set cannot refute an annotation that walks right through finals
    d = {(0, "a"): wmove(NEXT, 0) & wmove(NEXT, 1), (0, "b"): wmove(NEXT, 0),
         (1, "a"): wmove(NEXT, 1), (1, "b"): bx.BOT}
    b = wa.TwoWayABA([0, 1], AB, d, 0, [0])
    route, direct = wa.function_route_ba(b), wa.alternation_eliminate(b)
    assert not wa.word_membership_2apa(b, ("a", "b"))
    assert not wa.ba_accepts(direct, ("a", "b"))
    assert wa.ba_accepts(route, ("a", "b"))
    assert wa.ba_accepts(route, (), ("b",)) == wa.ba_accepts(direct, (), ("b",)) is True


# ---------------------------------------------------------------- combination

P = wa.TwoWayAPA([0, 1], AB, {(0, "a"): wmove(NEXT, 1), (1, "a"): wmove(NEXT, 1),
                             (1, "b"): wmove(NEXT, 1)}, 0, {0: 1, 1: 0})
NOTHING = wa.TwoWayAPA([0], AB, {}, 0, {0: 1})
NOT_P = wa.TwoWayAPA([0, 1], AB, {(0, "a"): wmove(NEXT, 1), (0, "b"): wmove(ID, 2),
                                 (1, "a"): wmove(NEXT, 1), (1, "b"): wmove(NEXT, 1)},
                     0, {0: 0, 1: 1})


def test_apa_combine():
    words = [w for n in range(1, 5) for w in itertools.product(AB, repeat=n)]
    one = wa.apa_combine([P], bx.Atom(0))
    either = wa.apa_combine([P, NOTHING], bx.Atom(0) | bx.Atom(1))
    for w in words:
        want = wa.word_membership_2apa(P, w)
        assert wa.word_membership_2apa(one, w) == want
        assert wa.word_membership_2apa(either, w) == want
    with pytest.raises(ValueError):
        wa.apa_combine([P, wa.TwoWayAPA([0], ("c",), {}, 0, {0: 0})], bx.Atom(0))


def test_dump_is_deterministic():
    assert wa.dump_2way(P) == wa.dump_2way(P)
    assert wa.dump_ba(INF_A) == wa.dump_ba(INF_A)
