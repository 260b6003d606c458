import pytest
from hypothesis import given, settings, strategies as st

from crpdl import boolexpr as bx
from crpdl import logic as L
from crpdl import msca
from crpdl.msc import Direction, PointedMsc, enumerate_mscs, parse_word, msc_from_word
from crpdl.msca import ANY, GlobalMsca, LocalMsca, move
from crpdl.translate import translate_local

from strategies import SMALL_MSCS

TWO_HOP = msca.two_hop_automaton(1)
TWO = msc_from_word(parse_word("1!2 2?1"), 2)


def tiny(expr_of, ranks):
    """Automaton ``i -> c`` with ``delta(i, .) = expr_of`` and no moves from c."""
    table = {"i": [(ANY, expr_of)], "c": []}
    return LocalMsca(["i", "c"], table, "i", "c", ranks)


def test_stuck_examples(chart):
    for v in chart.events:
        assert msca.is_stuck(TWO_HOP, chart, v, "s3")
    assert not msca.is_stuck(TWO_HOP, chart, (1, 1), "s1")
    a = tiny(move(Direction.ID, "c"), {"i": 1, "c": 0})
    assert not any(msca.is_stuck(a, chart, v, "i") for v in chart.events)


def test_arena_sizes(chart):
    a = tiny(move(Direction.ID, "c"), {"i": 1, "c": 0})
    assert len(msca.build_game(a, TWO).automaton_positions) == 4
    assert len(msca.build_game(TWO_HOP, chart).automaton_positions) == 36


def test_pathfinder_positions_are_executable_models(chart):
    g = msca.build_game(TWO_HOP, chart)
    for v in chart.events:
        succ = {frozenset(n[2]) for n in g.succ[("A", v, "s1")] if n[0] == "P"}
        assert succ == set(msca.executable_models(TWO_HOP, chart, v, "s1"))


def test_simple_games(chart):
    a = tiny(move(Direction.ID, "c"), {"i": 1, "c": 0})
    assert msca.accepting_events(a, chart) == frozenset(chart.events)
    loop = LocalMsca(["i", "c"], {"i": [(ANY, move(Direction.ID, "i"))], "c": []}, "i", "c",
                     {"i": 1, "c": 1})
    assert msca.accepting_events(loop, chart) == frozenset()
    stuck = LocalMsca(["i", "c"], {}, "i", "c", {"i": 0, "c": 1})
    assert msca.accepting_events(stuck, chart) == frozenset(chart.events)


def test_two_hop_on_chart(chart):
    assert msca.accepting_events(TWO_HOP, chart) == {(1, 1), (1, 2), (1, 3)}
    assert msca.accepts_pointed(TWO_HOP, PointedMsc(chart, (1, 1)))
    assert not msca.accepts_pointed(TWO_HOP, PointedMsc(chart, (1, 6)))


def test_global_examples(chart):
    assert not msca.accepts_global(GlobalMsca(TWO_HOP, ()), chart)
    g = msca.forall_two_hop(1, 2)
    for m in SMALL_MSCS + [chart]:
        want = L.eval_global(m, L.parse_global("A <proc*;msg;proc*;msg>P1"))
        assert msca.accepts_global(g, m) == want
        doubled = GlobalMsca(g.local, g.initials * 2)
        assert msca.accepts_global(doubled, m) == want


def test_dualize_examples():
    d = msca.dualize(TWO_HOP)
    assert set(d.rank.values()) == {1, 2}
    a = d.delta("s1", parse_word("1!2")[0])
    assert a == move(Direction.PROC, "s1") & move(Direction.MSG, "s2")


def test_main_states():
    sigma = translate_local(L.parse_local("1!2"))
    assert msca.main_states(sigma) == {sigma.initial, sigma.concat}
    dead = LocalMsca(["i", "c"], {}, "i", "c", {"i": 1, "c": 0})
    assert msca.main_states(dead) == {"c"}
    test = translate_local(L.parse_local("<{1!2}>tt"))
    assert msca.main_states(test) == {test.initial, test.concat}


def test_extract_and_validate(chart):
    a = tiny(move(Direction.ID, "c"), {"i": 1, "c": 0})
    rho = msca.extract_run(a, PointedMsc(TWO, (1, 1)))
    assert len(rho.nodes) == 2 and msca.validate_run(a, PointedMsc(TWO, (1, 1)), rho)
    with pytest.raises(msca.NotWinning):
        msca.extract_run(TWO_HOP, PointedMsc(chart, (1, 6)))


def test_invalid_runs_are_rejected(chart):
    pm = PointedMsc(chart, (1, 1))
    rho = msca.extract_run(TWO_HOP, pm)
    assert msca.validate_run(TWO_HOP, pm, rho)
    # cut the tree below the root: the root is not stuck
    cut = msca.RunTree(rho.nodes[:1], {}, 0)
    assert not msca.validate_run(TWO_HOP, pm, cut)
    # two siblings with the same label
    extra = len(rho.nodes)
    first = rho.children[0][0]
    children = dict(rho.children)
    children[0] = list(children[0]) + [extra]
    children[extra] = list(rho.children.get(first, ()))
    twin = msca.RunTree(rho.nodes + [rho.nodes[first]], children, 0)
    assert not msca.validate_run(TWO_HOP, pm, twin)


def test_beta_run_has_one_concat_configuration(chart):
    a = translate_local(L.beta(1))
    rho = msca.extract_run(a, PointedMsc(chart, (1, 1)))
    hits = [ev for s, ev in rho.nodes if s == a.concat]
    assert msca.count_labelled(rho, a.concat) == 1
    assert hits[0] in L.reach(chart, (1, 1), L.beta(1).path)


DUAL_CASES = [translate_local(L.parse_local(t)) for t in
              ("1!2", "<proc>tt", "<msg->2!1", "<proc*;msg>P2", "<(proc;proc-)>^w", "~<proc>tt")]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(DUAL_CASES), st.sampled_from(SMALL_MSCS))
def test_dual_is_complement(a, m):
    acc = msca.accepting_events(a, m)
    dual = msca.accepting_events(msca.dualize(a), m)
    assert acc | dual == frozenset(m.events)
    assert not acc & dual


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(DUAL_CASES), st.sampled_from(SMALL_MSCS))
def test_extracted_runs_validate(a, m):
    for v in msca.accepting_events(a, m):
        pm = PointedMsc(m, v)
        assert msca.run_violations(a, pm, msca.extract_run(a, pm)) == []
