import pytest
from hypothesis import given, settings, strategies as st

from crpdl import logic as L
from crpdl.corpus import GLOBAL_CORPUS, LOCAL_CORPUS
from crpdl.msc import Direction, parse_action

from strategies import SMALL_MSCS, global_formulas, local_formulas


def test_parse_simple_path():
    assert L.parse_local("<proc>tt") == L.Path(L.Dir(Direction.PROC), L.TT())


def test_parse_beta():
    assert L.parse_local("<proc*;msg;proc*;msg>P2") == L.beta(2)


def test_syntax_error_offset():
    with pytest.raises(L.FormulaSyntaxError) as info:
        L.parse_local("<proc;")
    assert info.value.offset == 6


@pytest.mark.parametrize("text", ["", "E", "<>tt", "1!", "E 1!2 &", "P", "~", "(tt"])
def test_malformed(text):
    with pytest.raises(L.FormulaSyntaxError):
        L.parse_global(text) if text.startswith("E") else L.parse_local(text)


def test_beta_one_on_chart(chart):
    truth = [v for v in chart.events if L.eval_local(chart, v, L.beta(1))]
    assert truth == [(1, 1), (1, 2), (1, 3)]


def test_reach_examples(chart):
    assert L.reach(chart, (1, 1), L.Test(L.TT())) == {(1, 1)}
    assert L.reach(chart, (1, 1), L.Dir(Direction.MSG)) == {(2, 1)}
    everywhere = L.parse_path("(proc+msg+proc-+msg-)*")
    for v in chart.events:
        assert L.reach(chart, v, everywhere) == set(chart.events)


def test_repeat_examples(chart):
    assert not any(L.eval_local(chart, v, L.parse_local("<proc>^w")) for v in chart.events)
    back_and_forth = L.parse_local("<proc;proc->^w")
    for v in chart.events:
        assert L.eval_local(chart, v, back_and_forth) == (chart.proc_succ(v) is not None)


def test_global_examples(chart):
    assert L.eval_global(chart, L.parse_global("E <proc*;msg;proc*;msg>P1"))
    assert not L.eval_global(chart, L.parse_global("A <proc*;msg;proc*;msg>P1"))
    assert not L.eval_global(chart, L.parse_global("E (1!2 & ~1!2)"))


def test_normalize_examples():
    assert L.normalize_path(L.parse_local("<proc>1!2")) == L.parse_local("<proc;{1!2}>tt")
    assert L.normalize_path(L.parse_local("<proc>tt")) == L.parse_local("<proc>tt")
    assert L.normalize_path(L.beta(2)) == L.parse_local("<proc*;msg;proc*;msg;{P2}>tt")


def test_corpus_parses():
    assert len(LOCAL_CORPUS) == 25
    for text in LOCAL_CORPUS:
        assert L.parse_local(str(L.parse_local(text))) == L.parse_local(text)
    for text in GLOBAL_CORPUS:
        assert L.parse_global(str(L.parse_global(text))) == L.parse_global(text)


def test_size_counts_symbols():
    assert L.size(L.parse_local("1!2")) == 1
    assert L.size(L.parse_local("<proc>tt")) == 4
    assert L.size(L.parse_local("<proc*>^w")) == 5
    assert L.size(L.parse_local("~1!2")) == 2


@settings(max_examples=150, deadline=None)
@given(local_formulas)
def test_print_parse_round_trip(a):
    assert L.parse_local(str(a)) == a


@settings(max_examples=80, deadline=None)
@given(global_formulas)
def test_global_round_trip(phi):
    assert L.parse_global(str(phi)) == phi


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(SMALL_MSCS), local_formulas)
def test_semantic_laws(m, a):
    sat = L.sat_set(m, a)
    assert L.sat_set(m, L.Not(a)) == frozenset(m.events) - sat
    assert L.sat_set(m, L.normalize_path(a)) == sat
    for v in m.events:
        assert L.eval_local(m, v, L.Proc(v[0]))
        assert L.eval_local(m, v, L.Path(L.Test(a), L.TT())) == (v in sat)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(SMALL_MSCS), local_formulas, st.sampled_from(list(Direction)))
def test_path_and_star(m, a, d):
    step = L.Dir(d)
    star = L.Star(step)
    sat = L.sat_set(m, a)
    for v in m.events:
        assert L.eval_local(m, v, L.Path(step, a)) == bool(L.reach(m, v, step) & sat)
        r = L.reach(m, v, star)
        assert v in r
        for w in r:
            assert L.reach(m, w, step) <= r


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL_MSCS), st.sampled_from(list(map(parse_action, ["1!2", "2?1"]))))
def test_exists_forall_duality(m, act):
    a = L.Atom(act)
    assert L.eval_global(m, L.Exists(a)) != L.eval_global(m, L.Forall(L.Not(a)))
