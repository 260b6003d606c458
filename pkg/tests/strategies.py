"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

from crpdl import logic as L
from crpdl.msc import Direction, alphabet, enumerate_mscs

ACTIONS = alphabet(2)
SMALL_MSCS = [m for m in enumerate_mscs(2, 4)]

_leaf = st.one_of(
    st.sampled_from(ACTIONS).map(L.Atom),
    st.just(L.TT()),
    st.integers(1, 2).map(L.Proc),
)


def _paths(locals_):
    dirs = st.sampled_from(list(Direction)).map(L.Dir)
    return st.recursive(
        st.one_of(dirs, locals_.map(L.Test)),
        lambda sub: st.one_of(
            st.tuples(sub, sub).map(lambda t: L.Seq(*t)),
            st.tuples(sub, sub).map(lambda t: L.Alt(*t)),
            sub.map(L.Star),
        ),
        max_leaves=3,
    )


local_formulas = st.recursive(
    _leaf,
    lambda sub: st.one_of(
        sub.map(L.Not),
        st.tuples(_paths(sub), sub).map(lambda t: L.Path(*t)),
        _paths(sub).map(L.Repeat),
        st.tuples(sub, sub).map(lambda t: L.And(*t)),
        st.tuples(sub, sub).map(lambda t: L.Or(*t)),
    ),
    max_leaves=4,
)

global_formulas = st.recursive(
    st.one_of(local_formulas.map(L.Exists), local_formulas.map(L.Forall)),
    lambda sub: st.one_of(
        st.tuples(sub, sub).map(lambda t: L.GAnd(*t)),
        st.tuples(sub, sub).map(lambda t: L.GOr(*t)),
    ),
    max_leaves=2,
)
