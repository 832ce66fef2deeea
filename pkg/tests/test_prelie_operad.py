import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gammaprelie.coeffring import Element
from gammaprelie.prelie_operad import (
    compose_labelled,
    compose_partial,
    compose_sequential,
    compose_total,
    left_comb,
    prelie_bracket,
)
from gammaprelie.trees import LabelledTree, corolla_labelled, enumerate_labelled, germ, leaf, parse_tree
from strategies import trees_up_to

small_trees = trees_up_to(4)


def T(s):
    return parse_tree(s)


def test_germ_into_corolla():
    out = compose_labelled(germ(), 1, corolla_labelled(2))
    assert out == Element({T("1[2,3,4]"): 1, T("1[2,3[4]]"): 1, T("1[2[4],3]"): 1})


def test_compose_into_leaf_keeps_the_edge():
    assert compose_labelled(germ(), 2, corolla_labelled(2)) == Element({T("1[2[3,4]]"): 1})


def test_decorated_partial_composition():
    out = compose_partial(T("a[b]"), 0, T("c[d,e]"))
    assert out == Element({T("c[b,d,e]"): 1, T("c[d,e[b]]"): 1, T("c[d[b],e]"): 1})


def test_partial_composition_at_a_leaf():
    assert compose_partial(T("a[b,c]"), 1, T("u[v]")) == Element({T("a[c,u[v]]"): 1})
    with pytest.raises(IndexError):
        compose_partial(T("a"), 1, T("b"))


def test_bracket_grafts_on_every_vertex():
    assert prelie_bracket(T("x[y]"), leaf("z")) == Element({T("x[y,z]"): 1, T("x[y[z]]"): 1})


def test_left_comb_small():
    assert left_comb("x", "y", 2) == Element({T("x[y,y]"): 1, T("x[y[y]]"): 1})
    assert left_comb("x", "y", 3) == Element(
        {T("x[y,y,y]"): 1, T("x[y,y[y]]"): 3, T("x[y[y,y]]"): 1, T("x[y[y[y]]]"): 1}
    )


def test_arity_mismatch():
    with pytest.raises(ValueError):
        compose_total(germ(), [leaf("x")])


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(enumerate_labelled(3)), st.lists(small_trees, min_size=3, max_size=3),
       st.permutations([1, 2, 3]))
def test_total_composition_is_order_independent(outer, args, order):
    assert compose_total(outer, args) == compose_sequential(outer, args, order)


@given(st.sampled_from(enumerate_labelled(3)), st.lists(small_trees, min_size=3, max_size=3))
def test_composite_count_is_product_of_target_sizes(outer, args):
    expected = 1
    for j in range(1, 4):
        p = outer.parent(j)
        if p:
            expected *= args[p - 1].size
    assert sum(compose_total(outer, args).values()) == expected


@settings(max_examples=40, deadline=None)
@given(small_trees, small_trees, small_trees)
def test_bracket_is_right_symmetric(a, b, c):
    # the associator {{a,b},c} - {a,{b,c}} is symmetric in b and c
    def assoc(u, v, w):
        return prelie_bracket(prelie_bracket(u, v), w) - prelie_bracket(u, prelie_bracket(v, w))

    assert assoc(a, b, c) == assoc(a, c, b)


@pytest.mark.parametrize("tau", enumerate_labelled(3))
def test_labelled_composition_equivariance_sizes(tau):
    for i, ups in itertools.product(range(1, 4), enumerate_labelled(2)):
        out = compose_labelled(tau, i, ups)
        assert sum(out.values()) == 2 ** len(tau.incoming(i))
        assert all(t.size == 4 for t in out)


def test_sequential_composition_is_multilinear():
    a = Element({T("x[y]"): 2, T("y"): -1})
    assert compose_total(germ(), [a, leaf("z")]) == compose_sequential(germ(), [a, leaf("z")])
    assert compose_total(germ(), [a, leaf("z")]) == (
        prelie_bracket(T("x[y]"), leaf("z")).scale(2) - prelie_bracket(leaf("y"), leaf("z"))
    )


def test_labelled_outer_must_be_valid():
    with pytest.raises(ValueError):
        LabelledTree((1, 0, 0))
