from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gammaprelie.coeffring import QQ, ZZ, Element, RingMismatchError, Zmod
from gammaprelie.gamma import (
    GAMMA,
    format_expanded,
    gamma_compose,
    gamma_compose_basis,
    has_p_fold_branch,
    ker_generator_direct,
    ker_generator_reduce,
    ker_trace_predicate,
    kernel_basis,
    lambda_project,
    orb_expand,
    orb_of,
    p_restricted_defect,
    trace,
    trace_inverse,
    two_level_stab,
)
from gammaprelie.trees import corolla_labelled, enumerate_labelled, germ, leaf, parse_tree
from oracles import labelled_tensors, tensor_gamma_compose
from strategies import trees_up_to

T = parse_tree


def G(mapping):
    return Element({T(k): v for k, v in mapping.items()}, ZZ, GAMMA)


def test_orbit_of_a_corolla_has_three_tensors():
    out = orb_expand(T("x[y,y]"))
    assert [(str(lt), w) for lt, w in out] == [
        ("1[2,3]", ("x", "y", "y")),
        ("2[1,3]", ("y", "x", "y")),
        ("3[1,2]", ("y", "y", "x")),
    ]
    assert format_expanded(orb_of(T("x[y,y]"))) == "(1[2,3]<x,y,y> + 2[1,3]<y,x,y> + 3[1,2]<y,y,x>)"


@settings(max_examples=30)
@given(trees_up_to(5))
def test_orbit_expansion_matches_oracle(t):
    assert sorted((lt.parents, w) for lt, w in orb_expand(t)) == labelled_tensors(t)


def test_trace_multiplies_by_stabilizer():
    s = Element({T("x[y,y]"): 1, T("x[y[y]]"): 3})
    assert trace(s) == G({"x[y,y]": 2, "x[y[y]]": 3})
    assert trace(s).to_ring(Zmod(2)) == Element({T("x[y[y]]"): 1}, Zmod(2), GAMMA)


@given(trees_up_to(6))
def test_trace_inverse_over_q(t):
    s = Element({t: 1}, QQ)
    back = trace_inverse(trace(s))
    assert back == s


def test_trace_inverse_needs_q():
    with pytest.raises(RingMismatchError):
        trace_inverse(G({"x[y,y]": 2}))


def test_kernel_predicates_small():
    assert ker_trace_predicate(T("x[y,y]"), 2)
    assert not ker_trace_predicate(T("x[y,y]"), 3)
    assert has_p_fold_branch(T("x[y[z,z]]"), 2)
    assert not has_p_fold_branch(T("x[y[z],y]"), 2)
    assert [str(t) for t in kernel_basis(3, "xy", 2)] == ["x[x,x]", "x[y,y]", "y[x,x]", "y[y,y]"]
    with pytest.raises(ValueError):
        ker_trace_predicate(T("x"), 4)


@pytest.mark.parametrize("a,b,p", [("x[z]", "y", 2), ("x[z,w[u]]", "y", 2), ("x[z[u]]", "y[v]", 3), ("x", "y", 5)])
def test_generator_reduction_matches_direct_composition(a, b, p):
    assert ker_generator_reduce(T(a), T(b), p) == ker_generator_direct(T(a), T(b), p)


@settings(max_examples=25)
@given(trees_up_to(3), trees_up_to(2), st.sampled_from([2, 3]))
def test_generator_reduction_property(a, b, p):
    assert ker_generator_reduce(a, b, p) == ker_generator_direct(a, b, p)


def test_generator_reduction_example():
    assert str(ker_generator_reduce(T("x[z]"), leaf("y"), 2)) == "x[y,y,z] + x[z[y,y]]"


def test_lambda_project():
    a = Element({T("x[y,y]"): 1, T("x[y[y]]"): 1}, Zmod(2), GAMMA)
    assert lambda_project(a, 2) == Element({T("x[y[y]]"): 1}, Zmod(2), GAMMA)
    with pytest.raises(RingMismatchError):
        lambda_project(G({"x[y,y]": 1}), 2)


def test_two_level_stabilizer_treats_arguments_as_symbols():
    assert two_level_stab(corolla_labelled(3), [T("x[y,y]"), leaf("y"), leaf("y"), leaf("z")]) == 2
    assert two_level_stab(corolla_labelled(2), [leaf("x"), T("y[z]"), T("y[z]")]) == 2


def test_nested_corolla_composite():
    out = gamma_compose(corolla_labelled(3), [T("x[y,y]"), leaf("y"), leaf("y"), leaf("z")])
    assert out == G({
        "x[y,y,y,y,z]": 6, "x[y,y,y,y[z]]": 3, "x[y,y,y[y,z]]": 2, "x[y,y,y[y],z]": 2,
        "x[y,y[y,y,z]]": 1, "x[y,y[y,y],z]": 1, "x[y,y[y],y[z]]": 1, "x[y[y,y],y[z]]": 1,
        "x[y[y,z],y[y]]": 1, "x[y[y],y[y],z]": 1,
    })


def test_germ_of_equal_leaves_gives_one_orbit():
    assert gamma_compose(germ(), [leaf("y"), leaf("y")]) == G({"y[y]": 1})


def test_slot_tags_split_coinciding_arguments():
    # two slots holding the same tree but kept apart count the orbit twice
    args = [leaf("x"), leaf("y"), leaf("y")]
    assert gamma_compose_basis(corolla_labelled(2), args, ["h", "a", "b"]) == G({"x[y,y]": 2})
    with pytest.raises(ValueError):
        gamma_compose_basis(corolla_labelled(2), [leaf("x"), leaf("y"), leaf("z")], ["h", "a", "a"])


def test_gamma_compose_reduces_into_ring():
    out = gamma_compose(corolla_labelled(3), [T("x[y,y]"), leaf("y"), leaf("y"), leaf("z")], Zmod(2))
    assert out[T("x[y,y,y,y[z]]")] == 1
    assert T("x[y,y,y,y,z]") not in out


def test_gamma_compose_rejects_wrong_arity_and_ring():
    with pytest.raises(ValueError):
        gamma_compose(germ(), [leaf("x")])
    with pytest.raises(RingMismatchError):
        gamma_compose(germ(), [Element({leaf("x"): Fraction(1, 2)}, QQ, GAMMA), leaf("y")])


@settings(max_examples=40)
@given(st.data())
def test_gamma_compose_matches_tensor_oracle(data):
    n = data.draw(st.integers(1, 3))
    outer = data.draw(st.sampled_from(enumerate_labelled(n)))
    pool = data.draw(st.lists(trees_up_to(2), min_size=1, max_size=2))
    args = [data.draw(st.sampled_from(pool)) for _ in range(n)]
    if sum(t.size for t in args) > 6:
        return
    expected = tensor_gamma_compose(outer, args)
    assert gamma_compose(outer, args) == G({str(t): c for t, c in expected.items()})


def test_defect_examples():
    for p in (2, 3, 5):
        assert p_restricted_defect("x", "y", p) == Element({T("x[" + ",".join(["y"] * p) + "]"): 1}, Zmod(p))

