"""The rooted-tree operad acting on decorated trees.

Composition substitutes a tree for a vertex and reattaches the incoming
edges of that vertex to every possible vertex of the substituted tree.
All results are :class:`Element` objects over ``Z`` in the ``"S"`` basis
(decorated trees modulo relabelling).
"""

from __future__ import annotations

import itertools
from collections import Counter
from typing import Sequence, Union

from .coeffring import ZZ, Element, linear_sum
from .trees import LabelledTree, Tree, germ

Arg = Union[Tree, Element]


def as_element(a: Arg) -> Element:
    if isinstance(a, Tree):
        return Element.monomial(a)
    if isinstance(a, Element):
        return a
    raise TypeError(f"expected Tree or Element, got {type(a).__name__}")


def graft_at(u: Tree, extra: dict[int, list[Tree]]) -> Tree:
    """Copy of ``u`` with ``extra[i]`` added as branches of its ``i``-th preorder vertex."""
    counter = itertools.count()

    def build(node: Tree) -> Tree:
        i = next(counter)
        kids = [build(k) for k in node.children]
        kids.extend(extra.get(i, ()))
        return Tree(node.label, kids)

    return build(u)


def _attachments(u: Tree, branches: Sequence[Tree]) -> Counter:
    """Every tree obtained by hanging each branch on some vertex of ``u``."""
    out: Counter = Counter()
    for f in itertools.product(range(u.size), repeat=len(branches)):
        extra: dict[int, list[Tree]] = {}
        for b, target in zip(branches, f):
            extra.setdefault(target, []).append(b)
        out[graft_at(u, extra)] += 1
    return out


def _replace_vertex(t: Tree, v: int, new: Tree) -> Tree:
    counter = itertools.count()

    def build(node: Tree) -> Tree:
        i = next(counter)
        if i == v:
            # skip the indices of the replaced subtree
            for _ in range(node.size - 1):
                next(counter)
            return new
        return Tree(node.label, [build(k) for k in node.children])

    return build(t)


def compose_partial(t: Tree, v: int, u: Arg) -> Element:
    """Substitute ``u`` for vertex ``v`` (preorder index, 0-based) of ``t``.

    The decoration of ``v`` is discarded.  Its incoming branches are
    attached to the vertices of ``u`` in all possible ways; its outgoing
    edge, if any, goes to the root of ``u``.
    """
    if not 0 <= v < t.size:
        raise IndexError(f"vertex {v} out of range for a tree with {t.size} vertices")
    hole = list(t.vertices())[v]
    out: Counter = Counter()
    for ut, c in as_element(u).items():
        for new_sub, k in _attachments(ut, hole.children).items():
            out[_replace_vertex(t, v, new_sub)] += c * k
    return Element(out)


def composite_counts(outer: LabelledTree, trees: Sequence[Tree]) -> Counter:
    """Multiset of trees ``outer(t_1, ..., t_n)``, one per attachment choice."""
    n = outer.n
    incoming = {i: outer.incoming(i) for i in range(1, n + 1)}
    non_root = [j for j in range(1, n + 1) if outer.parents[j - 1]]
    choices = [range(trees[outer.parents[j - 1] - 1].size) for j in non_root]
    out: Counter = Counter()
    for f in itertools.product(*choices):
        target = dict(zip(non_root, f))

        def build(i: int) -> Tree:
            extra: dict[int, list[Tree]] = {}
            for j in incoming[i]:
                extra.setdefault(target[j], []).append(build(j))
            return graft_at(trees[i - 1], extra) if extra else trees[i - 1]

        out[build(outer.root)] += 1
    return out


def compose_total(outer: LabelledTree, args: Sequence[Arg]) -> Element:
    """Simultaneous substitution of ``args[i-1]`` into vertex ``i`` of ``outer``.

    Multilinear in every slot.
    """
    if len(args) != outer.n:
        raise ValueError(f"outer tree has arity {outer.n}, got {len(args)} arguments")
    elems = [as_element(a) for a in args]
    ring = elems[0].ring if elems else ZZ
    out: Counter = Counter()
    for combo in itertools.product(*(e.items() for e in elems)):
        coeff = 1
        for _, c in combo:
            coeff *= c
        for tree, k in composite_counts(outer, [t for t, _ in combo]).items():
            out[tree] += coeff * k
    return Element(out, ring)


def compose_sequential(outer: LabelledTree, args: Sequence[Arg], order: Sequence[int] | None = None) -> Element:
    """Same value as :func:`compose_total`, computed by one partial composition per vertex.

    ``order`` lists the outer labels in the order they are substituted
    (default: decreasing labels).
    """
    if len(args) != outer.n:
        raise ValueError(f"outer tree has arity {outer.n}, got {len(args)} arguments")
    order = list(order) if order is not None else list(range(outer.n, 0, -1))
    holes = [f"#{i}" for i in range(1, outer.n + 1)]
    current = Element.monomial(outer.to_tree(holes))
    for i in order:
        mark = holes[i - 1]
        parts = []
        for t, c in current.items():
            v = t.labels().index(mark)
            parts.append(compose_partial(t, v, args[i - 1]).scale(c))
        current = linear_sum(parts)
    return current


def prelie_bracket(a: Arg, b: Arg) -> Element:
    """``{a, b}``: graft ``b`` onto every vertex of ``a``."""
    return compose_total(germ(), [a, b])


def left_comb(x: str, y: str, n: int) -> Element:
    """``{...{{x, y}, y}..., y}`` with ``n`` brackets."""
    if n < 1:
        raise ValueError("n must be >= 1")
    acc = Element.monomial(Tree(x))
    for _ in range(n):
        acc = prelie_bracket(acc, Tree(y))
    return acc


def compose_labelled(tau: LabelledTree, i: int, ups: LabelledTree) -> Element:
    """Partial composition ``tau o_i ups`` of labelled trees.

    Vertices of ``ups`` are shifted by ``i - 1`` and vertices of ``tau``
    above ``i`` by ``ups.n - 1``.  Keys are the labelled results written as
    trees decorated by their labels.
    """
    if not 1 <= i <= tau.n:
        raise IndexError(f"vertex {i} out of range for a tree on {tau.n} vertices")
    m = ups.n

    def shift_tau(j: int) -> int:
        return j if j < i else j + m - 1

    base = [0] * (tau.n + m - 1)
    for k, p in enumerate(ups.parents, start=1):
        base[k + i - 2] = p + i - 1 if p else 0
    up_of_i = tau.parents[i - 1]
    base[ups.root + i - 2] = shift_tau(up_of_i) if up_of_i else 0
    for j, p in enumerate(tau.parents, start=1):
        if j != i and p != i:
            base[shift_tau(j) - 1] = shift_tau(p) if p else 0
    incoming = tau.incoming(i)
    out: Counter = Counter()
    for f in itertools.product(range(1, m + 1), repeat=len(incoming)):
        parents = list(base)
        for j, target in zip(incoming, f):
            parents[shift_tau(j) - 1] = target + i - 1
        out[LabelledTree(tuple(parents)).to_tree()] += 1
    return Element(out)
