"""Free brace algebra on planar rooted trees.

``<T; S_1, ..., S_k>`` inserts the trees ``S_i`` into ``T`` in every
order-preserving way: at a vertex with children ``c_1..c_m`` the sequence
is cut into consecutive intervals ``D_0, I_1, D_1, ..., I_m, D_m``; the
``D`` intervals become new children placed between the old ones and each
``I_j`` is inserted recursively into ``c_j``.

Since symmetric groups act freely on planar trees, the free brace algebra
is a faithful model for corolla operations: :func:`gamma_to_brace` sends
``{x; y_1..y_n}_{r}`` to the sum over shuffles of ``<x; y..y, ..>``.  It
serves as a second, independent evaluation of corolla expressions.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from functools import lru_cache
from typing import Iterable, Sequence, Union

from .coeffring import ZZ, Element, Ring, linear_sum
from .cor import COR, CorExpr, CorNode, Gen, LinComb, from_tree
from .gamma import GAMMA
from .trees import Tree, TreeSyntaxError

BRACE = "brace"


class PlanarTree:
    """Rooted tree with ordered branches, encoded ``symbol(enc1,...,enck)``."""

    __slots__ = ("label", "children", "size", "_enc", "_hash")

    def __init__(self, label: str, children: Iterable[PlanarTree] = ()):
        kids = tuple(children)
        enc = label if not kids else label + "(" + ",".join(k._enc for k in kids) + ")"
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "children", kids)
        object.__setattr__(self, "size", 1 + sum(k.size for k in kids))
        object.__setattr__(self, "_enc", enc)
        object.__setattr__(self, "_hash", hash(("planar", enc)))

    def __setattr__(self, name, value):
        raise AttributeError("PlanarTree is immutable")

    def __eq__(self, other):
        return isinstance(other, PlanarTree) and self._enc == other._enc

    def __hash__(self):
        return self._hash

    def __lt__(self, other: PlanarTree):
        return self._enc < other._enc

    def __str__(self):
        return self._enc

    def __repr__(self):
        return f"PlanarTree({self._enc!r})"

    def __reduce__(self):
        return (PlanarTree, (self.label, self.children))

    def forget(self) -> Tree:
        """The underlying non-planar tree."""
        return Tree(self.label, (k.forget() for k in self.children))


_TOKEN = re.compile(r"\s*(?:([A-Za-z0-9_]+)|(\S))")


def parse_planar(text: str) -> PlanarTree:
    """Parse ``symbol`` or ``symbol(tree, tree, ...)``; branch order is kept."""
    toks = [m.group(1) or m.group(2) for m in _TOKEN.finditer(text) if m.group(1) or m.group(2)]
    pos = 0

    def node() -> PlanarTree:
        nonlocal pos
        if pos >= len(toks) or not re.fullmatch(r"[A-Za-z0-9_]+", toks[pos]):
            raise TreeSyntaxError(f"expected a symbol at token {pos} in {text!r}")
        label = toks[pos]
        pos += 1
        kids = []
        if pos < len(toks) and toks[pos] == "(":
            pos += 1
            kids.append(node())
            while pos < len(toks) and toks[pos] == ",":
                pos += 1
                kids.append(node())
            if pos >= len(toks) or toks[pos] != ")":
                raise TreeSyntaxError(f"unbalanced parentheses in {text!r}")
            pos += 1
        return PlanarTree(label, kids)

    t = node()
    if pos != len(toks):
        raise TreeSyntaxError(f"trailing input in {text!r}")
    return t


BraceArg = Union[PlanarTree, Element]


def as_brace(a: BraceArg) -> Element:
    if isinstance(a, PlanarTree):
        return Element.monomial(a, 1, ZZ, BRACE)
    if a.basis != BRACE:
        raise ValueError(f"expected a brace element, got basis {a.basis!r}")
    return a


@lru_cache(maxsize=None)
def _insert(t: PlanarTree, seq: tuple[PlanarTree, ...]) -> Counter:
    if not seq:
        return Counter({t: 1})
    m = len(t.children)
    k = len(seq)
    out: Counter = Counter()
    for cuts in itertools.combinations_with_replacement(range(k + 1), 2 * m):
        bounds = (0,) + cuts + (k,)
        parts = [seq[bounds[i]:bounds[i + 1]] for i in range(2 * m + 1)]
        inner = [_insert(c, parts[2 * j + 1]).items() for j, c in enumerate(t.children)]
        for picks in itertools.product(*inner):
            kids = list(parts[0])
            count = 1
            for j, (tree, c) in enumerate(picks):
                kids.append(tree)
                kids.extend(parts[2 * j + 2])
                count *= c
            out[PlanarTree(t.label, kids)] += count
    return out


def brace_op(x: BraceArg, args: Sequence[BraceArg] = ()) -> Element:
    """``<x; y_1, ..., y_n>``, multilinear in every slot."""
    xs = as_brace(x)
    ys = [as_brace(a) for a in args]
    ring = xs.ring
    out: Counter = Counter()
    for (t, c), *rest in itertools.product(xs.items(), *(y.items() for y in ys)):
        coeff = c
        for _, cy in rest:
            coeff *= cy
        for tree, k in _insert(t, tuple(s for s, _ in rest)).items():
            out[tree] += coeff * k
    return Element(out, ring, BRACE)


def shuffles(*rs: int) -> list[tuple[int, ...]]:
    """All ``(r_1, ..., r_n)``-shuffles, as image tuples ``(sigma(1), ..., sigma(N))``.

    A shuffle is increasing on each consecutive block of sizes ``r_1, ..., r_n``.
    """
    if any(r < 0 for r in rs):
        raise ValueError("block sizes must be nonnegative")
    n = sum(rs)
    blocks = [j for j, r in enumerate(rs) for _ in range(r)]
    out = []
    for word in sorted(set(itertools.permutations(blocks))):
        # position p holds an element of block word[p]; fill each block left to right
        sigma = [0] * n
        next_slot = [sum(rs[:j]) for j in range(len(rs))]
        for p, j in enumerate(word):
            sigma[next_slot[j]] = p + 1
            next_slot[j] += 1
        out.append(tuple(sigma))
    return out


def _arrangements(rs: Sequence[int]) -> list[list[int]]:
    # block index sitting at each position, one list per shuffle
    blocks = [j for j, r in enumerate(rs) for _ in range(r)]
    out = []
    for sigma in shuffles(*rs):
        word = [0] * len(blocks)
        for i, pos in enumerate(sigma):
            word[pos - 1] = blocks[i]
        out.append(word)
    return out


def gamma_to_brace(e: CorExpr) -> Element:
    """Image of a corolla expression in the free brace algebra over ``Z``."""
    if isinstance(e, Gen):
        return Element.monomial(PlanarTree(e.name), 1, ZZ, BRACE)
    if isinstance(e, LinComb):
        parts = []
        for t, c in e.terms:
            if c != int(c):
                raise ValueError("gamma_to_brace needs integer scalars")
            parts.append(gamma_to_brace(t).scale(int(c)))
        return linear_sum(parts, ZZ, BRACE)
    head = gamma_to_brace(e.head)
    groups = [(gamma_to_brace(a), r) for a, r in e.groups if r]
    if not groups:
        return head
    values = [g for g, _ in groups]
    parts = [brace_op(head, [values[j] for j in word]) for word in _arrangements([r for _, r in groups])]
    return linear_sum(parts, ZZ, BRACE)


def cor_element_to_brace(e: Element) -> Element:
    """:func:`gamma_to_brace` on a combination of corolla monomials."""
    if e.basis != COR or e.ring != ZZ:
        raise ValueError("expected an integer combination of corolla monomials")
    return linear_sum((gamma_to_brace(k).scale(c) for k, c in e.items()), ZZ, BRACE)


def gamma_element_to_brace(g: Element) -> Element:
    """Image of a combination of orbit sums, via the iterated corolla form of each tree."""
    if g.basis != GAMMA or g.ring != ZZ:
        raise ValueError("expected an integer combination of orbit sums")
    return linear_sum((gamma_to_brace(from_tree(t)).scale(c) for t, c in g.items()), ZZ, BRACE)


def _to_brace(side: Union[CorExpr, Element]) -> Element:
    if isinstance(side, Element):
        if side.basis == COR:
            return cor_element_to_brace(side)
        if side.basis == GAMMA:
            return gamma_element_to_brace(side)
        return as_brace(side)
    return gamma_to_brace(side)


def oracle_compare(lhs: Union[CorExpr, Element], rhs: Union[CorExpr, Element], ring: Ring = ZZ) -> bool:
    """Do both sides agree in the free brace algebra (coefficients pushed into ``ring``)?"""
    return _to_brace(lhs).to_ring(ring) == _to_brace(rhs).to_ring(ring)
