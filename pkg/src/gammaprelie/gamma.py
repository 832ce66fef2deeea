"""Divided-symmetry layer: orbit basis, trace, Lambda projection, Gamma composition.

Elements of Gamma(PreLie, V) are :class:`Element` objects tagged
``basis="Gamma"`` whose key ``t`` stands for the orbit sum ``orb t``.
"""

from __future__ import annotations

import itertools
from typing import Hashable, Iterable, Sequence, Union

from .coeffring import QQ, ZZ, Element, NonIntegralError, Ring, RingMismatchError, is_prime, linear_sum
from .prelie_operad import composite_counts, compose_total, left_comb, prelie_bracket
from .trees import LabelledTree, Tree, corolla_labelled, enumerate_decorated, normal_form, stab_order

GAMMA = "Gamma"

GammaArg = Union[Tree, Element]


def orb_of(t: Tree, ring: Ring = ZZ) -> Element:
    return Element.monomial(t, 1, ring, GAMMA)


def as_gamma(a: GammaArg) -> Element:
    if isinstance(a, Tree):
        return orb_of(a)
    if a.basis != GAMMA:
        raise RingMismatchError(f"expected a Gamma-basis element, got basis {a.basis!r}")
    return a


def orb_expand(t: Tree) -> list[tuple[LabelledTree, tuple[str, ...]]]:
    """The distinct labelled tensors ``sigma* t<x1..xn>`` summed by ``orb t``."""
    labels = t.labels()
    up = t.parent_table()
    n = len(labels)
    seen = {}
    for perm in itertools.permutations(range(1, n + 1)):
        parents = [0] * n
        word = [""] * n
        for pos, label in enumerate(perm):
            parents[label - 1] = perm[up[pos]] if up[pos] is not None else 0
            word[label - 1] = labels[pos]
        key = (tuple(parents), tuple(word))
        seen.setdefault(key, None)
    return [(LabelledTree(p), w) for p, w in sorted(seen)]


def format_expanded(e: Element) -> str:
    """Print orbit sums as explicit sums of labelled tensors ``tau<x1,...,xn>``."""
    if not e:
        return "0"
    chunks = []
    for t, c in e.items():
        inner = " + ".join(f"{lt}<{','.join(w)}>" for lt, w in orb_expand(t))
        chunks.append(f"({inner})" if c == 1 else f"{c}*({inner})")
    return " + ".join(chunks)


def trace(a: Element) -> Element:
    """``Tr(t) = |Stab(t)| orb t``, extended linearly."""
    if a.basis != "S":
        raise RingMismatchError("trace expects an S-basis element")
    return Element(((t, c * stab_order(t)) for t, c in a.items()), a.ring, GAMMA)


def trace_inverse(g: Element) -> Element:
    """Inverse of :func:`trace`; only exists over ``Q``."""
    if g.ring != QQ:
        raise RingMismatchError("the trace is only invertible over Q")
    return Element(((t, c / stab_order(t)) for t, c in g.items()), QQ, "S")


def ker_trace_predicate(t: Tree, p: int) -> bool:
    """True iff ``t`` lies in the kernel of the trace in characteristic ``p``."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return stab_order(t) % p == 0


def has_p_fold_branch(t: Tree, p: int) -> bool:
    """Normal-form criterion: some corolla repeats one branch at least ``p`` times."""

    def walk(c) -> bool:
        return any(m >= p or walk(b) for b, m in c.groups)

    return walk(normal_form(t))


def kernel_basis(n: int, alphabet: Sequence[str], p: int) -> list[Tree]:
    """Basis trees with ``n`` vertices that the trace kills mod ``p``."""
    return [t for t in enumerate_decorated(n, alphabet) if ker_trace_predicate(t, p)]


def _generator_expand(a: Tree, b: Tree, p: int) -> Element:
    # F_p(F_v(x, B_1..B_v), B^p) modulo p, recursing into each branch
    kids = list(a.children)
    parts = [Element.monomial(Tree(a.label, kids + [b] * p))]
    for i, bi in enumerate(kids):
        rest = kids[:i] + kids[i + 1:]
        for t, c in _generator_expand(bi, b, p).items():
            parts.append(Element.monomial(Tree(a.label, rest + [t]), c))
    return linear_sum(parts)


def ker_generator_reduce(a: Tree, b: Tree, p: int) -> Element:
    """Rewrite ``F_p(a, b, ..., b)`` mod ``p`` into corollas carrying ``p`` equal branches."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return _generator_expand(a, b, p).reduce_mod_p(p)


def ker_generator_direct(a: Tree, b: Tree, p: int) -> Element:
    """``F_p(a, b, ..., b)`` composed in the operad and reduced mod ``p``."""
    return compose_total(corolla_labelled(p), [a] + [b] * p).reduce_mod_p(p)


def p_restricted_defect(x: str, y: str, p: int) -> Element:
    """``{..{x,y}..,y} - {x, {..{y,y}..,y}}`` (``p`` copies of ``y``) mod ``p``."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    lhs = left_comb(x, y, p)
    inner = left_comb(y, y, p - 1) if p > 1 else Element.monomial(Tree(y))
    rhs = prelie_bracket(Tree(x), inner)
    return (lhs - rhs).reduce_mod_p(p)


def lambda_project(a: Element, p: int) -> Element:
    """Drop the terms killed by the trace; what is left represents the image in Lambda."""
    if a.ring.kind != "Zp" or a.ring.p != p:
        raise RingMismatchError(f"lambda_project needs coefficients in Z/{p}, got {a.ring}")
    return a.filter(lambda t: not ker_trace_predicate(t, p))


def two_level_stab(outer: LabelledTree, args: Sequence[Hashable]) -> int:
    """Stabilizer order of ``outer(args)`` with each argument an opaque symbol."""
    symbols: dict = {}
    for t in args:
        symbols.setdefault(t, f"w{len(symbols)}")
    return stab_order(outer.to_tree([symbols[t] for t in args]))


def gamma_compose_basis(outer: LabelledTree, args: Sequence[Tree], slots: Sequence[Hashable] | None = None) -> Element:
    """``mu~(orb outer(orb t_1, ..., orb t_n))`` over ``Z`` for basis arguments.

    ``slots`` optionally tags the argument positions; positions are only
    interchangeable when their tags agree.  By default the tag is the
    argument itself.  Coarser tags than the arguments are not allowed.
    """
    if slots is None:
        slots = args
    elif len(slots) != len(args):
        raise ValueError("one slot tag per argument")
    elif len({(s, t) for s, t in zip(slots, args)}) != len(set(slots)):
        raise ValueError("arguments sharing a slot tag must be equal")
    chi = composite_counts(outer, args)
    denom = two_level_stab(outer, slots)
    for t in args:
        denom *= stab_order(t)
    out = {}
    for t, c in chi.items():
        q, r = divmod(c * stab_order(t), denom)
        if r:
            raise NonIntegralError(
                f"coefficient of orb {t} in {outer}({', '.join(map(str, args))}) is {c * stab_order(t)}/{denom}"
            )
        out[t] = q
    return Element(out, ZZ, GAMMA)


def gamma_compose(outer: LabelledTree, args: Sequence[GammaArg], ring: Ring = ZZ) -> Element:
    """Composition in the free Gamma(PreLie)-algebra, multilinear in the arguments.

    The computation runs over ``Z``; the result is then pushed into
    ``ring``.  Arguments carrying non-integer coefficients are not
    supported (build them over ``Z`` and convert the result).
    """
    if len(args) != outer.n:
        raise ValueError(f"outer tree has arity {outer.n}, got {len(args)} arguments")
    elems = [as_gamma(a) for a in args]
    for e in elems:
        if e.ring != ZZ:
            raise RingMismatchError("gamma_compose arguments must have integer coefficients")
    parts = []
    for combo in itertools.product(*(e.items() for e in elems)):
        coeff = 1
        for _, c in combo:
            coeff *= c
        parts.append(gamma_compose_basis(outer, [t for t, _ in combo]).scale(coeff))
    return linear_sum(parts, ZZ, GAMMA).to_ring(ring)


def gamma_sum(elements: Iterable[Element], ring: Ring = ZZ) -> Element:
    return linear_sum(elements, ring, GAMMA)
