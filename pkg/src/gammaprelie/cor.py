"""Corolla operations ``{x; y_1, ..., y_n}_{r_1, ..., r_n}`` and their relations.

A :class:`CorExpr` is a symbolic expression built from generators, scalar
linear combinations and corolla nodes.  Two evaluations are provided:

* :func:`reduce` rewrites an expression into a combination of canonical
  corolla monomials using only the formal rules (group permutation, dropping
  empty groups, homogeneity, merging equal arguments, additivity in a group,
  the unit ``{x;} = x``).  Nested heads are left alone.
* :func:`normalize` evaluates an expression in the free divided-symmetry
  PreLie algebra, i.e. as a combination of orbit sums of decorated trees.

The text grammar is ``{HEAD; ARG^r, ARG, ...}``.  ``^r`` applies to the
whole argument and defaults to 1; arguments that are sums need parentheses
to be read unambiguously.  Scalars are written ``3*e`` or ``3e``, and a
bare tree literal such as ``x[y,y]`` stands for its orbit sum.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence, Union

from .coeffring import ZZ, Element, Ring, format_terms, linear_sum
from .gamma import GAMMA, gamma_compose_basis
from .trees import Corolla, Tree, corolla_labelled, leaf, normal_form, parse_tree

COR = "cor"


class CorSyntaxError(ValueError):
    pass


class CorShapeError(ValueError):
    """The expression does not have the shape an operation requires."""


@dataclass(frozen=True)
class Gen:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class CorNode:
    head: "CorExpr"
    groups: tuple[tuple["CorExpr", int], ...] = ()

    def __post_init__(self):
        for _, r in self.groups:
            if r < 0:
                raise ValueError("multiplicities must be nonnegative")

    def __str__(self):
        parts = [str(a) if r == 1 else f"{a}^{r}" for a, r in self.groups]
        return "{" + str(self.head) + ";" + ",".join(parts) + "}"


@dataclass(frozen=True)
class LinComb:
    terms: tuple[tuple["CorExpr", Union[int, Fraction]], ...]

    def __str__(self):
        return "(" + format_terms(list(self.terms)) + ")"


CorExpr = Union[Gen, CorNode, LinComb]


def cor_expr(head: CorExpr | str, *groups) -> CorNode:
    """Convenience builder: ``cor_expr("x", ("y", 2), "z")``."""

    def lift(e):
        return Gen(e) if isinstance(e, str) else e

    out = []
    for g in groups:
        if isinstance(g, tuple):
            out.append((lift(g[0]), g[1]))
        else:
            out.append((lift(g), 1))
    return CorNode(lift(head), tuple(out))


def from_corolla(c: Corolla) -> CorExpr:
    if not c.groups:
        return Gen(c.root)
    return CorNode(Gen(c.root), tuple((from_corolla(b), m) for b, m in c.groups))


def from_tree(t: Tree) -> CorExpr:
    """The corolla expression whose value is ``orb t`` (iterated decomposition)."""
    return from_corolla(normal_form(t))


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        if m.group(1):
            toks.append(("int", m.group(1)))
        elif m.group(2):
            toks.append(("sym", m.group(2)))
        else:
            toks.append(("op", m.group(3)))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self, k: int = 0):
        i = self.pos + k
        return self.toks[i] if i < len(self.toks) else ("eof", "")

    def take(self, value: str | None = None):
        tok = self.peek()
        if value is not None and tok[1] != value:
            raise CorSyntaxError(f"expected {value!r} at token {self.pos} in {self.text!r}, got {tok[1]!r}")
        if tok[0] == "eof":
            raise CorSyntaxError(f"unexpected end of input in {self.text!r}")
        self.pos += 1
        return tok

    def done(self):
        if self.peek()[0] != "eof":
            raise CorSyntaxError(f"trailing input {self.peek()[1]!r} in {self.text!r}")

    def sum(self) -> CorExpr:
        terms = []
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        terms.append(self.term(sign))
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
            terms.append(self.term(sign))
        if len(terms) == 1 and terms[0][1] == 1:
            return terms[0][0]
        return LinComb(tuple(terms))

    def term(self, sign: int):
        coeff: int | Fraction = sign
        if self.peek()[0] == "int":
            num = int(self.take()[1])
            if self.peek()[1] == "/":
                self.take("/")
                num = Fraction(num, int(self.take()[1]))
            coeff *= num
            if self.peek()[1] == "*":
                self.take("*")
            elif self.peek()[0] == "eof" or self.peek()[1] in "+-,;})":
                # bare scalar: a multiple of nothing is not an expression
                raise CorSyntaxError(f"scalar {num} without an expression in {self.text!r}")
        return self.atom(), coeff

    def atom(self) -> CorExpr:
        kind, value = self.peek()
        if value == "(" and kind == "op":
            self.take("(")
            e = self.sum()
            self.take(")")
            return e
        if value == "{" and kind == "op":
            return self.node()
        if kind == "sym":
            if self.peek(1)[1] == "[":
                return from_tree(self.tree_literal())
            self.take()
            return Gen(value)
        raise CorSyntaxError(f"unexpected {value!r} at token {self.pos} in {self.text!r}")

    def tree_literal(self) -> Tree:
        start = self.pos
        depth = 0
        while True:
            _, value = self.take()
            if value == "[":
                depth += 1
            elif value == "]":
                depth -= 1
                if depth == 0:
                    break
        chunk = "".join(v for _, v in self.toks[start:self.pos])
        return parse_tree(chunk)

    def node(self) -> CorNode:
        self.take("{")
        head = self.sum()
        groups = []
        if self.peek()[1] == ";":
            self.take(";")
            if self.peek()[1] != "}":
                groups.append(self.group())
                while self.peek()[1] == ",":
                    self.take(",")
                    groups.append(self.group())
        self.take("}")
        return CorNode(head, tuple(groups))

    def group(self):
        arg = self.sum()
        r = 1
        if self.peek()[1] == "^":
            self.take("^")
            kind, value = self.take()
            if kind != "int":
                raise CorSyntaxError(f"multiplicity must be an integer, got {value!r}")
            r = int(value)
        return arg, r


def parse_cor(text: str) -> CorExpr:
    p = _Parser(text)
    e = p.sum()
    p.done()
    return e


def parse_equation(text: str) -> tuple[CorExpr, CorExpr]:
    """Parse ``LHS = RHS``."""
    if text.count("=") != 1:
        raise CorSyntaxError(f"expected exactly one '=' in {text!r}")
    left, right = text.split("=")
    return parse_cor(left), parse_cor(right)


# -- formal reduction ------------------------------------------------------

def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered ways to write ``total`` as a sum of ``parts`` nonnegative integers."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for bars in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(total + parts - 1 - prev - 1)
        yield tuple(out)


def _expand_groups(groups: Sequence[tuple[Element, int]]) -> Iterator[tuple[object, list[tuple[object, int, tuple]]]]:
    """Expand polynomial group slots into basis arguments.

    Yields ``(coefficient, [(key, multiplicity, slot), ...])`` where ``slot``
    tells which group and which term of that group the argument came from.
    """
    per_group = []
    for j, (elem, r) in enumerate(groups):
        items = elem.terms()
        options = []
        for comp in compositions(r, len(items)):
            coeff = 1
            picked = []
            for k, ((key, c), m) in enumerate(zip(items, comp)):
                if m:
                    coeff *= c ** m
                    picked.append((key, m, (j, k)))
            options.append((coeff, picked))
        per_group.append(options)
    for combo in itertools.product(*per_group):
        coeff = 1
        args = []
        for c, picked in combo:
            coeff *= c
            args.extend(picked)
        yield coeff, args


def make_monomial(head, args: Sequence[tuple[CorExpr, int]]):
    """Canonical corolla monomial: drop empty groups, merge equal arguments, sort.

    Returns ``(multinomial factor, monomial)``.
    """
    merged: dict = {}
    factor = 1
    for a, m in args:
        if m == 0:
            continue
        prev = merged.get(a, 0)
        factor *= math.comb(prev + m, m)
        merged[a] = prev + m
    if not merged:
        return factor, head
    groups = tuple(sorted(merged.items(), key=lambda g: str(g[0])))
    return factor, CorNode(head, groups)


def reduce(e: CorExpr, ring: Ring = ZZ) -> Element:
    """Rewrite into canonical corolla monomials with the formal rules only."""
    if isinstance(e, Gen):
        return Element.monomial(e, 1, ring, COR)
    if isinstance(e, LinComb):
        return linear_sum((reduce(t, ring).scale(c) for t, c in e.terms), ring, COR)
    heads = reduce(e.head, ring)
    groups = [(reduce(a, ring), r) for a, r in e.groups if r]
    parts = []
    for h, ch in heads.items():
        for coeff, args in _expand_groups(groups):
            factor, mono = make_monomial(h, [(key, m) for key, m, _ in args])
            parts.append(Element.monomial(mono, ch * coeff * factor, ring, COR))
    return linear_sum(parts, ring, COR)


def format_cor(e: Element) -> str:
    return format_terms(e.terms())


# -- evaluation in the free Gamma(PreLie)-algebra --------------------------

def cor_apply(head: Element, groups: Sequence[tuple[Element, int]]) -> Element:
    """``{h; g_1, ..., g_n}_{r_1, ..., r_n}`` on orbit-basis elements over ``Z``.

    Group slots are expanded polynomially; the orbit sum of the corolla is
    then taken with each (group, term) slot as its own symbol, so equal
    trees coming from different slots are not identified.
    """
    groups = [(g, r) for g, r in groups if r]
    parts = []
    for h, ch in head.items():
        for coeff, args in _expand_groups(groups):
            trees = [h]
            slots: list = [("head",)]
            for key, m, slot in args:
                trees.extend([key] * m)
                slots.extend([slot] * m)
            outer = corolla_labelled(len(trees) - 1)
            parts.append(gamma_compose_basis(outer, trees, slots).scale(ch * coeff))
    return linear_sum(parts, ZZ, GAMMA)


def normalize(e: CorExpr, ring: Ring = ZZ) -> Element:
    """Value of ``e`` in the free algebra, as a combination of orbit sums."""
    return _normalize(e).to_ring(ring)


def _normalize(e: CorExpr) -> Element:
    if isinstance(e, Gen):
        return Element.monomial(leaf(e.name), 1, ZZ, GAMMA)
    if isinstance(e, LinComb):
        parts = []
        for t, c in e.terms:
            if isinstance(c, Fraction) and c.denominator != 1:
                raise ValueError("normalize needs integer scalars")
            parts.append(_normalize(t).scale(int(c)))
        return linear_sum(parts, ZZ, GAMMA)
    return cor_apply(_normalize(e.head), [(_normalize(a), r) for a, r in e.groups])


def normalize_element(e: Element, ring: Ring = ZZ) -> Element:
    """:func:`normalize` applied to a combination of corolla monomials."""
    if e.ring != ZZ:
        raise ValueError("normalize_element needs integer coefficients")
    return linear_sum((_normalize(k).scale(c) for k, c in e.items()), ZZ, GAMMA).to_ring(ring)


# -- the nested-corolla relation -------------------------------------------

def _split_nested(e: CorExpr):
    if not (isinstance(e, CorNode) and isinstance(e.head, CorNode)):
        raise CorShapeError(f"expected a corolla whose head is a corolla, got {e}")
    inner = e.head
    ys = [(a, r) for a, r in inner.groups if r]
    zs = [(a, s) for a, s in e.groups if s]
    return inner.head, ys, zs


def rel7_raw_terms(e: CorExpr) -> list[CorNode | CorExpr]:
    """Unmerged right-hand summands of the nested-corolla relation.

    One summand for every way of splitting each outer multiplicity ``s_i``
    into a part ``beta_i`` kept at the outer level and one part for every
    copy of every inner argument.  Inner copies enter with multiplicity 1.
    """
    x, ys, zs = _split_nested(e)
    copies = [y for y, r in ys for _ in range(r)]
    per_z = [list(compositions(s, 1 + len(copies))) for _, s in zs]
    out = []
    for choice in itertools.product(*per_z):
        groups = []
        for c, y in enumerate(copies):
            inner = tuple((z, choice[i][1 + c]) for i, (z, _) in enumerate(zs))
            groups.append((CorNode(y, inner), 1))
        groups.extend((z, choice[i][0]) for i, (z, _) in enumerate(zs))
        out.append(CorNode(x, tuple(groups)))
    return out


def apply_rel7(e: CorExpr) -> Element:
    """Expand a nested corolla ``{{x; y..}_r; z..}_s`` into single-level corollas.

    The raw summands are merged with the formal rules first; only then is
    the result divided by ``prod r_j!``, which must be exact.
    """
    _, ys, _ = _split_nested(e)
    merged = linear_sum((reduce(t) for t in rel7_raw_terms(e)), ZZ, COR)
    denom = 1
    for _, r in ys:
        denom *= math.factorial(r)
    return merged.exact_divide(denom)


# -- verification harness --------------------------------------------------

def _multisets(symbols: Sequence[str], max_total: int, max_groups: int, min_total: int = 0):
    """Group lists ``((Gen(a), r), ...)`` over distinct symbols with bounded total multiplicity."""
    for total in range(min_total, max_total + 1):
        for bag in itertools.combinations_with_replacement(symbols, total):
            counts = [(a, bag.count(a)) for a in sorted(set(bag))]
            if len(counts) <= max_groups:
                yield tuple((Gen(a), r) for a, r in counts)


def _group_lists(pool: Sequence[CorExpr], max_n: int, max_r: int):
    """Ordered group lists with 1..max_n groups, each r >= 1, total multiplicity <= max_r."""
    for n in range(1, max_n + 1):
        for args in itertools.combinations_with_replacement(pool, n):
            for rs in itertools.product(range(1, max_r + 1), repeat=n):
                if sum(rs) <= max_r:
                    yield tuple(zip(args, rs))


def relation_instances(alphabet: Sequence[str], max_n: int = 3, max_r: int = 3, max_s: int = 3):
    """Yield ``(k, lhs, rhs)`` for every relation instance within the bounds.

    ``max_r`` and ``max_s`` bound the total multiplicity of a group list;
    ``max_n`` bounds the number of groups.
    """
    gens = [Gen(a) for a in alphabet]
    pool: list[CorExpr] = list(gens)
    if len(gens) >= 2:
        pool.append(CorNode(gens[0], ((gens[1], 1),)))
    for x in gens:
        for groups in _group_lists(pool, max_n, max_r):
            lhs = CorNode(x, groups)
            for perm in sorted(set(itertools.permutations(range(len(groups)))))[1:]:
                yield 1, lhs, CorNode(x, tuple(groups[i] for i in perm))
    for x in gens:
        for groups in itertools.chain([()], _group_lists(gens, max_n - 1, max_r)):
            for a in pool:
                for pos in range(len(groups) + 1):
                    padded = groups[:pos] + ((a, 0),) + groups[pos:]
                    yield 2, CorNode(x, padded), CorNode(x, groups)
    for x in gens:
        for a in pool:
            for r in range(1, max_r + 1):
                for rest in itertools.chain([()], _group_lists(gens, max(0, max_n - 1), max_r - r)):
                    for lam in (2, -1, 3):
                        lhs = CorNode(x, ((LinComb(((a, lam),)), r),) + rest)
                        yield 3, lhs, LinComb(((CorNode(x, ((a, r),) + rest), lam ** r),))
    for x in gens:
        for a in pool:
            for r1 in range(1, max_r):
                for r2 in range(1, max_r - r1 + 1):
                    for rest in itertools.chain([()], _group_lists(gens, max(0, max_n - 2), max_r - r1 - r2)):
                        lhs = CorNode(x, ((a, r1), (a, r2)) + rest)
                        rhs = LinComb(((CorNode(x, ((a, r1 + r2),) + rest), math.comb(r1 + r2, r1)),))
                        yield 4, lhs, rhs
    for x in gens:
        for a, b in itertools.combinations_with_replacement(pool, 2):
            for r in range(1, max_r + 1):
                for rest in itertools.chain([()], _group_lists(gens, max(0, max_n - 2), max_r - r)):
                    lhs = CorNode(x, ((LinComb(((a, 1), (b, 1))), r),) + rest)
                    rhs = LinComb(tuple((CorNode(x, ((a, s), (b, r - s)) + rest), 1) for s in range(r + 1)))
                    yield 5, lhs, rhs
    for x in pool:
        yield 6, CorNode(x, ()), x
    for x in gens:
        for ys in _multisets(alphabet, max_r, max_n):
            for zs in _multisets(alphabet, max_s, max_n):
                lhs = CorNode(CorNode(x, ys), zs)
                yield 7, lhs, None


def _side_str(e) -> str:
    return format_cor(e) if isinstance(e, Element) else str(e)


def check_instance(k: int, lhs: CorExpr, rhs, ring: Ring = ZZ) -> tuple[bool, str, str]:
    """Check one instance in the orbit model and in the brace model.

    Returns ``(ok, instance text, detail)``.
    """
    from .brace import oracle_compare

    try:
        if rhs is None:
            rhs = apply_rel7(lhs)
        text = f"{lhs}={_side_str(rhs)}".replace(" ", "")
        left = normalize(lhs, ring)
        right = normalize_element(rhs, ring) if isinstance(rhs, Element) else normalize(rhs, ring)
    except ArithmeticError as exc:
        return False, str(lhs).replace(" ", ""), f"NON_INTEGRAL {exc}"
    gamma_ok = left == right
    brace_ok = oracle_compare(lhs, rhs, ring)
    if gamma_ok and brace_ok:
        return True, text, "gamma+brace"
    failed = [name for name, ok in (("gamma", gamma_ok), ("brace", brace_ok)) if not ok]
    return False, text, "mismatch in " + "+".join(failed)


def verify_relations(alphabet: Sequence[str], max_n: int = 3, max_r: int = 3, max_s: int = 3,
                     ring: Ring = ZZ, relations: Sequence[int] = (1, 2, 3, 4, 5, 6, 7)) -> list[str]:
    """Check every relation instance within the bounds; one report line per instance.

    Lines read ``REL<k> <instance> OK|FAIL <detail>``.
    """
    lines = []
    for k, lhs, rhs in relation_instances(alphabet, max_n, max_r, max_s):
        if k not in relations:
            continue
        ok, text, detail = check_instance(k, lhs, rhs, ring)
        lines.append(f"REL{k} {text} {'OK' if ok else 'FAIL'} {detail}")
    return lines
