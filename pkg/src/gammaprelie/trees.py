"""Rooted-tree combinatorics.

Non-planar decorated trees are stored in canonical form: branches sorted by
their encoding ``symbol[enc1,...,enck]``.  Equality, hashing and ordering
all go through that encoding, so two isomorphic decorated trees are the
same key everywhere in the package.

Labelled trees (the operad elements of arity ``n``) are parent maps on
``{1, ..., n}``.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

SHAPE_LABEL = "o"


class TreeSyntaxError(ValueError):
    pass


class Tree:
    """Canonical non-planar rooted tree with a symbol on every vertex."""

    __slots__ = ("label", "children", "size", "_enc", "_hash")

    def __init__(self, label: str, children: Iterable[Tree] = ()):
        kids = tuple(sorted(children, key=_enc_of))
        enc = label if not kids else label + "[" + ",".join(k._enc for k in kids) + "]"
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "children", kids)
        object.__setattr__(self, "size", 1 + sum(k.size for k in kids))
        object.__setattr__(self, "_enc", enc)
        object.__setattr__(self, "_hash", hash(enc))

    def __setattr__(self, name, value):
        raise AttributeError("Tree is immutable")

    @property
    def encoding(self) -> str:
        return self._enc

    def __eq__(self, other):
        return isinstance(other, Tree) and self._enc == other._enc

    def __hash__(self):
        return self._hash

    def __lt__(self, other: Tree):
        return self._enc < other._enc

    def __str__(self):
        return self._enc

    def __repr__(self):
        return f"Tree({self._enc!r})"

    def __reduce__(self):
        return (Tree, (self.label, self.children))

    def vertices(self) -> Iterator[Tree]:
        """Subtrees rooted at each vertex, in depth-first preorder."""
        yield self
        for k in self.children:
            yield from k.vertices()

    def labels(self) -> list[str]:
        return [v.label for v in self.vertices()]

    def parent_table(self) -> list[int | None]:
        """Preorder index of each vertex's parent (``None`` for the root).

        Equal subtrees may be shared objects, so positions are counted rather
        than looked up by identity.
        """
        out: list[int | None] = []

        def walk(node: Tree, up: int | None):
            me = len(out)
            out.append(up)
            for k in node.children:
                walk(k, me)

        walk(self, None)
        return out

    def relabel(self, mapping) -> Tree:
        """Apply ``mapping`` (callable or dict) to every decoration."""
        f = mapping if callable(mapping) else mapping.__getitem__
        return Tree(f(self.label), (k.relabel(f) for k in self.children))


def _enc_of(t: Tree) -> str:
    return t._enc


def leaf(label: str) -> Tree:
    return Tree(label)


def canonicalize(raw) -> Tree:
    """Build a canonical tree from ``label`` or ``(label, [branches...])``.

    Branches may be given in any order and may themselves be raw nested
    tuples or :class:`Tree` objects.
    """
    if isinstance(raw, Tree):
        return Tree(raw.label, (canonicalize(k) for k in raw.children))
    if isinstance(raw, str):
        return Tree(raw)
    label, branches = raw
    return Tree(label, (canonicalize(b) for b in branches))


def shape(t: Tree) -> Tree:
    """Forget decorations (every vertex gets the same dummy symbol)."""
    return t.relabel(lambda _: SHAPE_LABEL)


# -- text grammar ----------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:([A-Za-z0-9_]+)|(.))")


def _tokenize(text: str) -> list[str]:
    out = []
    for m in _TOKEN.finditer(text):
        if m.group(1):
            out.append(m.group(1))
        elif m.group(2) and not m.group(2).isspace():
            out.append(m.group(2))
    return out


def parse_tree(text: str) -> Tree:
    """Parse ``symbol`` or ``symbol[tree, tree, ...]``."""
    toks = _tokenize(text)
    pos = 0

    def node() -> Tree:
        nonlocal pos
        if pos >= len(toks) or not re.fullmatch(r"[A-Za-z0-9_]+", toks[pos]):
            raise TreeSyntaxError(f"expected a symbol at token {pos} in {text!r}")
        label = toks[pos]
        pos += 1
        kids = []
        if pos < len(toks) and toks[pos] == "[":
            pos += 1
            kids.append(node())
            while pos < len(toks) and toks[pos] == ",":
                pos += 1
                kids.append(node())
            if pos >= len(toks) or toks[pos] != "]":
                raise TreeSyntaxError(f"unbalanced brackets in {text!r}")
            pos += 1
        return Tree(label, kids)

    t = node()
    if pos != len(toks):
        raise TreeSyntaxError(f"trailing input in {text!r}")
    return t


def parse_tree_sum(text: str):
    """Parse an integer combination such as ``2*x[y,y] - x[y[y]] + 3x``."""
    from .coeffring import Element

    body = text.strip()
    if not body:
        raise TreeSyntaxError("empty expression")
    terms = []
    depth = 0
    start = 0
    for i, ch in enumerate(body):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > 0:
            terms.append(body[start:i])
            start = i
    terms.append(body[start:])
    acc = []
    for chunk in terms:
        # a coefficient needs a '*' unless a letter follows, so "1[2]" stays a tree
        m = re.fullmatch(r"\s*([+-]?)\s*(?:(\d+)\s*\*\s*|(\d+)(?=[A-Za-z_]))?(.+?)\s*", chunk)
        if not m:
            raise TreeSyntaxError(f"cannot read term {chunk!r} in {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        digits = m.group(2) or m.group(3)
        coeff = int(digits) if digits else 1
        acc.append((parse_tree(m.group(4)), sign * coeff))
    return Element(acc)


# -- labelled trees --------------------------------------------------------

@dataclass(frozen=True)
class LabelledTree:
    """Rooted tree on ``{1..n}``; ``parents[i-1]`` is the parent of ``i`` (0 at the root)."""

    parents: tuple[int, ...]

    def __post_init__(self):
        n = len(self.parents)
        if n == 0:
            raise ValueError("a labelled tree needs at least one vertex")
        roots = [i + 1 for i, p in enumerate(self.parents) if p == 0]
        if len(roots) != 1:
            raise ValueError(f"expected exactly one root, found {roots}")
        for i, p in enumerate(self.parents):
            if not 0 <= p <= n or p == i + 1:
                raise ValueError(f"bad parent {p} for vertex {i + 1}")
        for v in range(1, n + 1):
            seen = set()
            while v:
                if v in seen:
                    raise ValueError("parent map has a cycle")
                seen.add(v)
                v = self.parents[v - 1]

    @property
    def n(self) -> int:
        return len(self.parents)

    @property
    def root(self) -> int:
        return self.parents.index(0) + 1

    def parent(self, i: int) -> int | None:
        p = self.parents[i - 1]
        return p or None

    def incoming(self, i: int) -> list[int]:
        """Labels ``j`` with an edge ``j -> i``."""
        return [j + 1 for j, p in enumerate(self.parents) if p == i]

    def to_tree(self, decorations: Sequence[str] | None = None) -> Tree:
        """Decorated tree with vertex ``i`` carrying ``decorations[i-1]`` (default ``str(i)``)."""
        deco = decorations or [str(i) for i in range(1, self.n + 1)]

        def build(i):
            return Tree(deco[i - 1], (build(j) for j in self.incoming(i)))

        return build(self.root)

    def relabel(self, sigma: Sequence[int]) -> LabelledTree:
        """Image under the permutation ``i -> sigma[i-1]``."""
        new = [0] * self.n
        for i, p in enumerate(self.parents, start=1):
            new[sigma[i - 1] - 1] = sigma[p - 1] if p else 0
        return LabelledTree(tuple(new))

    @classmethod
    def from_tree(cls, t: Tree) -> LabelledTree:
        """Read a tree whose decorations are the integers ``1..n``."""
        labels = t.labels()
        try:
            ints = [int(s) for s in labels]
        except ValueError:
            raise TreeSyntaxError(f"labelled tree needs integer labels: {t}") from None
        if sorted(ints) != list(range(1, len(ints) + 1)):
            raise TreeSyntaxError(f"labels of {t} must be exactly 1..{len(ints)}")
        parents = [0] * len(ints)

        def walk(v: Tree, up: int):
            me = int(v.label)
            parents[me - 1] = up
            for k in v.children:
                walk(k, me)

        walk(t, 0)
        return cls(tuple(parents))

    @classmethod
    def parse(cls, text: str) -> LabelledTree:
        return cls.from_tree(parse_tree(text))

    def __str__(self):
        return str(self.to_tree())


def corolla_labelled(k: int) -> LabelledTree:
    """``F_k``: root 1 with leaves 2..k+1."""
    return LabelledTree((0,) + (1,) * k)


def germ() -> LabelledTree:
    return corolla_labelled(1)


def _prufer_edges(seq: Sequence[int], n: int) -> list[tuple[int, int]]:
    degree = [1] * (n + 1)
    for v in seq:
        degree[v] += 1
    edges = []
    for v in seq:
        u = next(i for i in range(1, n + 1) if degree[i] == 1)
        edges.append((u, v))
        degree[u] -= 1
        degree[v] -= 1
    u, w = [i for i in range(1, n + 1) if degree[i] == 1]
    edges.append((u, w))
    return edges


def enumerate_labelled(n: int) -> list[LabelledTree]:
    """All rooted trees on ``{1..n}``: Prüfer codes times a choice of root."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return [LabelledTree((0,))]
    out = []
    for seq in itertools.product(range(1, n + 1), repeat=n - 2):
        adj: dict[int, list[int]] = {i: [] for i in range(1, n + 1)}
        for a, b in _prufer_edges(seq, n):
            adj[a].append(b)
            adj[b].append(a)
        for root in range(1, n + 1):
            parents = [0] * n
            stack = [(root, 0)]
            while stack:
                v, up = stack.pop()
                parents[v - 1] = up
                stack.extend((w, v) for w in adj[v] if w != up)
            out.append(LabelledTree(tuple(parents)))
    return out


# -- counting --------------------------------------------------------------

def multinomial(*ks: int) -> int:
    """``(sum k)! / prod(k!)``."""
    if any(k < 0 for k in ks):
        raise ValueError("multinomial entries must be nonnegative")
    out, total = 1, 0
    for k in ks:
        total += k
        out *= math.comb(total, k)
    return out


def stab_order(t: Tree) -> int:
    """Order of the stabilizer of ``t``: permutations of isomorphic branches, recursively."""
    return _stab(t)


@lru_cache(maxsize=None)
def _stab(t: Tree) -> int:
    out = 1
    for m in Counter(t.children).values():
        out *= math.factorial(m)
    for k in t.children:
        out *= _stab(k)
    return out


def linear_extension_count(t: Tree) -> int:
    """Vertex orderings refining the tree order (root first), decorations ignored."""
    out = multinomial(*(k.size for k in t.children))
    for k in t.children:
        out *= linear_extension_count(k)
    return out


def lambda_count(t: Tree) -> int:
    """Number of increasing labellings of the underlying shape of ``t``.

    Labellings are counted as labelled trees, so two orderings that differ
    by an automorphism of the shape count once.
    """
    return _lambda(shape(t))


@lru_cache(maxsize=None)
def _lambda(t: Tree) -> int:
    num = multinomial(*(k.size for k in t.children))
    for k in t.children:
        num *= _lambda(k)
    den = 1
    for m in Counter(t.children).values():
        den *= math.factorial(m)
    return num // den


# -- corollas and normal forms --------------------------------------------

@dataclass(frozen=True)
class Corolla:
    """Root symbol plus groups ``(branch, multiplicity)`` of pairwise distinct branches.

    Branches are trees for :func:`dec`, and nested corollas for
    :func:`normal_form`.
    """

    root: str
    groups: tuple[tuple[object, int], ...] = ()

    @property
    def arity(self) -> int:
        return sum(m for _, m in self.groups)

    def graft(self) -> Tree:
        kids = []
        for b, m in self.groups:
            sub = b.graft() if isinstance(b, Corolla) else b
            kids.extend([sub] * m)
        return Tree(self.root, kids)

    def __str__(self):
        if not self.groups:
            return self.root
        parts = [str(b) if m == 1 else f"{b}^{m}" for b, m in self.groups]
        return "{" + self.root + ";" + ",".join(parts) + "}"


def graft_corolla(root: str, groups: Iterable[tuple[Tree, int]]) -> Tree:
    """Attach ``m`` copies of each branch to a new root; zero multiplicities vanish."""
    kids = []
    for b, m in groups:
        if m < 0:
            raise ValueError("multiplicities must be nonnegative")
        kids.extend([b] * m)
    return Tree(root, kids)


def dec(t: Tree) -> Corolla:
    counts = Counter(t.children)
    return Corolla(t.label, tuple((b, counts[b]) for b in sorted(counts)))


def normal_form(t: Tree) -> Corolla:
    c = dec(t)
    return Corolla(c.root, tuple((normal_form(b), m) for b, m in c.groups))


# -- enumeration of decorated shapes --------------------------------------

def enumerate_decorated(n: int, alphabet: Sequence[str]) -> list[Tree]:
    """All canonical trees with ``n`` vertices decorated from ``alphabet``."""
    return list(_decorated(n, tuple(sorted(alphabet))))


@lru_cache(maxsize=None)
def _decorated(n: int, alphabet: tuple[str, ...]) -> tuple[Tree, ...]:
    if n < 1:
        return ()
    pool = [t for m in range(1, n) for t in _decorated(m, alphabet)]
    pool.sort()
    forests = []

    def extend(start: int, left: int, acc: list[Tree]):
        if left == 0:
            forests.append(tuple(acc))
            return
        for i in range(start, len(pool)):
            t = pool[i]
            if t.size <= left:
                acc.append(t)
                extend(i, left - t.size, acc)
                acc.pop()

    extend(0, n - 1, [])
    return tuple(sorted(Tree(a, f) for a in alphabet for f in forests))
