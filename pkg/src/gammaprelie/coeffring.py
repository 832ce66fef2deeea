"""Exact coefficient rings and formal linear combinations.

Three rings are supported: the integers, the rationals and the integers
modulo a prime.  An :class:`Element` is a finite map from hashable,
canonically keyed terms to nonzero coefficients of one ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Iterator, Mapping


class RingMismatchError(ValueError):
    """Raised when elements over different rings (or bases) are combined."""


class NonIntegralError(ArithmeticError):
    """An integer division that was required to be exact left a remainder."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Ring:
    """A coefficient ring: ``Z``, ``Q`` or ``Z/p``."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "Zp"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "Zp":
            if self.p is None or not is_prime(self.p):
                raise ValueError(f"Z/p needs a prime modulus, got {self.p!r}")
        elif self.p is not None:
            raise ValueError("only Z/p carries a modulus")

    def coerce(self, value) -> int | Fraction:
        """Bring an int or Fraction into this ring's normal form."""
        if self.kind == "Z":
            if isinstance(value, Fraction):
                if value.denominator != 1:
                    raise NonIntegralError(f"{value} is not an integer")
                return value.numerator
            return int(value)
        if self.kind == "Q":
            return Fraction(value)
        if isinstance(value, Fraction):
            num = value.numerator % self.p
            den = value.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"{value} has no image in Z/{self.p}")
            return num * pow(den, -1, self.p) % self.p
        return int(value) % self.p

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "Zp" else 0

    def __str__(self):
        return f"Z/{self.p}" if self.kind == "Zp" else self.kind

    @classmethod
    def parse(cls, text: str) -> Ring:
        """Parse ``z``, ``q`` or ``zmod:P``."""
        t = text.strip().lower()
        if t == "z":
            return ZZ
        if t == "q":
            return QQ
        if t.startswith("zmod:"):
            return Zmod(int(t[5:]))
        raise ValueError(f"unknown ring {text!r}")


ZZ = Ring("Z")
QQ = Ring("Q")


def Zmod(p: int) -> Ring:
    return Ring("Zp", p)


class Element(Mapping):
    """Immutable finite linear combination ``sum c_k * k``.

    ``basis`` is a free-form tag naming how the keys are interpreted
    (``"S"`` for trees in the coinvariant basis, ``"Gamma"`` for orbit
    sums, ``"brace"``, ``"cor"``); elements with different tags never mix.
    """

    __slots__ = ("_terms", "ring", "basis")

    def __init__(self, terms: Mapping | Iterable | None = None, ring: Ring = ZZ, basis: str = "S"):
        acc: dict = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for key, c in items:
                acc[key] = acc.get(key, 0) + c
        clean = {}
        for key, c in acc.items():
            c = ring.coerce(c)
            if c:
                clean[key] = c
        self._terms = clean
        self.ring = ring
        self.basis = basis

    @classmethod
    def _raw(cls, terms: dict, ring: Ring, basis: str) -> Element:
        # terms already normalized and free of zeros
        e = cls.__new__(cls)
        e._terms = terms
        e.ring = ring
        e.basis = basis
        return e

    @classmethod
    def zero(cls, ring: Ring = ZZ, basis: str = "S") -> Element:
        return cls._raw({}, ring, basis)

    @classmethod
    def monomial(cls, key: Hashable, coeff=1, ring: Ring = ZZ, basis: str = "S") -> Element:
        return cls({key: coeff}, ring, basis)

    # Mapping protocol; iteration follows the canonical key order.
    def __getitem__(self, key):
        return self._terms[key]

    def get(self, key, default=0):
        return self._terms.get(key, default)

    def __iter__(self) -> Iterator:
        return iter(sorted(self._terms, key=str))

    def __len__(self):
        return len(self._terms)

    def __contains__(self, key):
        return key in self._terms

    def __bool__(self):
        return bool(self._terms)

    def _check(self, other: Element):
        if not isinstance(other, Element):
            raise TypeError(f"cannot combine Element with {type(other).__name__}")
        if other.ring != self.ring:
            raise RingMismatchError(f"ring mismatch: {self.ring} vs {other.ring}")
        if other.basis != self.basis:
            raise RingMismatchError(f"basis mismatch: {self.basis} vs {other.basis}")

    def __add__(self, other: Element) -> Element:
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        ring = self.ring
        out = dict(self._terms)
        for key, c in other._terms.items():
            v = ring.coerce(out.get(key, 0) + c)
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        return Element._raw(out, ring, self.basis)

    __radd__ = __add__

    def __neg__(self) -> Element:
        return self.scale(-1)

    def __sub__(self, other: Element) -> Element:
        return self + (-other)

    def __mul__(self, c) -> Element:
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self._terms
        if not isinstance(other, Element):
            return NotImplemented
        return (self.ring, self.basis, self._terms) == (other.ring, other.basis, other._terms)

    def __hash__(self):
        return hash((self.ring, self.basis, frozenset(self._terms.items())))

    def scale(self, c) -> Element:
        ring = self.ring
        c = ring.coerce(c)
        if not c:
            return Element.zero(ring, self.basis)
        out = {}
        for key, v in self._terms.items():
            w = ring.coerce(v * c)
            if w:
                out[key] = w
        return Element._raw(out, ring, self.basis)

    def exact_divide(self, d: int) -> Element:
        """Divide every coefficient by ``d``; any remainder is an error."""
        if self.ring != ZZ:
            raise RingMismatchError("exact_divide needs integer coefficients")
        if d <= 0:
            raise ValueError("divisor must be positive")
        out = {}
        for key, v in self._terms.items():
            q, r = divmod(v, d)
            if r:
                raise NonIntegralError(f"coefficient {v} of {key} is not divisible by {d}")
            out[key] = q
        return Element._raw(out, ZZ, self.basis)

    def to_ring(self, ring: Ring) -> Element:
        """Push coefficients into ``ring`` (Z -> anything, Q -> Q, same -> same)."""
        if ring == self.ring:
            return self
        if self.ring.kind == "Zp":
            raise RingMismatchError(f"cannot lift {self.ring} coefficients to {ring}")
        if self.ring == QQ and ring == ZZ:
            return Element(self._terms, ZZ, self.basis)
        return Element(self._terms, ring, self.basis)

    def reduce_mod_p(self, p: int) -> Element:
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if self.ring != ZZ:
            raise RingMismatchError("reduce_mod_p expects integer coefficients")
        return self.to_ring(Zmod(p))

    def with_basis(self, basis: str) -> Element:
        return Element._raw(dict(self._terms), self.ring, basis)

    def map_keys(self, f: Callable) -> Element:
        """Apply ``f`` to every key, merging collisions."""
        return Element(((f(k), c) for k, c in self._terms.items()), self.ring, self.basis)

    def filter(self, pred: Callable) -> Element:
        return Element._raw({k: c for k, c in self._terms.items() if pred(k)}, self.ring, self.basis)

    def terms(self) -> list[tuple]:
        return [(k, self._terms[k]) for k in self]

    def __repr__(self):
        return f"Element({self}, ring={self.ring}, basis={self.basis!r})"

    def __str__(self):
        return format_terms(self.terms())


def format_terms(terms: list[tuple], fmt: Callable = str) -> str:
    if not terms:
        return "0"
    parts = []
    for i, (key, c) in enumerate(terms):
        neg = c < 0
        mag = -c if neg else c
        body = fmt(key) if mag == 1 else f"{mag}*{fmt(key)}"
        if i == 0:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts)


def linear_sum(elements: Iterable[Element], ring: Ring = ZZ, basis: str = "S") -> Element:
    """Sum a stream of elements in one pass."""
    out: dict = {}
    for e in elements:
        if e.ring != ring or e.basis != basis:
            raise RingMismatchError(f"expected {ring}/{basis}, got {e.ring}/{e.basis}")
        for key, c in e._terms.items():
            out[key] = out.get(key, 0) + c
    return Element(out, ring, basis)


def add(a: Element, b: Element) -> Element:
    return a + b


def scale(c, a: Element) -> Element:
    return a.scale(c)


def exact_divide(a: Element, d: int) -> Element:
    return a.exact_divide(d)


def reduce_mod_p(a: Element, p: int) -> Element:
    return a.reduce_mod_p(p)
