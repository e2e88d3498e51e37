"""The free invariant algebra on generators x1..xn and an idempotent q.

A word is a tuple of ints: ``0`` is the letter q, ``i >= 1`` is the
generator x_i.  Two words are equal in the free invariant algebra iff they
have the same canonical form, obtained by keeping the first q and deleting
every later one (this realizes both ``qq = q`` and ``q a q = q a``).
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .errors import NotInvariantAlgebra, ParseError
from .scalars import as_scalar, format_scalar, parse_rational

Q = 0
Word = tuple

__all__ = [
    "Q", "Word", "FreeElem", "FreeContext", "canonicalize", "is_canonical", "xdeg",
    "term_key", "fmul", "basis_words", "evaluate", "parse_expr", "format_word",
]


def canonicalize(w: Sequence[int]) -> Word:
    seen_q = False
    out = []
    for a in w:
        if a == Q:
            if seen_q:
                continue
            seen_q = True
        out.append(a)
    return tuple(out)


def is_canonical(w: Sequence[int]) -> bool:
    return sum(1 for a in w if a == Q) <= 1


def xdeg(w: Sequence[int]) -> int:
    return sum(1 for a in w if a != Q)


def term_key(w: Word):
    """Deterministic term order: X-degree, then length, then lex with q smallest."""
    return (xdeg(w), len(w), w)


class FreeElem:
    """Finitely supported linear combination of canonical words."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Sequence[int], object] | None = None):
        acc: dict = {}
        for w, c in (terms or {}).items():
            if not c:
                continue
            w = canonicalize(w)
            acc[w] = acc[w] + c if w in acc else c
        self.terms = {w: c for w, c in acc.items() if c}

    @classmethod
    def _raw(cls, terms: dict) -> "FreeElem":
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def word(cls, w: Sequence[int], coeff=1) -> "FreeElem":
        return cls({tuple(w): as_scalar(coeff) if isinstance(coeff, int) else coeff})

    @classmethod
    def one(cls) -> "FreeElem":
        return cls.word(())

    @classmethod
    def q(cls) -> "FreeElem":
        return cls.word((Q,))

    @classmethod
    def gen(cls, i: int) -> "FreeElem":
        if i < 1:
            raise ValueError("generator indices start at 1")
        return cls.word((i,))

    def items(self):
        return sorted(self.terms.items(), key=lambda t: term_key(t[0]))

    def coeff(self, w: Sequence[int]):
        return self.terms.get(canonicalize(w), Fraction(0))

    def xdeg(self) -> int:
        return max((xdeg(w) for w in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if not isinstance(other, FreeElem):
            return NotImplemented
        acc = dict(self.terms)
        for w, c in other.terms.items():
            v = acc.get(w)
            v = c if v is None else v + c
            if v:
                acc[w] = v
            else:
                acc.pop(w, None)
        return FreeElem._raw(acc)

    def __neg__(self):
        return FreeElem._raw({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, FreeElem):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "FreeElem":
        if not c:
            return FreeElem._raw({})
        return FreeElem._raw({w: c * v for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, FreeElem):
            return fmul(self, other)
        if isinstance(other, (str, float)):
            return NotImplemented
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, (str, float)):
            return NotImplemented
        return self.scale(other)

    def __eq__(self, other):
        if isinstance(other, FreeElem):
            return self.terms == other.terms
        if isinstance(other, int) and other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def format(self, labels: Sequence[str] | None = None) -> str:
        return format_terms(self.items(), labels)

    def __repr__(self):
        return f"FreeElem({self.format()})"


def fmul(a: FreeElem, b: FreeElem) -> FreeElem:
    acc: dict = {}
    for u, c in a.terms.items():
        for v, d in b.terms.items():
            w = canonicalize(u + v)
            x = acc.get(w)
            x = c * d if x is None else x + c * d
            if x:
                acc[w] = x
            else:
                acc.pop(w, None)
    return FreeElem._raw(acc)


def basis_words(n: int, D: int) -> list[Word]:
    """Canonical words of X-degree <= D, in term order."""
    if n < 1 or D < 0:
        raise ValueError("need n >= 1 and D >= 0")
    out: list[Word] = []
    for m in range(D + 1):
        for pure in itertools.product(range(1, n + 1), repeat=m):
            out.append(pure)
            for pos in range(m + 1):
                out.append(pure[:pos] + (Q,) + pure[pos:])
    out.sort(key=term_key)
    return out


class FreeContext:
    """The free invariant algebra as a context for generic bracket code."""

    def __init__(self, n: int):
        self.n = n
        self.one = FreeElem.one()
        self.q = FreeElem.q()

    def gen(self, i: int) -> FreeElem:
        if not 1 <= i <= self.n:
            raise ValueError(f"generator x{i} out of range 1..{self.n}")
        return FreeElem.gen(i)

    def zero(self) -> FreeElem:
        return FreeElem()


def evaluate(e: FreeElem, images: Mapping[int, object], ctx) -> object:
    """Image of ``e`` under the invariant homomorphism sending x_i to images[i].

    ``ctx`` must expose ``one`` and ``q`` and its elements must support
    ``+``, ``*`` and scalar multiplication.  The idempotent and the invariance
    condition ``q g q = q g`` are checked on q and on every image.
    """
    q, one = ctx.q, ctx.one
    if not q * q == q:
        raise NotInvariantAlgebra("not an invariant algebra: q is not idempotent")
    for i, g in images.items():
        if not q * g * q == q * g:
            raise NotInvariantAlgebra(f"not an invariant algebra: q x{i} q != q x{i}")
    cache: dict = {}

    def letter(a: int):
        if a == Q:
            return q
        if a not in images:
            raise KeyError(f"no image for generator x{a}")
        return images[a]

    total = None
    for w, c in e.items():
        if w not in cache:
            val = one
            for a in w:
                val = val * letter(a)
            cache[w] = val
        term = cache[w] * c
        total = term if total is None else total + term
    return one * 0 if total is None else total


def format_word(w: Word, labels: Sequence[str] | None = None) -> str:
    if not w:
        return "1"
    names = []
    for a in w:
        if a == Q:
            names.append("q")
        else:
            names.append(labels[a - 1] if labels else f"x{a}")
    return "*".join(names)


def format_terms(items: Iterable[tuple], labels: Sequence[str] | None = None,
                 word_fmt: Callable | None = None) -> str:
    word_fmt = word_fmt or (lambda w: format_word(w, labels))
    parts = []
    for w, c in items:
        neg = c < 0 if not hasattr(c, "p") else False
        mag = -c if neg else c
        body = word_fmt(w)
        if body == "1":
            text = format_scalar(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{format_scalar(mag)}*{body}"
        if not parts:
            parts.append(f"-{text}" if neg else text)
        else:
            parts.append(f"- {text}" if neg else f"+ {text}")
    return " ".join(parts) if parts else "0"


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else pos
        if m.group(1):
            toks.append(("num", m.group(1), start))
        elif m.group(2):
            toks.append(("ident", m.group(2), start))
        elif m.group(3):
            if m.group(3) not in "+-*()":
                raise ParseError(f"unexpected character {m.group(3)!r}", start)
            toks.append((m.group(3), m.group(3), start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


def parse_expr(text: str, labels: Sequence[str] | None = None) -> FreeElem:
    """Parse an expression over q, rationals and generator labels.

    ``labels`` are the generator names in basis order; without labels the
    names ``x1 .. xn`` are understood.  A leading unary sign is allowed on
    every term so that printed elements parse back.
    """
    index = {name: i + 1 for i, name in enumerate(labels)} if labels else None
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos]

    def take(kind=None):
        nonlocal pos
        tok = toks[pos]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1] or 'end of input'!r}", tok[2])
        pos += 1
        return tok

    def ident(name: str, at: int) -> FreeElem:
        if name == "q":
            return FreeElem.q()
        if index is not None:
            if name in index:
                return FreeElem.gen(index[name])
        else:
            m = re.fullmatch(r"x([1-9][0-9]*)", name)
            if m:
                return FreeElem.gen(int(m.group(1)))
        raise ParseError(f"unknown identifier {name!r}", at)

    def factor() -> FreeElem:
        kind, val, at = peek()
        if kind == "num":
            take()
            return FreeElem.one().scale(parse_rational(val))
        if kind == "ident":
            take()
            return ident(val, at)
        if kind == "(":
            take()
            e = expr()
            take(")")
            return e
        raise ParseError(f"unexpected {val or 'end of input'!r}", at)

    def term() -> FreeElem:
        sign = 1
        while peek()[0] in ("+", "-"):
            if take()[0] == "-":
                sign = -sign
        e = factor()
        while peek()[0] == "*":
            take()
            e = e * factor()
        return e if sign == 1 else -e

    def expr() -> FreeElem:
        e = term()
        while peek()[0] in ("+", "-"):
            op = take()[0]
            t = term()
            e = e + t if op == "+" else e - t
        return e

    result = expr()
    if peek()[0] != "end":
        raise ParseError(f"unexpected {peek()[1]!r}", peek()[2])
    return result
