"""Bounded-degree enveloping algebras of Lie and Leibniz algebras.

The envelope is the free invariant algebra modulo the two-sided ideal
generated by ``widehat(bracket(x, y)) - bracket_variant(x, y)``.  Up to an
X-degree cap D it is computed as an explicit quotient: all relation
multiples ``u r v`` of X-degree <= D are row reduced, and the normal
monomials of the extended PBW families are checked to be an exact
complement of that span.  Reduction is projection onto the normal
monomials along the relation span.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DegreeCapExceeded, PBWDefect, StructureError, ZeroParameterError
from .linalg import Echelon
from .scalars import ModP, as_scalar
from .structures import FOURTH, SIXTH, StructureConstants, bracket, validate_structure
from .words import FreeElem, Q, basis_words, format_terms, format_word, is_canonical, term_key, xdeg

__all__ = [
    "SIXTH", "FOURTH", "RelationSet", "relation_generators", "is_normal", "normal_monomials",
    "PBWCertificate", "EnvElem", "Reducer", "build_reducer", "reduce", "env_mul",
    "EmbeddingReport", "check_embedding", "require_nonzero_k",
]

K_NONZERO_MESSAGE = "k must be non-zero: enveloping algebras are only defined for non-zero k"


def require_nonzero_k(k):
    if not k:
        raise ZeroParameterError(K_NONZERO_MESSAGE)


def _normalize_variant(variant: str) -> str:
    v = variant.lower()
    if v in ("sixth", "6th", "6"):
        return SIXTH
    if v in ("fourth", "4th", "4"):
        return FOURTH
    raise ValueError(f"unknown variant {variant!r}")


@dataclass(frozen=True)
class RelationSet:
    variant: str
    k: object
    pairs: tuple            # (i, j) index pairs, aligned with generators
    generators: tuple       # FreeElem per pair; identically zero ones are dropped


def relation_generators(sc: StructureConstants, k, variant: str) -> RelationSet:
    """widehat(bracket(x_i, x_j)) - bracket_variant(x_i, x_j) over the basis pairs.

    Lie algebras use pairs i < j (the relation is antisymmetric in i, j and
    vanishes for i = j); Leibniz algebras use every ordered pair.
    """
    variant = _normalize_variant(variant)
    k = as_scalar(k)
    require_nonzero_k(k)
    if variant == SIXTH and sc.kind != "lie":
        raise StructureError("the sixth-variant envelope needs a Lie algebra")
    report = validate_structure(sc)
    if not report.valid:
        first = report.violations[0]
        raise StructureError(f"invalid structure constants: {first['identity']} fails at "
                             f"{first['indices']}")
    from .words import FreeContext
    ctx = FreeContext(sc.n)
    gens = {i: ctx.gen(i) for i in range(1, sc.n + 1)}
    if variant == SIXTH:
        pairs = [(i, j) for i in range(1, sc.n + 1) for j in range(i + 1, sc.n + 1)]
    else:
        pairs = [(i, j) for i in range(1, sc.n + 1) for j in range(1, sc.n + 1)]
    kept_pairs, out = [], []
    for i, j in pairs:
        hat = sc.image(i, j, gens, FreeElem())
        r = hat - bracket(variant, ctx, gens[i], gens[j], k)
        if r:
            kept_pairs.append((i, j))
            out.append(r)
    return RelationSet(variant, k, tuple(kept_pairs), tuple(out))


def _sorted(letters: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(letters, letters[1:]))


def is_normal(w: Sequence[int], variant: str) -> bool:
    """Membership of a canonical word in the extended PBW families.

    Both variants accept sorted pure words and ``q`` followed by a sorted
    word.  With q in position p > 0 the sixth variant wants the letters
    before the last pre-q letter sorted, and that last letter followed by a
    sorted tail it does not exceed; the fourth variant wants exactly one
    letter before q and a sorted tail.
    """
    variant = _normalize_variant(variant)
    w = tuple(w)
    if not is_canonical(w):
        raise ValueError(f"word {w} is not canonical")
    if Q not in w:
        return _sorted(w)
    p = w.index(Q)
    head, tail = w[:p], w[p + 1:]
    if not _sorted(tail):
        return False
    if not head:
        return True
    if variant == FOURTH:
        return len(head) == 1
    j0 = head[-1]
    return _sorted(head[:-1]) and (not tail or j0 <= tail[0])


def normal_monomials(n: int, D: int, variant: str) -> list:
    return [w for w in basis_words(n, D) if is_normal(w, variant)]


@dataclass
class PBWCertificate:
    variant: str
    k: object
    degree: int
    basis_count: int
    normal_count: int
    span_rank: int
    stacked_rank: int
    complementary: bool
    stable: bool | None = None
    witness: object = None
    witness_kind: str | None = None

    @property
    def certified(self) -> bool:
        return self.complementary and self.stable is not False


class EnvElem:
    """Element of a bounded-degree envelope, stored on normal monomials."""

    __slots__ = ("terms", "reducer")

    def __init__(self, terms: dict, reducer: "Reducer"):
        self.terms = terms
        self.reducer = reducer

    def _same(self, other):
        if not isinstance(other, EnvElem):
            return False
        if other.reducer is not self.reducer:
            raise ValueError("elements belong to different envelopes")
        return True

    def __add__(self, other):
        if not self._same(other):
            return NotImplemented
        acc = dict(self.terms)
        for w, c in other.terms.items():
            v = acc.get(w)
            v = c if v is None else v + c
            if v:
                acc[w] = v
            else:
                acc.pop(w, None)
        return EnvElem(acc, self.reducer)

    def __neg__(self):
        return EnvElem({w: -c for w, c in self.terms.items()}, self.reducer)

    def __sub__(self, other):
        if not self._same(other):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "EnvElem":
        if not c:
            return EnvElem({}, self.reducer)
        return EnvElem({w: c * v for w, v in self.terms.items()}, self.reducer)

    def __mul__(self, other):
        if isinstance(other, EnvElem):
            self._same(other)
            return self.reducer.mul(self, other)
        if isinstance(other, (FreeElem, str, float)):
            return NotImplemented
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, (FreeElem, str, float)):
            return NotImplemented
        return self.scale(other)

    def __eq__(self, other):
        if isinstance(other, EnvElem):
            return other.reducer is self.reducer and self.terms == other.terms
        if isinstance(other, int) and other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, w):
        return self.terms.get(tuple(w), Fraction(0))

    def items(self):
        return sorted(self.terms.items(), key=lambda t: term_key(t[0]))

    def xdeg(self) -> int:
        return max((xdeg(w) for w in self.terms), default=0)

    def lift(self) -> FreeElem:
        return FreeElem._raw(dict(self.terms))

    def format(self, labels: Sequence[str] | None = None) -> str:
        if labels is None:
            labels = self.reducer.sc.labels
        return format_terms(self.items(), labels)

    def __repr__(self):
        return f"EnvElem({self.format()})"


class Reducer:
    """Frozen bounded-degree quotient context; build it with :func:`build_reducer`.

    Doubles as an invariant-algebra context (``one``, ``q``, ``gen``) so the
    generic brackets run inside the envelope.
    """

    def __init__(self, sc: StructureConstants, k, variant: str, D: int, modulus: int | None = None):
        self.sc = sc
        self.variant = _normalize_variant(variant)
        self.k = as_scalar(k, modulus)
        self.D = D
        self.modulus = modulus
        if modulus is None:
            self.relations = relation_generators(sc, self.k, self.variant)
        else:
            self.relations = _relations_mod(sc, self.k, self.variant)
        self.basis = basis_words(sc.n, D)
        normal = set(w for w in self.basis if is_normal(w, self.variant))
        self.normal_index = tuple(w for w in self.basis if w in normal)
        # non-normal words first, largest term first, so pivots land on them
        nonnormal = sorted((w for w in self.basis if w not in normal), key=term_key, reverse=True)
        self._n_nonnormal = len(nonnormal)
        self._word_of = nonnormal + list(self.normal_index)
        self._col = {w: i for i, w in enumerate(self._word_of)}
        self._ech = Echelon()
        self._wred: dict = {}
        self._wmul: dict = {}
        self._build_span()
        self.certificate = self._certify()
        self.one = self.word(())
        self.q = self.word((Q,))

    # -------------------------------------------------------------- build
    def _coerce(self, c):
        return ModP(c, self.modulus) if self.modulus is not None else c

    def _relation_multiples(self):
        words_by_deg: dict[int, list] = {}
        for w in self.basis:
            words_by_deg.setdefault(xdeg(w), []).append(w)
        budget = self.D - 2
        left = [w for w in self.basis if xdeg(w) <= budget]
        for r in self.relations.generators:
            rterms = list(r.terms.items())
            for u in left:
                room = budget - xdeg(u)
                for d in range(room + 1):
                    for v in words_by_deg.get(d, ()):
                        row: dict = {}
                        for t, c in rterms:
                            col = self._col[canonicalize_concat(u, t, v)]
                            x = row.get(col)
                            x = c if x is None else x + c
                            if x:
                                row[col] = x
                            else:
                                row.pop(col, None)
                        if row:
                            yield row

    def _build_span(self):
        seen = set()
        for row in self._relation_multiples():
            key = frozenset(row.items())
            if key in seen:
                continue
            seen.add(key)
            if self.modulus is not None:
                row = {c: self._coerce(x) for c, x in row.items()}
                row = {c: x for c, x in row.items() if x}
            self._ech.add(row)
        self._ech.finalize()

    def _row_elem(self, row: dict) -> FreeElem:
        return FreeElem._raw({self._word_of[c]: x for c, x in row.items()})

    def _certify(self) -> PBWCertificate:
        span_rank = len(self._ech)
        nn = self._n_nonnormal
        # stacked rank of span rows plus unit rows on the normal monomials
        proj = Echelon()
        for row in self._ech.pivots.values():
            proj.add({c: x for c, x in row.items() if c < nn})
        stacked = len(proj) + len(self.normal_index)
        cert = PBWCertificate(
            variant=self.variant, k=self.k, degree=self.D, basis_count=len(self.basis),
            normal_count=len(self.normal_index), span_rank=span_rank, stacked_rank=stacked,
            complementary=(span_rank + len(self.normal_index) == len(self.basis)
                           and stacked == len(self.basis)),
        )
        if not cert.complementary:
            for col, row in sorted(self._ech.pivots.items()):
                if col >= nn:
                    cert.witness = self._row_elem(row)
                    cert.witness_kind = "relation span meets the normal span"
                    break
            else:
                missing = next(self._word_of[c] for c in range(nn) if c not in self._ech.pivots)
                cert.witness = FreeElem.word(missing)
                cert.witness_kind = "non-normal word not reducible to normal monomials"
        return cert

    # ---------------------------------------------------------- interface
    def _check_deg(self, d: int):
        if d > self.D:
            raise DegreeCapExceeded(f"degree cap exceeded: X-degree {d} > D = {self.D}")

    def _reduce_word(self, w: tuple) -> dict:
        hit = self._wred.get(w)
        if hit is None:
            v = self._ech.reduce({self._col[w]: self._coerce(Fraction(1))})
            hit = {self._word_of[c]: x for c, x in v.items()}
            self._wred[w] = hit
        return hit

    def reduce(self, e: FreeElem) -> EnvElem:
        acc: dict = {}
        for w, c in e.terms.items():
            self._check_deg(xdeg(w))
            c = self._coerce(c)
            for u, x in self._reduce_word(w).items():
                v = acc.get(u)
                v = c * x if v is None else v + c * x
                if v:
                    acc[u] = v
                else:
                    acc.pop(u, None)
        return EnvElem(acc, self)

    def word(self, w: Sequence[int]) -> EnvElem:
        return self.reduce(FreeElem.word(tuple(w)))

    def gen(self, i: int) -> EnvElem:
        return self.word((i,))

    def zero(self) -> EnvElem:
        return EnvElem({}, self)

    def mul_words(self, u: tuple, v: tuple) -> dict:
        hit = self._wmul.get((u, v))
        if hit is None:
            w = canonicalize_concat(u, (), v)
            self._check_deg(xdeg(w))
            hit = self._reduce_word(w)
            self._wmul[(u, v)] = hit
        return hit

    def mul(self, a: EnvElem, b: EnvElem) -> EnvElem:
        if a.terms and b.terms:
            self._check_deg(a.xdeg() + b.xdeg())
        acc: dict = {}
        for u, c in a.terms.items():
            for v, d in b.terms.items():
                cd = c * d
                for w, x in self.mul_words(u, v).items():
                    y = acc.get(w)
                    y = cd * x if y is None else y + cd * x
                    if y:
                        acc[w] = y
                    else:
                        acc.pop(w, None)
        return EnvElem(acc, self)

    def is_normal(self, w) -> bool:
        return is_normal(w, self.variant)

    def normal_upto(self, d: int) -> list:
        return [w for w in self.normal_index if xdeg(w) <= d]

    def __repr__(self):
        return (f"Reducer(n={self.sc.n}, variant={self.variant}, k={self.k}, D={self.D}, "
                f"rank={self.certificate.span_rank})")


def canonicalize_concat(u: tuple, t: tuple, v: tuple) -> tuple:
    out = []
    seen = False
    for part in (u, t, v):
        for a in part:
            if a == Q:
                if seen:
                    continue
                seen = True
            out.append(a)
    return tuple(out)


def _relations_mod(sc, k, variant) -> RelationSet:
    require_nonzero_k(k)
    rs = relation_generators(sc, k.value, variant)
    # rebuild with the field-valued k so the relations are exact mod p
    from .words import FreeContext
    ctx = FreeContext(sc.n)
    gens = {i: ctx.gen(i) for i in range(1, sc.n + 1)}
    out = []
    for (i, j) in rs.pairs:
        hat = sc.image(i, j, gens, FreeElem())
        r = hat - bracket(variant, ctx, gens[i], gens[j], k)
        r = FreeElem._raw({w: ModP(c, k.p) for w, c in r.terms.items() if ModP(c, k.p)})
        if r:
            out.append(r)
    return RelationSet(variant, k, rs.pairs, tuple(out))


def build_reducer(sc: StructureConstants, k, variant: str, D: int, *,
                  check_stability: bool = True, strict: bool = True,
                  modulus: int | None = None) -> Reducer:
    """Construct and certify the degree-<= D envelope.

    The certificate requires the relation span and the normal monomials to
    be exact complements inside the canonical words of X-degree <= D, and
    (when ``check_stability``) the reducer to agree with the one built at
    D - 1 on every word of X-degree <= D - 1.  A failed certificate raises
    :class:`PBWDefect` unless ``strict`` is False.
    """
    if D < 2:
        raise ValueError("degree cap D must be at least 2")
    k_val = as_scalar(k)
    require_nonzero_k(k_val if modulus is None else as_scalar(k, modulus))
    r = Reducer(sc, k_val, variant, D, modulus)
    cert = r.certificate
    if check_stability and cert.complementary:
        lower = Reducer(sc, k_val, variant, D - 1, modulus)
        cert.stable = True
        for w in lower.basis:
            if r._reduce_word(w) != lower._reduce_word(w):
                cert.stable = False
                cert.witness = FreeElem.word(w)
                cert.witness_kind = "reduction differs from the degree D-1 envelope"
                break
    if strict and not cert.certified:
        raise PBWDefect(f"PBW defect ({cert.witness_kind}): {cert.witness}", cert.witness, cert)
    return r


def reduce(r: Reducer, e: FreeElem) -> EnvElem:
    return r.reduce(e)


def env_mul(r: Reducer, a: EnvElem, b: EnvElem) -> EnvElem:
    return r.mul(a, b)


@dataclass
class EmbeddingReport:
    variant: str
    passed: bool
    defects: list = field(default_factory=list)


def check_embedding(r: Reducer) -> EmbeddingReport:
    """i(bracket(x_i, x_j)) == bracket_variant(i(x_i), i(x_j)) inside the envelope."""
    if r.D < 2:
        raise ValueError("check_embedding needs D >= 2")
    sc = r.sc
    gens = {i: r.gen(i) for i in range(1, sc.n + 1)}
    defects = []
    for i in range(1, sc.n + 1):
        for j in range(1, sc.n + 1):
            lhs = sc.image(i, j, gens, r.zero())
            rhs = bracket(r.variant, r, gens[i], gens[j], r.k)
            if lhs != rhs:
                defects.append({"pair": (i, j), "lhs": lhs, "rhs": rhs, "difference": lhs - rhs})
    return EmbeddingReport(r.variant, not defects, defects)


def word_label(w, labels=None) -> str:
    return format_word(w, labels)
