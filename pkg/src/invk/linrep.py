"""Matrix models: W-idempotents, End_W(V), representations and the
left-regular embedding of a finite-dimensional invariant algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .envelope import Reducer
from .errors import DegreeCapExceeded, InvkError
from .linalg import Matrix, coordinates, in_span, vectors_rank
from .scalars import as_scalar
from .structures import StructureConstants, bracket
from .words import Q, xdeg

__all__ = [
    "LinearInvariantAlgebra", "MatrixContext", "MatRep", "validate_idempotent",
    "idempotent_violations", "in_end_w",
    "RepReport", "check_rep", "FiniteInvariantAlgebra", "EmbeddingReport",
    "regular_embedding", "ExtensionReport", "extend_to_envelope",
]


def _vec(v) -> tuple:
    return tuple(as_scalar(x) for x in v)


def validate_idempotent(dimV: int, W_basis: Sequence[Sequence], q: Matrix) -> bool:
    """q(W) = 0 and q(v) - v in W for every standard basis vector v."""
    return not idempotent_violations(dimV, W_basis, q)


def idempotent_violations(dimV: int, W_basis: Sequence[Sequence], q: Matrix) -> list[str]:
    if q.shape != (dimV, dimV):
        raise ValueError(f"q must be {dimV}x{dimV}, got {q.shape}")
    W = [_vec(w) for w in W_basis]
    if any(len(w) != dimV for w in W):
        raise ValueError("W basis vectors have the wrong length")
    if not W or vectors_rank(W) != len(W):
        raise ValueError("W basis must be non-empty and linearly independent")
    out = []
    for n, w in enumerate(W, start=1):
        if any(q.apply(w)):
            out.append(f"q(W) = 0 fails on W basis vector {n}")
    for i in range(dimV):
        v = q.column(i)
        diff = tuple(x - (1 if j == i else 0) for j, x in enumerate(v))
        if not in_span(diff, W):
            out.append(f"q(v) - v in W fails for v = e{i + 1}")
    return out


@dataclass(frozen=True)
class LinearInvariantAlgebra:
    dimV: int
    W_basis: tuple
    q: Matrix

    def __post_init__(self):
        object.__setattr__(self, "W_basis", tuple(_vec(w) for w in self.W_basis))
        if not validate_idempotent(self.dimV, self.W_basis, self.q):
            raise InvkError("q is not a W-idempotent: need q(W) = 0 and q(v) - v in W")

    @property
    def one(self) -> Matrix:
        return Matrix.identity(self.dimV)

    def contains(self, f: Matrix) -> bool:
        return in_end_w(f, self)


class MatrixContext:
    """(End(V), q) as an invariant-algebra context."""

    def __init__(self, alg: LinearInvariantAlgebra):
        self.alg = alg
        self.one = alg.one
        self.q = alg.q


def in_end_w(f: Matrix, alg: LinearInvariantAlgebra) -> bool:
    """f(W) inside W, cross-checked against q f q == q f."""
    preserves = all(in_span(f.apply(w), alg.W_basis) for w in alg.W_basis)
    q = alg.q
    invariant = q * f * q == q * f
    if preserves != invariant:
        raise AssertionError("f(W) <= W and qfq = qf disagree; q is not a W-idempotent")
    return preserves


@dataclass(frozen=True)
class MatRep:
    rho: Mapping[int, Matrix]
    target: LinearInvariantAlgebra
    k: object

    def context(self) -> MatrixContext:
        return MatrixContext(self.target)


@dataclass
class RepReport:
    variant: str
    passed: bool
    outside_end_w: list = field(default_factory=list)
    defects: list = field(default_factory=list)


def check_rep(sc: StructureConstants, rep: MatRep, variant: str) -> RepReport:
    """rho(bracket(x_i, x_j)) == bracket_variant(rho(x_i), rho(x_j)) for all pairs."""
    variant = {"6th": "sixth", "4th": "fourth"}.get(variant, variant)
    alg = rep.target
    zero = Matrix.zeros(alg.dimV)
    outside = [i for i, m in sorted(rep.rho.items()) if not in_end_w(m, alg)]
    if outside:
        return RepReport(variant, False, outside_end_w=outside)
    ctx = rep.context()
    k = as_scalar(rep.k)
    defects = []
    for i in range(1, sc.n + 1):
        for j in range(1, sc.n + 1):
            lhs = sc.image(i, j, rep.rho, zero)
            rhs = bracket(variant, ctx, rep.rho[i], rep.rho[j], k)
            if lhs != rhs:
                defects.append({"pair": (i, j), "lhs": lhs, "rhs": rhs})
    return RepReport(variant, not defects, defects=defects)


@dataclass(frozen=True)
class FiniteInvariantAlgebra:
    """A finite-dimensional invariant algebra spanned by matrices.

    ``basis`` spans the algebra A (it must contain the identity and q in
    its span and be closed under products); ``q`` is its idempotent.
    """

    basis: tuple
    q: Matrix

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, m: Matrix):
        return coordinates(m.flat(), [b.flat() for b in self.basis])


@dataclass
class EmbeddingReport:
    dim: int
    ann_dim: int
    injective: bool
    multiplicative: bool
    unit: bool
    q_image: bool
    ann_idempotent: bool
    images_in_end_w: bool
    passed: bool
    left_mult: dict = field(default_factory=dict)


def regular_embedding(A: FiniteInvariantAlgebra) -> EmbeddingReport:
    """Left-regular representation a -> a_L of an invariant algebra.

    Checks that it is an injective invariant homomorphism into End(A) and
    that q_L is an ann-idempotent for ann = {q x - x}.
    """
    n = A.dim
    basis = list(A.basis)
    if vectors_rank([b.flat() for b in basis]) != n:
        raise InvkError("algebra basis is not linearly independent")
    size = basis[0].shape[0]
    ident, q = Matrix.identity(size), A.q
    for name, m in (("identity", ident), ("q", q)):
        if A.coords(m) is None:
            raise InvkError(f"the {name} is not in the algebra")
    if q * q != q:
        raise InvkError("q is not idempotent")
    for b in basis:
        if q * b * q != q * b:
            raise InvkError("a basis element x violates q x q = q x")
    table = {}
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            c = A.coords(a * b)
            if c is None:
                raise InvkError("input not closed under product")
            table[(i, j)] = c

    def left(m: Matrix) -> Matrix:
        # column j holds the coordinates of m * basis[j]
        return Matrix.from_columns([A.coords(m * b) for b in basis])

    L = [left(b) for b in basis]
    injective = vectors_rank([m.flat() for m in L]) == n
    multiplicative = all(
        left(basis[i] * basis[j]) == L[i] * L[j] for i in range(n) for j in range(n))
    unit = left(ident) == Matrix.identity(n)
    qL = left(q)
    q_image = qL == sum((L[i] * c for i, c in enumerate(A.coords(q)) if c), Matrix.zeros(n))
    ann = [A.coords(q * b - b) for b in basis]
    ann_basis = _independent(ann)
    try:
        ann_idem = bool(ann_basis) and validate_idempotent(n, ann_basis, qL)
    except ValueError:
        ann_idem = False
    in_end = False
    if ann_idem:
        target = LinearInvariantAlgebra(n, tuple(ann_basis), qL)
        in_end = all(in_end_w(m, target) for m in L)
    passed = injective and multiplicative and unit and q_image and ann_idem and in_end
    return EmbeddingReport(n, len(ann_basis), injective, multiplicative, unit, q_image, ann_idem,
                           in_end, passed, {i: m for i, m in enumerate(L)})


def _independent(vectors) -> list:
    out = []
    for v in vectors:
        if any(v) and vectors_rank(out + [v]) == len(out) + 1:
            out.append(v)
    return out


@dataclass
class ExtensionReport:
    passed: bool
    rep_ok: bool
    pairs_checked: int = 0
    defects: list = field(default_factory=list)


def extend_to_envelope(r: Reducer, rep: MatRep) -> ExtensionReport:
    """Evaluate normal monomials letter by letter and check multiplicativity.

    f'(w) is the ordered product of rho(x_i) and the q matrix along w; the
    check covers f'(1), f'(q), f'(i(x)) = rho(x) and every pair of normal
    monomials whose product fits under the degree cap.
    """
    rc = check_rep(r.sc, rep, r.variant)
    if not rc.passed:
        return ExtensionReport(False, False, defects=[{"check": "representation", "detail": rc}])
    if as_scalar(rep.k) != r.k:
        raise InvkError("representation and envelope use different k")
    alg = rep.target
    ident = alg.one
    cache: dict = {}

    def f(w):
        m = cache.get(w)
        if m is None:
            m = ident
            for a in w:
                m = m * (alg.q if a == Q else rep.rho[a])
            cache[w] = m
        return m

    def f_elem(e):
        total = Matrix.zeros(alg.dimV)
        for w, c in e.terms.items():
            total = total + f(w) * c
        return total

    defects = []
    if f(()) != ident:
        defects.append({"check": "unit"})
    if f((Q,)) != alg.q:
        defects.append({"check": "q"})
    for i in range(1, r.sc.n + 1):
        if f_elem(r.gen(i)) != rep.rho[i]:
            defects.append({"check": "generator", "index": i})
    count = 0
    mons = r.normal_index
    for a in mons:
        for b in mons:
            if xdeg(a) + xdeg(b) > r.D:
                continue
            count += 1
            try:
                prod = r.mul(r.word(a), r.word(b))
            except DegreeCapExceeded:
                continue
            if f_elem(prod) != f(a) * f(b):
                defects.append({"check": "multiplicative", "pair": (a, b)})
    return ExtensionReport(not defects, True, count, defects)
