"""Lie and Leibniz structure constants and the two q-deformed brackets.

``bracket6`` and ``bracket4`` work in any invariant-algebra context: an
object with ``one`` and ``q`` attributes whose elements multiply with ``*``
and scale by scalars.  Free, matrix and envelope contexts all qualify.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import InvkError
from .scalars import as_scalar
from .words import FreeContext, FreeElem

__all__ = [
    "StructureConstants", "StructureReport", "validate_structure", "bracket6", "bracket4",
    "bracket", "BracketCertificate", "certify_bracket_identity", "jacobi_defect",
    "leibniz_defect", "antisymmetry_witness", "SIXTH", "FOURTH",
]

SIXTH = "sixth"
FOURTH = "fourth"


@dataclass(frozen=True)
class StructureConstants:
    """Bracket table of an n-dimensional Lie or Leibniz algebra.

    ``table[(i, j)]`` is the coefficient tuple of the bracket of x_i with x_j
    (1-based indices); missing pairs bracket to zero.
    """

    n: int
    kind: str
    table: Mapping[tuple[int, int], tuple] = field(default_factory=dict)
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in ("lie", "leibniz"):
            raise ValueError(f"kind must be 'lie' or 'leibniz', got {self.kind!r}")
        if self.n < 1:
            raise ValueError("dimension must be positive")
        clean = {}
        for (i, j), coeffs in self.table.items():
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"bracket index ({i},{j}) out of range")
            coeffs = tuple(as_scalar(c) for c in coeffs)
            if len(coeffs) != self.n:
                raise ValueError(f"bracket ({i},{j}) needs {self.n} coefficients")
            if any(coeffs):
                clean[(i, j)] = coeffs
        object.__setattr__(self, "table", clean)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"x{i}" for i in range(1, self.n + 1)))
        if len(self.labels) != self.n or len(set(self.labels)) != self.n:
            raise ValueError("labels must be unique, one per basis element")

    @classmethod
    def from_brackets(cls, n: int, kind: str, brackets: Mapping[tuple[int, int], Sequence],
                      labels: Sequence[str] = (), antisymmetrize: bool = True):
        """Build a table; for Lie kind a missing (j,i) entry is filled as -(i,j)."""
        table = {k: tuple(v) for k, v in brackets.items()}
        if kind == "lie" and antisymmetrize:
            for (i, j), v in list(table.items()):
                if (j, i) not in table and i != j:
                    table[(j, i)] = tuple(-as_scalar(c) for c in v)
        return cls(n, kind, table, tuple(labels))

    def as_leibniz(self) -> "StructureConstants":
        return StructureConstants(self.n, "leibniz", self.table, self.labels)

    def coeffs(self, i: int, j: int) -> tuple:
        return self.table.get((i, j), (Fraction(0),) * self.n)

    def bracket_vec(self, u: Sequence, v: Sequence) -> tuple:
        """Bracket of coordinate vectors (0-based lists of length n)."""
        out = [Fraction(0)] * self.n
        for (i, j), c in self.table.items():
            a = u[i - 1] * v[j - 1]
            if a:
                for l in range(self.n):
                    out[l] += a * c[l]
        return tuple(out)

    def basis_vec(self, i: int) -> tuple:
        return tuple(Fraction(1 if l == i else 0) for l in range(1, self.n + 1))

    def image(self, i: int, j: int, images: Mapping[int, object], zero):
        """Linear combination sum_l c_ij^l images[l]."""
        total = zero
        for l, c in enumerate(self.coeffs(i, j), start=1):
            if c:
                total = total + images[l] * c
        return total


@dataclass
class StructureReport:
    kind: str
    valid: bool
    violations: list = field(default_factory=list)


def validate_structure(sc: StructureConstants) -> StructureReport:
    """Check antisymmetry and Jacobi (Lie) or the right Leibniz identity."""
    n = sc.n
    violations = []
    e = [None] + [sc.basis_vec(i) for i in range(1, n + 1)]
    br = sc.bracket_vec
    if sc.kind == "lie":
        for i in range(1, n + 1):
            for j in range(i, n + 1):
                s = tuple(a + b for a, b in zip(sc.coeffs(i, j), sc.coeffs(j, i)))
                if any(s):
                    violations.append({"identity": "antisymmetry", "indices": (i, j), "defect": s})
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                for k in range(1, n + 1):
                    terms = (br(br(e[i], e[j]), e[k]), br(br(e[j], e[k]), e[i]),
                             br(br(e[k], e[i]), e[j]))
                    s = tuple(sum(t) for t in zip(*terms))
                    if any(s):
                        violations.append({"identity": "jacobi", "indices": (i, j, k), "defect": s})
    else:
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                for k in range(1, n + 1):
                    lhs = br(br(e[i], e[j]), e[k])
                    r1 = br(e[i], br(e[j], e[k]))
                    r2 = br(br(e[i], e[k]), e[j])
                    s = tuple(a - b - c for a, b, c in zip(lhs, r1, r2))
                    if any(s):
                        violations.append({"identity": "right-leibniz", "indices": (i, j, k),
                                           "defect": s})
    return StructureReport(sc.kind, not violations, violations)


def bracket6(ctx, a, b, k):
    """a b - b a - a b q + b a q + k a q b - k b q a."""
    q = ctx.q
    ab, ba = a * b, b * a
    return ab - ba - ab * q + ba * q + (a * q * b - b * q * a) * k


def bracket4(ctx, a, b, k):
    """a b - b a + b q a - a b q + k a q b - k q b a."""
    q = ctx.q
    ab, ba = a * b, b * a
    return ab - ba + b * q * a - ab * q + (a * q * b - q * ba) * k


def bracket(variant: str, ctx, a, b, k):
    if variant == SIXTH:
        return bracket6(ctx, a, b, k)
    if variant == FOURTH:
        return bracket4(ctx, a, b, k)
    raise ValueError(f"unknown bracket variant {variant!r}")


def jacobi_defect(br, x, y, z):
    return br(br(x, y), z) + br(br(y, z), x) + br(br(z, x), y)


def leibniz_defect(br, x, y, z):
    return br(br(x, y), z) - br(x, br(y, z)) - br(br(x, z), y)


@dataclass
class BracketCertificate:
    tag: str
    samples: list
    defects: list          # one FreeElem per sample
    certified: bool


def certify_bracket_identity(tag: str, k_samples: Sequence) -> BracketCertificate:
    """Evaluate the Jacobi (sixth) or right-Leibniz (fourth) defect on x1, x2, x3.

    The defect is a polynomial in k of degree at most two, so vanishing at
    three or more distinct samples proves the identity for every k.
    """
    samples = [as_scalar(k) for k in k_samples]
    if len(set(samples)) < 3:
        raise InvkError("insufficient interpolation points: need at least 3 distinct k values")
    ctx = FreeContext(3)
    x1, x2, x3 = (ctx.gen(i) for i in (1, 2, 3))
    defects = []
    for k in samples:
        if tag == SIXTH:
            d = jacobi_defect(lambda a, b: bracket6(ctx, a, b, k), x1, x2, x3)
        elif tag == FOURTH:
            d = leibniz_defect(lambda a, b: bracket4(ctx, a, b, k), x1, x2, x3)
        else:
            raise ValueError(f"unknown bracket tag {tag!r}")
        defects.append(d)
    return BracketCertificate(tag, samples, defects, all(d.is_zero() for d in defects))


def antisymmetry_witness(tag: str, k) -> FreeElem:
    """bracket(x, x) in the free invariant algebra on one generator."""
    ctx = FreeContext(1)
    x = ctx.gen(1)
    return bracket(tag, ctx, x, x, as_scalar(k))
