import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from _algebras import (ABELIAN1, ABELIAN2, HEISENBERG3, LEIBNIZ2, LEIBNIZ_TRIVIAL1, NONABELIAN2,
                       SL2, SL2_LEIBNIZ)
from invk.envelope import (K_NONZERO_MESSAGE, build_reducer, check_embedding, is_normal,
                           normal_monomials, relation_generators)
from invk.errors import DegreeCapExceeded, PBWDefect, StructureError, ZeroParameterError
from invk.structures import StructureConstants
from invk.words import Q, FreeElem, basis_words, parse_expr, xdeg


def sympy_span_rank(sc, k, variant, D):
    """Rank of all u r v (X-degree <= D) by dense sympy elimination."""
    rels = relation_generators(sc, k, variant).generators
    words = basis_words(sc.n, D)
    col = {w: i for i, w in enumerate(words)}
    rows = []
    for r in rels:
        room = D - 2
        for u in words:
            for v in words:
                if xdeg(u) + xdeg(v) > room:
                    continue
                e = FreeElem.word(u) * r * FreeElem.word(v)
                row = [0] * len(words)
                for w, c in e.terms.items():
                    row[col[w]] = c
                rows.append(row)
    return sympy.Matrix(rows).rank() if rows else 0


@pytest.mark.parametrize("sc,variant,D,counts", [
    (ABELIAN2, "6th", 2, (24, 21, 3)),
    (LEIBNIZ_TRIVIAL1, "4th", 2, (9, 8, 1)),
])
def test_anchor_counts(sc, variant, D, counts):
    r = build_reducer(sc, 1, variant, D)
    c = r.certificate
    assert (c.basis_count, c.normal_count, c.span_rank) == counts
    assert c.span_rank == sympy_span_rank(sc, 1, variant, D)
    assert c.certified


@pytest.mark.parametrize("sc,variant,D,k", [
    (NONABELIAN2, "6th", 3, 2), (HEISENBERG3, "6th", 2, Fraction(1, 2)),
    (SL2, "6th", 2, -1), (SL2_LEIBNIZ, "4th", 2, 2), (ABELIAN2, "4th", 3, 1),
])
def test_span_rank_matches_sympy(sc, variant, D, k):
    r = build_reducer(sc, k, variant, D)
    assert r.certificate.span_rank == sympy_span_rank(sc, k, variant, D)


def test_one_dimensional_abelian_has_no_relations():
    for D in (2, 3, 4):
        for k in (1, 2, -1, Fraction(1, 2)):
            r = build_reducer(ABELIAN1, k, "6th", D)
            assert r.certificate.span_rank == 0
            assert r.certificate.certified


def _families(n, D, variant):
    """Constructive enumeration of the normal families."""
    out = set()
    sorted_words = lambda m: itertools.combinations_with_replacement(range(1, n + 1), m)  # noqa
    for m in range(D + 1):
        for s in sorted_words(m):
            out.add(s)
            out.add((Q,) + s)
        for tail_len in range(m):
            head_len = m - tail_len
            if variant == "4th" and head_len != 1:
                continue
            for tail in sorted_words(tail_len):
                for j0 in range(1, n + 1):
                    # the sixth family needs j0 <= tail; the fourth has no such link
                    if variant == "6th" and tail and j0 > tail[0]:
                        continue
                    heads = [()] if variant == "4th" else sorted_words(head_len - 1)
                    for h in heads:
                        out.add(tuple(h) + (j0, Q) + tail)
    return out


@pytest.mark.parametrize("variant", ["6th", "4th"])
@pytest.mark.parametrize("n,D", [(1, 5), (2, 4), (3, 3)])
def test_normal_families_match_constructive_enumeration(variant, n, D):
    assert set(normal_monomials(n, D, variant)) == _families(n, D, variant)


def test_is_normal_rejects_non_canonical():
    with pytest.raises(ValueError):
        is_normal((Q, 1, Q), "6th")


def test_zero_k_is_rejected():
    with pytest.raises(ZeroParameterError) as info:
        build_reducer(SL2, 0, "6th", 3)
    assert str(info.value) == K_NONZERO_MESSAGE


def test_invalid_inputs_are_rejected():
    bad = StructureConstants(2, "lie", {(1, 2): (1, 0), (2, 1): (1, 0)})
    with pytest.raises(StructureError):
        build_reducer(bad, 1, "6th", 2)
    with pytest.raises(StructureError):
        build_reducer(LEIBNIZ2, 1, "6th", 2)
    with pytest.raises(ValueError):
        build_reducer(ABELIAN2, 1, "6th", 1)


def test_degree_cap():
    r = build_reducer(ABELIAN2, 1, "6th", 3)
    with pytest.raises(DegreeCapExceeded):
        r.word((1, 1, 1, 1))
    with pytest.raises(DegreeCapExceeded):
        r.mul(r.word((1, 1)), r.word((2, 2)))


def test_leibniz2_witness_lies_in_relation_span():
    # q <x,x> = 0 in every invariant algebra, so i(y) = i(y) q in the envelope
    with pytest.raises(PBWDefect) as info:
        build_reducer(LEIBNIZ2, 1, "4th", 3)
    cert = info.value.certificate
    assert not cert.complementary
    y, yq = FreeElem.word((2,)), FreeElem.word((2, Q))
    assert info.value.witness == y - yq
    # independent check: adding y - yq to the relation rows does not raise the rank
    rels = relation_generators(LEIBNIZ2, 1, "4th").generators
    words = basis_words(2, 2)
    col = {w: i for i, w in enumerate(words)}

    def dense(e):
        row = [0] * len(words)
        for w, c in e.terms.items():
            row[col[w]] = c
        return row
    units = [FreeElem.one(), FreeElem.q()]
    rows = [dense(u * r * v) for r in rels for u in units for v in units]
    base = sympy.Matrix(rows).rank()
    assert sympy.Matrix(rows + [dense(y - yq)]).rank() == base


def test_non_strict_build_reports_the_defect():
    r = build_reducer(LEIBNIZ2, 2, "4th", 2, strict=False)
    assert not r.certificate.certified
    assert r.certificate.witness_kind == "relation span meets the normal span"


def test_modular_reducer_matches_rational():
    a = build_reducer(SL2, 2, "6th", 3)
    b = build_reducer(SL2, 2, "6th", 3, modulus=10007)
    assert a.certificate.span_rank == b.certificate.span_rank
    assert b.certificate.certified


@pytest.mark.parametrize("sc,variant", [(SL2, "6th"), (HEISENBERG3, "6th"),
                                         (SL2_LEIBNIZ, "4th"), (NONABELIAN2, "4th")])
def test_embedding_of_the_bracket(sc, variant):
    r = build_reducer(sc, Fraction(1, 2), variant, 3)
    assert check_embedding(r).passed


def test_normal_words_reduce_to_themselves():
    r = build_reducer(SL2, 1, "6th", 3)
    for w in r.normal_index:
        assert r.word(w).terms == {w: 1}


def test_relations_vanish_in_the_quotient():
    r = build_reducer(NONABELIAN2, 2, "6th", 4)
    for rel in r.relations.generators:
        for u in [(), (Q,), (1,), (2, Q)]:
            for v in [(), (Q,), (2,), (1, 2)]:
                if xdeg(u) + xdeg(v) + 2 > r.D:
                    continue
                assert r.reduce(FreeElem.word(u) * rel * FreeElem.word(v)).is_zero()


R = build_reducer(NONABELIAN2, 2, "6th", 4)
small_words = st.lists(st.integers(0, 2), max_size=3).map(tuple)
small_elems = st.dictionaries(small_words, st.integers(-2, 2), max_size=3).map(FreeElem)


def _fits(*es):
    return sum(e.xdeg() for e in es) <= R.D


@settings(max_examples=60, deadline=None)
@given(small_elems, small_elems)
def test_reduction_is_a_homomorphism(a, b):
    if not _fits(a, b):
        return
    assert R.reduce(a * b) == R.reduce(a) * R.reduce(b)
    assert R.reduce(a + b) == R.reduce(a) + R.reduce(b)


@settings(max_examples=60, deadline=None)
@given(small_elems)
def test_reduction_is_idempotent(a):
    nf = R.reduce(a)
    assert R.reduce(nf.lift()) == nf
    assert all(R.is_normal(w) for w in nf.terms)


@settings(max_examples=40, deadline=None)
@given(small_elems, small_elems, small_elems)
def test_envelope_product_associative(a, b, c):
    if not _fits(a, b, c):
        return
    x, y, z = R.reduce(a), R.reduce(b), R.reduce(c)
    assert (x * y) * z == x * (y * z)


def test_filtration_stability_against_lower_degree():
    hi = build_reducer(HEISENBERG3, 2, "6th", 3)
    lo = build_reducer(HEISENBERG3, 2, "6th", 2)
    for w in lo.basis:
        assert hi.word(w).terms == lo.word(w).terms


def test_abelian2_relation_generator():
    rs = relation_generators(ABELIAN2, 1, "6th")
    assert rs.pairs == ((1, 2),)
    assert rs.generators[0] == parse_expr(
        "-x1*x2 + x2*x1 + x1*x2*q - x2*x1*q - x1*q*x2 + x2*q*x1")


def test_sl2_commutator_example():
    r = build_reducer(SL2, 1, "6th", 3)
    h, e = r.gen(1), r.gen(2)
    # i([h,e]) = 2 e, and the 6th bracket of the images agrees after reduction
    from invk.structures import bracket6
    assert bracket6(r, h, e, 1) == e.scale(2)
    assert check_embedding(build_reducer(LEIBNIZ2, 1, "4th", 3, strict=False)).passed
