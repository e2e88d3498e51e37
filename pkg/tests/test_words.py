import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from invk.errors import NotInvariantAlgebra, ParseError
from invk.linalg import Matrix, vectors_rank
from invk.words import (Q, FreeContext, FreeElem, basis_words, canonicalize, evaluate,
                        is_canonical, parse_expr, term_key, xdeg)


def brute_force_count(n: int, m: int) -> int:
    """Canonical words of X-degree m, found by filtering every string over {q, x1..xn}."""
    alphabet = range(n + 1)
    return sum(1 for length in range(m, m + 2)
               for w in itertools.product(alphabet, repeat=length)
               if xdeg(w) == m and is_canonical(w))


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("m", range(6))
def test_basis_count_law(n, m):
    words = [w for w in basis_words(n, m) if xdeg(w) == m]
    expected = 2 if m == 0 else (m + 2) * n ** m
    assert len(words) == len(set(words)) == expected == brute_force_count(n, m)


def test_basis_words_sorted_and_canonical():
    ws = basis_words(2, 3)
    assert ws == sorted(ws, key=term_key)
    assert all(is_canonical(w) for w in ws)
    assert ws[:2] == [(), (Q,)]


def _matrix_model(n, dimV, seed):
    # block upper-triangular maps preserve W = first half of the coordinates
    rnd = random.Random(seed)
    half = dimV // 2
    gens = {i: Matrix([[rnd.randint(-3, 3) if not (r >= half and c < half) else 0
                        for c in range(dimV)] for r in range(dimV)]) for i in range(1, n + 1)}
    q = Matrix([[1 if r == c and r >= half else 0 for c in range(dimV)] for r in range(dimV)])

    class Ctx:
        pass
    ctx = Ctx()
    ctx.one, ctx.q = Matrix.identity(dimV), q
    return gens, ctx


@pytest.mark.parametrize("n,m,dimV", [(1, 4, 6), (2, 2, 6), (3, 2, 10)])
def test_canonical_words_independent_in_a_matrix_model(n, m, dimV):
    # an invariant homomorphism into End_W(V) with independent images proves
    # the words are independent in the free invariant algebra
    gens, ctx = _matrix_model(n, dimV, seed=1)
    words = [w for w in basis_words(n, m) if xdeg(w) == m]
    images = [evaluate(FreeElem.word(w), gens, ctx).flat() for w in words]
    assert vectors_rank(images) == len(words)


def test_evaluate_respects_the_defining_relations():
    gens, ctx = _matrix_model(2, 4, seed=3)
    for w in [(Q, Q), (Q, 1, Q), (1, Q, 2, Q, 1), (Q, 2, 2, Q)]:
        direct = ctx.one
        for a in w:
            direct = direct * (ctx.q if a == Q else gens[a])
        assert evaluate(FreeElem.word(w), gens, ctx) == direct


def test_evaluate_rejects_non_invariant_images():
    gens, ctx = _matrix_model(1, 4, seed=0)
    gens[1] = Matrix([[0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0]])
    with pytest.raises(NotInvariantAlgebra):
        evaluate(FreeElem.gen(1), gens, ctx)


words = st.lists(st.integers(0, 3), max_size=6).map(tuple)
elems = st.dictionaries(words, st.integers(-3, 3), max_size=4).map(FreeElem)


@given(words)
def test_canonicalize_idempotent_and_q_rules(w):
    c = canonicalize(w)
    assert canonicalize(c) == c
    assert xdeg(c) == xdeg(w)
    assert canonicalize(c + (Q, Q)) == canonicalize(c + (Q,))


@settings(max_examples=80, deadline=None)
@given(elems, elems, elems)
def test_free_product_is_associative_and_distributive(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c


@given(elems)
def test_q_relations_in_free_algebra(a):
    q = FreeElem.q()
    assert q * q == q
    for w in a.terms:
        x = FreeElem.word(w)
        assert q * x * q == q * x


@settings(max_examples=80, deadline=None)
@given(elems)
def test_format_parse_round_trip(a):
    assert parse_expr(a.format()) == a


def test_parse_expr_examples():
    assert parse_expr("q*q") == FreeElem.q()
    assert parse_expr("2*(x1 + q)*x2 - 1/2") == (
        FreeElem.word((1, 2), 2) + FreeElem.word((Q, 2), 2) - FreeElem.word((), Fraction(1, 2)))
    assert parse_expr("h*e", ["h", "e", "f"]) == FreeElem.word((1, 2))


@pytest.mark.parametrize("text,pos", [("x1 + ", 5), ("x1 * * x2", 5), ("x1 $ x2", 3),
                                       ("(x1", 3), ("zz", 0)])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse_expr(text)
    assert info.value.position == pos


def test_free_context():
    ctx = FreeContext(2)
    assert ctx.gen(2) == FreeElem.word((2,))
    with pytest.raises(ValueError):
        ctx.gen(3)
