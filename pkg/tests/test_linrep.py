from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from _algebras import ABELIAN1, HEISENBERG3, NONABELIAN2
from invk.envelope import build_reducer
from invk.errors import InvkError
from invk.linalg import Matrix
from invk.linrep import (FiniteInvariantAlgebra, LinearInvariantAlgebra, MatRep, check_rep,
                         extend_to_envelope, idempotent_violations, in_end_w,
                         regular_embedding, validate_idempotent)
from invk.structures import bracket6

E1, E2, E3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
Q3 = Matrix([[0, 0, 1], [0, 0, 0], [0, 0, 1]])    # q e3 = e1 + e3, kills W = <e1, e2>
ALG3 = LinearInvariantAlgebra(3, (E1, E2), Q3)


def test_w_idempotent_examples():
    assert validate_idempotent(3, [E1, E2], Q3)
    assert validate_idempotent(2, [(1, 0)], Matrix([[0, 0], [0, 1]]))
    # a projection onto W itself fails q(W) = 0
    bad = Matrix([[1, 0], [0, 0]])
    assert idempotent_violations(2, [(1, 0)], bad) == [
        "q(W) = 0 fails on W basis vector 1", "q(v) - v in W fails for v = e2"]


def test_zero_subspace_is_rejected():
    with pytest.raises(ValueError):
        validate_idempotent(2, [], Matrix([[1, 0], [0, 1]]))
    with pytest.raises(InvkError):
        LinearInvariantAlgebra(2, [(1, 0)], Matrix.identity(2))


ints = st.integers(-3, 3)


@settings(max_examples=60, deadline=None)
@given(st.lists(ints, min_size=9, max_size=9))
def test_end_w_agrees_with_invariance(entries):
    # f(W) inside W is equivalent to q f q = q f; in_end_w asserts the agreement
    f = Matrix([entries[0:3], entries[3:6], entries[6:9]])
    preserves = f.rows[2][0] == 0 and f.rows[2][1] == 0
    assert in_end_w(f, ALG3) == preserves


@settings(max_examples=30, deadline=None)
@given(st.lists(ints, min_size=9, max_size=9), st.lists(ints, min_size=9, max_size=9),
       st.fractions(min_value=-2, max_value=2, max_denominator=3))
def test_bracket6_closes_on_end_w(a, b, k):
    # block upper-triangular maps live in End_W(V); so does their 6th bracket
    def mk(e):
        return Matrix([e[0:3], e[3:6], [0, 0, e[8]]])
    x, y = mk(a), mk(b)
    assert in_end_w(bracket6(ALG3, x, y, k), ALG3)


def test_scalar_representation_of_abelian():
    alg = LinearInvariantAlgebra(2, [(1, 0)], Matrix([[0, 0], [0, 1]]))
    rep = MatRep({1: Matrix([[3, 1], [0, 3]])}, alg, 1)
    assert check_rep(ABELIAN1, rep, "6th").passed


def test_nonabelian_negative_control():
    alg = LinearInvariantAlgebra(2, [(1, 0)], Matrix([[0, 0], [0, 1]]))
    rep = MatRep({1: Matrix.identity(2), 2: Matrix.zeros(2)}, alg, 1)
    rc = check_rep(NONABELIAN2, rep, "6th")
    assert not rc.passed
    assert sorted(d["pair"] for d in rc.defects) == [(1, 2), (2, 1)]


def test_representation_outside_end_w():
    alg = LinearInvariantAlgebra(2, [(1, 0)], Matrix([[0, 0], [0, 1]]))
    rep = MatRep({1: Matrix([[0, 0], [1, 0]])}, alg, 1)
    rc = check_rep(ABELIAN1, rep, "6th")
    assert rc.outside_end_w == [1]


def test_heisenberg_representation_with_trivial_centre():
    n1 = Matrix([[0, 1, 0], [0, 0, 0], [0, 0, 0]])
    n2 = Matrix([[0, 0, 0], [0, 0, 1], [0, 0, 0]])
    # the 6th bracket of these two vanishes, so x3 must act by zero
    assert bracket6(ALG3, n1, n2, 1).is_zero()
    assert check_rep(HEISENBERG3, MatRep({1: n1, 2: n2, 3: Matrix.zeros(3)}, ALG3, 1),
                     "6th").passed
    rc = check_rep(HEISENBERG3, MatRep({1: n1, 2: n2, 3: n1}, ALG3, 1), "6th")
    assert not rc.passed
    assert (1, 2) in [d["pair"] for d in rc.defects]


UT = FiniteInvariantAlgebra(
    (Matrix.identity(2), Matrix([[0, 0], [0, 1]]), Matrix([[0, 1], [0, 0]])),
    Matrix([[0, 0], [0, 1]]))


@pytest.mark.parametrize("alg,dim,ann", [
    (UT, 3, 2),
    (FiniteInvariantAlgebra((Matrix.identity(1),), Matrix.zeros(1)), 1, 1),
    (FiniteInvariantAlgebra((Matrix.identity(2), Matrix([[0, 0], [0, 1]])),
                            Matrix([[0, 0], [0, 1]])), 2, 1),
])
def test_regular_embedding(alg, dim, ann):
    rep = regular_embedding(alg)
    assert (rep.dim, rep.ann_dim) == (dim, ann)
    assert rep.injective and rep.multiplicative and rep.unit and rep.q_image
    assert rep.ann_idempotent and rep.images_in_end_w and rep.passed


def test_regular_embedding_with_zero_annihilator():
    # q = 1 makes {q x - x} = 0, and a zero subspace is not accepted as W
    rep = regular_embedding(FiniteInvariantAlgebra((Matrix.identity(1),), Matrix.identity(1)))
    assert rep.injective and rep.multiplicative
    assert rep.ann_dim == 0 and not rep.ann_idempotent and not rep.passed


def test_regular_embedding_rejects_non_closed_input():
    bad = FiniteInvariantAlgebra((Matrix.identity(2), Matrix([[0, 1], [0, 0]]),
                                  Matrix([[0, 0], [0, 1]]), Matrix([[0, 0], [1, 0]])),
                                 Matrix([[0, 0], [0, 1]]))
    with pytest.raises(InvkError):
        regular_embedding(bad)


def test_extension_to_the_envelope():
    r = build_reducer(ABELIAN1, 1, "6th", 3)
    n = Matrix([[0, 1, 2], [0, 0, 3], [0, 0, 0]])
    ext = extend_to_envelope(r, MatRep({1: n}, ALG3, 1))
    assert ext.passed and ext.pairs_checked > 0


def test_extension_refuses_mismatched_k():
    r = build_reducer(ABELIAN1, 2, "6th", 3)
    with pytest.raises(InvkError):
        extend_to_envelope(r, MatRep({1: Matrix.zeros(3)}, ALG3, 1))
