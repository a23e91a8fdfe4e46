import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from eica.errors import EicaError, FieldMismatch, ParseError, ShapeError
from eica.exactla import (
    ExactMatrix, FieldSpec, column_space, complement_columns, in_span, kernel_basis, rank, rref, solve,
)
from helpers import F2, F3, Q, brute_kernel_count


def M(f, rows):
    return ExactMatrix(f, rows)


# field specs -------------------------------------------------------------------

def test_field_parse_and_json_round_trip():
    for text, f in [("Q", Q), ("F2", F2), ("GF3", F3)]:
        assert FieldSpec.parse(text) == f
        assert FieldSpec.from_json(f.to_json()) == f
    assert F2.to_json() == {"kind": "Fp", "p": 2}
    with pytest.raises(EicaError):
        FieldSpec.parse("F4")


def test_scalars():
    assert Q.parse_scalar("-3/6") == Fraction(-1, 2)
    assert F3.coerce(5) == 2
    assert F3.inv(2) == 2
    with pytest.raises(ParseError):
        F2.parse_scalar("2")
    with pytest.raises((ParseError, TypeError, ValueError)):
        Q.coerce(0.5)


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatch):
        M(Q, [[1]]) @ M(F2, [[1]])
    with pytest.raises(ShapeError):
        M(Q, [[1, 2]]) @ M(Q, [[1, 2]])


# worked examples ------------------------------------------------------------------

def test_rref_examples():
    red, rk, piv = rref(M(F2, [[1, 1], [1, 1]]))
    assert red == M(F2, [[1, 1], [0, 0]]) and rk == 1 and piv == [0]
    i3 = ExactMatrix.identity(Q, 3)
    assert rref(i3)[:2] == (i3, 3)
    red, rk, _ = rref(M(Q, [[2, 1], [4, 2]]))
    assert red == M(Q, [[1, Fraction(1, 2)], [0, 0]]) and rk == 1


def test_kernel_examples():
    k = kernel_basis(M(F2, [[1, 1], [1, 1]]))
    assert k == M(F2, [[1], [1]])
    assert kernel_basis(M(Q, [[1, 2], [3, 4]])).ncols == 0
    assert kernel_basis(ExactMatrix.zeros(Q, 2, 3)) == ExactMatrix.identity(Q, 3)


def test_solve_examples():
    b = M(Q, [[3, 1], [-2, 5]])
    assert solve(ExactMatrix.identity(Q, 2), b) == b
    assert solve(M(F2, [[1, 1]]), M(F2, [[1]])) == M(F2, [[1], [0]])
    assert solve(M(Q, [[1], [1]]), M(Q, [[1], [0]])) is None
    with pytest.raises(ShapeError):
        solve(M(Q, [[1], [1]]), M(Q, [[1]]))


def test_column_space_and_complement():
    span = column_space(M(Q, [[1, 2], [1, 2], [0, 0]]))
    assert span.ncols == 1
    assert complement_columns(span) == [0, 2]
    assert in_span(span, M(Q, [[3], [3], [0]]))
    assert not in_span(span, M(Q, [[0], [0], [1]]))


# fuzzed invariants ------------------------------------------------------------------

def matrices(field, max_rows=5, max_cols=5):
    if field.is_finite:
        entry = st.integers(0, field.p - 1)
    else:
        entry = st.fractions(min_value=-4, max_value=4, max_denominator=4)

    @st.composite
    def build(draw):
        r = draw(st.integers(0, max_rows))
        c = draw(st.integers(0, max_cols))
        rows = [[draw(entry) for _ in range(c)] for _ in range(r)]
        return ExactMatrix(field, rows, ncols=c)
    return build()


@pytest.mark.parametrize("field", [Q, F2, F3], ids=["Q", "F2", "F3"])
def test_rref_idempotent_and_rank_nullity(field):
    @settings(max_examples=150, deadline=None)
    @given(matrices(field))
    def run(m):
        red, rk, piv = rref(m)
        assert rref(red)[0] == red
        assert rk == rank(m.T)
        k = kernel_basis(m)
        assert rk + k.ncols == m.ncols
        assert (m @ k).is_zero()
        assert rank(k) == k.ncols
    run()


@pytest.mark.parametrize("field", [F2, F3], ids=["F2", "F3"])
def test_kernel_size_matches_enumeration(field):
    @settings(max_examples=60, deadline=None)
    @given(matrices(field, 3, 4))
    def run(m):
        assert brute_kernel_count(m) == field.p ** kernel_basis(m).ncols
    run()


@pytest.mark.parametrize("field", [Q, F2, F3], ids=["Q", "F2", "F3"])
def test_solve_is_exact(field):
    @settings(max_examples=150, deadline=None)
    @given(matrices(field), st.integers(0, 2), st.integers(0, 10**6))
    def run(a, k, seed):
        # consistent right-hand side built from a known solution
        xs = ExactMatrix(field, [[(seed >> (i + 2 * j)) % 5 for j in range(k)]
                                  for i in range(a.ncols)], ncols=k)
        b = a @ xs
        x = solve(a, b)
        assert x is not None and a @ x == b
    run()


def test_solve_detects_inconsistency_by_enumeration():
    # over F_2, a system is solvable iff some vector solves it
    for rows in itertools.product(range(2), repeat=4):
        a = M(F2, [rows[:2], rows[2:]])
        for b in itertools.product(range(2), repeat=2):
            bm = M(F2, [[b[0]], [b[1]]])
            found = any(a.apply(v) == b for v in itertools.product(range(2), repeat=2))
            assert (solve(a, bm) is not None) == found
