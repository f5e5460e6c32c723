import pytest
from hypothesis import given, strategies as st

from kaprekar.digits import (
    DigitVector,
    DomainError,
    from_digits,
    is_repdigit,
    kaprekar_map,
    kaprekar_table,
    sorted_digits,
    to_digits,
)

from oracle import brute_kaprekar


@pytest.mark.parametrize("x, m, n, digits", [
    (170, 13, 3, (1, 0, 1)),
    (0, 10, 4, (0, 0, 0, 0)),
    (999, 10, 4, (0, 9, 9, 9)),
])
def test_to_digits(x, m, n, digits):
    assert to_digits(x, m, n).digits == digits


@pytest.mark.parametrize("digits, m, x", [
    ((0, 12, 12), 13, 168),
    ((0, 0), 7, 0),
    ((6, 1, 7, 4), 10, 6174),
])
def test_from_digits(digits, m, x):
    assert from_digits(DigitVector(m, digits)) == x


def test_to_digits_rejects_unrepresentable():
    with pytest.raises(DomainError, match="not representable"):
        to_digits(10000, 10, 4)
    with pytest.raises(DomainError):
        to_digits(-1, 10, 4)


@pytest.mark.parametrize("digits", [(), (10,), (-1, 3)])
def test_digit_vector_invariants(digits):
    with pytest.raises(DomainError):
        DigitVector(10, digits)


def test_digit_vector_rejects_base_one():
    with pytest.raises(DomainError):
        DigitVector(1, (0,))


def test_digit_vector_renders_as_tuple():
    assert str(to_digits(1008, 13, 3)) == "(5,12,7)"


@pytest.mark.parametrize("x, m, n, fx", [
    (9990, 10, 4, 8991),
    (3333, 10, 4, 0),
    (170, 13, 3, 168),
    (3332, 10, 4, 999),
    (8820, 10, 4, 8532),
])
def test_kaprekar_map(x, m, n, fx):
    assert kaprekar_map(x, m, n) == fx


def test_kaprekar_map_domain():
    with pytest.raises(DomainError):
        kaprekar_map(100, 10, 2)
    with pytest.raises(DomainError):
        kaprekar_map(0, 1, 2)


@pytest.mark.parametrize("x, m, n, expected", [
    (3333, 10, 4, True),
    (6174, 10, 4, False),
    (5, 10, 2, False),
    (0, 7, 3, True),
])
def test_is_repdigit(x, m, n, expected):
    assert is_repdigit(x, m, n) is expected


def test_counting_sort_branch_matches_builtin():
    # m <= n takes the bucket path
    for x in range(3**5):
        assert sorted_digits(x, 3, 5) == sorted(to_digits(x, 3, 5).digits)


@pytest.mark.parametrize("m, n", [(2, 5), (7, 3), (10, 4), (13, 2)])
def test_table_matches_scalar(m, n):
    table = kaprekar_table(m, n)
    assert table.tolist() == [kaprekar_map(x, m, n) for x in range(m**n)]


def test_table_slice():
    assert kaprekar_table(10, 4, 6000, 6200).tolist() == [kaprekar_map(x, 10, 4) for x in range(6000, 6200)]


def test_table_refuses_int64_overflow():
    with pytest.raises(DomainError):
        kaprekar_table(2**32, 2)


systems = st.integers(2, 10**6).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.tuples(st.just(m), st.just(n), st.integers(0, m**n - 1))))


@given(systems)
def test_round_trip(sys_):
    m, n, x = sys_
    dv = to_digits(x, m, n)
    assert len(dv) == n
    assert from_digits(dv) == x


@given(systems)
def test_map_matches_oracle_and_divisibility(sys_):
    m, n, x = sys_
    fx = kaprekar_map(x, m, n)
    assert fx == brute_kaprekar(x, m, n)
    assert 0 <= fx < m**n
    assert fx % (m - 1) == 0
    if n == 3:
        assert fx % (m * m - 1) == 0
    assert (fx == 0) == is_repdigit(x, m, n)


@given(systems, st.randoms(use_true_random=False))
def test_permutation_invariance(sys_, rnd):
    m, n, x = sys_
    digits = list(to_digits(x, m, n).digits)
    rnd.shuffle(digits)
    y = from_digits(DigitVector(m, tuple(digits)))
    assert kaprekar_map(y, m, n) == kaprekar_map(x, m, n)
