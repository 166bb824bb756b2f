import pytest
from hypothesis import given
from hypothesis import strategies as st

from lambdap.core.combin import (
    BasisOrder,
    alpha,
    alpha_nonvanishing,
    elements_of,
    flat_order,
    k_subsets,
    mask_of,
    submasks,
    theta,
)
from lambdap.core.errors import DimensionError
from lambdap.core.qfunctions import (
    gauss_gamma,
    p_factorial,
    qbinom,
    qfactorial,
    qint,
    qpochhammer,
    w_polynomial,
)
from lambdap.core.ring import ONE, P, T, LaurentPoly, RationalFn


# ===================================================
# Subsets
# ===================================================

def test_masks_and_elements():
    assert mask_of([1, 3]) == 0b101
    assert elements_of(0b101) == [1, 3]
    with pytest.raises(DimensionError):
        mask_of([0])


def test_submasks_and_k_subsets():
    assert submasks(0b101) == [0, 1, 4, 5]
    assert k_subsets(0b111, 2) == [3, 5, 6]
    assert k_subsets(0b11, 3) == []


def test_flat_order_sorts_by_degree_then_elements():
    assert flat_order(2) == (0, 1, 2, 3)
    assert flat_order(3) == (0, 1, 2, 4, 3, 5, 6, 7)
    assert BasisOrder(3).flat_index(0b101) == 5


def test_basis_order_bounds():
    with pytest.raises(DimensionError):
        BasisOrder(0)
    with pytest.raises(DimensionError):
        BasisOrder(17)


def test_theta_counts_inversions():
    assert theta(mask_of([2]), mask_of([1])) == 1
    assert theta(mask_of([1]), mask_of([2])) == 0
    assert theta(mask_of([2, 4]), mask_of([1, 3])) == 3


# ===================================================
# alpha
# ===================================================

def test_alpha_nonzero_beyond_injective_theta():
    g, h = mask_of([3, 4]), mask_of([1, 2])
    assert alpha(g, h) == (P ** 2 - ONE) * (P - ONE)
    assert alpha_nonvanishing(g, h)


def test_alpha_vanishes_when_g_starts_below_h():
    g, h = mask_of([1]), mask_of([2])
    assert alpha(g, h).is_zero()
    assert not alpha_nonvanishing(g, h)


def test_alpha_needs_h_at_least_as_large():
    assert not alpha_nonvanishing(mask_of([2, 3]), mask_of([1]))
    assert alpha(mask_of([2, 3]), mask_of([1])).is_zero()


@given(st.lists(st.integers(0, 2), min_size=1, max_size=7))
def test_alpha_criterion(labels):
    g = sum(1 << i for i, label in enumerate(labels) if label == 1)
    h = sum(1 << i for i, label in enumerate(labels) if label == 2)
    assert (not alpha(g, h).is_zero()) == alpha_nonvanishing(g, h)


# ===================================================
# q-functions
# ===================================================

def test_qbinom_values():
    assert qbinom(4, 2) == LaurentPoly({(0, 0): 1, (1, 0): 1, (2, 0): 2, (3, 0): 1, (4, 0): 1})
    assert qbinom(5, 0) == ONE
    with pytest.raises(DimensionError):
        qbinom(2, 3)


def test_pochhammer_and_factorials():
    assert qpochhammer(T, 2) == (ONE - T) * (ONE - T * P)
    assert qpochhammer(T, 0) == ONE
    assert qint(3) == ONE + P + P ** 2
    assert qfactorial(3) == (ONE + P) * (ONE + P + P ** 2)
    assert gauss_gamma(3) == -(P ** 3)


@given(st.integers(0, 6), st.integers(0, 6))
def test_pochhammer_split(m, k):
    assert qpochhammer(T, m + k) == qpochhammer(T, k) * qpochhammer(T * P ** k, m)


def test_w_polynomial_low_orders():
    assert w_polynomial(0, T, P) == ONE
    assert w_polynomial(1, T, P) == ONE - T + P


@given(st.integers(1, 10), st.data())
def test_qbinom_recurrence(n, data):
    k = data.draw(st.integers(1, n))
    below = qbinom(n - 1, k) if k < n else LaurentPoly()
    assert qbinom(n, k) == qbinom(n - 1, k - 1) + P ** k * below


@given(st.integers(0, 10), st.data())
def test_qbinom_symmetry(n, data):
    k = data.draw(st.integers(0, n))
    assert qbinom(n, k) == qbinom(n, n - k)


@pytest.mark.parametrize("x", [T, T * P, P ** 2 * T])
@pytest.mark.parametrize("n", range(9))
def test_qbinom_theorem(n, x):
    total = LaurentPoly()
    for m in range(n + 1):
        total = total + qbinom(n, m) * gauss_gamma(m) * x ** m
    assert total == qpochhammer(x, n)


@pytest.mark.parametrize("n", range(9))
def test_pochhammer_summation(n):
    total = RationalFn(0)
    for m in range(n + 1):
        total = total + RationalFn(P ** m, p_factorial(m))
    assert total == RationalFn(ONE, p_factorial(n))


@pytest.mark.parametrize("n", range(5))
def test_w_polynomial_boundary_values(n):
    assert w_polynomial(n, 1, T) == RationalFn(T ** n, qfactorial(n))
    assert w_polynomial(n, T, 0) == RationalFn(qpochhammer(T, n))


def test_w_polynomial_second_order():
    expected = RationalFn(
        (ONE - T) * (ONE - T * P) * (ONE + P) + P * (ONE - T) * (ONE + P) + P ** 2,
        ONE + P,
    )
    assert w_polynomial(2, T, P) == expected
