import pytest

from lambdap.core.errors import DimensionError, SingularBlockError
from lambdap.core.linalg import invert_matrix, solve_linear
from lambdap.core.ring import ONE, P, T, LaurentPoly, RationalFn
from lambdap.core.tensor import LinearOperator, TensorElement, basis_keys


def swap(n):
    return LinearOperator(n, 2, 2, lambda key: {(key[1], key[0]): ONE}, name="swap")


def left_degree(n):
    return LinearOperator.diagonal(n, 2, lambda key: P ** bin(key[0]).count("1"), name="pl")


# ===================================================
# TensorElement
# ===================================================

def test_tensor_element_cancellation():
    x = TensorElement(2, {(1, 0): P})
    y = TensorElement(2, {(1, 0): -P, (0, 1): ONE})
    assert (x + y).keys() == [(0, 1)]
    assert (x - x).is_zero()


def test_tensor_element_arity_checked():
    with pytest.raises(DimensionError):
        TensorElement(2, {(1,): ONE})
    with pytest.raises(DimensionError):
        TensorElement.basis(1) + TensorElement.basis(1, 0)


def test_tensor_element_text():
    x = TensorElement(2, {(1, 0): ONE - T, (0, 1): -T})
    assert x.to_text() == "-t*f_{0,1} + (1 - t)*f_{1,0}"


def test_tensor_product_of_elements():
    x = TensorElement.basis(1, coeff=P)
    y = TensorElement.basis(0, coeff=T)
    assert x.tensor(y) == TensorElement(2, {(1, 0): P * T})


# ===================================================
# LinearOperator
# ===================================================

def test_composition_applies_right_operand_first():
    op = left_degree(1) @ swap(1)
    assert op.on_basis(1, 0) == TensorElement(2, {(0, 1): ONE})
    assert op.on_basis(0, 1) == TensorElement(2, {(1, 0): P})


def test_composition_shape_mismatch():
    with pytest.raises(DimensionError):
        swap(1) @ LinearOperator.identity(1, 1)


def test_pad_acts_on_middle_slots():
    op = swap(1).pad(1, 0)
    assert op.arity_in == 3
    assert op.on_basis(1, 1, 0) == TensorElement(3, {(1, 0, 1): ONE})


def test_partial_trace_of_identity():
    traced = LinearOperator.identity(2, 2).partial_trace(1)
    assert traced.on_basis(1) == TensorElement(1, {(1,): LaurentPoly.constant(4)})


def test_weighted_partial_trace():
    weight = {0: ONE, 1: -ONE}
    traced = LinearOperator.identity(1, 2).partial_trace(1, weight.get)
    assert traced.on_basis(0).is_zero()


def test_partial_trace_of_swap_is_identity():
    traced = swap(2).partial_trace(1)
    for key in basis_keys(2, 1):
        assert traced.column(key) == {key: ONE}


def test_inverse_by_blocks():
    op = left_degree(1) @ swap(1)
    inverse = op.inverse(lambda key: frozenset(key))
    identity = LinearOperator.identity(1, 2)
    assert (op @ inverse).equals(identity)
    assert (inverse @ op).equals(identity)


def test_first_difference_reports_column():
    difference = swap(1).first_difference(LinearOperator.identity(1, 2))
    assert difference is not None
    key, lhs, rhs = difference
    assert key == (0, 1)
    assert lhs == TensorElement(2, {(1, 0): ONE})


def test_basis_keys_degree_cap():
    assert len(basis_keys(2, 2)) == 16
    assert len(basis_keys(2, 2, max_degree=1)) == 5


# ===================================================
# Linear algebra
# ===================================================

def test_solve_unique():
    solution = solve_linear([[1, 1], [1, -1]], [2, 0])
    assert solution.unique
    assert solution.particular == (RationalFn(1), RationalFn(1))


def test_solve_is_path_independent():
    system = [[ONE, P], [T, ONE]]
    rhs = [ONE, ONE]
    first = solve_linear(system, rhs)
    second = solve_linear(system, rhs, column_order=[1, 0])
    assert first.particular == second.particular


def test_solve_inconsistent_and_null_space():
    assert not solve_linear([[1], [1]], [1, 2]).consistent
    family = solve_linear([[1, 1]], [0])
    assert family.consistent
    assert family.dimension == 1


def test_solve_over_laurent_entries():
    solution = solve_linear([[ONE - P]], [ONE - P ** 2])
    assert solution.particular == (RationalFn(ONE + P),)


@pytest.mark.parametrize("order", [None, [1, 0]])
def test_null_space_solves_homogeneous_system(order):
    family = solve_linear([[ONE, P]], [0], column_order=order)
    (vector,) = family.nullspace
    assert vector[0] * ONE + vector[1] * P == RationalFn(0)
    assert family.pivots == ((0,) if order is None else (1,))


def test_invert_matrix():
    inverse = invert_matrix([[ONE, P], [0, ONE]])
    assert inverse[0][1] == -P
    assert invert_matrix([[T * P]])[0][0] == T ** -1 * P ** -1
    with pytest.raises(SingularBlockError):
        invert_matrix([[ONE, P], [ONE, P]])
