import pytest

from lambdap.core.combin import mask_of
from lambdap.core.errors import DimensionError
from lambdap.core.ring import ONE, P
from lambdap.core.tensor import LinearOperator, TensorElement, basis_keys
from lambdap.engines.braiding import BraidingEngine, content_block, exchange_result

F1, F2, F3, F12 = mask_of([1]), mask_of([2]), mask_of([3]), mask_of([1, 2])


@pytest.fixture
def braiding2(algebra2):
    return BraidingEngine(algebra2)


def test_elementary_tau(braiding2):
    assert braiding2.elementary_tau(1, 1) == TensorElement(2, {(F1, F1): -ONE})
    assert braiding2.elementary_tau(1, 2) == TensorElement(2, {(F2, F1): -P})
    assert braiding2.elementary_tau(2, 1) == TensorElement(2, {(F2, F1): P - ONE, (F1, F2): -ONE})
    with pytest.raises(DimensionError):
        braiding2.elementary_tau(3, 1)


def test_tau_rejects_higher_degree(braiding2):
    with pytest.raises(DimensionError):
        braiding2.tau_operator().column((F12, F1))


def test_hat_tau_restricts_to_tau(braiding2):
    hat_tau = braiding2.hat_tau()
    tau = braiding2.tau_operator()
    assert hat_tau.equals(tau, braiding2.vector_keys(2))


def test_hat_tau_with_unit(braiding2):
    hat_tau = braiding2.hat_tau()
    for e in range(4):
        assert hat_tau.on_basis(e, 0) == TensorElement(2, {(0, e): ONE})
        assert hat_tau.on_basis(0, e) == TensorElement(2, {(e, 0): ONE})


def test_ordered_action(braiding2):
    assert braiding2.hat_tau().on_basis(F1, F2) == braiding2.ordered_action(F1, F2)
    assert braiding2.ordered_action(F1, F2) == TensorElement(2, {(F2, F1): -P})
    with pytest.raises(DimensionError):
        braiding2.ordered_action(F2, F1)


def test_two_constructions_agree(braiding2):
    assert braiding2.hat_tau_moy().equals(braiding2.hat_tau_coeff())
    assert braiding2.hat_tau_coeff(skip_vanishing=False).equals(braiding2.hat_tau_coeff())


def test_channels_sum_to_hat_tau(braiding2):
    total = braiding2.channel(0) + braiding2.channel(1) + braiding2.channel(2)
    assert total.equals(braiding2.hat_tau())


def test_exchange_keeps_content_block():
    e, f = mask_of([2, 3]), mask_of([1, 3])
    g, h = mask_of([2]), mask_of([1])
    assert exchange_result(e, g, f, h) == (mask_of([2, 3]), mask_of([1, 3]))
    assert content_block((e, f)) == content_block(exchange_result(e, g, f, h)[::-1])


def test_inverse_braiding(braiding2):
    hat_tau = braiding2.hat_tau()
    inverse = braiding2.inverse_braiding()
    identity = LinearOperator.identity(2, 2)
    assert (hat_tau @ inverse).equals(identity)
    assert (inverse @ hat_tau).equals(identity, basis_keys(2, 2))


def test_inverse_on_vectors(braiding2):
    inverse = braiding2.inverse_braiding()
    assert inverse.on_basis(F2, F1) == TensorElement(2, {(F1, F2): -(P ** -1)})


def test_hecke_eigenvectors(algebra3):
    braiding = BraidingEngine(algebra3)
    tau = braiding.tau_operator()
    for vector, value in braiding.eigenvectors():
        assert tau.apply(vector) == vector.scale(value)
