import pytest

from lambdap.core.combin import mask_of
from lambdap.core.errors import DimensionError
from lambdap.core.ring import ONE, P, T, LaurentPoly
from lambdap.core.tensor import LinearOperator, TensorElement, basis_keys
from lambdap.engines.hopf import ExteriorHopfAlgebra
from lambdap.engines.rmatrix import RMatrixEngine

F1, F2, F12 = mask_of([1]), mask_of([2]), mask_of([1, 2])


@pytest.fixture
def rmatrix1(algebra1):
    return RMatrixEngine(algebra1)


@pytest.fixture
def rmatrix2(algebra2):
    return RMatrixEngine(algebra2)


# ===================================================
# rho at N=1
# ===================================================

def test_rho_at_one_dimension(rmatrix1):
    rho = rmatrix1.rho()
    assert rho.column((0, 0)) == {(0, 0): ONE}
    assert rho.column((0, F1)) == {(0, F1): ONE - T, (F1, 0): T}
    assert rho.column((F1, 0)) == {(0, F1): ONE}
    assert rho.column((F1, F1)) == {(F1, F1): -T}


def test_rho_inverse_at_one_dimension(rmatrix1):
    inverse = rmatrix1.rho_inverse()
    assert inverse.column((0, F1)) == {(F1, 0): ONE}
    assert inverse.column((F1, 0)) == {(0, F1): T ** -1, (F1, 0): ONE - T ** -1}
    assert inverse.column((F1, F1)) == {(F1, F1): -(T ** -1)}


# ===================================================
# Constructions
# ===================================================

def test_rho_three_ways(rmatrix2):
    rho = rmatrix2.rho_coeff_form()
    assert rmatrix2.rho_operator_form().equals(rho)
    assert rmatrix2.rho_structure().equals(rho, basis_keys(2, 2))


def test_right_action(rmatrix2):
    assert rmatrix2.right_action(F1, F2) == TensorElement(1, {(F12,): ONE - T * P})
    assert rmatrix2.right_action(F1, F1).is_zero()
    assert rmatrix2.right_action(0, F12) == TensorElement(1, {(F12,): (ONE - T) * (ONE - T * P)})


def test_right_action_from_structure(rmatrix2):
    assert rmatrix2.right_action_from_structure().equals(rmatrix2.right_action_op())


def test_coefficient_needs_h_at_least_g(rmatrix2):
    with pytest.raises(DimensionError):
        rmatrix2.coefficient(F1, F1, F2, 0)


def test_w_operator_order_zero(rmatrix2):
    identity = LinearOperator.identity(2, 2)
    w0 = rmatrix2.w_operator(0, T, lambda i: identity)
    assert w0.equals(identity)
    with pytest.raises(DimensionError):
        rmatrix2.w_operator(-1, T, lambda i: identity)


def test_rho_inverse_round_trip(rmatrix2):
    identity = LinearOperator.identity(2, 2)
    assert (rmatrix2.rho() @ rmatrix2.rho_inverse()).equals(identity)


# ===================================================
# Channels
# ===================================================

def test_channels_at_one_dimension(rmatrix1):
    report = rmatrix1.rho_channels()
    assert report.flat_order == [0, F1]
    assert report.exponent_matrix == [[0, 0], [0, 0]]
    assert report.reflection_matrix[0][1] == ONE - T
    assert report.reflection_matrix[1][0] == LaurentPoly()
    assert report.annihilation == []


def test_channels_at_two_dimensions(rmatrix2):
    report = rmatrix2.rho_channels()
    # f_{1,2} = f_{{1},{2}} scatters with one power of p
    assert report.exponent_matrix[2][1] == 1
    assert report.exponent_matrix[1][2] == 0
    sources = {action.source for action in report.annihilation}
    assert (1, 1) not in sources
    assert all(action.source[0] == 0 for action in report.decay)


def poch(x, n):
    result = ONE
    for i in range(n):
        result = result * (ONE - x * P ** i)
    return result


def test_channels_at_two_exact(rmatrix2):
    report = rmatrix2.rho_channels()
    zero = LaurentPoly()
    assert report.exponent_matrix == [[0, 0, 0, 0], [0, 0, 0, 0], [0, 1, 0, 1], [0, 1, 0, 1]]
    assert report.reflection_matrix == [
        [zero, ONE - T, ONE - T, poch(T, 2)],
        [zero, zero, zero, ONE - T * P],
        [zero, ONE - P, zero, ONE - T * P],
        [zero, zero, zero, zero],
    ]
    assert rmatrix2.channel_action(report, "annihilation", (0, 3)) == {
        (1, 2): T * (ONE - T),
        (2, 1): -P * T * (ONE - T),
    }
    assert rmatrix2.channel_action(report, "annihilation", (1, 2)) == {(0, 3): ONE - T * P}
    assert rmatrix2.channel_action(report, "annihilation", (2, 1)) == {(0, 3): T * P - ONE}


def test_decay_vanishes_at_t_one(rmatrix2):
    report = rmatrix2.rho_channels()
    for entry in report.reflection_matrix[0]:
        assert entry.subs(t=1).is_zero()
    for action in report.decay:
        assert all(coeff.subs(t=1).is_zero() for coeff in action.image.values())


@pytest.fixture(scope="module")
def channels3():
    engine = RMatrixEngine(ExteriorHopfAlgebra(3))
    return engine, engine.rho_channels()


def test_exponents_at_three(channels3):
    _, report = channels3
    assert report.exponent_matrix == [
        [0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 1, 1, 0, 1],
        [0, 1, 1, 0, 2, 1, 1, 2],
        [0, 1, 0, 0, 1, 1, 0, 1],
        [0, 1, 1, 0, 2, 1, 1, 2],
        [0, 2, 1, 0, 3, 2, 1, 3],
        [0, 2, 1, 0, 3, 2, 1, 3],
    ]


def test_reflection_at_three_carries_degree_two_factor(channels3):
    _, report = channels3
    z = LaurentPoly()
    t1, tp1, tp21, p1 = ONE - T, ONE - T * P, ONE - T * P ** 2, ONE - P
    expected = [
        [z, t1, t1, t1, poch(T, 2), poch(T, 2), poch(T, 2), poch(T, 3)],
        [z, z, z, z, tp1, tp1, z, poch(T * P, 2)],
        [z, p1, z, z, tp1, p1 * (ONE - P * T), tp1, poch(T * P, 2)],
        [z, p1, p1, z, (ONE - P ** 2) * tp1, tp1, tp1, poch(T * P, 2)],
        [z, z, z, z, z, z, z, tp21],
        [z, z, z, z, p1, z, z, tp21],
        [z, z, z, z, p1, p1, z, tp21],
        [z, z, z, z, z, z, z, z],
    ]
    for i in (4, 5, 6):
        expected[i] = [entry * P for entry in expected[i]]
    assert report.reflection_matrix == expected


TP1 = ONE - T * P
TP2 = poch(T * P, 2)
TPP = ONE - T * P ** 2
P1 = ONE - P

DECAY_AT_THREE = {
    (0, 4): {(1, 2): T * (ONE - T), (2, 1): -P * T * (ONE - T)},
    (0, 5): {(1, 3): T * (ONE - T), (3, 1): -P * T * (ONE - T)},
    (0, 6): {(2, 3): T * (ONE - T), (3, 2): -P * T * (ONE - T)},
    (0, 7): {
        (1, 6): T * poch(T, 2),
        (2, 5): -P * T * poch(T, 2),
        (3, 4): P ** 2 * T * poch(T, 2),
        (4, 3): T ** 2 * (ONE - T),
        (5, 2): -P * T ** 2 * (ONE - T),
        (6, 1): P ** 2 * T ** 2 * (ONE - T),
    },
}

FUSION_AT_THREE = {
    (1, 2): {(0, 4): TP1},
    (2, 1): {(0, 4): -TP1},
    (1, 3): {(0, 5): TP1},
    (3, 1): {(0, 5): -TP1},
    (2, 3): {(0, 6): TP1},
    (3, 2): {(0, 6): -TP1},
    (1, 6): {(0, 7): TP2},
    (2, 5): {(0, 7): -TP2},
    (3, 4): {(0, 7): TP2},
    (4, 3): {(0, 7): TPP},
    (5, 2): {(0, 7): -TPP},
    (6, 1): {(0, 7): TPP},
}

EXCHANGE_AT_THREE = {
    (1, 6): {(3, 4): T * P ** 2 * TP1, (2, 5): -T * P * TP1},
    (1, 7): {(4, 5): T ** 2 * P * TP1, (5, 4): -T ** 2 * P ** 2 * TP1},
    (2, 5): {(6, 1): T ** 2 * P * P1, (1, 6): -T * TP1, (3, 4): -T * P ** 2 * TP1},
    (2, 7): {(4, 6): T ** 2 * TP1, (6, 4): -T ** 2 * P ** 2 * TP1},
    (3, 4): {
        (1, 6): T * TP1,
        (2, 5): -T * P * TP1,
        (5, 2): T ** 2 * P1,
        (6, 1): -T ** 2 * P * P1,
    },
    (3, 7): {(5, 6): T ** 2 * TP1, (6, 5): -T ** 2 * P * TP1},
    (4, 5): {(1, 7): T * TPP},
    (4, 6): {(2, 7): T * P * TPP},
    (5, 2): {(3, 4): T * P * P1},
    # E={1,3}, F={1,2}, G=0, H={2}: the theta parities of (F,E) and (F',E') differ, so beta = -1
    (5, 4): {(1, 7): T * (T * P ** 2 - ONE)},
    (5, 6): {(3, 7): T * P * TPP},
    (6, 1): {(2, 5): T * P1, (3, 4): -T * P * P1},
    (6, 4): {(2, 7): -T * TPP},
    (6, 5): {(3, 7): -T * P * TPP},
}


@pytest.mark.parametrize(
    "name,expected",
    [("decay", DECAY_AT_THREE), ("fusion", FUSION_AT_THREE), ("exchange", EXCHANGE_AT_THREE)],
)
def test_named_channels_at_three(channels3, name, expected):
    _, report = channels3
    actions = getattr(report, name)
    assert len(actions) == len(expected)
    assert {action.source: action.image for action in actions} == expected


def test_channel_action_lookup(channels3):
    engine, report = channels3
    assert engine.channel_action(report, "exchange", (5, 2)) == {(3, 4): T * P * (ONE - P)}
    assert engine.channel_action(report, "fusion", (0, 4)) == {}
