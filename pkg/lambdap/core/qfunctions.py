from typing import Union

from lambdap.core.errors import DimensionError
from lambdap.core.ring import ONE, P, LaurentPoly, RationalFn, exact_divide

Base = Union[int, LaurentPoly]


def _check_nonnegative(**values: int) -> None:
    for name, value in values.items():
        if value < 0:
            raise DimensionError(f"{name} must be non-negative, got {value}")


def qpochhammer(x: Base, n: int, base: Base = P) -> LaurentPoly:
    """(x; base)_n = prod_{i<n} (1 - x * base^i)."""
    _check_nonnegative(n=n)
    x = LaurentPoly.constant(x) if isinstance(x, int) else x
    base = LaurentPoly.constant(base) if isinstance(base, int) else base

    result = ONE
    factor = x
    for _ in range(n):
        result = result * (ONE - factor)
        factor = factor * base
    return result


def p_factorial(n: int) -> LaurentPoly:
    """(p)_n = (p; p)_n."""
    return qpochhammer(P, n)


def qint(n: int) -> LaurentPoly:
    _check_nonnegative(n=n)
    return LaurentPoly({(i, 0): 1 for i in range(n)})


def qfactorial(n: int) -> LaurentPoly:
    _check_nonnegative(n=n)
    result = ONE
    for i in range(1, n + 1):
        result = result * qint(i)
    return result


def qbinom(n: int, k: int) -> LaurentPoly:
    _check_nonnegative(n=n, k=k)
    if k > n:
        raise DimensionError(f"qbinom needs k <= n, got n={n}, k={k}")
    return exact_divide(p_factorial(n), p_factorial(k) * p_factorial(n - k))


def gauss_gamma(k: int) -> LaurentPoly:
    """gamma_k = (-1)^k p^(k(k-1)/2)."""
    _check_nonnegative(k=k)
    return LaurentPoly.monomial(-1 if k % 2 else 1, p=k * (k - 1) // 2)


def divided_scalar(y: Base, i: int) -> RationalFn:
    """y^<i> = y^i / [i]!."""
    y = LaurentPoly.constant(y) if isinstance(y, int) else y
    return RationalFn(y ** i, qfactorial(i))


def w_polynomial(n: int, x: Base, y: Base) -> RationalFn:
    """W_n(x, y; p) = sum_i (x; p)_{n-i} y^<i> for scalar y."""
    _check_nonnegative(n=n)
    total = RationalFn(0)
    for i in range(n + 1):
        total = total + divided_scalar(y, i) * qpochhammer(x, n - i)
    return total
