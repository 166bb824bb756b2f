"""
Alexander polynomial of a braid closure from the reduced Burau representation.

Independent of the R-matrix machinery; used as the N=1 oracle.
"""

from typing import Sequence

import sympy

from lambdap.core.errors import InvariantError
from lambdap.core.ring import LaurentPoly

t = sympy.Symbol("t")


def reduced_burau(index: int, strands: int) -> sympy.Matrix:
    """Reduced Burau matrix of sigma_index in B_strands, size strands-1."""
    size = strands - 1
    if not 1 <= index <= size:
        raise InvariantError(f"generator {index} out of range for {strands} strands")

    matrix = sympy.eye(size)
    i = index - 1
    matrix[i, i] = -t
    if i > 0:
        matrix[i - 1, i] = t
    if i < size - 1:
        matrix[i + 1, i] = 1
    return matrix


def burau_word(letters: Sequence[int], strands: int) -> sympy.Matrix:
    result = sympy.eye(strands - 1)
    for letter in letters:
        generator = reduced_burau(abs(letter), strands)
        result = result * (generator if letter > 0 else generator.inv())
    return result


def to_laurent(expr) -> LaurentPoly:
    """Laurent polynomial in t from a sympy expression with monomial denominator."""
    num, den = sympy.fraction(sympy.cancel(sympy.together(expr)))
    den_poly = sympy.Poly(den, t)
    if len(den_poly.terms()) != 1:
        raise InvariantError(f"{expr} is not a Laurent polynomial in t")
    ((shift,), scale), = den_poly.terms()

    terms = {}
    for (exponent,), coeff in sympy.Poly(num, t).terms():
        value = sympy.Rational(coeff, scale)
        if value.q != 1:
            raise InvariantError(f"{expr} has non-integral coefficients")
        terms[(0, exponent - shift)] = int(value)
    return LaurentPoly(terms)


def alexander_from_braid(letters: Sequence[int], strands: int) -> LaurentPoly:
    """
    det(I - psi(beta)) (1 - t) / (1 - t^n), up to a unit monomial.

    A single strand closes to the unknot.
    """
    if strands == 1:
        return LaurentPoly.constant(1)

    matrix = burau_word(letters, strands)
    determinant = (sympy.eye(strands - 1) - matrix).det()
    value = sympy.cancel(determinant * (1 - t) / (1 - t ** strands))
    return to_laurent(value)
