"""
Exact coefficient arithmetic in Z[p, 1/p, t, 1/t] and its fraction field.

LaurentPoly keys its terms by (p_exponent, t_exponent); canonical order is
lexicographic on that pair. RationalFn keeps a reduced numerator/denominator
pair whose denominator has zero Laurent offset and a positive leading term.
"""

from math import gcd
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

import sympy
from sympy.polys.polyerrors import ExactQuotientFailed

from lambdap.core.errors import NonDivisibleError

Exponent = Tuple[int, int]

_P_SYMBOL, _T_SYMBOL = sympy.symbols("p t")


# =====================================================
# LAURENT POLYNOMIAL
# =====================================================

class LaurentPoly:
    """
    Immutable integer Laurent polynomial in p and t.

    Features:
    - canonical sparse storage (no zero coefficients)
    - ring operations with int coercion
    - monomial inverses through negative powers
    - substitution, text and JSON forms
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Exponent, int]] = None):
        clean: Dict[Exponent, int] = {}
        if terms:
            for key, coeff in terms.items():
                if coeff:
                    clean[(int(key[0]), int(key[1]))] = int(coeff)
        self._terms = clean
        self._hash: Optional[int] = None

    # -----------------------------------------------------
    # Constructors
    # -----------------------------------------------------

    @classmethod
    def constant(cls, value: int) -> "LaurentPoly":
        return cls({(0, 0): value})

    @classmethod
    def monomial(cls, coeff: int = 1, p: int = 0, t: int = 0) -> "LaurentPoly":
        return cls({(p, t): coeff})

    @classmethod
    def from_json(cls, triples: Iterable[Iterable[int]]) -> "LaurentPoly":
        terms: Dict[Exponent, int] = {}
        for coeff, a, b in triples:
            terms[(a, b)] = terms.get((a, b), 0) + coeff
        return cls(terms)

    @classmethod
    def _raw(cls, terms: Dict[Exponent, int]) -> "LaurentPoly":
        # caller guarantees no zero coefficients
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    # -----------------------------------------------------
    # Inspection
    # -----------------------------------------------------

    @property
    def terms(self) -> List[Tuple[int, int, int]]:
        """Canonical term list of (coefficient, p_exponent, t_exponent)."""
        return [(self._terms[key], key[0], key[1]) for key in sorted(self._terms)]

    def items(self) -> List[Tuple[Exponent, int]]:
        return sorted(self._terms.items())

    def coefficient(self, p: int = 0, t: int = 0) -> int:
        return self._terms.get((p, t), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and (0, 0) in self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_unit(self) -> bool:
        """True for +-p^a t^b, the invertible elements."""
        return self.is_monomial() and abs(next(iter(self._terms.values()))) == 1

    def t_only(self) -> bool:
        return all(a == 0 for a, _ in self._terms)

    def min_exponents(self) -> Exponent:
        if not self._terms:
            return (0, 0)
        return (min(a for a, _ in self._terms), min(b for _, b in self._terms))

    def content(self) -> int:
        value = 0
        for coeff in self._terms.values():
            value = gcd(value, coeff)
        return value

    def leading(self) -> Tuple[Exponent, int]:
        key = max(self._terms)
        return key, self._terms[key]

    # -----------------------------------------------------
    # Arithmetic
    # -----------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        terms = dict(self._terms)
        for key, coeff in other._terms.items():
            value = terms.get(key, 0) + coeff
            if value:
                terms[key] = value
            else:
                terms.pop(key, None)
        return LaurentPoly._raw(terms)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw({key: -coeff for key, coeff in self._terms.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._terms or not other._terms:
            return ZERO
        if other.is_constant():
            factor = other._terms[(0, 0)]
            if factor == 1:
                return self
            return LaurentPoly._raw({k: c * factor for k, c in self._terms.items()})
        if self.is_constant():
            return other * self
        terms: Dict[Exponent, int] = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                key = (a1 + a2, b1 + b2)
                terms[key] = terms.get(key, 0) + c1 * c2
        return LaurentPoly(terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "LaurentPoly":
        if exponent < 0:
            if not self.is_unit():
                raise NonDivisibleError(f"{self} is not a unit, cannot raise to {exponent}")
            ((a, b), coeff), = self._terms.items()
            return LaurentPoly.monomial(coeff ** (-exponent), -a * -exponent, -b * -exponent)
        result = ONE
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            return RationalFn(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, int):
            return RationalFn(LaurentPoly.constant(other), self)
        return NotImplemented

    def shift(self, p: int = 0, t: int = 0) -> "LaurentPoly":
        """Multiply by p^p t^t."""
        if p == 0 and t == 0:
            return self
        return LaurentPoly._raw({(a + p, b + t): c for (a, b), c in self._terms.items()})

    def subs(self, p=None, t=None) -> "LaurentPoly":
        """
        Substitute p and/or t by ints or LaurentPoly values.
        Negative exponents need a unit value.
        """
        p_value = _coerce(p) if p is not None else None
        t_value = _coerce(t) if t is not None else None
        result = ZERO
        for (a, b), coeff in self._terms.items():
            term = LaurentPoly.constant(coeff)
            term = term * (p_value ** a) if p_value is not None else term.shift(p=a)
            term = term * (t_value ** b) if t_value is not None else term.shift(t=b)
            result = result + term
        return result

    # -----------------------------------------------------
    # Comparison
    # -----------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        if isinstance(other, int):
            return self._terms == ({(0, 0): other} if other else {})
        if isinstance(other, RationalFn):
            return other == self
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -----------------------------------------------------
    # Serialization
    # -----------------------------------------------------

    def to_json(self) -> List[List[int]]:
        return [[c, a, b] for c, a, b in self.terms]

    def to_text(self, descending: bool = False) -> str:
        if not self._terms:
            return "0"
        keys = sorted(self._terms, reverse=descending)
        pieces: List[str] = []
        for index, key in enumerate(keys):
            coeff = self._terms[key]
            body = _monomial_text(abs(coeff), key[0], key[1])
            if index == 0:
                pieces.append(body if coeff > 0 else f"-{body}")
            else:
                pieces.append(f" + {body}" if coeff > 0 else f" - {body}")
        return "".join(pieces)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"LaurentPoly('{self.to_text()}')"


def _power_text(symbol: str, exponent: int) -> str:
    if exponent == 1:
        return symbol
    return f"{symbol}^{exponent}"


def _monomial_text(coeff: int, p_exp: int, t_exp: int) -> str:
    factors = []
    if t_exp:
        factors.append(_power_text("t", t_exp))
    if p_exp:
        factors.append(_power_text("p", p_exp))
    if not factors:
        return str(coeff)
    if coeff != 1:
        factors.insert(0, str(coeff))
    return "*".join(factors)


def _coerce(value):
    if isinstance(value, LaurentPoly):
        return value
    if isinstance(value, bool):
        return NotImplemented
    if isinstance(value, int):
        return LaurentPoly.constant(value)
    return NotImplemented


ZERO = LaurentPoly()
ONE = LaurentPoly.constant(1)
P = LaurentPoly.monomial(1, p=1)
T = LaurentPoly.monomial(1, t=1)


# =====================================================
# SYMPY BRIDGE
# =====================================================

def _to_poly(value: LaurentPoly) -> Tuple[sympy.Poly, Exponent]:
    """Shift to a genuine polynomial; returns the poly and the shift removed."""
    da, db = value.min_exponents()
    data = {(a - da, b - db): c for (a, b), c in value.items()}
    return sympy.Poly.from_dict(data, _P_SYMBOL, _T_SYMBOL, domain="ZZ"), (da, db)


def _from_poly(poly: sympy.Poly, shift: Exponent = (0, 0)) -> LaurentPoly:
    terms: Dict[Exponent, int] = {}
    for (a, b), coeff in poly.terms():
        if not coeff.is_integer:
            raise NonDivisibleError(f"non-integral coefficient {coeff}")
        terms[(a + shift[0], b + shift[1])] = int(coeff)
    return LaurentPoly(terms)


def exact_divide(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """
    Return q with q*b == a, or raise NonDivisibleError.
    """
    a = _coerce(a)
    b = _coerce(b)

    if b.is_zero():
        raise NonDivisibleError("division by zero")
    if a.is_zero():
        return ZERO

    if b.is_monomial():
        ((ba, bb), coeff), = b.items()
        terms: Dict[Exponent, int] = {}
        for (x, y), c in a.items():
            if c % coeff:
                raise NonDivisibleError(f"{a} is not divisible by {b}")
            terms[(x - ba, y - bb)] = c // coeff
        return LaurentPoly._raw(terms)

    poly_a, shift_a = _to_poly(a)
    poly_b, shift_b = _to_poly(b)

    try:
        quotient = poly_a.exquo(poly_b)
    except ExactQuotientFailed as exc:
        raise NonDivisibleError(f"{a} is not divisible by {b}") from exc

    return _from_poly(quotient, (shift_a[0] - shift_b[0], shift_a[1] - shift_b[1]))


# =====================================================
# RATIONAL FUNCTION
# =====================================================

class RationalFn:
    """
    Reduced quotient of two LaurentPoly values.

    Normal form: gcd(num, den) = 1 in Z[p, t], den has zero Laurent offset
    and a positive leading coefficient (largest exponent pair).
    """

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=1):
        num = _coerce(num)
        den = _coerce(den)
        if num is NotImplemented or den is NotImplemented:
            raise TypeError("RationalFn expects int or LaurentPoly parts")
        self.num, self.den = _normalize(num, den)

    @classmethod
    def _raw(cls, num: LaurentPoly, den: LaurentPoly) -> "RationalFn":
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        return obj

    # -----------------------------------------------------
    # Arithmetic
    # -----------------------------------------------------

    def __add__(self, other):
        other = _as_rational(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            if self.den == ONE:
                return RationalFn._raw(self.num + other.num, ONE)
            return RationalFn(self.num + other.num, self.den)
        return RationalFn(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFn":
        return RationalFn._raw(-self.num, self.den)

    def __sub__(self, other):
        other = _as_rational(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_rational(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _as_rational(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == ONE and other.den == ONE:
            return RationalFn._raw(self.num * other.num, ONE)
        return RationalFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rational(other)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero():
            raise ZeroDivisionError("RationalFn division by zero")
        return RationalFn(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = _as_rational(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, exponent: int) -> "RationalFn":
        if exponent < 0:
            return RationalFn(ONE) / (self ** (-exponent))
        return RationalFn(self.num ** exponent, self.den ** exponent)

    # -----------------------------------------------------
    # Comparison
    # -----------------------------------------------------

    def __eq__(self, other) -> bool:
        other = _as_rational(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    # -----------------------------------------------------
    # Conversion
    # -----------------------------------------------------

    def is_laurent(self) -> bool:
        return self.den == ONE

    def to_laurent(self) -> LaurentPoly:
        if self.den != ONE:
            raise NonDivisibleError(f"{self} is not a Laurent polynomial")
        return self.num

    def subs(self, p=None, t=None) -> "RationalFn":
        return RationalFn(self.num.subs(p=p, t=t), self.den.subs(p=p, t=t))

    def to_json(self) -> Dict[str, List[List[int]]]:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    def to_text(self) -> str:
        if self.den == ONE:
            return self.num.to_text()
        return f"({self.num.to_text()})/({self.den.to_text()})"

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"RationalFn('{self.to_text()}')"


def _as_rational(value):
    if isinstance(value, RationalFn):
        return value
    coerced = _coerce(value)
    if coerced is NotImplemented:
        return NotImplemented
    return RationalFn._raw(coerced, ONE)


def _normalize(num: LaurentPoly, den: LaurentPoly) -> Tuple[LaurentPoly, LaurentPoly]:
    if den.is_zero():
        raise ZeroDivisionError("RationalFn with zero denominator")
    if num.is_zero():
        return ZERO, ONE

    if den.is_monomial():
        ((da, db), coeff), = den.items()
        common = gcd(num.content(), abs(coeff))
        sign = 1 if coeff > 0 else -1
        scaled = {(a - da, b - db): sign * c // common for (a, b), c in num.items()}
        return LaurentPoly._raw(scaled), LaurentPoly.constant(abs(coeff) // common)

    poly_num, shift_num = _to_poly(num)
    poly_den, shift_den = _to_poly(den)

    common = sympy.gcd(poly_num, poly_den)
    reduced_num = _from_poly(poly_num.exquo(common))
    reduced_den = _from_poly(poly_den.exquo(common))

    # den is not divisible by p or t after the shift, so neither is reduced_den
    offset = reduced_den.min_exponents()
    reduced_den = reduced_den.shift(-offset[0], -offset[1])
    reduced_num = reduced_num.shift(
        shift_num[0] - shift_den[0] - offset[0],
        shift_num[1] - shift_den[1] - offset[1],
    )

    if reduced_den.leading()[1] < 0:
        reduced_num, reduced_den = -reduced_num, -reduced_den

    return reduced_num, reduced_den


# =====================================================
# SCALAR HELPERS
# =====================================================

Scalar = Union[LaurentPoly, RationalFn]


def simplify(value: Scalar) -> Scalar:
    """Collapse a Laurent-valued RationalFn back to LaurentPoly."""
    if isinstance(value, RationalFn) and value.den == ONE:
        return value.num
    return value


def as_laurent(value: Union[int, Scalar]) -> LaurentPoly:
    if isinstance(value, RationalFn):
        return value.to_laurent()
    return _coerce(value)


def scalar_to_json(value: Scalar):
    return value.to_json()


def as_rational(value: Union[int, Scalar]) -> RationalFn:
    if isinstance(value, RationalFn):
        return value
    return RationalFn(value)


# =====================================================
# SYMPY FRACTION FIELD
# =====================================================

FIELD = sympy.ZZ.frac_field(_P_SYMBOL, _T_SYMBOL)


def _laurent_expr(value: LaurentPoly) -> sympy.Expr:
    poly, (da, db) = _to_poly(value)
    return poly.as_expr() * _P_SYMBOL ** da * _T_SYMBOL ** db


def to_field(value: Union[int, Scalar]):
    """Element of Frac(Z[p, t]) for sympy DomainMatrix work."""
    value = as_rational(value)
    return FIELD.from_sympy(_laurent_expr(value.num)) / FIELD.from_sympy(_laurent_expr(value.den))


def _laurent_of(poly) -> LaurentPoly:
    return LaurentPoly({monom: int(coeff) for monom, coeff in poly.terms()})


def from_field(element) -> RationalFn:
    return RationalFn(_laurent_of(FIELD.numer(element)), _laurent_of(FIELD.denom(element)))
