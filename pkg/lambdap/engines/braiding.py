from typing import Dict, Iterator, List, Optional, Tuple

from loguru import logger

from lambdap.core.combin import (
    alpha,
    alpha_nonvanishing,
    k_subsets,
    size,
    theta,
)
from lambdap.core.errors import DimensionError
from lambdap.core.qfunctions import gauss_gamma
from lambdap.core.ring import ONE, P, LaurentPoly, as_laurent
from lambdap.core.tensor import Column, Key, LinearOperator, TensorElement, accumulate
from lambdap.engines.hopf import ExteriorHopfAlgebra


# =====================================================
# CHANNEL COMBINATORICS
# =====================================================

def exchange_result(e: int, g: int, f: int, h: int) -> Tuple[int, int]:
    """(F', E') = ((F \\ H) u G, (E \\ G) u H)."""
    return (f & ~h) | g, (e & ~g) | h


def beta(e: int, g: int, f: int, h: int) -> LaurentPoly:
    """
    beta_{E,G;F,H} = (-1)^(theta(F,E) + theta(F',E')) p^(theta(G u C, E) + theta(Fdot, E')) alpha(G,H)
    with C = E n F, Fdot = (F \\ E) \\ H.
    """
    weight = alpha(g, h)
    if weight.is_zero():
        return weight
    f_new, e_new = exchange_result(e, g, f, h)
    common = e & f
    f_dot = (f & ~e) & ~h
    sign = -1 if (theta(f, e) + theta(f_new, e_new)) % 2 else 1
    exponent = theta(g | common, e) + theta(f_dot, e_new)
    return LaurentPoly.monomial(sign, p=exponent) * weight


def global_sign(e: int, f: int) -> int:
    return -1 if (size(e) * size(f)) % 2 else 1


def admissible_pairs(e: int, f: int, k: Optional[int] = None) -> Iterator[Tuple[int, int]]:
    """
    (G, H) with G in E \\ F, H in F \\ E; all sizes, or |G| = |H| = k.
    Order: increasing |G|, then |H|, then bitmask order.
    """
    left, right = e & ~f, f & ~e
    if k is not None:
        for g in k_subsets(left, k):
            for h in k_subsets(right, k):
                yield g, h
        return
    for gk in range(size(left) + 1):
        for hk in range(size(right) + 1):
            for g in k_subsets(left, gk):
                for h in k_subsets(right, hk):
                    yield g, h


# =====================================================
# BRAIDING ENGINE
# =====================================================

class BraidingEngine:
    """
    Elementary braiding tau on V (x) V and the induced braiding on
    Lambda_p(V)^(x)2, built two independent ways.

    Features:
    - tau and its Hecke eigenvectors
    - hat_tau from divided powers of L, R
    - hat_tau from channel coefficients beta
    - channel operators tau_k and the exact inverse
    """

    def __init__(self, algebra: ExteriorHopfAlgebra):
        self.algebra = algebra
        self.n = algebra.n
        self._ops: Dict[Tuple, LinearOperator] = {}

    def _memo(self, key, factory) -> LinearOperator:
        if key not in self._ops:
            self._ops[key] = factory()
        return self._ops[key]

    # -----------------------------------------------------
    # Elementary braiding on V (x) V
    # -----------------------------------------------------

    def _check_index(self, a: int) -> None:
        if not 1 <= a <= self.n:
            raise DimensionError(f"basis index must be in 1..{self.n}, got {a}")

    def elementary_tau(self, a: int, b: int) -> TensorElement:
        self._check_index(a)
        self._check_index(b)
        fa, fb = 1 << (a - 1), 1 << (b - 1)

        if a == b:
            return TensorElement(2, {(fa, fa): -ONE})
        if a > b:
            return TensorElement(2, {(fa, fb): P - ONE, (fb, fa): -ONE})
        return TensorElement(2, {(fb, fa): -P})

    def vector_keys(self, arity: int) -> List[Key]:
        """Basis tuples of V^(x)arity."""
        keys: List[Key] = [()]
        for _ in range(arity):
            keys = [key + (single,) for key in keys for single in self.algebra.basis.singletons()]
        return keys

    def tau_operator(self) -> LinearOperator:
        def column(key: Key) -> Column:
            if any(size(mask) != 1 for mask in key):
                raise DimensionError(f"tau is defined on V (x) V only, got {key}")
            a, b = (mask.bit_length() for mask in key)
            return self.elementary_tau(a, b).as_dict()

        return self._memo(("tau",), lambda: LinearOperator(self.n, 2, 2, column, name="tau"))

    def eigenvectors(self) -> List[Tuple[TensorElement, LaurentPoly]]:
        """Hecke eigenvectors: a(x)b + b(x)a, a(x)a for -1; a(x)b - p b(x)a for p (a < b)."""
        result: List[Tuple[TensorElement, LaurentPoly]] = []
        singles = self.algebra.basis.singletons()
        for i, fa in enumerate(singles):
            result.append((TensorElement(2, {(fa, fa): ONE}), -ONE))
            for fb in singles[i + 1:]:
                result.append((TensorElement(2, {(fa, fb): ONE, (fb, fa): ONE}), -ONE))
                result.append((TensorElement(2, {(fa, fb): ONE, (fb, fa): -P}), P))
        return result

    # -----------------------------------------------------
    # hat_tau through L and R
    # -----------------------------------------------------

    def hat_tau_moy(self) -> LinearOperator:
        """hat_tau f_{E,F} = sum_k gamma_k L^<|F|-k> R^<|E|-k> f_{E,F}."""
        algebra = self.algebra

        def column(key: Key) -> Column:
            e, f = key
            m, n = size(e), size(f)
            terms: Column = {}
            for k in range(min(m, n) + 1):
                after_r = algebra.divided_power("R", m - k).column(key)
                left = algebra.divided_power("L", n - k)
                gamma = gauss_gamma(k)
                for middle, c1 in after_r.items():
                    for out, c2 in left.column(middle).items():
                        accumulate(terms, out, gamma * c2 * c1)
            return terms

        return self._memo(("moy",), lambda: LinearOperator(self.n, 2, 2, column, name="hat_tau_moy"))

    # -----------------------------------------------------
    # hat_tau through channel coefficients
    # -----------------------------------------------------

    def channel_column(self, key: Key, k: int, skip_vanishing: bool = True) -> Column:
        e, f = key
        sign = global_sign(e, f)
        terms: Column = {}
        for g, h in admissible_pairs(e, f, k):
            if skip_vanishing and not alpha_nonvanishing(g, h):
                continue
            coeff = beta(e, g, f, h)
            if coeff:
                accumulate(terms, exchange_result(e, g, f, h), coeff * sign)
        return terms

    def channel(self, k: int, skip_vanishing: bool = True) -> LinearOperator:
        """Size-k exchange channel tau_k."""
        return self._memo(
            ("channel", k, skip_vanishing),
            lambda: LinearOperator(
                self.n, 2, 2, lambda key: self.channel_column(key, k, skip_vanishing), name=f"tau_{k}"
            ),
        )

    def hat_tau_coeff(self, skip_vanishing: bool = True) -> LinearOperator:
        def column(key: Key) -> Column:
            e, f = key
            terms: Column = {}
            for k in range(min(size(e & ~f), size(f & ~e)) + 1):
                for out, c in self.channel_column(key, k, skip_vanishing).items():
                    accumulate(terms, out, c)
            return terms

        return self._memo(
            ("coeff", skip_vanishing),
            lambda: LinearOperator(self.n, 2, 2, column, name="hat_tau"),
        )

    def hat_tau(self) -> LinearOperator:
        return self.hat_tau_coeff()

    def b_coefficient_form(self) -> LinearOperator:
        """B f_{E,F} = (-1)^{|E||F|} sum over all (G, H) of beta f_{F',E'}."""
        def column(key: Key) -> Column:
            e, f = key
            sign = global_sign(e, f)
            terms: Column = {}
            for g, h in admissible_pairs(e, f):
                coeff = beta(e, g, f, h)
                if coeff:
                    accumulate(terms, exchange_result(e, g, f, h), coeff * sign)
            return terms

        return self._memo(("B_coeff",), lambda: LinearOperator(self.n, 2, 2, column, name="B_coeff"))

    def ordered_action(self, e: int, f: int) -> TensorElement:
        """For E < F elementwise: hat_tau f_{E,F} = (-p)^{|E||F|} f_{F,E}."""
        if e and f and (e.bit_length() >= (f & -f).bit_length()):
            raise DimensionError("ordered_action needs every element of E below every element of F")
        return TensorElement(2, {(f, e): (-P) ** (size(e) * size(f))})

    # -----------------------------------------------------
    # Inverse
    # -----------------------------------------------------

    def inverse_braiding(self) -> LinearOperator:
        """Exact inverse per content block, entries asserted Laurent."""
        def factory() -> LinearOperator:
            logger.debug(f"Inverting hat_tau at N={self.n}")
            inverse = self.hat_tau().inverse(content_block, name="hat_tau^-1")
            # raises NonDivisibleError on a non-Laurent entry
            return inverse.map_coefficients(as_laurent, name="hat_tau^-1")

        return self._memo(("inverse",), factory)


def content_block(key: Key) -> Tuple[int, int]:
    """(E n F, E xor F) is preserved by every braiding-type operator."""
    e, f = key
    return e & f, e ^ f

