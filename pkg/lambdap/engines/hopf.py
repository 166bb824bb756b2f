from typing import Callable, Dict, Optional, Tuple

from loguru import logger

from lambdap.core.combin import EMPTY, BasisOrder, size, submasks, theta
from lambdap.core.errors import DimensionError
from lambdap.core.qfunctions import gauss_gamma, qfactorial
from lambdap.core.ring import ONE, P, T, LaurentPoly, Scalar, exact_divide
from lambdap.core.tensor import Column, Key, LinearOperator, TensorElement, accumulate


class ExteriorHopfAlgebra:
    """
    The braided Hopf algebra Lambda_p(V) on the exterior algebra of an
    N-dimensional V, in the set-theoretic basis f_E.

    Features:
    - basis rules for product, coproduct, antipode, unit, counit
    - structure maps and graded projections as LinearOperator
    - T1, T2, L, R on the tensor square with divided powers
    - the B operator built from structure maps and from exponentials

    Operators are cached per instance; subclasses may override
    `coproduct_coefficient` to perturb the structure constants.
    """

    def __init__(self, n: int):
        self.basis = BasisOrder(n)
        self.n = n
        self._ops: Dict[Tuple, LinearOperator] = {}

    def _memo(self, key: Tuple, factory: Callable[[], LinearOperator]) -> LinearOperator:
        op = self._ops.get(key)
        if op is None:
            op = factory()
            self._ops[key] = op
        return op

    # =====================================================
    # BASIS RULES
    # =====================================================

    def multiply(self, e: int, f: int) -> Optional[Tuple[int, int]]:
        """f_E f_F = (-1)^theta(E,F) f_{E u F}, or None when E, F meet."""
        if e & f:
            return None
        return (-1 if theta(e, f) % 2 else 1), e | f

    def coproduct_coefficient(self, a: int, rest: int) -> LaurentPoly:
        return (-P) ** theta(a, rest)

    def coproduct_terms(self, e: int) -> Column:
        return {(a, e ^ a): self.coproduct_coefficient(a, e ^ a) for a in submasks(e)}

    def antipode_coefficient(self, e: int) -> LaurentPoly:
        return gauss_gamma(size(e))

    # =====================================================
    # ELEMENT-LEVEL OPERATIONS
    # =====================================================

    def product(self, x: TensorElement) -> TensorElement:
        return self.nabla().apply(x)

    def coproduct(self, x: TensorElement) -> TensorElement:
        return self.delta().apply(x)

    def antipode(self, x: TensorElement) -> TensorElement:
        return self.antipode_op().apply(x)

    def unit(self) -> TensorElement:
        return TensorElement.basis(EMPTY)

    def counit(self, x: TensorElement) -> Scalar:
        if x.arity != 1:
            raise DimensionError("counit expects an arity-1 element")
        return x.coefficient(EMPTY)

    # =====================================================
    # STRUCTURE MAPS
    # =====================================================

    def identity(self, arity: int = 1) -> LinearOperator:
        return self._memo(("id", arity), lambda: LinearOperator.identity(self.n, arity))

    def nabla(self) -> LinearOperator:
        def column(key: Key) -> Column:
            result = self.multiply(*key)
            if result is None:
                return {}
            sign, mask = result
            return {(mask,): LaurentPoly.constant(sign)}

        return self._memo(("nabla",), lambda: LinearOperator(self.n, 2, 1, column, name="nabla"))

    def nabla3(self) -> LinearOperator:
        """Iterated product Lambda^(x)3 -> Lambda."""
        return self._memo(("nabla3",), lambda: self.nabla() @ self.nabla().tensor(self.identity()))

    def delta(self) -> LinearOperator:
        def column(key: Key) -> Column:
            return self.coproduct_terms(key[0])

        return self._memo(("delta",), lambda: LinearOperator(self.n, 1, 2, column, name="delta"))

    def antipode_op(self) -> LinearOperator:
        return self._memo(
            ("S",),
            lambda: LinearOperator.diagonal(self.n, 1, lambda key: self.antipode_coefficient(key[0]), name="S"),
        )

    def unit_left(self) -> LinearOperator:
        """x -> f_empty (x) x, i.e. eta (x) id."""
        return self._memo(
            ("eta_left",),
            lambda: LinearOperator(self.n, 1, 2, lambda key: {(EMPTY,) + key: ONE}, name="eta(x)id"),
        )

    def unit_right(self) -> LinearOperator:
        return self._memo(
            ("eta_right",),
            lambda: LinearOperator(self.n, 1, 2, lambda key: {key + (EMPTY,): ONE}, name="id(x)eta"),
        )

    def counit_left(self) -> LinearOperator:
        """f_E (x) f_F -> eps(f_E) f_F."""
        return self._memo(
            ("eps_left",),
            lambda: LinearOperator(
                self.n, 2, 1, lambda key: {(key[1],): ONE} if key[0] == EMPTY else {}, name="eps(x)id"
            ),
        )

    def counit_right(self) -> LinearOperator:
        return self._memo(
            ("eps_right",),
            lambda: LinearOperator(
                self.n, 2, 1, lambda key: {(key[0],): ONE} if key[1] == EMPTY else {}, name="id(x)eps"
            ),
        )

    def unit_counit(self) -> LinearOperator:
        """eta o eps on Lambda."""
        return self._memo(
            ("eta_eps",),
            lambda: LinearOperator(
                self.n, 1, 1, lambda key: {(EMPTY,): ONE} if key[0] == EMPTY else {}, name="eta*eps"
            ),
        )

    # =====================================================
    # GRADED PROJECTIONS
    # =====================================================

    def _check_degree(self, k: int) -> None:
        if not 0 <= k <= self.n:
            raise DimensionError(f"degree must be in 0..{self.n}, got {k}")

    def projector(self, k: int) -> LinearOperator:
        self._check_degree(k)
        return self._memo(
            ("pi", k),
            lambda: LinearOperator.diagonal(
                self.n, 1, lambda key: ONE if size(key[0]) == k else LaurentPoly(), name=f"pi{k}"
            ),
        )

    def delta_left(self, k: int) -> LinearOperator:
        """Delta_{k)} = (pi_k (x) id) Delta."""
        self._check_degree(k)
        return self._memo(
            ("delta_left", k),
            lambda: self.projector(k).tensor(self.identity()) @ self.delta(),
        )

    def delta_right(self, k: int) -> LinearOperator:
        """Delta_{(k} = (id (x) pi_k) Delta."""
        self._check_degree(k)
        return self._memo(
            ("delta_right", k),
            lambda: self.identity().tensor(self.projector(k)) @ self.delta(),
        )

    def phi(self, base: LaurentPoly, name: str = "phi") -> LinearOperator:
        """Diagonal automorphism f_E -> base^|E| f_E."""
        return LinearOperator.diagonal(self.n, 1, lambda key: base ** size(key[0]), name=name)

    def phi_t(self) -> LinearOperator:
        return self._memo(("phi_t",), lambda: self.phi(T, name="phi_t"))

    def phi_p(self) -> LinearOperator:
        return self._memo(("phi_p",), lambda: self.phi(P, name="phi_p"))

    # =====================================================
    # OPERATORS ON THE TENSOR SQUARE
    # =====================================================

    def op_T1(self) -> LinearOperator:
        return self._memo(("T1",), lambda: self.phi_p().tensor(self.identity()))

    def op_T2(self) -> LinearOperator:
        return self._memo(("T2",), lambda: self.identity().tensor(self.phi_p()))

    def op_L(self) -> LinearOperator:
        return self.divided_power("L", 1)

    def op_R(self) -> LinearOperator:
        return self.divided_power("R", 1)

    def divided_power(self, which: str, k: int) -> LinearOperator:
        """
        L^<k> = (nabla (x) id)(id (x) Delta_{k)}),
        R^<k> = (id (x) nabla)(Delta_{(k} (x) id).
        Zero for k > N.
        """
        if k < 0:
            raise DimensionError(f"divided power index must be >= 0, got {k}")
        if which not in ("L", "R"):
            raise ValueError(f"Unsupported operator: {which}")
        if k == 0:
            return self.identity(2)
        if k > self.n:
            return LinearOperator(self.n, 2, 2, lambda key: {}, name=f"{which}<{k}>")

        def factory() -> LinearOperator:
            if which == "L":
                op = self.nabla().tensor(self.identity()) @ self.identity().tensor(self.delta_left(k))
            else:
                op = self.identity().tensor(self.nabla()) @ self.delta_right(k).tensor(self.identity())
            op.name = f"{which}<{k}>"
            return op

        return self._memo(("divided", which, k), factory)

    def divided_power_by_powers(self, which: str, k: int) -> LinearOperator:
        """X^k / [k]! with exact division, the cross-check route."""
        base = self.divided_power(which, 1)
        power = self.identity(2)
        for _ in range(k):
            power = base @ power
        factorial = qfactorial(k)
        return power.map_coefficients(lambda c: exact_divide(c, factorial), name=f"{which}^{k}/[{k}]!")

    def exp_p(self, which: str) -> LinearOperator:
        """Truncated exponential sum_{k<=N} X^<k>."""
        def factory() -> LinearOperator:
            total = self.divided_power(which, 0)
            for k in range(1, self.n + 1):
                total = total + self.divided_power(which, k)
            return total

        return self._memo(("exp", which), factory)

    # =====================================================
    # B OPERATOR
    # =====================================================

    def op_B(self) -> LinearOperator:
        """B = (nabla (x) id)(S (x) Delta nabla)(Delta (x) id)."""
        def factory() -> LinearOperator:
            middle = self.antipode_op().tensor(self.delta() @ self.nabla())
            return self.nabla().tensor(self.identity()) @ middle @ self.delta().tensor(self.identity())

        return self._memo(("B",), factory)

    def op_B_exponential(self) -> LinearOperator:
        """B = exp_p(L) (S (x) id) exp_p(R)."""
        def factory() -> LinearOperator:
            logger.debug(f"Building exponential B at N={self.n}")
            return self.exp_p("L") @ self.antipode_op().tensor(self.identity()) @ self.exp_p("R")

        return self._memo(("B_exp",), factory)
