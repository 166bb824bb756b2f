from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from loguru import logger

from lambdap.core.combin import EMPTY, flat_index_table, flat_order, size
from lambdap.core.errors import DimensionError
from lambdap.core.qfunctions import gauss_gamma, qpochhammer
from lambdap.core.ring import P, T, LaurentPoly, Scalar, exact_divide
from lambdap.core.tensor import Column, Key, LinearOperator, TensorElement, accumulate
from lambdap.engines.braiding import (
    BraidingEngine,
    admissible_pairs,
    beta,
    content_block,
    exchange_result,
    global_sign,
)
from lambdap.engines.hopf import ExteriorHopfAlgebra


# =====================================================
# DATA TYPES
# =====================================================

@dataclass(frozen=True)
class RhoCoefficient:
    """r_{E,G;F,H} = t^|F'| (t p^|E|; p)_{|H|-|G|} beta_{E,G;F,H}."""

    e: int
    g: int
    f: int
    h: int
    value: LaurentPoly

    @property
    def output(self) -> Tuple[int, int]:
        return exchange_result(self.e, self.g, self.f, self.h)


@dataclass
class ChannelAction:
    """Image of one basis pair inside a named channel, in flat indices."""

    source: Tuple[int, int]
    image: Dict[Tuple[int, int], LaurentPoly]


@dataclass
class RhoChannels:
    """
    Channel split of rho on the flat basis f_0..f_{2^N-1}.

    exponent_matrix[j][i] is m with scattering f_{i,j} -> (-1)^{[i][j]} t^[j] p^m f_{j,i};
    reflection_matrix[i][j] is the diagonal coefficient of f_{i,j} divided by (-t)^[i].
    """

    n: int
    flat_order: List[int]
    exponent_matrix: List[List[int]]
    reflection_matrix: List[List[LaurentPoly]]
    annihilation: List[ChannelAction] = field(default_factory=list)
    decay: List[ChannelAction] = field(default_factory=list)
    fusion: List[ChannelAction] = field(default_factory=list)
    exchange: List[ChannelAction] = field(default_factory=list)
    raw: Dict[Tuple[int, int], List[ChannelAction]] = field(default_factory=dict)


# =====================================================
# R-MATRIX ENGINE
# =====================================================

class RMatrixEngine:
    """
    Right action lambda_R and the two-parameter R-matrix rho.

    Features:
    - closed-form and structure-map right action
    - rho from L, R divided powers and W_n
    - rho from coefficients r_{E,G;F,H}
    - rho from raw structure maps
    - channel report and exact inverse
    """

    NAMED_CHANNEL_MAX_DIM = 3

    def __init__(self, algebra: ExteriorHopfAlgebra, braiding: Optional[BraidingEngine] = None):
        self.algebra = algebra
        self.braiding = braiding or BraidingEngine(algebra)
        self.n = algebra.n
        self._ops: Dict[Tuple, LinearOperator] = {}

    def _memo(self, key, factory) -> LinearOperator:
        if key not in self._ops:
            self._ops[key] = factory()
        return self._ops[key]

    # -----------------------------------------------------
    # Right action
    # -----------------------------------------------------

    def right_action(self, e: int, f: int) -> TensorElement:
        """f_E <| f_F = f_E f_F (t p^|E|; p)_|F|."""
        result = self.algebra.multiply(e, f)
        if result is None:
            return TensorElement.zero(1)
        sign, mask = result
        coeff = qpochhammer(T * P ** size(e), size(f)) * sign
        return TensorElement(1, {(mask,): coeff})

    def right_action_op(self) -> LinearOperator:
        return self._memo(
            ("action",),
            lambda: LinearOperator(
                self.n, 2, 1, lambda key: self.right_action(*key).as_dict(), name="lambda_R"
            ),
        )

    def right_action_from_structure(self) -> LinearOperator:
        """lambda_R = nabla3 ((S phi_t) (x) id (x) id)(hat_tau (x) id)(id (x) Delta)."""
        algebra = self.algebra

        def factory() -> LinearOperator:
            s_phi = algebra.antipode_op() @ algebra.phi_t()
            twist = s_phi.tensor(algebra.identity(2))
            return (
                algebra.nabla3()
                @ twist
                @ self.braiding.hat_tau().tensor(algebra.identity())
                @ algebra.identity().tensor(algebra.delta())
            )

        return self._memo(("action_raw",), factory)

    # -----------------------------------------------------
    # W_n
    # -----------------------------------------------------

    def w_operator(self, n: int, x: LaurentPoly, y_divided: Callable[[int], LinearOperator]) -> LinearOperator:
        """W_n(x, y) = sum_i (x; p)_{n-i} y^<i>, with y^<i> supplied by `y_divided`."""
        if n < 0:
            raise DimensionError(f"W_n needs n >= 0, got {n}")
        total = y_divided(0).scale(qpochhammer(x, n))
        for i in range(1, n + 1):
            total = total + y_divided(i).scale(qpochhammer(x, n - i))
        return total

    def _t_divided_l(self, i: int) -> LinearOperator:
        # (tL)^<i> = t^i L^<i>
        return self._memo(
            ("tL", i), lambda: self.algebra.divided_power("L", i).scale(T ** i)
        )

    # -----------------------------------------------------
    # rho, three constructions
    # -----------------------------------------------------

    def rho_operator_form(self) -> LinearOperator:
        """rho f_{E,F} = sum_k t^k gamma_k W_{|F|-k}(t p^|E|, tL) R^<|E|-k> f_{E,F}."""
        algebra = self.algebra

        def column(key: Key) -> Column:
            e, f = key
            m, n = size(e), size(f)
            x = T * P ** m
            terms: Column = {}
            for k in range(min(m, n) + 1):
                w = self._memo(("W", n - k, m), lambda: self.w_operator(n - k, x, self._t_divided_l))
                factor = T ** k * gauss_gamma(k)
                for middle, c1 in algebra.divided_power("R", m - k).column(key).items():
                    for out, c2 in w.column(middle).items():
                        accumulate(terms, out, factor * c2 * c1)
            return terms

        return self._memo(("rho_op",), lambda: LinearOperator(self.n, 2, 2, column, name="rho_op"))

    def coefficient(self, e: int, g: int, f: int, h: int) -> RhoCoefficient:
        if size(h) < size(g):
            raise DimensionError("rho coefficients need |H| >= |G|")
        f_new, _ = exchange_result(e, g, f, h)
        value = (
            T ** size(f_new)
            * qpochhammer(T * P ** size(e), size(h) - size(g))
            * beta(e, g, f, h)
        )
        return RhoCoefficient(e, g, f, h, value)

    def rho_coeff_form(self) -> LinearOperator:
        """rho f_{E,F} = (-1)^{|E||F|} sum_{|H| >= |G|} r_{E,G;F,H} f_{F',E'}."""
        def column(key: Key) -> Column:
            e, f = key
            sign = global_sign(e, f)
            terms: Column = {}
            for g, h in admissible_pairs(e, f):
                if size(h) < size(g):
                    continue
                entry = self.coefficient(e, g, f, h)
                if entry.value:
                    accumulate(terms, entry.output, entry.value * sign)
            return terms

        return self._memo(("rho_coeff",), lambda: LinearOperator(self.n, 2, 2, column, name="rho"))

    def rho_structure(self) -> LinearOperator:
        """rho = (phi_t (x) lambda_R)(hat_tau (x) id)(id (x) Delta) from raw maps."""
        algebra = self.algebra

        def factory() -> LinearOperator:
            return (
                algebra.phi_t().tensor(self.right_action_from_structure())
                @ self.braiding.hat_tau().tensor(algebra.identity())
                @ algebra.identity().tensor(algebra.delta())
            )

        return self._memo(("rho_raw",), factory)

    def rho(self) -> LinearOperator:
        return self.rho_coeff_form()

    def rho_inverse(self) -> LinearOperator:
        """Exact inverse per content block; entries are RationalFn collapsed to Laurent where possible."""
        def factory() -> LinearOperator:
            logger.debug(f"Inverting rho at N={self.n}")
            return self.rho().inverse(content_block, name="rho^-1")

        return self._memo(("rho_inv",), factory)

    # -----------------------------------------------------
    # Channels
    # -----------------------------------------------------

    def rho_channels(self) -> RhoChannels:
        """Classify every (input, output) entry of the assembled rho."""
        order = list(flat_order(self.n))
        index = flat_index_table(self.n)
        dim = len(order)
        rho = self.rho()

        exponents = [[0] * dim for _ in range(dim)]
        reflection = [[LaurentPoly() for _ in range(dim)] for _ in range(dim)]
        report = RhoChannels(self.n, order, exponents, reflection)
        named = self.n <= self.NAMED_CHANNEL_MAX_DIM

        for e in order:
            for f in order:
                i, j = index[e], index[f]
                others: Dict[Tuple[int, int], LaurentPoly] = {}
                by_shape: Dict[Tuple[int, int], Dict[Tuple[int, int], LaurentPoly]] = {}

                for (x, y), coeff in sorted(rho.column((e, f)).items()):
                    g, h = x & ~f, f & ~x
                    target = (index[x], index[y])

                    if g == EMPTY and h == EMPTY:
                        exponents[j][i] = _scattering_exponent(coeff, e, f)
                    elif x == e:
                        reflection[i][j] = exact_divide(coeff, (-T) ** size(e))
                    else:
                        others[target] = coeff
                        by_shape.setdefault((size(g), size(h)), {})[target] = coeff

                for shape, image in by_shape.items():
                    report.raw.setdefault(shape, []).append(ChannelAction((i, j), image))

                if not others or not named:
                    continue

                report.annihilation.append(ChannelAction((i, j), others))
                decay = {k: v for k, v in others.items() if e == EMPTY}
                fusion = {k: v for k, v in others.items() if e != EMPTY and k[0] == 0}
                exchange = {k: v for k, v in others.items() if e != EMPTY and k[0] != 0}
                for bucket, image in ((report.decay, decay), (report.fusion, fusion), (report.exchange, exchange)):
                    if image:
                        bucket.append(ChannelAction((i, j), image))

        logger.debug(
            f"rho channels at N={self.n}: {len(report.annihilation)} annihilation sources"
        )
        return report

    def channel_action(self, report: RhoChannels, name: str, source: Tuple[int, int]) -> Dict[Tuple[int, int], LaurentPoly]:
        for action in getattr(report, name):
            if action.source == source:
                return action.image
        return {}


def _scattering_exponent(coeff: Scalar, e: int, f: int) -> int:
    normalized = exact_divide(coeff, T ** size(f) * global_sign(e, f))
    terms = normalized.items()
    if len(terms) != 1 or terms[0][1] != 1 or terms[0][0][1] != 0:
        raise DimensionError(f"scattering coefficient {coeff} is not t^|F| p^m")
    return terms[0][0][0]
