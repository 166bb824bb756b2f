import time
from itertools import product
from typing import Any, Callable, Iterable, List, Optional, Sequence, Tuple

from loguru import logger

from lambdap.api.schemas import CheckStatus, Counterexample, LemmaRanges, VerificationReport
from lambdap.core.combin import (
    EMPTY,
    alpha,
    alpha_nonvanishing,
    k_subsets,
    size,
    subset_json,
    submasks,
    theta,
)
from lambdap.core.errors import DimensionError
from lambdap.core.linalg import solve_linear
from lambdap.core.qfunctions import gauss_gamma, p_factorial, qbinom, qpochhammer
from lambdap.core.ring import ONE, P, T, LaurentPoly, RationalFn, simplify
from lambdap.core.tensor import Key, LinearOperator, basis_keys, key_json
from lambdap.engines.braiding import BraidingEngine, admissible_pairs, exchange_result
from lambdap.engines.hopf import ExteriorHopfAlgebra
from lambdap.engines.rmatrix import RMatrixEngine


Case = Tuple[List[List[int]], Any, Any]


# =====================================================
# REPORT HELPERS
# =====================================================

def _json(value: Any) -> Any:
    if hasattr(value, "to_json"):
        return value.to_json()
    return value


def compare_operators(
    check: str,
    lhs: LinearOperator,
    rhs: LinearOperator,
    keys: Optional[Iterable[Key]] = None,
    parameters: Optional[dict] = None,
) -> VerificationReport:
    """Entrywise operator comparison; the first differing column is the witness."""

    start = time.perf_counter()
    keys = list(lhs.domain() if keys is None else keys)
    difference = lhs.first_difference(rhs, keys)
    elapsed = time.perf_counter() - start

    parameters = {"dim": lhs.n, "keys": len(keys), **(parameters or {})}

    if difference is None:
        return VerificationReport(check=check, parameters=parameters, status=CheckStatus.PASS, wall_time=elapsed)

    key, left, right = difference
    return VerificationReport(
        check=check,
        parameters=parameters,
        status=CheckStatus.FAIL,
        wall_time=elapsed,
        counterexample=Counterexample(basis=key_json(key), lhs=left.to_json(), rhs=right.to_json()),
    )


def compare_cases(
    check: str,
    cases: Callable[[], Iterable[Case]],
    parameters: Optional[dict] = None,
) -> VerificationReport:
    """Scalar identities: `cases` yields (label, lhs, rhs); stops at the first mismatch."""

    start = time.perf_counter()
    count = 0
    witness = None

    for label, left, right in cases():
        count += 1
        if left != right:
            witness = Counterexample(basis=label, lhs=_json(left), rhs=_json(right))
            break

    parameters = {**(parameters or {}), "cases": count}
    return VerificationReport(
        check=check,
        parameters=parameters,
        status=CheckStatus.PASS if witness is None else CheckStatus.FAIL,
        wall_time=time.perf_counter() - start,
        counterexample=witness,
    )


def combine(check: str, children: Sequence[VerificationReport], parameters: Optional[dict] = None) -> VerificationReport:
    passed = all(child.passed for child in children)
    return VerificationReport(
        check=check,
        parameters=parameters or {},
        status=CheckStatus.PASS if passed else CheckStatus.FAIL,
        wall_time=sum(child.wall_time or 0.0 for child in children),
        checks=list(children),
    )


# =====================================================
# AXIOM ENGINE
# =====================================================

class AxiomEngine:
    """
    Exhaustive small-N verification of every structural identity.

    Features:
    - Hopf axioms, unit-braiding and braided compatibility
    - naturality of the braiding and the fusion relation
    - Yang-Baxter and Hecke relations
    - absence of primitives above degree one
    - combinatorial lemma families
    - agreement of independent constructions

    Checks never raise on a failed identity; they return a report
    carrying the first counterexample.
    """

    HOPF_MAX_DIM = 3
    NATURALITY_MAX_DIM = 2
    HECKE_MAX_DIM = 5
    NICHOLS_MAX_DIM = 3

    def __init__(self, algebra: ExteriorHopfAlgebra):
        self.algebra = algebra
        self.n = algebra.n
        self.braiding = BraidingEngine(algebra)
        self.rmatrix = RMatrixEngine(algebra, self.braiding)

    @classmethod
    def of_dimension(cls, n: int) -> "AxiomEngine":
        return cls(ExteriorHopfAlgebra(n))

    def _require(self, limit: int, check: str) -> None:
        if self.n > limit:
            raise DimensionError(f"{check} supports N <= {limit}, got {self.n}")

    def _algebra_of(self, n: int) -> ExteriorHopfAlgebra:
        return self.algebra if n == self.n else ExteriorHopfAlgebra(n)

    # =====================================================
    # HOPF AXIOMS
    # =====================================================

    def verify_hopf(self) -> VerificationReport:
        self._require(self.HOPF_MAX_DIM, "verify_hopf")
        a = self.algebra
        hat_tau = self.braiding.hat_tau()
        one = a.identity()
        ones = basis_keys(self.n, 1)
        twos = basis_keys(self.n, 2)
        threes = basis_keys(self.n, 3, self.n)

        nabla, delta, s = a.nabla(), a.delta(), a.antipode_op()
        nabla2 = nabla.tensor(nabla)
        delta2 = delta.tensor(delta)

        checks = [
            compare_operators("associativity", nabla @ nabla.tensor(one), nabla @ one.tensor(nabla), threes),
            compare_operators("coassociativity", delta.tensor(one) @ delta, one.tensor(delta) @ delta, ones),
            compare_operators("unit_left", nabla @ a.unit_left(), one, ones),
            compare_operators("unit_right", nabla @ a.unit_right(), one, ones),
            compare_operators("counit_left", a.counit_left() @ delta, one, ones),
            compare_operators("counit_right", a.counit_right() @ delta, one, ones),
            compare_operators("antipode_right", nabla @ one.tensor(s) @ delta, a.unit_counit(), ones),
            compare_operators("antipode_left", nabla @ s.tensor(one) @ delta, a.unit_counit(), ones),
            compare_operators("unit_braiding_left", hat_tau @ a.unit_left(), a.unit_right(), ones),
            compare_operators("unit_braiding_right", hat_tau @ a.unit_right(), a.unit_left(), ones),
            compare_operators("compatibility", nabla2 @ hat_tau.pad(1, 1) @ delta2, delta @ nabla, twos),
            compare_operators(
                "braiding_from_structure",
                nabla2 @ s.tensor(delta @ nabla).tensor(s) @ delta2,
                hat_tau,
                twos,
            ),
        ]
        return combine("hopf", checks, {"dim": self.n})

    # =====================================================
    # NATURALITY
    # =====================================================

    def verify_naturality(self, max_degree: Optional[int] = None) -> VerificationReport:
        self._require(self.NATURALITY_MAX_DIM, "verify_naturality")
        a = self.algebra
        cap = self.n if max_degree is None else max_degree
        hat_tau = self.braiding.hat_tau()
        one = a.identity()
        nabla, delta, s = a.nabla(), a.delta(), a.antipode_op()
        ones = basis_keys(self.n, 1)
        twos = basis_keys(self.n, 2)
        threes = basis_keys(self.n, 3, cap)

        checks = [
            compare_operators("unit_sliding_left", hat_tau @ a.unit_left(), a.unit_right(), ones),
            compare_operators("unit_sliding_right", hat_tau @ a.unit_right(), a.unit_left(), ones),
            compare_operators("counit_sliding_left", a.counit_left() @ hat_tau, a.counit_right(), twos),
            compare_operators("counit_sliding_right", a.counit_right() @ hat_tau, a.counit_left(), twos),
            compare_operators("antipode_sliding_left", hat_tau @ s.tensor(one), one.tensor(s) @ hat_tau, twos),
            compare_operators("antipode_sliding_right", hat_tau @ one.tensor(s), s.tensor(one) @ hat_tau, twos),
            compare_operators(
                "product_sliding_left",
                hat_tau @ nabla.tensor(one),
                one.tensor(nabla) @ hat_tau.pad(0, 1) @ hat_tau.pad(1, 0),
                threes,
                {"max_degree": cap},
            ),
            compare_operators(
                "product_sliding_right",
                hat_tau @ one.tensor(nabla),
                nabla.tensor(one) @ hat_tau.pad(1, 0) @ hat_tau.pad(0, 1),
                threes,
                {"max_degree": cap},
            ),
            compare_operators(
                "coproduct_sliding_right",
                one.tensor(delta) @ hat_tau,
                hat_tau.pad(0, 1) @ hat_tau.pad(1, 0) @ delta.tensor(one),
                twos,
            ),
            compare_operators(
                "coproduct_sliding_left",
                delta.tensor(one) @ hat_tau,
                hat_tau.pad(1, 0) @ hat_tau.pad(0, 1) @ one.tensor(delta),
                twos,
            ),
            compare_operators("antipode_product", s @ nabla, nabla @ hat_tau @ s.tensor(s), twos),
        ]
        return combine("naturality", checks, {"dim": self.n, "max_degree": cap})

    def verify_fusion(self, max_degree: Optional[int] = None) -> VerificationReport:
        """hat_tau (nabla (x) nabla) through four crossings on the arity-4 domain."""
        self._require(self.NATURALITY_MAX_DIM, "verify_fusion")
        cap = self.n if max_degree is None else max_degree
        hat_tau = self.braiding.hat_tau()
        nabla = self.algebra.nabla()
        nabla2 = nabla.tensor(nabla)
        middle = hat_tau.pad(1, 1)

        report = compare_operators(
            "fusion",
            hat_tau @ nabla2,
            nabla2 @ middle @ hat_tau.tensor(hat_tau) @ middle,
            basis_keys(self.n, 4, cap),
            {"max_degree": cap},
        )
        return combine("fusion", [report], {"dim": self.n, "max_degree": cap})

    # =====================================================
    # YANG-BAXTER / HECKE
    # =====================================================

    def verify_ybe(
        self,
        op: LinearOperator,
        keys: Optional[Iterable[Key]] = None,
        max_degree: Optional[int] = None,
        check: str = "ybe",
    ) -> VerificationReport:
        if (op.arity_in, op.arity_out) != (2, 2):
            raise DimensionError(f"Yang-Baxter check needs an arity-2 operator, got {op.arity_in}->{op.arity_out}")
        first, second = op.pad(0, 1), op.pad(1, 0)
        keys = basis_keys(op.n, 3, max_degree) if keys is None else keys
        return compare_operators(
            check,
            first @ second @ first,
            second @ first @ second,
            keys,
            {"operator": op.name, "max_degree": max_degree},
        )

    def verify_ybe_suite(self, max_degree: Optional[int] = None) -> VerificationReport:
        checks = [
            self.verify_ybe(self.braiding.tau_operator(), self.braiding.vector_keys(3), check="ybe_tau"),
            self.verify_ybe(self.braiding.hat_tau(), max_degree=max_degree, check="ybe_hat_tau"),
            self.verify_ybe(self.rmatrix.rho(), max_degree=max_degree, check="ybe_rho"),
        ]
        return combine("ybe", checks, {"dim": self.n})

    def verify_hecke(self) -> VerificationReport:
        self._require(self.HECKE_MAX_DIM, "verify_hecke")
        tau = self.braiding.tau_operator()
        identity = LinearOperator.identity(self.n, 2)
        quadratic = (tau + identity) @ (tau - identity.scale(P))
        zero = LinearOperator(self.n, 2, 2, lambda key: {}, name="0")

        def eigen_cases() -> Iterable[Case]:
            for vector, value in self.braiding.eigenvectors():
                label = [subset_json(mask) for key in vector.keys() for mask in key]
                yield label, tau.apply(vector), vector.scale(value)

        checks = [
            compare_operators("hecke_relation", quadratic, zero, self.braiding.vector_keys(2)),
            compare_cases("hecke_eigenvectors", eigen_cases, {"dim": self.n}),
        ]
        return combine("hecke", checks, {"dim": self.n})

    # =====================================================
    # NICHOLS PROPERTY
    # =====================================================

    def primitive_dimension(self, degree: int) -> Tuple[int, Optional[Tuple[List[int], Tuple[RationalFn, ...]]]]:
        """
        Dimension of {x of degree d : Delta x = x (x) 1 + 1 (x) x} over Q(p, t),
        with one spanning vector when nonzero.
        """
        sources = self.algebra.basis.subsets_of_degree(degree)
        columns = [self.algebra.coproduct_terms(e) for e in sources]
        targets = sorted({key for column in columns for key in column if key[0] and key[1]})

        if not targets:
            return len(sources), None

        system = [[column.get(key, LaurentPoly()) for column in columns] for key in targets]
        solution = solve_linear(system, [0] * len(targets))
        if not solution.nullspace:
            return 0, None
        return solution.dimension, (sources, solution.nullspace[0])

    def verify_nichols_primitives(self) -> VerificationReport:
        self._require(self.NICHOLS_MAX_DIM, "verify_nichols_primitives")
        start = time.perf_counter()
        dimensions = {}
        witness = None

        for degree in range(2, self.n + 1):
            dimension, spanning = self.primitive_dimension(degree)
            dimensions[str(degree)] = dimension
            if spanning is not None and witness is None:
                sources, vector = spanning
                support = [(mask, c) for mask, c in zip(sources, vector) if c]
                witness = Counterexample(
                    basis=[subset_json(mask) for mask, _ in support],
                    lhs=[c.to_json() for _, c in support],
                    rhs=[],
                )

        logger.debug(f"Primitive dimensions at N={self.n}: {dimensions}")
        return VerificationReport(
            check="nichols",
            parameters={"dim": self.n},
            status=CheckStatus.PASS if witness is None else CheckStatus.FAIL,
            wall_time=time.perf_counter() - start,
            counterexample=witness,
            details={"dimensions": dimensions},
        )

    # =====================================================
    # INDEPENDENT CONSTRUCTIONS
    # =====================================================

    def verify_constructions(self) -> VerificationReport:
        a = self.algebra
        braiding, rmatrix = self.braiding, self.rmatrix
        twos = basis_keys(self.n, 2)
        hat_tau = braiding.hat_tau()

        channels = braiding.channel(0)
        for k in range(1, self.n + 1):
            channels = channels + braiding.channel(k)

        checks = [
            compare_operators("hat_tau_moy_vs_coeff", braiding.hat_tau_moy(), hat_tau, twos),
            compare_operators("hat_tau_skip_vanishing", braiding.hat_tau_coeff(skip_vanishing=False), hat_tau, twos),
            compare_operators("hat_tau_channel_sum", channels, hat_tau, twos),
            compare_operators("rho_operator_vs_coeff", rmatrix.rho_operator_form(), rmatrix.rho_coeff_form(), twos),
            compare_operators("b_structure_vs_exponential", a.op_B(), a.op_B_exponential(), twos),
            compare_operators("b_structure_vs_coefficients", a.op_B(), braiding.b_coefficient_form(), twos),
            compare_operators("right_action_structure", rmatrix.right_action_from_structure(), rmatrix.right_action_op(), twos),
            compare_cases("degree_preservation", lambda: self._degree_cases(hat_tau, twos)),
            compare_cases("ordered_action", self._ordered_cases),
            self.check_balance(),
        ]
        for which in ("L", "R"):
            for k in range(2, self.n + 1):
                checks.append(
                    compare_operators(
                        f"divided_power_{which}{k}",
                        a.divided_power(which, k),
                        a.divided_power_by_powers(which, k),
                        twos,
                    )
                )
        if self.n <= 2:
            checks.append(compare_operators("rho_from_structure", rmatrix.rho_structure(), rmatrix.rho(), twos))
        return combine("constructions", checks, {"dim": self.n})

    def _degree_cases(self, op: LinearOperator, keys: Iterable[Key]) -> Iterable[Case]:
        for e, f in keys:
            for x, y in op.column((e, f)):
                yield key_json((e, f)), [size(x), size(y)], [size(f), size(e)]

    def _ordered_cases(self) -> Iterable[Case]:
        hat_tau = self.braiding.hat_tau()
        for e, f in basis_keys(self.n, 2):
            if e and f and e.bit_length() >= (f & -f).bit_length():
                continue
            yield key_json((e, f)), hat_tau.on_basis(e, f), self.braiding.ordered_action(e, f)

    # =====================================================
    # LEMMA SUITE
    # =====================================================

    def verify_lemma_suite(self, ranges: Optional[LemmaRanges] = None) -> VerificationReport:
        ranges = ranges or LemmaRanges()
        checks = [
            self.check_ring_identities(ranges.ring_n),
            self.check_subset_qbinom(ranges.qbinom_n),
            self.check_bubble(ranges.bubble_dim),
            self.check_summation(ranges.summation_max),
            self.check_rl_commutation(ranges.rl_max, ranges.rl_dim),
            self.check_uq_gl2(ranges.rl_dim),
            self.check_right_action(ranges.action_dim, ranges.summation_max),
            self.check_theta(ranges.theta_dim),
            self.check_alpha(ranges.theta_dim),
            self.check_multiplicativity(ranges.bubble_dim),
        ]
        return combine("lemmas", checks, ranges.model_dump())

    def check_subset_qbinom(self, max_n: int) -> VerificationReport:
        """sum_{A in binom(E,k)} p^theta(A, E\\A) = [n k]_p for every E in {1..max_n}."""
        def cases() -> Iterable[Case]:
            for e in range(1 << max_n):
                n = size(e)
                for k in range(n + 1):
                    total = LaurentPoly()
                    for a in k_subsets(e, k):
                        total = total + P ** theta(a, e ^ a)
                    yield [subset_json(e), [k]], total, qbinom(n, k)

        return compare_cases("subset_qbinom", cases, {"max_n": max_n})

    def check_bubble(self, n: int) -> VerificationReport:
        a = self._algebra_of(n)
        checks = []
        for m in range(n + 1):
            for k in range(m + 1):
                expected = a.projector(m).scale(qbinom(m, k))
                checks.append(compare_operators(f"bubble_left_{m}_{k}", a.nabla() @ a.delta_left(k) @ a.projector(m), expected))
                checks.append(compare_operators(f"bubble_right_{m}_{k}", a.nabla() @ a.delta_right(k) @ a.projector(m), expected))
        return combine("bubble", checks, {"dim": n})

    def check_summation(self, max_index: int) -> VerificationReport:
        def cases() -> Iterable[Case]:
            for i, j in product(range(max_index + 1), repeat=2):
                total = RationalFn(0)
                for k in range(i + 1):
                    outer = qbinom(i, k) * gauss_gamma(k)
                    for l in range(j + 1):
                        total = total + outer * P ** l * (qpochhammer(P ** (i - j - k), l) / p_factorial(l))
                yield [[i, j]], total, RationalFn(1 if i == j else 0)

        return compare_cases("summation", cases, {"max_index": max_index})

    def check_rl_commutation(self, max_power: int, n: int) -> VerificationReport:
        """R^<m> L^<n> = sum_k L^<n-k> R^<m-k> prod_j (T1 p^{k-m} - T2 p^{j-n}) / (p)_k."""
        a = self._algebra_of(n)
        keys = basis_keys(n, 2)
        checks = []

        for m, l_power in product(range(max_power + 1), repeat=2):
            lhs = a.divided_power("R", m) @ a.divided_power("L", l_power)
            rhs = LinearOperator(n, 2, 2, lambda key: {}, name="0")

            for k in range(min(m, l_power) + 1):
                def weight(key: Key, k=k, m=m, l_power=l_power) -> LaurentPoly:
                    result = ONE
                    for j in range(1, k + 1):
                        result = result * (P ** (size(key[0]) + k - m) - P ** (size(key[1]) + j - l_power))
                    return result

                factor = RationalFn(ONE, p_factorial(k))
                term = (
                    a.divided_power("L", l_power - k)
                    @ a.divided_power("R", m - k)
                    @ LinearOperator.diagonal(n, 2, weight, name="T-product")
                )
                rhs = rhs + term.map_coefficients(lambda c, factor=factor: simplify(c * factor))

            checks.append(compare_operators(f"rl_{m}_{l_power}", lhs, rhs, keys))
        return combine("rl_commutation", checks, {"max_power": max_power, "dim": n})

    def check_uq_gl2(self, n: int) -> VerificationReport:
        a = self._algebra_of(n)
        t1, t2, l_op, r_op = a.op_T1(), a.op_T2(), a.op_L(), a.op_R()
        commutator = (r_op @ l_op - l_op @ r_op).scale(ONE - P)
        checks = [
            compare_operators("t1_l", t1 @ l_op, (l_op @ t1).scale(P)),
            compare_operators("l_t2", l_op @ t2, (t2 @ l_op).scale(P)),
            compare_operators("t2_r", t2 @ r_op, (r_op @ t2).scale(P)),
            compare_operators("r_t1", r_op @ t1, (t1 @ r_op).scale(P)),
            compare_operators("t1_t2", t1 @ t2, t2 @ t1),
            compare_operators("rl_minus_lr", commutator, t1 - t2),
        ]
        return combine("uq_gl2", checks, {"dim": n})

    def check_right_action(self, n: int, max_index: int) -> VerificationReport:
        a = self._algebra_of(n)
        rmatrix = self.rmatrix if a is self.algebra else RMatrixEngine(a)
        action = rmatrix.right_action_op()

        def split_cases() -> Iterable[Case]:
            for m, k in product(range(max_index + 1), repeat=2):
                yield [[m, k]], qpochhammer(T, m + k), qpochhammer(T, k) * qpochhammer(T * P ** k, m)

        checks = [
            compare_cases("pochhammer_split", split_cases, {"max_index": max_index}),
            compare_operators(
                "module_identity",
                action @ action.tensor(a.identity()),
                action @ a.identity().tensor(a.nabla()),
                basis_keys(n, 3, n),
            ),
            compare_operators("action_from_structure", rmatrix.right_action_from_structure(), action),
        ]
        return combine("right_action", checks, {"dim": n})

    def check_theta(self, n: int) -> VerificationReport:
        masks = range(1 << n)

        def symmetry() -> Iterable[Case]:
            for x, y in product(masks, repeat=2):
                yield [subset_json(x), subset_json(y)], theta(x, y) + theta(y, x), size(x) * size(y) - size(x & y)

        def cocycle() -> Iterable[Case]:
            # every assignment of the n elements to A, B, C or none
            for labels in product(range(4), repeat=n):
                parts = [0, 0, 0]
                for index, label in enumerate(labels):
                    if label < 3:
                        parts[label] |= 1 << index
                x, y, z = parts
                lhs = theta(x, y) + theta(x | y, z)
                rhs = theta(x, y | z) + theta(y, z)
                yield [subset_json(x), subset_json(y), subset_json(z)], lhs, rhs

        checks = [
            compare_cases("theta_symmetry", symmetry, {"dim": n}),
            compare_cases("theta_cocycle", cocycle, {"dim": n}),
        ]
        return combine("theta", checks, {"dim": n})

    def check_alpha(self, n: int) -> VerificationReport:
        """alpha(G, H) != 0 iff the i-th element of G exceeds the i-th element of H."""
        def cases() -> Iterable[Case]:
            full = (1 << n) - 1
            for g in range(1 << n):
                for h in submasks(full & ~g):
                    yield [subset_json(g), subset_json(h)], not alpha(g, h).is_zero(), alpha_nonvanishing(g, h)

        return compare_cases("alpha_criterion", cases, {"dim": n})

    def check_multiplicativity(
        self,
        n: int,
        weight: Optional[Callable[[int, int], LaurentPoly]] = None,
    ) -> VerificationReport:
        """sum_{A <= E} g(A) = g(0) prod_{a in E} (1 + g({a})) for g(A) = t^|A| p^theta(A, B), B fixed."""
        if weight is None:
            def weight(a: int, b: int) -> LaurentPoly:
                return LaurentPoly.monomial(1, p=theta(a, b), t=size(a))

        def cases() -> Iterable[Case]:
            for e, b in product(range(1 << n), repeat=2):
                total = LaurentPoly()
                for a in submasks(e):
                    total = total + weight(a, b)
                expected = weight(EMPTY, b)
                for single in k_subsets(e, 1):
                    expected = expected * (ONE + weight(single, b))
                yield [subset_json(e), subset_json(b)], total, expected

        return compare_cases("multiplicativity", cases, {"dim": n})

    def check_ring_identities(self, max_n: int) -> VerificationReport:
        """q-binomial recurrence, symmetry and theorem; Pochhammer summation and additivity."""
        small = min(max_n, 8)

        def binom(n: int, k: int) -> LaurentPoly:
            return qbinom(n, k) if 0 <= k <= n else LaurentPoly()

        def recurrence() -> Iterable[Case]:
            for n in range(1, max_n + 1):
                for k in range(1, n + 1):
                    yield [[n, k]], qbinom(n, k), binom(n - 1, k - 1) + P ** k * binom(n - 1, k)

        def symmetry() -> Iterable[Case]:
            for n in range(max_n + 1):
                for k in range(n + 1):
                    yield [[n, k]], qbinom(n, k), qbinom(n, n - k)

        def theorem() -> Iterable[Case]:
            # (x; p)_n = sum_m [n m]_p gamma_m x^m
            for n in range(small + 1):
                for index, x in enumerate((T, T * P, T * P ** 2)):
                    total = LaurentPoly()
                    for m in range(n + 1):
                        total = total + qbinom(n, m) * gauss_gamma(m) * x ** m
                    yield [[n, index]], qpochhammer(x, n), total

        def summation() -> Iterable[Case]:
            for n in range(small + 1):
                total = RationalFn(0)
                for m in range(n + 1):
                    total = total + RationalFn(P ** m, p_factorial(m))
                yield [[n]], total, RationalFn(ONE, p_factorial(n))

        def additivity() -> Iterable[Case]:
            for m, n in product(range(min(max_n, 6) + 1), repeat=2):
                yield [[m, n]], qpochhammer(T, m + n), qpochhammer(T, n) * qpochhammer(T * P ** n, m)

        checks = [
            compare_cases("qbinom_recurrence", recurrence, {"max_n": max_n}),
            compare_cases("qbinom_symmetry", symmetry, {"max_n": max_n}),
            compare_cases("qbinom_theorem", theorem, {"max_n": small}),
            compare_cases("pochhammer_summation", summation, {"max_n": small}),
            compare_cases("pochhammer_additivity", additivity, {"max_n": min(max_n, 6)}),
        ]
        return combine("ring_identities", checks, {"max_n": max_n})

    # =====================================================
    # CHANNEL BALANCE
    # =====================================================

    def check_balance(self) -> VerificationReport:
        """Every exchange (G, H) keeps |F'| = |F| and |E'| = |E| when |G| = |H|."""
        def cases() -> Iterable[Case]:
            for e, f in basis_keys(self.n, 2):
                for g, h in admissible_pairs(e, f):
                    if size(g) != size(h):
                        continue
                    f_new, e_new = exchange_result(e, g, f, h)
                    yield [subset_json(x) for x in (e, g, f, h)], [size(e_new), size(f_new)], [size(e), size(f)]

        return compare_cases("channel_balance", cases, {"dim": self.n})
