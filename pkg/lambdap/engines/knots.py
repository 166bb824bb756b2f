from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from loguru import logger

from lambdap.api.schemas import EnhancementReport, InvariantReport
from lambdap.core.combin import EMPTY, flat_order, subset_json
from lambdap.core.config import get_settings
from lambdap.core.errors import (
    DimensionError,
    EnhancementError,
    InvariantError,
    NormalizationError,
    ResourceBudgetError,
)
from lambdap.core.linalg import solve_linear
from lambdap.core.ring import ONE, LaurentPoly, RationalFn, Scalar, as_laurent, as_rational, simplify
from lambdap.core.tensor import Column, LinearOperator, basis_keys
from lambdap.engines.hopf import ExteriorHopfAlgebra
from lambdap.engines.rmatrix import RMatrixEngine


# =====================================================
# BRAID WORDS
# =====================================================

@dataclass(frozen=True)
class BraidWord:
    """
    Word in B_n as signed generator indices: k means sigma_k, -k its inverse.
    Letters apply left to right.
    """

    strands: int
    letters: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.strands < 1:
            raise DimensionError(f"a braid needs at least one strand, got {self.strands}")
        object.__setattr__(self, "letters", tuple(self.letters))
        for letter in self.letters:
            if letter == 0 or abs(letter) >= self.strands:
                raise DimensionError(f"letter {letter} out of range for {self.strands} strands")

    @classmethod
    def parse(cls, text: str, strands: int) -> "BraidWord":
        """Comma-separated signed integers, e.g. "1,-2,1"."""
        text = text.strip()
        if not text:
            return cls(strands)
        try:
            letters = tuple(int(piece) for piece in text.split(","))
        except ValueError as exc:
            raise DimensionError(f"malformed braid word {text!r}") from exc
        return cls(strands, letters)

    @property
    def positive(self) -> int:
        return sum(1 for letter in self.letters if letter > 0)

    @property
    def negative(self) -> int:
        return sum(1 for letter in self.letters if letter < 0)

    @property
    def writhe(self) -> int:
        return self.positive - self.negative

    def permutation(self) -> List[int]:
        """position[s] = final position of the strand starting at s (0-based)."""
        position = list(range(self.strands))
        for letter in self.letters:
            i = abs(letter) - 1
            for s, where in enumerate(position):
                if where == i:
                    position[s] = i + 1
                elif where == i + 1:
                    position[s] = i
        return position

    def components(self) -> int:
        """Number of components of the closure."""
        position = self.permutation()
        seen = [False] * self.strands
        count = 0
        for start in range(self.strands):
            if seen[start]:
                continue
            count += 1
            current = start
            while not seen[current]:
                seen[current] = True
                current = position[current]
        return count


# =====================================================
# ENHANCEMENT
# =====================================================

@dataclass
class Enhancement:
    """Diagonal mu with mu_empty = 1 and the writhe scalars lambda_plus, lambda_minus."""

    n: int
    mu: Dict[int, Scalar]
    lambda_plus: Scalar
    lambda_minus: Scalar

    def weight(self, mask: int) -> Scalar:
        return self.mu[mask]

    def operator(self) -> LinearOperator:
        return LinearOperator.diagonal(self.n, 1, lambda key: self.mu[key[0]], name="mu")

    def to_report(self) -> EnhancementReport:
        order = flat_order(self.n)
        return EnhancementReport(
            dim=self.n,
            mu=[as_rational(self.mu[mask]).to_json() for mask in order],
            lambda_plus=as_rational(self.lambda_plus).to_json(),
            lambda_minus=as_rational(self.lambda_minus).to_json(),
            mu_text=[self.mu[mask].to_text() for mask in order],
            lambda_plus_text=self.lambda_plus.to_text(),
            lambda_minus_text=self.lambda_minus.to_text(),
        )


@dataclass
class KnotInvariant:
    word: BraidWord
    n: int
    raw: LaurentPoly
    scalar_identity: bool
    p_independent: bool
    normalized: Optional[LaurentPoly] = None
    trace: Dict[str, Scalar] = field(default_factory=dict)

    def to_report(self) -> InvariantReport:
        return InvariantReport(
            dim=self.n,
            strands=self.word.strands,
            braid=list(self.word.letters),
            writhe=self.word.writhe,
            raw=self.raw.to_json(),
            raw_text=self.raw.to_text(),
            normalized=self.normalized.to_json() if self.normalized is not None else None,
            normalized_text=self.normalized.to_text(descending=True) if self.normalized is not None else None,
            scalar_identity=self.scalar_identity,
            p_independent=self.p_independent,
        )


# =====================================================
# KNOT ENGINE
# =====================================================

class KnotEngine:
    """
    Markov-trace evaluation of braid closures with the R-matrix rho.

    Features:
    - enhancement (mu, lambda_plus, lambda_minus) by exact linear solve
    - braid operators with a basis-tuple budget
    - open-strand trace with scalar-identity assertion
    - symmetric Alexander normalization at N=1
    """

    ENHANCEMENT_MAX_DIM = 3

    def __init__(self, algebra: ExteriorHopfAlgebra, rmatrix: Optional[RMatrixEngine] = None):
        self.algebra = algebra
        self.n = algebra.n
        self.rmatrix = rmatrix or RMatrixEngine(algebra)
        self._enhancement: Optional[Enhancement] = None

    @classmethod
    def of_dimension(cls, n: int) -> "KnotEngine":
        return cls(ExteriorHopfAlgebra(n))

    # -----------------------------------------------------
    # Enhancement
    # -----------------------------------------------------

    def _trace_system(self, column_order: Optional[Sequence[int]] = None) -> Tuple[List[int], Tuple[RationalFn, ...]]:
        """
        Unknowns mu_E (E != empty, flat order) then lambda_plus.
        Row per (x, y): sum_F mu_F rho[(x,F) -> (y,F)] - [x == y] lambda = 0, mu_empty = 1 moved right.
        """
        order = list(flat_order(self.n))
        unknowns = order[1:]
        index = {mask: i for i, mask in enumerate(unknowns)}
        width = len(unknowns) + 1
        rho = self.rmatrix.rho()

        system: List[List[Scalar]] = []
        rhs: List[Scalar] = []
        for x in order:
            for y in order:
                row: List[Scalar] = [LaurentPoly() for _ in range(width)]
                constant = LaurentPoly()
                for f in order:
                    coeff = rho.column((x, f)).get((y, f))
                    if coeff is None:
                        continue
                    if f == EMPTY:
                        constant = constant - coeff
                    else:
                        row[index[f]] = row[index[f]] + coeff
                if x == y:
                    row[-1] = -ONE
                if any(row) or constant:
                    system.append(row)
                    rhs.append(constant)

        solution = solve_linear(system, rhs, column_order)
        if not solution.consistent:
            raise EnhancementError(f"no enhancement exists at N={self.n}")
        if solution.nullspace:
            raise EnhancementError(
                f"non-unique enhancement at N={self.n} (dim {solution.dimension})",
                dimension=solution.dimension,
            )
        return unknowns, solution.particular

    def solve_enhancement(self) -> Enhancement:
        if self._enhancement is not None:
            return self._enhancement
        if self.n > self.ENHANCEMENT_MAX_DIM:
            raise DimensionError(f"enhancement supports N <= {self.ENHANCEMENT_MAX_DIM}, got {self.n}")

        unknowns, values = self._trace_system()
        width = len(values)
        _, reversed_values = self._trace_system(list(reversed(range(width))))
        if tuple(values) != tuple(reversed_values):
            raise EnhancementError(f"solver paths disagree at N={self.n}")

        mu: Dict[int, Scalar] = {EMPTY: ONE}
        for mask, value in zip(unknowns, values):
            mu[mask] = simplify(value)
        lambda_plus = simplify(values[-1])

        lambda_minus = self._scalar_trace(self.rmatrix.rho_inverse(), mu, "lambda_minus")
        enhancement = Enhancement(self.n, mu, lambda_plus, lambda_minus)
        self._check_commutation(enhancement)

        logger.info(
            f"Enhancement at N={self.n}: lambda+={lambda_plus}, lambda-={lambda_minus}"
        )
        self._enhancement = enhancement
        return enhancement

    def _scalar_trace(self, op: LinearOperator, mu: Dict[int, Scalar], label: str) -> Scalar:
        traced = op.partial_trace(1, lambda mask: mu[mask])
        scalar = None
        for key in basis_keys(self.n, 1):
            column = traced.column(key)
            value = column.get(key, LaurentPoly())
            if any(out != key for out in column) or (scalar is not None and value != scalar):
                raise EnhancementError(f"{label}: partial trace is not scalar at {subset_json(key[0])}")
            scalar = value if scalar is None else scalar
        return simplify(scalar)

    def _check_commutation(self, enhancement: Enhancement) -> None:
        mu2 = enhancement.operator().tensor(enhancement.operator())
        rho = self.rmatrix.rho()
        difference = (mu2 @ rho).first_difference(rho @ mu2)
        if difference is not None:
            key = difference[0]
            raise EnhancementError(f"mu (x) mu does not commute with rho at {key}")

    # -----------------------------------------------------
    # Braid operators
    # -----------------------------------------------------

    def check_budget(self, word: BraidWord) -> None:
        budget = get_settings().budget
        span = (1 << self.n) ** word.strands
        if span > budget:
            raise ResourceBudgetError(
                f"braid operator spans {span} basis tuples, budget is {budget}"
            )

    def braid_operator(self, word: BraidWord) -> LinearOperator:
        self.check_budget(word)
        op = LinearOperator.identity(self.n, word.strands)
        if not word.letters:
            return op

        rho = self.rmatrix.rho()
        rho_inverse = self.rmatrix.rho_inverse()
        for letter in word.letters:
            i = abs(letter)
            crossing = (rho if letter > 0 else rho_inverse).pad(i - 1, word.strands - i - 1)
            op = crossing @ op
        op.name = f"braid{list(word.letters)}"
        return op

    # -----------------------------------------------------
    # Invariant
    # -----------------------------------------------------

    def open_strand_trace(self, word: BraidWord) -> LinearOperator:
        enhancement = self.solve_enhancement()
        op = self.braid_operator(word)
        while op.arity_in > 1:
            op = op.partial_trace(op.arity_in - 1, enhancement.weight)
        return op

    def knot_invariant(self, word: BraidWord) -> KnotInvariant:
        if word.components() != 1:
            raise InvariantError(f"closure of {list(word.letters)} has {word.components()} components")

        enhancement = self.solve_enhancement()
        traced = self.open_strand_trace(word)

        scalar: Optional[Scalar] = None
        trace: Dict[str, Scalar] = {}
        for key in basis_keys(self.n, 1):
            column: Column = traced.column(key)
            value = column.get(key, LaurentPoly())
            trace[str(subset_json(key[0]))] = value
            off_diagonal = {str(subset_json(out[0])): str(c) for out, c in column.items() if out != key}
            if off_diagonal or (scalar is not None and value != scalar):
                raise InvariantError(
                    f"open-strand endomorphism is not scalar at {subset_json(key[0])}",
                    deviation={"basis": subset_json(key[0]), "diagonal": str(value), "off_diagonal": off_diagonal},
                )
            scalar = value if scalar is None else scalar

        normalizer = (
            as_rational(enhancement.lambda_plus) ** (-word.positive)
            * as_rational(enhancement.lambda_minus) ** (-word.negative)
        )
        value = as_rational(scalar) * normalizer
        if not value.is_laurent():
            raise InvariantError(f"invariant {value} is not a Laurent polynomial")
        raw = as_laurent(value)

        p_independent = raw.t_only()
        if self.n == 1 and not p_independent:
            raise InvariantError(f"N=1 invariant depends on p: {raw}")

        normalized = normalize_alexander(raw) if self.n == 1 else None
        logger.debug(f"Invariant of {list(word.letters)} at N={self.n}: {raw}")

        return KnotInvariant(
            word=word,
            n=self.n,
            raw=raw,
            scalar_identity=True,
            p_independent=p_independent,
            normalized=normalized,
            trace=trace,
        )


# =====================================================
# NORMALIZATION
# =====================================================

def normalize_alexander(raw: LaurentPoly) -> LaurentPoly:
    """Multiply by the unique +-t^k giving Delta(1/t) = Delta(t) and Delta(1) = 1."""
    if raw.is_zero():
        raise NormalizationError("cannot normalize the zero polynomial")
    if not raw.t_only():
        raise NormalizationError(f"{raw} depends on p")

    exponents = [b for (_, b), _ in raw.items()]
    low, high = min(exponents), max(exponents)
    if (low + high) % 2:
        raise NormalizationError(f"{raw} has no symmetric center")

    centered = raw.shift(t=-(low + high) // 2)
    for (_, b), coeff in centered.items():
        if centered.coefficient(t=-b) != coeff:
            raise NormalizationError(f"{raw} is not symmetric under t -> 1/t")

    value_at_one = sum(coeff for _, coeff in centered.items())
    if value_at_one not in (1, -1):
        raise NormalizationError(f"{raw} evaluates to {value_at_one} at t=1")
    return centered * value_at_one
