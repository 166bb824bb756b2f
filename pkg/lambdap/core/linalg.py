from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

from loguru import logger
from sympy.polys.matrices import DomainMatrix

from lambdap.core.errors import DimensionError, SingularBlockError
from lambdap.core.ring import FIELD, LaurentPoly, RationalFn, from_field, to_field

Entry = Union[int, LaurentPoly, RationalFn]
Vector = Tuple[RationalFn, ...]


@dataclass(frozen=True)
class LinearSolution:
    """
    Solution set of A x = b over the fraction field.

    When consistent, every solution is `particular + sum c_i nullspace[i]`.
    """

    consistent: bool
    particular: Optional[Vector] = None
    nullspace: Tuple[Vector, ...] = field(default_factory=tuple)
    pivots: Tuple[int, ...] = field(default_factory=tuple)

    @property
    def dimension(self) -> int:
        return len(self.nullspace)

    @property
    def unique(self) -> bool:
        return self.consistent and not self.nullspace


def _reduce(
    rows: Sequence[Sequence[Entry]],
    ncols: int,
) -> Tuple[DomainMatrix, Tuple[int, ...]]:
    """Reduced row echelon form over Frac(Z[p, t]); pivots are column indices."""
    matrix = DomainMatrix([[to_field(entry) for entry in row] for row in rows], (len(rows), ncols), FIELD)
    return matrix.to_sparse().rref()


def _entry(matrix: DomainMatrix, row: int, col: int) -> RationalFn:
    return from_field(matrix[row, col].element)


def solve_linear(
    system: Sequence[Sequence[Entry]],
    rhs: Sequence[Entry],
    column_order: Optional[Sequence[int]] = None,
) -> LinearSolution:
    """
    Exact Gauss-Jordan elimination over Q(p, t).

    `column_order` changes which unknown is eliminated first; any order gives
    the same solution set, which is how independent solver paths are compared.
    """

    nrows = len(system)
    if len(rhs) != nrows:
        raise DimensionError(f"system has {nrows} rows but rhs has {len(rhs)}")

    ncols = len(system[0]) if nrows else 0
    if any(len(row) != ncols for row in system):
        raise DimensionError("ragged coefficient matrix")

    order = list(column_order) if column_order is not None else list(range(ncols))
    if sorted(order) != list(range(ncols)):
        raise DimensionError("column_order must be a permutation of the columns")

    if nrows == 0:
        return LinearSolution(consistent=True, particular=())

    # unknowns permuted into elimination order, rhs last
    rows = [[row[col] for col in order] + [value] for row, value in zip(system, rhs)]
    reduced, pivots = _reduce(rows, ncols + 1)

    if ncols in pivots:
        logger.debug(f"Inconsistent system: row {pivots.index(ncols)} reduces to 0 = 1")
        return LinearSolution(consistent=False)

    zero = RationalFn(0)
    one = RationalFn(1)

    particular = [zero] * ncols
    for row, position in enumerate(pivots):
        particular[order[position]] = _entry(reduced, row, ncols)

    nullspace = []
    for free in range(ncols):
        if free in pivots:
            continue
        vector = [zero] * ncols
        vector[order[free]] = one
        for row, position in enumerate(pivots):
            vector[order[position]] = -_entry(reduced, row, free)
        nullspace.append(tuple(vector))

    return LinearSolution(
        consistent=True,
        particular=tuple(particular),
        nullspace=tuple(nullspace),
        pivots=tuple(order[position] for position in pivots),
    )


def invert_matrix(matrix: Sequence[Sequence[Entry]]) -> List[List[RationalFn]]:
    """Exact inverse of a square matrix, SingularBlockError if singular."""

    size = len(matrix)
    if any(len(row) != size for row in matrix):
        raise DimensionError("invert_matrix needs a square matrix")
    if size == 0:
        return []

    rows = [list(row) + [1 if i == j else 0 for j in range(size)] for i, row in enumerate(matrix)]
    reduced, pivots = _reduce(rows, 2 * size)

    rank = sum(1 for col in pivots if col < size)
    if rank < size:
        raise SingularBlockError(f"matrix of size {size} has rank {rank}")

    return [[_entry(reduced, i, size + j) for j in range(size)] for i in range(size)]
