"""
Sparse tensors and column-lazy linear operators on tensor powers of Lambda_p(V).

Basis keys are tuples of SubsetMask. Coefficients are LaurentPoly or
RationalFn; both support +, *, equality and truthiness.
"""

from itertools import product
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from loguru import logger

from lambdap.core.combin import BasisOrder, size, subset_json
from lambdap.core.errors import DimensionError
from lambdap.core.linalg import invert_matrix
from lambdap.core.ring import ONE, ZERO, Scalar, scalar_to_json, simplify

Key = Tuple[int, ...]
Column = Dict[Key, Scalar]


def accumulate(target: Column, key: Key, coeff: Scalar) -> None:
    """target[key] += coeff, dropping zeros."""
    if not coeff:
        return
    current = target.get(key)
    value = coeff if current is None else current + coeff
    if value:
        target[key] = value
    else:
        target.pop(key, None)


def key_degree(key: Key) -> int:
    return sum(size(mask) for mask in key)


def key_json(key: Key) -> List[List[int]]:
    return [subset_json(mask) for mask in key]


# =====================================================
# TENSOR ELEMENT
# =====================================================

class TensorElement:
    """Sparse linear combination of pure tensors f_{E1,...,Ek}."""

    __slots__ = ("arity", "_terms")

    def __init__(self, arity: int, terms: Optional[Mapping[Key, Scalar]] = None):
        if arity < 1:
            raise DimensionError(f"tensor arity must be >= 1, got {arity}")
        self.arity = arity
        self._terms: Column = {}
        for key, coeff in (terms or {}).items():
            if len(key) != arity:
                raise DimensionError(f"key {key} does not have arity {arity}")
            accumulate(self._terms, tuple(key), coeff)

    @classmethod
    def basis(cls, *masks: int, coeff: Scalar = ONE) -> "TensorElement":
        return cls(len(masks), {tuple(masks): coeff})

    @classmethod
    def zero(cls, arity: int) -> "TensorElement":
        return cls(arity)

    # -----------------------------------------------------
    # Access
    # -----------------------------------------------------

    def items(self) -> List[Tuple[Key, Scalar]]:
        return sorted(self._terms.items())

    def keys(self) -> List[Key]:
        return sorted(self._terms)

    def coefficient(self, *masks: int) -> Scalar:
        return self._terms.get(tuple(masks), ZERO)

    def as_dict(self) -> Column:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    # -----------------------------------------------------
    # Linear structure
    # -----------------------------------------------------

    def _check(self, other: "TensorElement") -> None:
        if self.arity != other.arity:
            raise DimensionError(f"arity mismatch: {self.arity} vs {other.arity}")

    def __add__(self, other: "TensorElement") -> "TensorElement":
        self._check(other)
        terms = dict(self._terms)
        for key, coeff in other._terms.items():
            accumulate(terms, key, coeff)
        return TensorElement(self.arity, terms)

    def __neg__(self) -> "TensorElement":
        return TensorElement(self.arity, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-other)

    def scale(self, coeff: Scalar) -> "TensorElement":
        return TensorElement(self.arity, {k: c * coeff for k, c in self._terms.items()})

    def tensor(self, other: "TensorElement") -> "TensorElement":
        terms: Column = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                accumulate(terms, k1 + k2, c1 * c2)
        return TensorElement(self.arity + other.arity, terms)

    def map_coefficients(self, fn: Callable[[Scalar], Scalar]) -> "TensorElement":
        return TensorElement(self.arity, {k: fn(c) for k, c in self._terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        if self.arity != other.arity or set(self._terms) != set(other._terms):
            return False
        return all(self._terms[k] == other._terms[k] for k in self._terms)

    __hash__ = None

    # -----------------------------------------------------
    # Serialization
    # -----------------------------------------------------

    def to_json(self) -> List[dict]:
        return [
            {"coeff": scalar_to_json(coeff), "basis": key_json(key)}
            for key, coeff in self.items()
        ]

    def to_text(self, label: Callable[[Key], str] = None) -> str:
        if not self._terms:
            return "0"
        label = label or (lambda key: "f_{" + ",".join(str(m) for m in key) + "}")
        pieces = []
        for key, coeff in self.items():
            text = coeff.to_text()
            if text == "1":
                body = label(key)
            elif text == "-1":
                body = "-" + label(key)
            elif " " in text:
                body = f"({text})*{label(key)}"
            else:
                body = f"{text}*{label(key)}"
            pieces.append(body)
        return " + ".join(pieces).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"TensorElement({self.arity}, {self.to_text()})"


# =====================================================
# LINEAR OPERATOR
# =====================================================

ColumnFn = Callable[[Key], Column]


class LinearOperator:
    """
    Column-sparse linear map Lambda^{(x)k} -> Lambda^{(x)l}.

    Columns are produced on demand by `column_fn` and memoized, so composites
    of large tensor powers only touch the basis tuples actually reached.
    Returned columns must be treated as read-only.
    """

    def __init__(self, n: int, arity_in: int, arity_out: int, column_fn: ColumnFn, name: str = ""):
        self.n = n
        self.arity_in = arity_in
        self.arity_out = arity_out
        self.name = name or "op"
        self._column_fn = column_fn
        self._cache: Dict[Key, Column] = {}

    # -----------------------------------------------------
    # Constructors
    # -----------------------------------------------------

    @classmethod
    def identity(cls, n: int, arity: int = 1) -> "LinearOperator":
        return cls(n, arity, arity, lambda key: {key: ONE}, name="id")

    @classmethod
    def diagonal(cls, n: int, arity: int, weight: Callable[[Key], Scalar], name: str = "diag") -> "LinearOperator":
        def column(key: Key) -> Column:
            value = weight(key)
            return {key: value} if value else {}
        return cls(n, arity, arity, column, name=name)

    @classmethod
    def from_columns(cls, n: int, arity_in: int, arity_out: int, columns: Mapping[Key, Column], name: str = "") -> "LinearOperator":
        def column(key: Key) -> Column:
            return columns.get(key, {})
        op = cls(n, arity_in, arity_out, column, name=name)
        op._cache.update({k: dict(v) for k, v in columns.items()})
        return op

    # -----------------------------------------------------
    # Evaluation
    # -----------------------------------------------------

    def column(self, key: Key) -> Column:
        cached = self._cache.get(key)
        if cached is None:
            if len(key) != self.arity_in:
                raise DimensionError(f"{self.name}: key {key} does not have arity {self.arity_in}")
            cached = self._column_fn(key)
            self._cache[key] = cached
        return cached

    def on_basis(self, *masks: int) -> TensorElement:
        return TensorElement(self.arity_out, self.column(tuple(masks)))

    def apply(self, x: TensorElement) -> TensorElement:
        if x.arity != self.arity_in:
            raise DimensionError(f"{self.name}: expected arity {self.arity_in}, got {x.arity}")
        terms: Column = {}
        for key, coeff in x.items():
            for out, value in self.column(key).items():
                accumulate(terms, out, value * coeff)
        return TensorElement(self.arity_out, terms)

    __call__ = apply

    # -----------------------------------------------------
    # Algebra of operators
    # -----------------------------------------------------

    def _check_same_shape(self, other: "LinearOperator") -> None:
        if (self.arity_in, self.arity_out) != (other.arity_in, other.arity_out):
            raise DimensionError(
                f"shape mismatch: {self.name} {self.arity_in}->{self.arity_out} vs "
                f"{other.name} {other.arity_in}->{other.arity_out}"
            )

    def __matmul__(self, other: "LinearOperator") -> "LinearOperator":
        """self @ other applies `other` first."""
        if other.arity_out != self.arity_in:
            raise DimensionError(
                f"cannot compose {self.name} (in {self.arity_in}) after {other.name} (out {other.arity_out})"
            )

        def column(key: Key) -> Column:
            terms: Column = {}
            for middle, c1 in other.column(key).items():
                for out, c2 in self.column(middle).items():
                    accumulate(terms, out, c2 * c1)
            return terms

        return LinearOperator(self.n, other.arity_in, self.arity_out, column, name=f"{self.name}*{other.name}")

    def tensor(self, other: "LinearOperator") -> "LinearOperator":
        split = self.arity_in

        def column(key: Key) -> Column:
            left = self.column(key[:split])
            if not left:
                return {}
            right = other.column(key[split:])
            terms: Column = {}
            for k1, c1 in left.items():
                for k2, c2 in right.items():
                    accumulate(terms, k1 + k2, c1 * c2)
            return terms

        return LinearOperator(
            self.n,
            self.arity_in + other.arity_in,
            self.arity_out + other.arity_out,
            column,
            name=f"({self.name}(x){other.name})",
        )

    def pad(self, left: int = 0, right: int = 0) -> "LinearOperator":
        """id^{(x)left} (x) self (x) id^{(x)right}."""
        if left == 0 and right == 0:
            return self
        start, stop = left, left + self.arity_in

        def column(key: Key) -> Column:
            head, tail = key[:start], key[stop:]
            return {head + out + tail: c for out, c in self.column(key[start:stop]).items()}

        return LinearOperator(
            self.n,
            left + self.arity_in + right,
            left + self.arity_out + right,
            column,
            name=f"pad({self.name},{left},{right})",
        )

    def __add__(self, other: "LinearOperator") -> "LinearOperator":
        self._check_same_shape(other)

        def column(key: Key) -> Column:
            terms = dict(self.column(key))
            for out, c in other.column(key).items():
                accumulate(terms, out, c)
            return terms

        return LinearOperator(self.n, self.arity_in, self.arity_out, column, name=f"({self.name}+{other.name})")

    def scale(self, coeff: Scalar) -> "LinearOperator":
        def column(key: Key) -> Column:
            terms: Column = {}
            for out, c in self.column(key).items():
                accumulate(terms, out, c * coeff)
            return terms

        return LinearOperator(self.n, self.arity_in, self.arity_out, column, name=f"{coeff}*{self.name}")

    def __neg__(self) -> "LinearOperator":
        return self.scale(-ONE)

    def __sub__(self, other: "LinearOperator") -> "LinearOperator":
        return self + (-other)

    def map_coefficients(self, fn: Callable[[Scalar], Scalar], name: str = "") -> "LinearOperator":
        def column(key: Key) -> Column:
            terms: Column = {}
            for out, c in self.column(key).items():
                accumulate(terms, out, fn(c))
            return terms

        return LinearOperator(self.n, self.arity_in, self.arity_out, column, name=name or self.name)

    # -----------------------------------------------------
    # Traces
    # -----------------------------------------------------

    def partial_trace(self, slot: int, weight: Optional[Callable[[int], Scalar]] = None) -> "LinearOperator":
        """
        Trace out tensor slot `slot` (0-based). With `weight`, computes
        ptr((id (x) mu) A) for the diagonal mu given by weight(mask).
        """
        if self.arity_in != self.arity_out:
            raise DimensionError("partial trace needs equal domain and codomain arity")
        if not 0 <= slot < self.arity_in or self.arity_in < 2:
            raise DimensionError(f"slot {slot} invalid for arity {self.arity_in}")

        masks = BasisOrder(self.n).subsets()

        def column(key: Key) -> Column:
            terms: Column = {}
            for mask in masks:
                factor = weight(mask) if weight else ONE
                if not factor:
                    continue
                full = key[:slot] + (mask,) + key[slot:]
                for out, c in self.column(full).items():
                    if out[slot] == mask:
                        accumulate(terms, out[:slot] + out[slot + 1:], c * factor)
            return terms

        return LinearOperator(self.n, self.arity_in - 1, self.arity_out - 1, column, name=f"ptr{slot}({self.name})")

    # -----------------------------------------------------
    # Domains and comparison
    # -----------------------------------------------------

    def domain(self, max_degree: Optional[int] = None) -> List[Key]:
        return basis_keys(self.n, self.arity_in, max_degree)

    def first_difference(
        self, other: "LinearOperator", keys: Optional[Iterable[Key]] = None
    ) -> Optional[Tuple[Key, TensorElement, TensorElement]]:
        self._check_same_shape(other)
        for key in (self.domain() if keys is None else keys):
            lhs, rhs = self.column(key), other.column(key)
            if set(lhs) != set(rhs) or any(lhs[k] != rhs[k] for k in lhs):
                return key, TensorElement(self.arity_out, lhs), TensorElement(other.arity_out, rhs)
        return None

    def equals(self, other: "LinearOperator", keys: Optional[Iterable[Key]] = None) -> bool:
        return self.first_difference(other, keys) is None

    def is_zero_on(self, keys: Optional[Iterable[Key]] = None) -> Optional[Key]:
        """First key with a nonzero column, or None."""
        for key in (self.domain() if keys is None else keys):
            if self.column(key):
                return key
        return None

    # -----------------------------------------------------
    # Inversion
    # -----------------------------------------------------

    def inverse(self, block_of: Callable[[Key], object], name: str = "") -> "LinearOperator":
        """
        Exact inverse assembled per invariant block of the domain.
        `block_of` must be constant on every column's support.
        """
        blocks: Dict[object, List[Key]] = {}
        for key in self.domain():
            blocks.setdefault(block_of(key), []).append(key)

        columns: Dict[Key, Column] = {}
        for block, keys in sorted(blocks.items(), key=lambda item: repr(item[0])):
            index = {key: i for i, key in enumerate(keys)}
            matrix = [[0] * len(keys) for _ in keys]
            for j, key in enumerate(keys):
                for out, c in self.column(key).items():
                    if out not in index:
                        raise DimensionError(f"{self.name}: column {key} leaves block {block}")
                    matrix[index[out]][j] = c
            inverse = invert_matrix(matrix)
            for j, key in enumerate(keys):
                column: Column = {}
                for i, out in enumerate(keys):
                    accumulate(column, out, simplify(inverse[i][j]))
                columns[key] = column

        logger.debug(f"Inverted {self.name} over {len(blocks)} blocks")
        return LinearOperator.from_columns(self.n, self.arity_out, self.arity_in, columns, name=name or f"{self.name}^-1")

    # -----------------------------------------------------
    # Serialization
    # -----------------------------------------------------

    def to_json(self, keys: Optional[Sequence[Key]] = None) -> dict:
        keys = self.domain() if keys is None else keys
        entries = []
        for key in keys:
            image = TensorElement(self.arity_out, self.column(key))
            entries.append({"in": key_json(key), "out": image.to_json()})
        return {"domain_arity": self.arity_in, "entries": entries}

    def __repr__(self) -> str:
        return f"LinearOperator({self.name}, {self.arity_in}->{self.arity_out}, N={self.n})"


def basis_keys(n: int, arity: int, max_degree: Optional[int] = None) -> List[Key]:
    masks = BasisOrder(n).subsets()
    keys = [tuple(k) for k in product(masks, repeat=arity)]
    if max_degree is not None:
        keys = [k for k in keys if key_degree(k) <= max_degree]
    return keys
