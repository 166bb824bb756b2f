from itertools import product
from typing import Dict, List, Tuple

from lambdap.api.schemas import (
    ChannelDump,
    ChannelReport,
    FlatAction,
    FlatTerm,
    OperatorDump,
    RMatrixDump,
    StructureDump,
)
from lambdap.core.combin import flat_index_table, flat_order, subset_json
from lambdap.core.ring import LaurentPoly
from lambdap.core.tensor import Key, LinearOperator, TensorElement
from lambdap.engines.braiding import BraidingEngine
from lambdap.engines.hopf import ExteriorHopfAlgebra
from lambdap.engines.rmatrix import ChannelAction, RhoChannels, RMatrixEngine


# ===================================================
# Flat-index ordering
# ===================================================

def flat_keys(n: int, arity: int) -> List[Key]:
    """Domain tuples ordered by the flat index f_0..f_{2^N-1} in each slot."""
    return [tuple(key) for key in product(flat_order(n), repeat=arity)]


def flat_label(n: int, key: Key) -> str:
    index = flat_index_table(n)
    return "f_{" + ",".join(str(index[mask]) for mask in key) + "}"


def operator_dump(op: LinearOperator) -> OperatorDump:
    payload = op.to_json(flat_keys(op.n, op.arity_in))
    return OperatorDump.model_validate({"name": op.name, "dim": op.n, **payload})


def operator_text(op: LinearOperator) -> str:
    """One line per domain tuple: `f_{i,j} -> c*f_{k,l} + ...`, flat order throughout."""
    index = flat_index_table(op.n)
    lines = []
    for key in flat_keys(op.n, op.arity_in):
        column = op.column(key)
        ordered = sorted(column.items(), key=lambda item: [index[mask] for mask in item[0]])
        pieces = [
            TensorElement(op.arity_out, {out: coeff}).to_text(lambda k: flat_label(op.n, k))
            for out, coeff in ordered
        ]
        image = " + ".join(pieces).replace("+ -", "- ") if pieces else "0"
        lines.append(f"{flat_label(op.n, key)} -> {image}")
    return "\n".join(lines)


# ===================================================
# Dumps
# ===================================================

class ExportService:

    @staticmethod
    def structure(n: int) -> StructureDump:
        algebra = ExteriorHopfAlgebra(n)
        return StructureDump(
            dim=n,
            product=operator_dump(algebra.nabla()),
            coproduct=operator_dump(algebra.delta()),
            antipode=operator_dump(algebra.antipode_op()),
        )

    @staticmethod
    def structure_text(n: int) -> str:
        algebra = ExteriorHopfAlgebra(n)
        blocks = [
            ("product", algebra.nabla()),
            ("coproduct", algebra.delta()),
            ("antipode", algebra.antipode_op()),
        ]
        return "\n\n".join(f"# {name}\n{operator_text(op)}" for name, op in blocks)

    @staticmethod
    def braiding(n: int) -> OperatorDump:
        return operator_dump(BraidingEngine(ExteriorHopfAlgebra(n)).hat_tau())

    @staticmethod
    def braiding_channels(n: int) -> ChannelDump:
        engine = BraidingEngine(ExteriorHopfAlgebra(n))
        channels = {str(k): operator_dump(engine.channel(k)) for k in range(n + 1)}
        return ChannelDump(dim=n, channels=channels)

    @staticmethod
    def braiding_channels_text(n: int) -> str:
        engine = BraidingEngine(ExteriorHopfAlgebra(n))
        return "\n\n".join(f"# tau_{k}\n{operator_text(engine.channel(k))}" for k in range(n + 1))

    @staticmethod
    def braiding_text(n: int) -> str:
        return operator_text(BraidingEngine(ExteriorHopfAlgebra(n)).hat_tau())

    @staticmethod
    def rmatrix(n: int, channels: bool = False) -> RMatrixDump:
        engine = RMatrixEngine(ExteriorHopfAlgebra(n))
        report = channel_report(engine.rho_channels()) if channels else None
        return RMatrixDump(rho=operator_dump(engine.rho()), channels=report)

    @staticmethod
    def rmatrix_text(n: int, channels: bool = False) -> str:
        engine = RMatrixEngine(ExteriorHopfAlgebra(n))
        text = operator_text(engine.rho())
        if channels:
            text = f"{text}\n\n{channel_text(engine.rho_channels())}"
        return text


# ===================================================
# Channel report
# ===================================================

def _flat_actions(actions: List[ChannelAction]) -> List[FlatAction]:
    return [
        FlatAction(
            source=list(action.source),
            image=[FlatTerm(coeff=coeff.to_json(), target=list(target)) for target, coeff in sorted(action.image.items())],
        )
        for action in actions
    ]


def channel_report(channels: RhoChannels) -> ChannelReport:
    raw: Dict[str, List[FlatAction]] = {
        f"{g},{h}": _flat_actions(actions) for (g, h), actions in sorted(channels.raw.items())
    }
    return ChannelReport(
        dim=channels.n,
        flat_order=[subset_json(mask) for mask in channels.flat_order],
        exponent_matrix=channels.exponent_matrix,
        reflection_matrix=[[entry.to_json() for entry in row] for row in channels.reflection_matrix],
        annihilation=_flat_actions(channels.annihilation),
        decay=_flat_actions(channels.decay),
        fusion=_flat_actions(channels.fusion),
        exchange=_flat_actions(channels.exchange),
        raw=raw,
    )


def _action_text(action: ChannelAction) -> str:
    pieces = []
    for target, coeff in sorted(action.image.items()):
        text = coeff.to_text()
        label = f"f_{{{target[0]},{target[1]}}}"
        pieces.append(label if text == "1" else f"({text})*{label}")
    return f"f_{{{action.source[0]},{action.source[1]}}} -> " + " + ".join(pieces)


def _matrix_text(rows: List[List]) -> str:
    return "\n".join("  ".join(str(entry) for entry in row) for row in rows)


def channel_text(channels: RhoChannels) -> str:
    sections: List[Tuple[str, str]] = [
        ("exponents", _matrix_text(channels.exponent_matrix)),
        ("reflection", _matrix_text([[LaurentPoly.to_text(entry) for entry in row] for row in channels.reflection_matrix])),
    ]
    for name in ("annihilation", "decay", "fusion", "exchange"):
        actions = getattr(channels, name)
        if actions:
            sections.append((name, "\n".join(_action_text(action) for action in actions)))
    return "\n\n".join(f"# {name}\n{body}" for name, body in sections)
