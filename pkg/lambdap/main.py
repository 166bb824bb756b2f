import argparse
import json
import sys
from typing import List, Optional

from loguru import logger
from pydantic import BaseModel, ValidationError

from lambdap.api.schemas import (
    ChannelDump,
    ChannelReport,
    EnhancementReport,
    InvariantReport,
    LemmaRanges,
    OperatorDump,
    RMatrixDump,
    StructureDump,
    VerificationReport,
)
from lambdap.core.config import MAX_DIMENSION, MAX_DUMP_DIMENSION, MAX_VERIFY_DIMENSION
from lambdap.core.errors import DimensionError, LambdaPError
from lambdap.engines.knots import BraidWord, KnotEngine
from lambdap.logging.audit_logger import configure_logging, log_report
from lambdap.services.export_service import ExportService
from lambdap.services.verification_service import SUITES, VerificationService


# ===================================================
# Configuration
# ===================================================

SERVICE_NAME = "lambdap"
LAMBDAP_VERSION = "0.1.0"

MAX_HECKE_DIMENSION = 5

SCHEMAS = {
    "operator": OperatorDump,
    "structure": StructureDump,
    "channels": ChannelReport,
    "braiding-channels": ChannelDump,
    "rmatrix": RMatrixDump,
    "report": VerificationReport,
    "enhancement": EnhancementReport,
    "invariant": InvariantReport,
}


def _emit_json(payload) -> None:
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json", by_alias=True)
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _emit_text(text: str) -> None:
    sys.stdout.write(text + "\n")


def _check_dim(n: int, limit: int, command: str) -> None:
    if not 1 <= n <= min(limit, MAX_DIMENSION):
        raise DimensionError(f"{command}: --dim must be in 1..{limit}, got {n}")


# ===================================================
# Parser
# ===================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=SERVICE_NAME,
        description="Exact braided Hopf algebra, R-matrix and knot invariant toolkit.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {LAMBDAP_VERSION}")
    parser.add_argument("--log-level", default=None, help="loguru level for the stderr sink")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("dump-structure", "product, coproduct and antipode"),
        ("dump-braiding", "the braiding on the tensor square"),
        ("dump-rmatrix", "the R-matrix rho"),
    ):
        dump = sub.add_parser(name, help=help_text)
        dump.add_argument("--dim", type=int, required=True)
        dump.add_argument("--format", choices=("json", "text"), default="json")
        dump.add_argument("--json", action="store_const", const="json", dest="format")
        if name != "dump-structure":
            dump.add_argument("--channels", action="store_true")

    verify = sub.add_parser("verify", help="run verification suites")
    verify.add_argument("--dim", type=int, default=2)
    verify.add_argument("--suite", choices=SUITES + ("all",), default="all")
    verify.add_argument("--ranges", default=None, help="JSON object overriding lemma-suite ranges")
    verify.add_argument("--json", action="store_true")
    verify.add_argument("--timings", action="store_true", help="include wall times in the output")

    invariant = sub.add_parser("invariant", help="knot invariant of a braid closure")
    invariant.add_argument("--dim", type=int, required=True)
    invariant.add_argument("--braid", default="", help='signed generators, e.g. "1,-2,1"')
    invariant.add_argument("--strands", type=int, required=True)
    mode = invariant.add_mutually_exclusive_group()
    mode.add_argument("--raw", action="store_true")
    mode.add_argument("--normalized", action="store_true")
    invariant.add_argument("--enhancement", action="store_true", help="print the enhancement instead")
    invariant.add_argument("--json", action="store_true")

    schema = sub.add_parser("schema", help="print a JSON Schema")
    schema.add_argument("name", choices=sorted(SCHEMAS))

    return parser


# ===================================================
# Commands
# ===================================================

def _dump(args) -> int:
    _check_dim(args.dim, MAX_DUMP_DIMENSION, args.command)
    text = args.format == "text"
    channels = getattr(args, "channels", False)

    if args.command == "dump-structure":
        output = ExportService.structure_text(args.dim) if text else ExportService.structure(args.dim)
    elif args.command == "dump-braiding":
        if channels:
            output = (
                ExportService.braiding_channels_text(args.dim)
                if text
                else ExportService.braiding_channels(args.dim)
            )
        else:
            output = ExportService.braiding_text(args.dim) if text else ExportService.braiding(args.dim)
    else:
        output = (
            ExportService.rmatrix_text(args.dim, channels)
            if text
            else ExportService.rmatrix(args.dim, channels)
        )

    if text:
        _emit_text(output)
    else:
        _emit_json(output)
    return 0


def _verify(args) -> int:
    limit = MAX_HECKE_DIMENSION if args.suite == "hecke" else MAX_VERIFY_DIMENSION
    _check_dim(args.dim, limit, "verify")

    ranges = LemmaRanges.model_validate_json(args.ranges) if args.ranges else None
    report = VerificationService.run(args.dim, args.suite, ranges)
    log_report(report)

    shown = report if args.timings else report.without_timings()
    if args.json:
        _emit_json(shown)
    else:
        for child in shown.checks or [shown]:
            _emit_text(f"{child.check}: {child.status.value}")
        _emit_text(f"overall: {shown.status.value}")

    return 0 if report.passed else 1


def _invariant(args) -> int:
    _check_dim(args.dim, MAX_VERIFY_DIMENSION, "invariant")
    engine = KnotEngine.of_dimension(args.dim)

    if args.enhancement:
        report = engine.solve_enhancement().to_report()
        if args.json:
            _emit_json(report)
        else:
            _emit_text(f"mu: {', '.join(report.mu_text)}")
            _emit_text(f"lambda+: {report.lambda_plus_text}")
            _emit_text(f"lambda-: {report.lambda_minus_text}")
        return 0

    if args.normalized and args.dim != 1:
        raise DimensionError("--normalized is only defined at --dim 1")

    word = BraidWord.parse(args.braid, args.strands)
    result = engine.knot_invariant(word)

    if args.json:
        _emit_json(result.to_report())
    elif args.raw or result.normalized is None:
        _emit_text(result.raw.to_text())
    else:
        _emit_text(result.normalized.to_text(descending=True))
    return 0


def _schema(args) -> int:
    _emit_json(SCHEMAS[args.name].model_json_schema(by_alias=True))
    return 0


COMMANDS = {
    "dump-structure": _dump,
    "dump-braiding": _dump,
    "dump-rmatrix": _dump,
    "verify": _verify,
    "invariant": _invariant,
    "schema": _schema,
}


# ===================================================
# Entry points
# ===================================================

def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        configure_logging(args.log_level)
        return COMMANDS[args.command](args)
    except ValidationError as exc:
        sys.stderr.write(f"{SERVICE_NAME}: invalid input: {exc}\n")
        return 2
    except LambdaPError as exc:
        logger.debug(f"{type(exc).__name__}: {exc}")
        sys.stderr.write(f"{SERVICE_NAME}: {exc}\n")
        return exc.exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
