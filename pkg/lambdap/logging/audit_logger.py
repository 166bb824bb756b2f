import sys
from typing import Optional

from loguru import logger

from lambdap.api.schemas import VerificationReport
from lambdap.core.config import get_settings
from lambdap.core.errors import ConfigurationError


LOG_FORMAT = "{time:YYYY-MM-DD HH:mm:ss} | {level} | {name} | {message}"


# ===================================================
# Sink setup
# ===================================================

def configure_logging(level: Optional[str] = None) -> None:
    """Single stderr sink; stdout stays reserved for command output."""
    level = (level or get_settings().log_level).upper()
    logger.remove()
    try:
        logger.add(sys.stderr, level=level, format=LOG_FORMAT)
    except ValueError as exc:
        logger.add(sys.stderr, level="WARNING", format=LOG_FORMAT)
        raise ConfigurationError(f"unknown log level {level!r}") from exc


# ===================================================
# Audit trail
# ===================================================

def log_report(report: VerificationReport, depth: int = 0) -> None:
    timing = f"{report.wall_time:.3f}s" if report.wall_time is not None else "-"
    line = f"{'  ' * depth}[{report.check}] {report.status.value} {report.parameters} in {timing}"

    if report.passed:
        logger.info(line)
    elif report.counterexample is not None:
        logger.error(f"{line} at {report.counterexample.basis}")
    else:
        logger.error(line)

    for child in report.checks:
        log_report(child, depth + 1)
