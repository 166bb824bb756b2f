import os
from dataclasses import dataclass

from dotenv import load_dotenv

from lambdap.core.errors import ConfigurationError

load_dotenv()


# =====================================================
# DEFAULTS
# =====================================================

DEFAULT_WORKERS = 1
DEFAULT_BUDGET = 2 ** 20
DEFAULT_LOG_LEVEL = "WARNING"

MAX_DIMENSION = 16
MAX_DUMP_DIMENSION = 4
MAX_VERIFY_DIMENSION = 3


def _read_int(name: str, default: int, minimum: int) -> int:
    raw = os.getenv(name)

    if raw is None or raw.strip() == "":
        return default

    try:
        value = int(raw)
    except ValueError as exc:
        raise ConfigurationError(f"{name} must be an integer, got {raw!r}") from exc

    if value < minimum:
        raise ConfigurationError(f"{name} must be >= {minimum}, got {value}")

    return value


# =====================================================
# SETTINGS
# =====================================================

@dataclass(frozen=True)
class Settings:
    """
    Runtime knobs read from the environment.

    - LAMBDAP_WORKERS: processes used for independent checks
    - LAMBDAP_BUDGET: largest basis-tuple count a braid operator may span
    - LAMBDAP_LOG_LEVEL: loguru sink level
    """

    workers: int = DEFAULT_WORKERS
    budget: int = DEFAULT_BUDGET
    log_level: str = DEFAULT_LOG_LEVEL

    @classmethod
    def from_env(cls) -> "Settings":
        return cls(
            workers=_read_int("LAMBDAP_WORKERS", DEFAULT_WORKERS, 1),
            budget=_read_int("LAMBDAP_BUDGET", DEFAULT_BUDGET, 1),
            log_level=os.getenv("LAMBDAP_LOG_LEVEL", DEFAULT_LOG_LEVEL).upper(),
        )


def get_settings() -> Settings:
    return Settings.from_env()
