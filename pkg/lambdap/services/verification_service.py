from typing import Dict, List, Optional, Tuple

from loguru import logger

from lambdap.api.schemas import LemmaRanges, VerificationReport
from lambdap.core.errors import DimensionError
from lambdap.core.workers import parallel_map
from lambdap.engines.axioms import AxiomEngine, combine


SUITES = ("hopf", "naturality", "fusion", "ybe", "hecke", "nichols", "lemmas", "constructions")

# largest N each suite accepts
SUITE_LIMITS: Dict[str, int] = {
    "hopf": AxiomEngine.HOPF_MAX_DIM,
    "naturality": AxiomEngine.NATURALITY_MAX_DIM,
    "fusion": AxiomEngine.NATURALITY_MAX_DIM,
    "ybe": 3,
    "hecke": AxiomEngine.HECKE_MAX_DIM,
    "nichols": AxiomEngine.NICHOLS_MAX_DIM,
    "lemmas": 16,
    "constructions": 3,
}

Task = Tuple[str, int, Optional[dict]]


def run_check(task: Task) -> dict:
    """Top-level so worker processes can unpickle it; returns the report as a dict."""
    suite, n, ranges = task
    engine = AxiomEngine.of_dimension(n)

    if suite == "hopf":
        report = engine.verify_hopf()
    elif suite == "naturality":
        report = engine.verify_naturality()
    elif suite == "fusion":
        report = engine.verify_fusion()
    elif suite == "ybe":
        report = engine.verify_ybe_suite()
    elif suite == "hecke":
        report = engine.verify_hecke()
    elif suite == "nichols":
        report = engine.verify_nichols_primitives()
    elif suite == "lemmas":
        report = engine.verify_lemma_suite(LemmaRanges(**(ranges or {})))
    elif suite == "constructions":
        report = engine.verify_constructions()
    else:
        raise ValueError(f"Unsupported suite: {suite}")

    return report.model_dump(mode="json")


class VerificationService:

    @staticmethod
    def plan(n: int, suite: str = "all") -> List[str]:
        if suite == "all":
            return [name for name in SUITES if n <= SUITE_LIMITS[name]]
        if suite not in SUITES:
            raise DimensionError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)} or all")
        if n > SUITE_LIMITS[suite]:
            raise DimensionError(f"suite {suite} supports N <= {SUITE_LIMITS[suite]}, got {n}")
        return [suite]

    @staticmethod
    def run(
        n: int,
        suite: str = "all",
        ranges: Optional[LemmaRanges] = None,
        workers: Optional[int] = None,
    ) -> VerificationReport:
        names = VerificationService.plan(n, suite)
        payload = ranges.model_dump() if ranges is not None else None
        tasks: List[Task] = [(name, n, payload if name == "lemmas" else None) for name in names]

        logger.info(f"Running {names} at N={n}")
        results = parallel_map(run_check, tasks, workers)
        reports = [VerificationReport.model_validate(result) for result in results]

        if len(reports) == 1:
            return reports[0]
        return combine("all", reports, {"dim": n, "suites": names})
