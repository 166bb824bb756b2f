import pytest
from loguru import logger

from lambdap.api.schemas import CheckStatus, Counterexample, OperatorDump, VerificationReport
from lambdap.core.config import Settings
from lambdap.core.errors import ConfigurationError, DimensionError
from lambdap.core.workers import parallel_map
from lambdap.logging.audit_logger import log_report
from lambdap.services.export_service import ExportService, flat_keys, flat_label
from lambdap.services.verification_service import VerificationService, run_check


# ===================================================
# Export
# ===================================================

def test_structure_dump():
    dump = ExportService.structure(1)
    assert dump.dim == 1
    assert dump.product.domain_arity == 2
    assert len(dump.product.entries) == 4
    assert dump.antipode.entries[1].out[0].coeff == [[-1, 0, 0]]


def test_operator_dump_uses_in_alias():
    payload = ExportService.braiding(1).model_dump(by_alias=True)
    assert "in" in payload["entries"][0]
    assert OperatorDump.model_validate(payload).entries[0].in_ == [[], []]


def test_flat_keys_follow_flat_order():
    assert flat_keys(3, 1)[3:5] == [(4,), (3,)]
    assert flat_label(3, (4, 3)) == "f_{3,4}"


def test_rmatrix_text_at_one():
    assert ExportService.rmatrix_text(1).splitlines() == [
        "f_{0,0} -> f_{0,0}",
        "f_{0,1} -> (1 - t)*f_{0,1} + t*f_{1,0}",
        "f_{1,0} -> f_{0,1}",
        "f_{1,1} -> -t*f_{1,1}",
    ]


def test_rmatrix_channels_at_one():
    dump = ExportService.rmatrix(1, channels=True)
    assert dump.channels.exponent_matrix == [[0, 0], [0, 0]]
    assert dump.channels.flat_order == [[], [1]]
    assert dump.channels.reflection_matrix[0][1] == [[1, 0, 0], [-1, 0, 1]]


def test_braiding_channels():
    dump = ExportService.braiding_channels(2)
    assert sorted(dump.channels) == ["0", "1", "2"]


# ===================================================
# Verification
# ===================================================

def test_plan_all_skips_suites_over_their_limit():
    plan = VerificationService.plan(3)
    assert "naturality" not in plan
    assert "fusion" not in plan
    assert "hopf" in plan


def test_plan_rejects_unknown_or_oversized():
    with pytest.raises(DimensionError):
        VerificationService.plan(2, "bogus")
    with pytest.raises(DimensionError):
        VerificationService.plan(3, "fusion")


def test_run_single_suite():
    report = VerificationService.run(1, "hecke")
    assert report.check == "hecke"
    assert report.passed


@pytest.mark.slow
def test_run_combines_suites():
    report = VerificationService.run(1, "all")
    assert report.check == "all"
    assert report.passed, report.first_failure()
    assert [child.check for child in report.checks] == VerificationService.plan(1)


def test_run_check_rejects_unknown_suite():
    with pytest.raises(ValueError):
        run_check(("bogus", 1, None))


# ===================================================
# Reports and audit log
# ===================================================

def test_failing_report_needs_witness():
    with pytest.raises(ValueError):
        VerificationReport(check="x", status=CheckStatus.FAIL)


def test_log_report_marks_failures():
    failing = VerificationReport(
        check="antipode_right",
        status=CheckStatus.FAIL,
        counterexample=Counterexample(basis=[[1, 2]], lhs=[], rhs=[]),
    )
    report = VerificationReport(check="hopf", status=CheckStatus.FAIL, checks=[failing])

    messages = []
    sink = logger.add(messages.append, format="{level} {message}")
    try:
        log_report(report)
    finally:
        logger.remove(sink)

    assert any("ERROR" in line and "[antipode_right]" in line and "[[1, 2]]" in line for line in messages)


# ===================================================
# Settings and workers
# ===================================================

def test_settings_defaults():
    settings = Settings.from_env()
    assert settings.workers == 1
    assert settings.budget == 2 ** 20
    assert settings.log_level == "WARNING"


@pytest.mark.parametrize("name,value", [("LAMBDAP_WORKERS", "0"), ("LAMBDAP_BUDGET", "lots")])
def test_settings_reject_malformed(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(ConfigurationError):
        Settings.from_env()


def test_parallel_map_keeps_order():
    assert parallel_map(abs, [-3, 1, -2, 5], workers=2) == [3, 1, 2, 5]
    assert parallel_map(abs, [], workers=4) == []


def test_checks_are_independent_of_worker_count():
    tasks = [("hecke", 1, None), ("hecke", 2, None)]
    serial, pooled = (
        [VerificationReport.model_validate(r).without_timings() for r in parallel_map(run_check, tasks, workers)]
        for workers in (1, 2)
    )
    assert serial == pooled
