import pytest

from gene_assembly.config import OracleSettings
from gene_assembly.errors import EnumerationCapError
from gene_assembly.oracle import CharacterizationReport, LemmaReport
from gene_assembly.workers import VerificationWorker


def test_single_process_run_reports_progress():
    messages = []
    worker = VerificationWorker(1, ["lemmas"], workers=1, chunk_size=50, progress=messages.append)
    reports = worker.run()
    assert isinstance(reports["lemmas"], LemmaReport)
    assert reports["lemmas"].instances == 200
    assert reports["lemmas"].passed
    assert len(messages) == 4
    assert messages[-1] == "lemmas: 200 strings checked"


def test_pool_matches_single_process():
    serial = VerificationWorker(1, ["theorems"], workers=1).run()["theorems"]
    pooled = VerificationWorker(1, ["theorems"], workers=2, chunk_size=40).run()["theorems"]
    assert isinstance(pooled, CharacterizationReport)
    assert pooled.instances == serial.instances == 200
    assert pooled.corrected_agreements == serial.corrected_agreements
    assert len(pooled.literal_disagreements) == len(serial.literal_disagreements)


def test_sampled_run_beyond_exhaustive_cap():
    worker = VerificationWorker(5, ["equivalence"], sample=20, seed=1, workers=1)
    assert worker.run()["equivalence"].instances == 20


def test_exhaustive_run_respects_cap():
    with pytest.raises(EnumerationCapError):
        VerificationWorker(2, workers=1, settings=OracleSettings(exhaustive_cap=1))


def test_unknown_campaign():
    with pytest.raises(ValueError):
        VerificationWorker(1, ["speed"])


def test_stop_before_run():
    worker = VerificationWorker(1, ["lemmas"], workers=1)
    worker.stop()
    assert worker.run()["lemmas"].instances == 0


@pytest.mark.parametrize("workers", [1, 2])
def test_stop_during_run_keeps_partial_report(workers):
    worker = VerificationWorker(1, ["lemmas", "equivalence"], workers=workers, chunk_size=40)
    messages = []

    def progress(message):
        messages.append(message)
        worker.stop()

    worker.progress = progress
    reports = worker.run()
    assert reports["lemmas"].instances == 40
    assert reports["equivalence"].instances == 0
    assert messages == ["lemmas: 40 strings checked"]
