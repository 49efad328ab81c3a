"""
Worker pool for verification campaigns.

Strings are streamed in chunks to a multiprocessing pool; each task returns a
partial report and the partial reports are merged as they arrive.
"""

import logging
from itertools import islice
from multiprocessing import Pool
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Tuple

from gene_assembly.config import CHUNK_SIZE, DEFAULT_SAMPLE_SEED, DEFAULT_SETTINGS, DEFAULT_WORKERS, OracleSettings
from gene_assembly.errors import EnumerationCapError
from gene_assembly.oracle import (
    CharacterizationReport,
    EquivalenceReport,
    LemmaReport,
    characterization_report,
    instance_stream,
    string_graph_equivalence,
    verify_lemmas,
)
from gene_assembly.strings import GeneString


logger = logging.getLogger(__name__)

CAMPAIGNS = ("lemmas", "theorems", "equivalence")


def _empty_report(campaign: str):
    return {
        "lemmas": LemmaReport,
        "theorems": CharacterizationReport,
        "equivalence": EquivalenceReport,
    }[campaign]()


def run_chunk(task: Tuple[str, List[GeneString], OracleSettings]):
    """Pool entry point; module level so it pickles."""
    campaign, strings, settings = task
    if campaign == "lemmas":
        return verify_lemmas(strings)
    if campaign == "theorems":
        return characterization_report(strings, settings)
    if campaign == "equivalence":
        return string_graph_equivalence(strings, settings)
    raise ValueError(f"unknown campaign {campaign!r}")


def _chunks(strings: Iterable[GeneString], size: int) -> Iterator[List[GeneString]]:
    iterator = iter(strings)
    while True:
        chunk = list(islice(iterator, size))
        if not chunk:
            return
        yield chunk


class VerificationWorker:
    """
    Runs one or more campaigns over the strings with at most ``k`` pointer
    identities (exhaustive) or over ``sample`` seeded random strings.

    ``progress`` receives status messages. ``stop()`` keeps the partial
    reports merged so far; queued chunks are dropped and the pool is
    terminated.
    """

    def __init__(
        self,
        k: int,
        campaigns: Iterable[str] = CAMPAIGNS,
        sample: Optional[int] = None,
        seed: int = DEFAULT_SAMPLE_SEED,
        workers: int = DEFAULT_WORKERS,
        settings: OracleSettings = DEFAULT_SETTINGS,
        chunk_size: int = CHUNK_SIZE,
        progress: Optional[Callable[[str], None]] = None,
    ):
        self.k = k
        self.campaigns = tuple(campaigns)
        for campaign in self.campaigns:
            if campaign not in CAMPAIGNS:
                raise ValueError(f"unknown campaign {campaign!r}")
        if sample is None and k > settings.exhaustive_cap:
            raise EnumerationCapError(k, settings.exhaustive_cap, "k")
        self.sample = sample
        self.seed = seed
        self.workers = max(1, workers)
        self.settings = settings
        self.chunk_size = chunk_size
        self.progress = progress or (lambda message: None)
        self._is_running = True

    def stop(self):
        self._is_running = False

    def _tasks(self, campaign: str) -> Iterator[Tuple[str, List[GeneString], OracleSettings]]:
        strings = instance_stream(self.k, self.sample, self.seed, self.settings)
        for chunk in _chunks(strings, self.chunk_size):
            if not self._is_running:
                return
            yield campaign, chunk, self.settings

    def _run_campaign(self, campaign: str, pool) -> object:
        report = _empty_report(campaign)
        if not self._is_running:
            return report
        results = pool.imap_unordered(run_chunk, self._tasks(campaign)) if pool else map(run_chunk, self._tasks(campaign))
        for partial in results:
            report = report.merge(partial)
            self.progress(f"{campaign}: {report.instances} strings checked")
            if not self._is_running:
                if pool is not None:
                    pool.terminate()
                logger.info("campaign %s stopped after %d strings", campaign, report.instances)
                return report
        logger.info("campaign %s finished: %d strings, passed=%s", campaign, report.instances, report.passed)
        return report

    def run(self) -> Dict[str, object]:
        """Run every requested campaign and return campaign -> merged report."""
        reports: Dict[str, object] = {}
        if self.workers == 1:
            for campaign in self.campaigns:
                reports[campaign] = self._run_campaign(campaign, None)
            return reports

        with Pool(processes=self.workers) as pool:
            for campaign in self.campaigns:
                reports[campaign] = self._run_campaign(campaign, pool)
        return reports
