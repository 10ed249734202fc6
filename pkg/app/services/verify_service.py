"""Named verification scenarios as reports."""

import logging
from typing import List, Optional

from app.core.config import settings
from app.models.schemas import ScenarioReport, VerifyResult
from app.services.scenarios import run_scenario

logger = logging.getLogger("polywitt.verify")


class VerifyService:
    """Service running the verification scenarios."""

    def __init__(self, names: Optional[List[str]] = None):
        self.names = list(settings.scenario_names if names is None else names)

    def run(self, name: str) -> ScenarioReport:
        outcome = run_scenario(name)
        logger.info(f"scenario {name}: {'pass' if outcome.passed else 'FAIL'}")
        return ScenarioReport(name=outcome.name, passed=outcome.passed, details=outcome.details)

    def run_all(self) -> VerifyResult:
        reports = [self.run(name) for name in self.names]
        return VerifyResult(passed=all(r.passed for r in reports), scenarios=reports)

    def verify(self, name: str) -> VerifyResult:
        if name == "all":
            return self.run_all()
        report = self.run(name)
        return VerifyResult(passed=report.passed, scenarios=[report])
