"""Formal characters and Hilbert series of presented modules."""

import logging
from typing import Optional

from app.core.config import settings
from app.models.schemas import (
    CharacterResult,
    FitReportModel,
    HilbertResult,
    PresentationModel,
    SymFuncModel,
    rational_str,
)
from app.services.catmod import ModulePresentation, formal_character, hilbert_specialized
from app.services.combinatorics import specht_dimension
from app.services.symfunc import FitResult, PolySeries, fit_rational

logger = logging.getLogger("polywitt.character")


class CharacterService:
    """Service for characters and specialized Hilbert series."""

    def __init__(self, cap: Optional[int] = None):
        self.cap = settings.enumeration_cap if cap is None else cap

    def character(self, presentation: PresentationModel, D: Optional[int] = None) -> CharacterResult:
        """Formal character in the Schur basis up to degree D, with dim M([n]) read back from it."""
        D = settings.char_degree if D is None else D
        M = presentation.to_domain()
        ch = formal_character(M, D, self.cap)
        dimensions = [0] * (D + 1)
        for lam, c in ch.coeffs.items():
            dimensions[lam.size] += int(c) * specht_dimension(lam)
        return CharacterResult(operad=M.operad.value, D=D, character=SymFuncModel.from_domain(ch),
                               dimensions=dimensions)

    def hilbert(self, presentation: PresentationModel, n: int, D: Optional[int] = None,
                method: str = "specialize") -> HilbertResult:
        """Hilbert series of the specialization to n variables, with a rational fit.

        Denominator exponents are bounded by the top generator degree d. Without
        fit_denominator_degree the search starts at denominator degree d·n and
        grows up to 2·d·n, keeping a numerator budget of at least d·n + 1; the
        series is extended past D when the window needs it.
        """
        D = settings.hilbert_degree if D is None else D
        M = presentation.to_domain()
        series = hilbert_specialized(M, n, D, method)
        d = max(M.generators, default=1) or 1
        fit = self._fit(M, n, d, series)
        logger.info(f"hilbert {M.operad.value} n={n} D={D}: fit {'found' if fit.success else 'not found'} "
                    f"(denominator {fit.denominator_budget}, window {fit.fit_window})")
        return HilbertResult(operad=M.operad.value, n=n, D=D, method=method,
                             coefficients=[rational_str(c) for c in series.univariate()],
                             fit=FitReportModel.from_domain(fit))

    @staticmethod
    def _fit(M: ModulePresentation, n: int, d: int, series: PolySeries) -> FitResult:
        h, D = settings.holdout_window, series.D
        if settings.fit_denominator_degree:
            budgets = [settings.fit_denominator_degree]
        else:
            budgets = range(d * n, 2 * d * n + 1)
        fit = None
        for B in budgets:
            K = max(D - h - B - 1, d * n + 1)
            depth = h + B + K + 1
            if depth > series.D:
                logger.debug(f"extending the series to degree {depth} for denominator budget {B}")
                series = hilbert_specialized(M, n, depth, "specialize")
            fit = fit_rational(series.restrict(depth), d, B, numerator_degree=K)
            if fit.success:
                break
        return fit
