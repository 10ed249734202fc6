"""Hom-space dimension tables."""

import logging
from typing import Optional

from app.core.config import settings
from app.models.schemas import HomDimRow, HomDimTable
from app.services.combinatorics import check_cap
from app.services.operad import OperadTag
from app.services.wiring import hom_basis, schur_weyl_oracle

logger = logging.getLogger("polywitt.homdim")

ORACLE_LIMIT = 3


class HomService:
    """Service for dim Hom_W([n],[m]) tables and their Schur–Weyl cross-check."""

    def __init__(self, cap: Optional[int] = None):
        self.cap = settings.enumeration_cap if cap is None else cap

    def dimension(self, operad: str, n: int, m: int) -> int:
        return len(hom_basis(OperadTag.parse(operad), n, m, self.cap))

    def hom_table(self, operad: str, size: int, oracle: bool = False) -> HomDimTable:
        """Every n, m ≤ size; the oracle column is filled for n, m ≤ 3."""
        P = OperadTag.parse(operad)
        check_cap("hom table size", size, self.cap)
        rows = []
        for n in range(size + 1):
            for m in range(size + 1):
                row = HomDimRow(n=n, m=m, dimension=self.dimension(P, n, m))
                if oracle and n <= ORACLE_LIMIT and m <= ORACLE_LIMIT:
                    result = schur_weyl_oracle(P, n, m)
                    row.oracle = result.dimension
                    row.oracle_agrees = result.agrees
                    if not result.agrees:
                        logger.warning(f"{P.value} oracle disagrees at n={n}, m={m}: "
                                       f"{result.dimension} vs {result.hom_count}")
                rows.append(row)
        return HomDimTable(operad=P.value, cap=size, rows=rows)
