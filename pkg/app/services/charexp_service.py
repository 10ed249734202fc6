"""Character exponentials and the nilpotent expansion, packaged for output."""

from typing import List, Optional

from app.models.schemas import CharExpResult, NilpotentTermModel, PolySeriesModel, SymFuncModel
from app.services.charexp import CharExpParams, NilpotentPoly, e_A, expand_identity
from app.services.combinatorics import Partition
from app.services.symfunc import PolySeries


def _terms(poly: NilpotentPoly) -> List[NilpotentTermModel]:
    out = []
    for nu, value in poly.terms.items():
        shapes = [[list(pair) for pair in shape] for shape in poly.shapes.get(nu, ())]
        term = NilpotentTermModel(nu=list(nu.parts), shapes=shapes)
        if isinstance(value, PolySeries):
            term.series = PolySeriesModel.from_domain(value)
        else:
            term.symfunc = SymFuncModel.from_domain(value)
        out.append(term)
    return out


class CharExpService:
    """Service for e^A windows and the E-indexed expansion."""

    def expansion(self, A: List[int], r: int, k: int, D: int, n: Optional[int] = None) -> CharExpResult:
        params = CharExpParams(Partition(tuple(sorted(A, reverse=True))), r, k)
        expansion = expand_identity(params, D)
        result = CharExpResult(A=list(params.A.parts), r=r, k=k, D=D,
                               e_A=SymFuncModel.from_domain(e_A(params.A, None, D)),
                               rhs=_terms(expansion.rhs), exponential=_terms(expansion.exponential))
        if n is not None:
            result.specialized = PolySeriesModel.from_domain(e_A(params.A, n, D))
        return result
