"""Pydantic models for presentation input and command output."""

from fractions import Fraction
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, field_validator

from app.core.errors import InputError
from app.services.catmod import ModulePresentation, Relation
from app.services.combinatorics import FiniteMap, Partition
from app.services.operad import OperadElement, OperadTag
from app.services.symfunc import DenominatorFactor, FitResult, PolySeries, RationalForm, SymFunc
from app.services.wiring import WiringMorphism, WiringTerm

OPERAD_PATTERN = "^(?i:trivial|com|comnu|as)$"
FORMAT_PATTERN = "^(json|csv|table)$"


def rational_str(value) -> str:
    """Fractions serialize as "p/q", integers as "p"."""
    return str(Fraction(value))


def _parse_rational(v):
    try:
        return rational_str(Fraction(str(v).strip()))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational number: {v!r}")


class OperadElementModel(BaseModel):
    """Decoration on one fiber: its arity and, for As, the rank list.

    Inside a morphism the operad tag may be omitted; it is inherited.
    """
    operad: Optional[str] = Field(None, pattern=OPERAD_PATTERN, description="Defaults to the enclosing morphism")
    arity: int = Field(..., ge=0, description="Number of inputs")
    order: Optional[List[int]] = Field(None, description="As only: order[i] is the position of input i+1")

    def to_domain(self, operad: Optional[OperadTag] = None) -> OperadElement:
        if self.operad is None and operad is None:
            raise InputError("operad element has no operad tag")
        tag = OperadTag.parse(self.operad) if self.operad is not None else operad
        if operad is not None and tag is not operad:
            raise InputError(f"element operad {tag.value} differs from enclosing operad {operad.value}")
        return OperadElement(tag, self.arity, tuple(self.order) if self.order is not None else None)

    @classmethod
    def from_domain(cls, element: OperadElement) -> "OperadElementModel":
        return cls(operad=element.operad.value, arity=element.arity,
                   order=list(element.order) if element.order is not None else None)


class WiringTermModel(BaseModel):
    map: List[int] = Field(..., description="Underlying function as its list of values")
    decorations: List[OperadElementModel]
    coeff: str = Field("1", description="Rational coefficient")

    @field_validator("coeff", mode="before")
    @classmethod
    def parse_coeff(cls, v):
        return _parse_rational(v)


class WiringMorphismModel(BaseModel):
    """Morphism [n] → [m] as a list of decorated maps with rational coefficients."""
    operad: Optional[str] = Field(None, pattern=OPERAD_PATTERN, description="Defaults to the enclosing presentation")
    n: int = Field(..., ge=0, description="Source size")
    m: int = Field(..., ge=0, description="Target size")
    terms: List[WiringTermModel] = Field(default_factory=list)

    def to_domain(self, default_operad: Optional[OperadTag] = None) -> WiringMorphism:
        if self.operad is None and default_operad is None:
            raise InputError("morphism has no operad tag")
        tag = OperadTag.parse(self.operad) if self.operad is not None else default_operad
        if tag is not default_operad and default_operad is not None:
            raise InputError(f"morphism operad {tag.value} differs from presentation operad {default_operad.value}")
        terms: Dict[WiringTerm, Fraction] = {}
        for t in self.terms:
            term = WiringTerm(FiniteMap(self.n, self.m, tuple(t.map)), tuple(d.to_domain(tag) for d in t.decorations))
            terms[term] = terms.get(term, Fraction(0)) + Fraction(t.coeff)
        return WiringMorphism(tag, self.n, self.m, terms)

    @classmethod
    def from_domain(cls, phi: WiringMorphism) -> "WiringMorphismModel":
        return cls(operad=phi.operad.value, n=phi.source, m=phi.target, terms=[
            WiringTermModel(map=list(t.map.values),
                            decorations=[OperadElementModel.from_domain(d) for d in t.decorations],
                            coeff=rational_str(c))
            for t, c in phi.terms.items()])


class RelationModel(BaseModel):
    degree: int = Field(..., ge=0, description="Size of the source object of every entry")
    entries: List[WiringMorphismModel] = Field(..., description="One entry per generator")


class PresentationModel(BaseModel):
    """Finitely presented W^op-module: generator degrees plus relation columns."""
    operad: str = Field(..., pattern=OPERAD_PATTERN)
    generators: List[int] = Field(default_factory=list)
    relations: List[RelationModel] = Field(default_factory=list)

    @field_validator("generators")
    @classmethod
    def non_negative(cls, v):
        if any(d < 0 for d in v):
            raise ValueError("generator degrees must be non-negative")
        return v

    def to_domain(self) -> ModulePresentation:
        tag = OperadTag.parse(self.operad)
        relations = tuple(Relation(r.degree, tuple(e.to_domain(tag) for e in r.entries)) for r in self.relations)
        return ModulePresentation(tag, tuple(self.generators), relations)

    @classmethod
    def from_domain(cls, M: ModulePresentation) -> "PresentationModel":
        return cls(operad=M.operad.value, generators=list(M.generators), relations=[
            RelationModel(degree=r.degree, entries=[WiringMorphismModel.from_domain(e) for e in r.entries])
            for r in M.relations])


class SymTermModel(BaseModel):
    partition: List[int]
    coeff: str


class SymFuncModel(BaseModel):
    """Truncated symmetric function in one of the m, e, h, p, s bases."""
    basis: str = Field(..., pattern="^[mehps]$")
    D: int = Field(..., ge=0, description="Truncation degree")
    terms: List[SymTermModel] = Field(default_factory=list)

    def to_domain(self) -> SymFunc:
        return SymFunc(self.D, self.basis, {Partition(tuple(t.partition)): Fraction(t.coeff) for t in self.terms})

    @classmethod
    def from_domain(cls, f: SymFunc) -> "SymFuncModel":
        return cls(basis=f.basis.value, D=f.D, terms=[
            SymTermModel(partition=list(lam.parts), coeff=rational_str(c)) for lam, c in f.coeffs.items()])


class PolyTermModel(BaseModel):
    exponents: List[int]
    coeff: str


class PolySeriesModel(BaseModel):
    """Power series in x_1..x_n truncated at total degree D."""
    n: int = Field(..., ge=1)
    D: int = Field(..., ge=0)
    terms: List[PolyTermModel] = Field(default_factory=list)

    def to_domain(self) -> PolySeries:
        return PolySeries(self.n, self.D, {tuple(t.exponents): Fraction(t.coeff) for t in self.terms})

    @classmethod
    def from_domain(cls, s: PolySeries) -> "PolySeriesModel":
        return cls(n=s.n, D=s.D, terms=[
            PolyTermModel(exponents=list(e), coeff=rational_str(c)) for e, c in s.coeffs.items()])


class DenominatorFactorModel(BaseModel):
    """Factor (1 − x_var^m)^power."""
    var: int = Field(..., ge=1)
    m: int = Field(..., ge=1, description="Exponent of the variable")
    power: int = Field(..., ge=1)


class RationalFormModel(BaseModel):
    """numerator / ∏ (1 − x_var^m)^power."""
    vars: int = Field(..., ge=1, description="Number of variables")
    numerator: List[PolyTermModel] = Field(default_factory=list)
    denominator: List[DenominatorFactorModel] = Field(default_factory=list)
    text: str = Field("", description="Human-readable form")

    def to_domain(self) -> RationalForm:
        return RationalForm(
            self.vars,
            {tuple(t.exponents): Fraction(t.coeff) for t in self.numerator},
            tuple(DenominatorFactor(f.var, f.m, f.power) for f in self.denominator))

    @classmethod
    def from_domain(cls, rf: RationalForm) -> "RationalFormModel":
        return cls(
            vars=rf.n,
            numerator=[PolyTermModel(exponents=list(e), coeff=rational_str(c)) for e, c in rf.numerator.items()],
            denominator=[DenominatorFactorModel(var=f.var, m=f.exponent, power=f.power) for f in rf.denominator],
            text=str(rf))


class FitReportModel(BaseModel):
    success: bool
    form: Optional[RationalFormModel] = None
    max_exponent: int
    denominator_budget: int
    numerator_budget: int
    fit_window: int
    holdout: int
    candidates_tried: int
    holdout_rejections: int
    message: str

    @classmethod
    def from_domain(cls, fit: FitResult) -> "FitReportModel":
        return cls(
            success=fit.success,
            form=RationalFormModel.from_domain(fit.form) if fit.form is not None else None,
            max_exponent=fit.max_exponent,
            denominator_budget=fit.denominator_budget,
            numerator_budget=fit.numerator_budget,
            fit_window=fit.fit_window,
            holdout=fit.holdout,
            candidates_tried=fit.candidates_tried,
            holdout_rejections=fit.holdout_rejections,
            message=fit.message)


class HomDimRow(BaseModel):
    n: int
    m: int
    dimension: int
    oracle: Optional[int] = Field(None, description="Dimension of the equivariant maps, when checked")
    oracle_agrees: Optional[bool] = None


class HomDimTable(BaseModel):
    operad: str
    cap: int
    rows: List[HomDimRow]


class CharacterResult(BaseModel):
    operad: str
    D: int
    character: SymFuncModel
    dimensions: List[int] = Field(..., description="dim M([n]) for n = 0..D")


class HilbertResult(BaseModel):
    operad: str
    n: int = Field(..., description="Number of variables specialized to")
    D: int
    method: str
    coefficients: List[str] = Field(..., description="Coefficients of t^0..t^D")
    fit: FitReportModel


class NilpotentTermModel(BaseModel):
    """Coefficient of one E-monomial E_ν."""
    nu: List[int]
    shapes: List[List[List[int]]] = Field(default_factory=list, description="Factor shapes (m_j, r_j)")
    series: Optional[PolySeriesModel] = None
    symfunc: Optional[SymFuncModel] = None


class CharExpResult(BaseModel):
    A: List[int]
    r: int
    k: int
    D: int
    e_A: SymFuncModel
    specialized: Optional[PolySeriesModel] = None
    rhs: List[NilpotentTermModel] = Field(default_factory=list)
    exponential: List[NilpotentTermModel] = Field(default_factory=list)


class ScenarioReport(BaseModel):
    name: str
    passed: bool
    details: Dict[str, Any] = Field(default_factory=dict)


class VerifyResult(BaseModel):
    passed: bool
    scenarios: List[ScenarioReport]


class RunConfig(BaseModel):
    """Arguments of one command invocation."""
    command: str = Field(..., pattern="^(homdim|char|hilbert|verify|charexp)$")
    operad: str = Field("Com", pattern=OPERAD_PATTERN)
    n: Optional[int] = Field(None, ge=1, description="Number of variables")
    D: Optional[int] = Field(None, ge=0, description="Truncation degree")
    N: Optional[int] = Field(None, ge=1, description="Dimension of the oracle space")
    cap: Optional[int] = Field(None, ge=0, description="Table size for homdim, enumeration cap otherwise")
    input: Optional[str] = Field(None, description="Presentation file")
    format: str = Field("json", pattern=FORMAT_PATTERN)
    seed: int = 20240229
    scenario: Optional[str] = None
    oracle: bool = False
    method: str = Field("specialize", pattern="^(specialize|character)$")
    A: List[int] = Field(default_factory=list)
    r: int = Field(1, ge=1)
    k: int = Field(0, ge=0)

    @field_validator("A")
    @classmethod
    def weakly_decreasing(cls, v):
        if any(p <= 0 for p in v):
            raise ValueError("parts of A must be positive")
        return sorted(v, reverse=True)
