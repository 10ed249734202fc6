import pytest
from pydantic import ValidationError

from app.core.errors import InputError
from app.models.schemas import (
    FitReportModel,
    OperadElementModel,
    PresentationModel,
    RationalFormModel,
    RunConfig,
    WiringMorphismModel,
    WiringTermModel,
)
from app.services.catmod import wedge_square_presentation
from app.services.operad import OperadElement, OperadTag
from app.services.symfunc import DenominatorFactor, PolySeries, RationalForm, fit_rational

WEDGE = {
    "operad": "ComNu",
    "generators": [2],
    "relations": [{"degree": 2, "entries": [{"n": 2, "m": 2, "terms": [
        {"map": [1, 2], "decorations": [{"arity": 1}, {"arity": 1}]},
        {"map": [2, 1], "decorations": [{"arity": 1}, {"arity": 1}]},
    ]}]}],
}


def test_operad_pattern():
    assert PresentationModel(operad="comnu", generators=[2]).to_domain().operad is OperadTag.COMNU
    with pytest.raises(ValidationError):
        PresentationModel(operad="lie", generators=[1])


def test_operad_element_tag_is_optional_but_must_agree():
    element = OperadElementModel(operad="As", arity=3, order=[2, 3, 1])
    assert element.to_domain() == OperadElement(OperadTag.AS, 3, (2, 3, 1))
    assert element.to_domain(OperadTag.AS) == element.to_domain()
    assert OperadElementModel(arity=2).to_domain(OperadTag.COM) == OperadElement(OperadTag.COM, 2)
    assert OperadElementModel.from_domain(OperadElement(OperadTag.COMNU, 2)).operad == "ComNu"
    with pytest.raises(InputError):
        element.to_domain(OperadTag.COM)
    with pytest.raises(InputError):
        OperadElementModel(arity=1).to_domain()


def test_decoration_with_a_foreign_tag_is_rejected():
    model = WiringMorphismModel(operad="Com", n=1, m=1,
                                terms=[{"map": [1], "decorations": [{"operad": "As", "arity": 1, "order": [1]}]}])
    with pytest.raises(InputError):
        model.to_domain()


def test_rational_form_keys():
    form = RationalForm(1, {(3,): 1}, (DenominatorFactor(1, 1, 1), DenominatorFactor(1, 2, 1)))
    data = RationalFormModel.from_domain(form).model_dump(mode="json")
    assert data["vars"] == 1
    assert data["denominator"] == [{"var": 1, "m": 1, "power": 1}, {"var": 1, "m": 2, "power": 1}]
    assert RationalFormModel.model_validate(data).to_domain() == form


def test_coefficients_are_rational_strings():
    assert WiringTermModel(map=[1], decorations=[{"arity": 1}], coeff="2/4").coeff == "1/2"
    assert WiringTermModel(map=[1], decorations=[{"arity": 1}], coeff=3).coeff == "3"
    with pytest.raises(ValidationError):
        WiringTermModel(map=[1], decorations=[{"arity": 1}], coeff="abc")


def test_morphism_operad_must_match_presentation():
    model = WiringMorphismModel(operad="As", n=1, m=1, terms=[{"map": [1], "decorations": [{"arity": 1, "order": [1]}]}])
    assert model.to_domain().operad is OperadTag.AS
    with pytest.raises(InputError):
        model.to_domain(OperadTag.COM)
    with pytest.raises(InputError):
        WiringMorphismModel(n=1, m=1).to_domain()


def test_presentation_to_domain():
    M = PresentationModel.model_validate(WEDGE).to_domain()
    expected = wedge_square_presentation(OperadTag.COMNU)
    assert M.generators == expected.generators
    assert M.relations[0].entries == expected.relations[0].entries
    with pytest.raises(ValidationError):
        PresentationModel(operad="Com", generators=[-1])


def test_fit_report_of_a_failed_fit():
    series = PolySeries.from_univariate([2 ** d for d in range(16)])
    report = FitReportModel.from_domain(fit_rational(series, 1, 2, holdout=5))
    assert not report.success
    assert report.form is None
    assert report.numerator_budget == 7
    assert report.candidates_tried == 3


def test_run_config():
    config = RunConfig(command="charexp", A=[1, 2, 1])
    assert config.A == [2, 1, 1]
    assert config.format == "json"
    for bad in ({"A": [0]}, {"r": 0}, {"command": "plot"}, {"format": "xml"}, {"operad": "lie"}):
        with pytest.raises(ValidationError):
            RunConfig(**{"command": "charexp", **bad})
    assert RunConfig(command="homdim", cap=0).cap == 0
