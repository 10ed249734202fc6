from fractions import Fraction

import pytest

from app.core.errors import DomainError, PreconditionError
from app.services.catmod import principal_projective, specialized_character
from app.services.combinatorics import Partition
from app.services.freealg import TensorElement, from_letters, witt_terms
from app.services.operad import OperadTag
from app.services.specialize import (
    HnPresentation,
    TensorHost,
    delta_n_presentation,
    end_ring_dimension,
    gamma_n_character,
    generation_closure,
    hn_weight_dims,
    ideal_chain_dims,
    symmetrizer_terms,
    young_idempotent,
    young_symmetrizer_image,
)
from app.services.symfunc import Basis, SymFunc
from app.services.wiring import compose_w

COM, COMNU = OperadTag.COM, OperadTag.COMNU


def P(*parts):
    return Partition(tuple(parts))


# ---------- Young symmetrizers ----------

def test_symmetrizer_terms():
    assert symmetrizer_terms(P(2)) == {(1, 2): 1, (2, 1): 1}
    assert symmetrizer_terms(P(1, 1)) == {(1, 2): 1, (2, 1): -1}
    assert sum(abs(c) for c in symmetrizer_terms(P(2, 1)).values()) == 4


def test_young_idempotents_are_idempotent():
    for lam in (P(2), P(1, 1), P(2, 1), P(3)):
        e = young_idempotent(COM, lam)
        assert compose_w(e, e) == e


def test_schur_functor_of_one_row():
    dims = young_symmetrizer_image(P(1), COMNU, 1, 5).dimension_by_degree()
    assert dims == {0: 0, 1: 1, 2: 1, 3: 1, 4: 1, 5: 1}


def test_wedge_square_vanishes_in_degree_two():
    dims = young_symmetrizer_image(P(1, 1), COMNU, 1, 6).dimension_by_degree()
    assert [dims[d] for d in range(7)] == [0, 0, 0, 1, 1, 2, 2]


def test_wedge_square_of_two_generators():
    x1, x2 = from_letters(COM, 2, [1]), from_letters(COM, 2, [2])
    image = young_symmetrizer_image(P(1, 1), COM, 2, 2, bottom_only=True)
    (vector,) = image.by_weight[(1, 1)]
    assert set(vector.coeffs) == {(x1, x2), (x2, x1)}
    assert sorted(vector.coeffs.values()) == [-1, 1]
    assert image.dimension_by_degree()[2] == 1


def test_symmetrizer_image_needs_room():
    with pytest.raises(PreconditionError):
        young_symmetrizer_image(P(2, 1), COM, 1, 2)


def test_gamma_n_character():
    ch = SymFunc(2, Basis.S, {P(1, 1): Fraction(1), P(2): Fraction(1)})
    assert gamma_n_character(ch, 1) == SymFunc(2, Basis.S, {P(2): Fraction(1)})
    assert gamma_n_character(ch, 2) == ch
    with pytest.raises(DomainError):
        gamma_n_character(ch, 0)


# ---------- Presentations at finite n ----------

def test_free_hn_module_lifts_to_projective_quotient():
    Mn = HnPresentation(COMNU, 1, (P(1),))
    lifted = delta_n_presentation(Mn)
    assert lifted.generators == (1,)
    assert lifted.relations == ()
    assert specialized_character(lifted, 1, 5) == hn_weight_dims(Mn, 5)
    assert specialized_character(lifted, 1, 5) == specialized_character(principal_projective(COMNU, 1), 1, 5)


def test_symmetric_square_round_trips_through_the_lift():
    Mn = HnPresentation(COMNU, 1, (P(2),))
    direct = hn_weight_dims(Mn, 6)
    assert direct.univariate() == [0, 0, 1, 1, 2, 2, 3]
    assert specialized_character(delta_n_presentation(Mn), 1, 6) == direct


def test_zero_hn_presentation():
    Mn = HnPresentation(COM, 1, ())
    assert hn_weight_dims(Mn, 4).is_zero()
    assert delta_n_presentation(Mn).is_zero


def test_lift_rejects_long_rows():
    with pytest.raises(PreconditionError):
        delta_n_presentation(HnPresentation(COMNU, 1, (P(1, 1),)))


# ---------- Generation closures ----------

def test_single_generator_spans_v1():
    x = from_letters(COM, 1, [1])
    report = generation_closure([TensorElement.pure([x], 3)], witt_terms(COM, 1, 3), 3, TensorHost(COM, 1, 1))
    assert report.all_spanned
    assert report.mode == "admissible"


def test_x_tensor_x_does_not_generate_v1_squared():
    x = from_letters(COM, 1, [1])
    seed = [TensorElement.pure([x, x], 3)]
    report = generation_closure(seed, witt_terms(COM, 1, 3), 3, TensorHost(COM, 1, 2))
    assert not report.all_spanned
    assert report.mode == "fixpoint"
    # derivations act diagonally, so only symmetric tensors are reached
    assert report.spanned(0)
    assert [r.reached for r in report.degrees] == [1, 1, 2, 2]
    assert [r.host for r in report.degrees] == [1, 2, 3, 4]


def test_empty_wedge_seed_spans_nothing():
    seed = young_symmetrizer_image(P(1, 1), COMNU, 1, 4, bottom_only=True).vectors
    assert seed == []
    host = young_symmetrizer_image(P(1, 1), COMNU, 1, 4)
    report = generation_closure(seed, witt_terms(COMNU, 1, 4), 4, host)
    assert not report.spanned(3)
    assert all(r.reached == 0 for r in report.degrees)


def test_seed_power_must_match_host():
    x = from_letters(COM, 1, [1])
    with pytest.raises(DomainError):
        generation_closure([TensorElement.pure([x])], [], 2, TensorHost(COM, 1, 2))


# ---------- End rings and ideal chains ----------

def test_end_rings_are_one_dimensional():
    for lam in (P(1), P(2), P(1, 1)):
        assert end_ring_dimension(lam, COMNU) == 1


def test_ideal_chain():
    report = ideal_chain_dims(3, 6)
    for d in range(7):
        assert report.dim(0, d) == d + 1
        assert report.dim(1, d) == d
        for n in range(4):
            assert report.dim(n, d) == max(d - n + 1, 0)
    assert report.strictly_descending
    assert all(report.closed.values())
    with pytest.raises(DomainError):
        ideal_chain_dims(-1, 3)


@pytest.mark.parametrize("generators", [
    (P(1),),
    (P(1, 1),),
    (P(2), P(1, 1)),
], ids=["S1", "S11", "S2+S11"])
def test_unit_iso_in_two_variables(generators):
    Mn = HnPresentation(COM, 2, generators)
    lifted = specialized_character(delta_n_presentation(Mn), 2, 8)
    assert hn_weight_dims(Mn, 8) == lifted
