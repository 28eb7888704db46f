import json
from fractions import Fraction

import pytest

from slelab.algebra import VermaParams, act_raising, kappa_parameterization
from slelab.algebra.poly import KAPPA
from slelab.bridge import (
    CandidateSpec,
    GeneratorDrift,
    ModuleSpec,
    candidate_vector,
    drift_from_walk,
    martingale_generator_check,
    obstruction_L1,
    solve_kappa_null,
    solve_kappa_singular,
)


def test_ito_bookkeeping():
    d = drift_from_walk(CandidateSpec(2, 2))
    assert d.coeff_L_minus_n_squared * 2 == d.noise_coeff_squared
    assert d.coeff_L_minus_2n == 2 - KAPPA / 8
    with pytest.raises(ValueError):
        GeneratorDrift(KAPPA, KAPPA, KAPPA)


def test_grade_one_reduces_to_level_two_vector():
    v = candidate_vector(CandidateSpec(1, 2))
    assert v.coefficient((2,)) == 2
    assert v.coefficient((1, 1)) == KAPPA / 2


def test_candidate_spec_validation():
    with pytest.raises(ValueError):
        CandidateSpec(0, 1)
    with pytest.raises(ValueError):
        CandidateSpec(2, 3)


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("s", [1, 2])
def test_obstruction_matches_direct_action(n, s):
    spec = CandidateSpec(n, s)
    assert obstruction_L1(spec) == act_raising(candidate_vector(spec), 1)


def test_obstruction_grade_two_coefficients():
    v = obstruction_L1(CandidateSpec(2, 2))
    assert v.coefficient((3,)) == 10 - KAPPA / 4
    assert v.coefficient((2, 1)) == KAPPA * Fraction(3, 4)
    w = obstruction_L1(CandidateSpec(2, 1))
    assert w.coefficient((3,)) == -10 - KAPPA / 4


def test_grade_one_singular_family_is_the_level_two_parameterization():
    sol = solve_kappa_singular(1, 1)
    assert sol.family is not None
    for k in (Fraction(1), Fraction(8, 3), Fraction(6), Fraction(40)):
        assert sol.family.at(k) == kappa_parameterization(k)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("s", [1, 2])
def test_no_singular_solution_beyond_grade_one(n, s):
    assert solve_kappa_singular(n, s).is_empty


def test_kappa_forty():
    res = solve_kappa_null(2, 2, 5, 2, 1, 1)
    assert res.roots == [Fraction(40)]
    assert res.certificates[Fraction(40)].is_zero()
    d = res.to_dict()
    assert d["kappa"] == ["40"] and "note" not in d


def test_opposite_sign_has_only_negative_root():
    d = solve_kappa_null(2, 1, 5, 2, 1, 1).to_dict()
    assert d["kappa"] == []
    assert d["negative_roots"] == ["-40"]
    assert d["note"] == "no non-negative solution"


def test_grade_one_in_the_nontrivial_yang_lee_module():
    # Δ_{1,2} = -1/5 is the weight reached by kappa = 10
    res = solve_kappa_null(1, 1, 5, 2, 1, 2)
    assert Fraction(10) in res.roots


def test_martingale_check():
    module = ModuleSpec.minimal_model(5, 2, 1, 1, 4)
    ok, residue = martingale_generator_check(CandidateSpec(2, 2, 40), module)
    assert ok and residue.is_zero()
    ok, residue = martingale_generator_check(CandidateSpec(2, 2, 39), module)
    assert not ok and not residue.is_zero()


def test_certificate_bytes_are_stable():
    a = json.dumps(solve_kappa_null(2, 2, 5, 2, 1, 1).to_dict(), sort_keys=True)
    b = json.dumps(solve_kappa_null(2, 2, 5, 2, 1, 1).to_dict(), sort_keys=True)
    assert a == b


def test_symbolic_candidate_keeps_kappa_through_substitution():
    params = VermaParams(Fraction(-22, 5), 0)
    v = candidate_vector(CandidateSpec(2, 2), params)
    assert v.subs(kappa=40).coefficient((4,)) == -3


def test_grade_one_martingale_at_kappa_six():
    module = ModuleSpec.verma_quotient(VermaParams(0, 0), 2)
    ok, _ = martingale_generator_check(CandidateSpec(1, 1, 6), module)
    assert ok
