import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flrw_blowup.background import BackgroundModel
from flrw_blowup.field import FieldState, Grid, bump_state, nehari
from flrw_blowup.hypotheses import CASES, classify, evaluate, small_amplitude_exclusion, threshold
from flrw_blowup.nonlinearity import Nonlinearity
from flrw_blowup.scenarios import TUNED

DS = BackgroundModel.de_sitter(3, 1.0, 0.01)
CUBIC = Nonlinearity("focusing", 3, epsilon=2)
GRID = Grid("radial", 3, TUNED["DS-1"]["radius"], 512)


def ds1_state(scale=1.0, grid=GRID):
    t = TUNED["DS-1"]
    return bump_state(grid, scale * t["A"], scale * t["B"], 1.0, 1.0)


def test_threshold_constant():
    assert threshold(1.0, 2.0, 1.0) == 6.0
    # min(1, m) caps the mass factor
    assert threshold(1.0, 2.0, 3.0) == 6.0
    assert threshold(1.0, 2.0, 0.5) == 24.0


def test_ds1_data_satisfy_theorem():
    h = evaluate(ds1_state(), DS, CUBIC, 2.0, 1.0)
    assert h.nehari_negative and h.pairing_ok and h.theorem_applies
    assert h.case_label in ("CaseII", "CaseIII")
    assert h.E0 > 0


def test_zero_data_not_applicable():
    z = FieldState(GRID, 1.0, np.zeros(GRID.size), np.zeros(GRID.size))
    h = evaluate(z, DS, CUBIC, 2.0, 1.0)
    assert h.E0 == 0 and h.I0 == 0 and h.case_label == "NotApplicable" and not h.theorem_applies


def test_small_data_not_applicable():
    h = evaluate(ds1_state(1e-3), DS, CUBIC, 2.0, 1.0)
    assert not h.nehari_negative and h.case_label == "NotApplicable" and not h.theorem_applies


def test_verdicts_of_other_modules_gate_applicability():
    s = ds1_state()
    assert not evaluate(s, DS, CUBIC, 2.0, 1.0, cosmology_ok=False).theorem_applies
    assert not evaluate(s, DS, CUBIC, 2.0, 1.0, nonlinearity_ok=False).theorem_applies


def test_evaluate_checks_initial_time():
    with pytest.raises(ValueError, match="expected t0"):
        evaluate(ds1_state(), DS, CUBIC, 2.0, 0.5)


finite = st.floats(-1e3, 1e3, allow_nan=False)


@given(E0=finite, I0=finite, uu0=finite, u0=st.floats(0, 1e3))
def test_table_partition(E0, I0, uu0, u0):
    S = threshold(E0, 2.0, 1.0)
    label = classify(E0, I0, uu0, u0, S)
    assert label in CASES
    if I0 >= 0 or E0 <= 0 or uu0 <= 0:
        assert label == "NotApplicable"
        return
    assert S > 0
    expect = {(True, True): "CaseII", (False, True): "CaseIII",
              (True, False): "CaseI", (False, False): "CaseIV"}[(u0 >= S, uu0 >= S)]
    assert label == expect


def test_applicable_cases_are_the_solved_ones():
    for scale in (1.0, 1.5, 3.0):
        h = evaluate(ds1_state(scale), DS, CUBIC, 2.0, 1.0)
        if h.theorem_applies:
            assert h.case_label in ("CaseII", "CaseIII")


def test_label_invariant_under_node_reordering():
    s = ds1_state()
    h = evaluate(s, DS, CUBIC, 2.0, 1.0)
    perm = np.random.default_rng(5).permutation(GRID.size)
    w = GRID.weights[perm]
    u, v = s.u[perm], s.v[perm]
    uu0, u0sq = float(np.dot(w, u * v)), float(np.dot(w, u * u))
    # gradient terms are order independent sums over faces; reuse them
    g2 = GRID.grad_norm_sq(s.u) / DS.a(1.0) ** 2
    E0 = 0.5 * (np.dot(w, v * v) + u0sq + g2 - 2 * np.dot(w, CUBIC.F(u)))
    I0 = u0sq + g2 + 3 * 0.01 * uu0 - np.dot(w, u * CUBIC.f(u))
    assert classify(E0, I0, uu0, u0sq, threshold(E0, 2.0, 1.0)) == h.case_label


@settings(max_examples=25, deadline=None)
@given(base=st.floats(0.05, 3.0), c=st.floats(1.0, 10.0))
def test_nehari_negativity_is_monotone_in_amplitude(base, c):
    s = ds1_state(base)
    if nehari(s, DS, CUBIC) < 0:
        assert nehari(s.scaled(c), DS, CUBIC) < 0


def test_exclusion_brackets_sign_change():
    rep = small_amplitude_exclusion(ds1_state(), DS, CUBIC, 2.0, 1.0)
    assert rep.lambdas == [2.0 ** -j for j in range(11)]
    assert rep.bracket is not None and rep.bracket[0] < rep.lambda_c < rep.bracket[1]
    assert rep.floor_confirmed and rep.h1_at_bracket > 0
    i = rep.lambdas.index(rep.bracket[0])
    assert all(val >= 0 for val in rep.nehari_values[i:])
    assert nehari(ds1_state().scaled(rep.lambda_c * (1 - 1e-6)), DS, CUBIC) >= 0
    assert nehari(ds1_state().scaled(rep.lambda_c * (1 + 1e-6)), DS, CUBIC) < 0


def test_exclusion_without_nonlinearity():
    rep = small_amplitude_exclusion(ds1_state(), DS, Nonlinearity("zero"), 2.0, 1.0)
    assert rep.bracket is None and rep.floor_confirmed
    assert all(val > 0 for val in rep.nehari_values)


def test_exclusion_at_zero_amplitude_and_bad_shape():
    assert nehari(ds1_state().scaled(0.0), DS, CUBIC) == 0.0
    with pytest.raises(ValueError):
        small_amplitude_exclusion(ds1_state(0.0), DS, CUBIC, 2.0, 1.0)
