import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nullbertrand.bertrand import (
    ConditionFailed,
    check_condition,
    classical_bertrand_obstruction,
    classify,
    construct_mate,
    fit_constants,
    fit_from_curvatures,
    mate_table_to_csv,
    obstruction_from_curvatures,
    plane_coincidence_residual,
    sample_mate,
)
from nullbertrand.corpus import ExampleParams, example_constants, example_curve, expected_mate
from nullbertrand.curves import ExprCurve, curve_from_spec, spec_from_strings
from nullbertrand.errors import NoSolution, PreconditionError
from nullbertrand.frame import CartanFrame, frame_at
from nullbertrand.minkowski import mink_dot

GRID = list(np.linspace(-1, 1, 9))
P12 = ExampleParams(1, 2)


def test_classify_examples(helix12):
    assert check_condition(helix12, 0.0, 0.5, GRID).case == "I"
    cond = check_condition(helix12, 1 / 3, -0.25, GRID)
    assert cond.case == "II"
    assert cond.condition_residual < 1e-12
    assert check_condition(helix12, 0.0, 0.0, GRID).case == "none"
    assert classify(0.0, -0.5, [1.5], [-2.0])[0] == "none"  # 1 - beta k2 = 0
    assert classify(0.2, 0.1, [1.5], [-2.0])[0] == "none"


def test_ell0_gate_on_variable_curvature(poly_general_spec):
    curve = curve_from_spec(poly_general_spec)
    lo, hi = curve.domain
    cond = check_condition(curve, 0.0, 0.1, [lo + 0.2, 0.5 * (lo + hi), hi - 0.2])
    assert cond.case == "I"
    assert not cond.cartan_mate_feasible


def test_fit_example(helix12):
    fit = fit_constants(helix12, GRID)
    assert fit.alpha == pytest.approx(0.24, abs=1e-10)
    assert fit.beta == pytest.approx(-0.32, abs=1e-10)
    assert fit.residual < 1e-10
    assert fit.rank == 1
    assert fit.line_direction == pytest.approx((0.8, 0.6), abs=1e-10)
    with pytest.raises(PreconditionError):
        fit_constants(helix12, [0.0])


def test_fit_unique_and_no_solution():
    fit = fit_from_curvatures([1.0, 2.0], [-1.0, -3.0])
    assert fit.rank == 2
    assert (fit.alpha, fit.beta) == pytest.approx((2.0, 1.0))
    with pytest.raises(NoSolution):
        fit_from_curvatures([1.0, 2.0, 3.0], [-1.0, -3.0, -2.0])


def test_fit_fails_on_nonconstant_curvatures(poly_general_spec):
    curve = curve_from_spec(poly_general_spec)
    lo, hi = curve.domain
    with pytest.raises(NoSolution):
        fit_constants(curve, list(np.linspace(lo + 0.05, hi - 0.05, 5)))


@pytest.mark.parametrize("ab,alpha,obs", [((1, 2), 2 / 3, 4 / 3), ((1, 3), 0.25, 0.75),
                                          ((2, 5), 1 / 10.5, 10 / 10.5)])
def test_obstruction_examples(ab, alpha, obs):
    rep = classical_bertrand_obstruction(ExprCurve(example_curve(ExampleParams(*ab))), GRID)
    assert rep.alpha_forced == pytest.approx(alpha, abs=1e-10)
    assert rep.obstruction == pytest.approx(obs, abs=1e-10)
    assert rep.k1_constant
    assert not rep.classical_mate_possible


def test_obstruction_needs_nonzero_k1():
    with pytest.raises(PreconditionError):
        obstruction_from_curvatures([0.0, 0.0], [-1.0, -1.0])


def test_nonconstant_k1_flagged(poly_general_spec):
    curve = curve_from_spec(poly_general_spec)
    lo, hi = curve.domain
    rep = classical_bertrand_obstruction(curve, [lo + 0.1, hi - 0.1])
    assert not rep.k1_constant
    assert not rep.classical_mate_possible


def _aligned(mate, spec, grid, slope):
    ref = ExprCurve(spec)
    return max(np.max(np.abs(mate.position(slope * s) - ref.position(slope * s))) for s in grid)


def test_case_one_mate(helix12):
    alpha, beta = example_constants(P12, "I")
    assert (alpha, beta) == (0.0, 0.5)
    mate, rep = construct_mate(helix12, alpha, beta, GRID)
    assert rep.case == "I"
    assert rep.ell0 == pytest.approx(math.sqrt(2), abs=1e-8)
    assert rep.measured_k1_bar == pytest.approx(0.75, abs=1e-6)
    assert abs(rep.measured_k2_bar) == pytest.approx(1.0, abs=1e-6)
    assert rep.correspondence_residual < 1e-8
    spec, slope = expected_mate(P12, "I")
    assert _aligned(mate, spec, GRID, slope) < 1e-7
    for r, s in zip(rep.rows, GRID):
        base = frame_at(helix12, s)
        mf = frame_at(mate, r.s_bar)
        assert abs(mink_dot(mf.L, base.W1)) < 1e-8
        assert abs(mink_dot(mf.L, base.W2)) < 1e-8
        assert np.linalg.norm(mf.L - rep.ell0 * base.L) < 1e-6


def test_case_two_mate(helix12):
    alpha, beta = example_constants(P12, "II")
    mate, rep = construct_mate(helix12, alpha, beta, GRID)
    assert rep.case == "II"
    assert rep.ell0**2 == pytest.approx(5 / 6, abs=1e-8)
    assert rep.measured_k1_bar == pytest.approx(1.8, abs=1e-6)
    assert abs(rep.measured_k2_bar) == pytest.approx(2.4, abs=1e-6)
    assert rep.curvature_sum_residual < 1e-6
    assert rep.plane_coincidence_residual < 1e-6
    assert rep.L_relation_residual < 1e-6
    assert rep.rotation_identity_residual < 1e-10
    spec, slope = expected_mate(P12, "II")
    assert _aligned(mate, spec, GRID, slope) < 1e-7


def test_mate_rejects_zero_constants(helix12):
    with pytest.raises(ConditionFailed):
        construct_mate(helix12, 0.0, 0.0, GRID)


@settings(max_examples=15)
@given(st.floats(-2, 2), st.floats(-2, 2))
def test_failing_constants_rejected(alpha, beta):
    curve = ExprCurve(example_curve(ExampleParams(1, 3)))
    k1, k2 = 4.0, -3.0
    case_one = alpha == 0.0 and beta != 0.0 and 1 - beta * k2 > 1e-8
    case_two = alpha != 0.0 and abs(alpha * k1 + beta * k2 - 1) < 1e-8
    if case_one or case_two:
        return
    with pytest.raises(ConditionFailed):
        construct_mate(curve, alpha, beta, [0.0, 0.5])


def test_plane_residual_examples(helix12):
    f = frame_at(helix12, 1.0)
    assert plane_coincidence_residual(f, f) < 1e-15
    swapped = CartanFrame(**{**f.__dict__, "W1": f.L})
    assert plane_coincidence_residual(f, swapped) > 0.9


def test_mate_outputs(helix12):
    mate, rep = construct_mate(helix12, 0.0, 0.5, GRID[:3])
    text = mate_table_to_csv(rep.rows)
    assert len(text.splitlines()) == 4
    pts = sample_mate(mate, 5)
    assert len(pts) == 5 and len(pts[0]) == 5
    assert "rows" not in rep.to_dict()
