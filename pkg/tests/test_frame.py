import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nullbertrand.corpus import DEFAULT_PARAMS, ExampleParams, closed_form_frame, example_curve
from nullbertrand.curves import ExprCurve, RescaledCurve, curve_from_spec, spec_from_strings
from nullbertrand.errors import DegenerateCurve, PseudoArcViolation
from nullbertrand.frame import (
    TABLE_COLUMNS,
    curvature_table,
    frame_at,
    frenet_residuals,
    table_to_csv,
)
from nullbertrand.minkowski import det4, mink_dot

R5 = 1 / math.sqrt(5.0)


def test_frame_example(helix12):
    f = frame_at(helix12, 0.0)
    assert f.k1 == pytest.approx(1.5, abs=1e-12)
    assert f.k2 == pytest.approx(-2.0, abs=1e-12)
    np.testing.assert_allclose(f.L, [R5, 0, R5, 0], atol=1e-12)
    np.testing.assert_allclose(f.W1, [0, R5, 0, -2 * R5], atol=1e-12)
    np.testing.assert_allclose(f.N, [-math.sqrt(5) / 2, 0, math.sqrt(5) / 2, 0], atol=1e-12)
    np.testing.assert_allclose(f.W2, [0, 2 * R5, 0, R5], atol=1e-12)
    assert f.orientation_det == pytest.approx(-1.0, abs=1e-12)


def test_null_geodesic_rejected():
    line = ExprCurve(spec_from_strings("geo", ["s", "s", "0", "0"], {}, (-1, 1)))
    with pytest.raises(PseudoArcViolation):
        frame_at(line, 0.0)
    with pytest.raises(DegenerateCurve):
        frame_at(line, 0.0)


def test_scaled_curve_rejected(helix12):
    with pytest.raises(PseudoArcViolation):
        frame_at(RescaledCurve(helix12, 2.0), 0.1)


@settings(max_examples=50)
@given(st.sampled_from(DEFAULT_PARAMS), st.floats(-1, 1))
def test_frenet_residual_small_on_corpus(ab, s):
    curve = ExprCurve(example_curve(ExampleParams(*ab)))
    assert frenet_residuals(curve, s) < 1e-8


def test_perturbed_curve_breaks_frenet():
    p = ExampleParams(1, 2)
    spec = example_curve(p)
    comps = list(spec.sources)
    comps[2] = comps[2] + "+0.001*s^3"
    bent = ExprCurve(spec_from_strings("bent", comps, spec.constants, spec.domain))
    with pytest.raises(PseudoArcViolation):
        frame_at(bent, 0.5)
    assert frenet_residuals(bent, 0.5, validate=False) > 1e-4


def test_frenet_needs_order_five(helix12):
    with pytest.raises(ValueError):
        frenet_residuals(helix12, 0.0, order=4)
    with pytest.raises(ValueError):
        frame_at(helix12, 0.0, order=3)


@settings(max_examples=50)
@given(st.sampled_from(DEFAULT_PARAMS + ((2.0, 1.0), (-1.0, 2.0), (0.5, -3.0))), st.floats(-1, 1))
def test_matches_closed_form(ab, s):
    p = ExampleParams(*ab)
    f = frame_at(ExprCurve(example_curve(p)), s)
    ref = closed_form_frame(p, s)
    for name in ("L", "N", "W1", "W2"):
        np.testing.assert_allclose(getattr(f, name), getattr(ref, name), atol=1e-9)
    assert f.k1 == pytest.approx(p.k1, abs=1e-8)
    assert f.k2 == pytest.approx(p.k2, abs=1e-8)


def test_negative_k1_allowed():
    f = frame_at(ExprCurve(example_curve(ExampleParams(2, 1))), 0.3)
    assert f.k1 == pytest.approx(-1.5, abs=1e-10)
    assert f.k2 == pytest.approx(-2.0, abs=1e-10)


@settings(max_examples=20)
@given(st.sampled_from(DEFAULT_PARAMS), st.floats(-1, 1))
def test_curvatures_from_determinants(ab, s):
    # k1 and |k2| are recovered from derivative determinants independently of the frame algebra
    curve = ExprCurve(example_curve(ExampleParams(*ab)))
    j = curve.jet(s, 6)
    d = [j.derivative(k) for k in range(1, 5)]
    f = frame_at(curve, s)
    assert mink_dot(d[2], d[2]) / 2 == pytest.approx(f.k1, abs=1e-9)
    assert abs(det4(*d)) == pytest.approx(abs(f.k2), rel=1e-9)


def test_frame_invariants(helix12):
    for s in np.linspace(-1, 1, 9):
        f = frame_at(helix12, s)
        assert f.gram_residual < 1e-8
        assert f.k2 <= 0
        assert abs(mink_dot(f.W2, f.W2) - 1) < 1e-8


def test_general_curve_frame(poly_general_spec):
    curve = curve_from_spec(poly_general_spec)
    lo, hi = curve.domain
    ks = []
    for sigma in np.linspace(lo, hi, 4)[1:-1]:
        f = frame_at(curve, sigma)
        assert f.gram_residual < 1e-8
        assert f.frenet_residual < 1e-7
        ks.append(f.k1)
    assert abs(ks[0] - ks[1]) > 1e-3


def test_curvature_table_examples(helix12):
    rows = curvature_table(helix12, np.linspace(-1, 1, 5))
    assert len(rows) == 5
    assert all(abs(r.frame.k1 - 1.5) < 1e-9 for r in rows)
    assert curvature_table(helix12, []) == []
    rows = curvature_table(helix12, [0.0, 2.0, 0.5])
    assert [r.ok for r in rows] == [True, False, True]
    assert "PreconditionError" in rows[1].error


def test_table_parallel_matches_serial(helix12):
    grid = np.linspace(-1, 1, 13)
    serial = table_to_csv(curvature_table(helix12, grid))
    parallel = table_to_csv(curvature_table(helix12, grid, jobs=4))
    assert serial == parallel
    header = serial.splitlines()[0].split(",")
    assert header == list(TABLE_COLUMNS)
