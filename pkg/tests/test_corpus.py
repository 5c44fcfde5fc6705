import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nullbertrand.corpus import (
    DEFAULT_PARAMS,
    ExampleParams,
    closed_form_frame,
    example_constants,
    example_curve,
    expected_mate,
    write_corpus,
)
from nullbertrand.curves import ExprCurve, load_spec, pseudo_arc_residual
from nullbertrand.errors import InvalidParams
from nullbertrand.frame import frame_at


def test_example_curve_component():
    spec = example_curve(ExampleParams(1, 2))
    assert spec.sources[0] == "(1/sqrt(a^2+b^2))*(1/a)*sinh(a*s)"
    assert spec.constants == {"a": 1.0, "b": 2.0}


@pytest.mark.parametrize("ab", [(1, 1), (1, -1), (0, 2), (2, 0), (math.inf, 1)])
def test_invalid_params(ab):
    with pytest.raises(InvalidParams):
        ExampleParams(*ab)


def test_curvature_values():
    assert (ExampleParams(1, 3).k1, ExampleParams(1, 3).k2) == (4.0, -3.0)
    assert (ExampleParams(2, 1).k1, ExampleParams(2, 1).k2) == (-1.5, -2.0)
    f = closed_form_frame(ExampleParams(1, 2), 0.0)
    np.testing.assert_allclose(f.W2, [0, 2 / math.sqrt(5), 0, 1 / math.sqrt(5)], atol=1e-15)


params = st.tuples(st.floats(0.3, 3), st.floats(0.3, 3), st.booleans(), st.booleans()).filter(
    lambda t: abs(t[0] - t[1]) > 0.1).map(
    lambda t: ExampleParams(t[0] * (-1 if t[2] else 1), t[1] * (-1 if t[3] else 1)))


@settings(max_examples=50)
@given(params, st.floats(-1, 1))
def test_closed_form_frame_identities(p, s):
    f = closed_form_frame(p, s)
    assert f.gram_residual < 1e-10
    assert f.frenet_residual < 1e-10 * max(1.0, p.r**3)


@settings(max_examples=50)
@given(params, st.floats(-1, 1))
def test_frame_at_matches_closed_form(p, s):
    curve = ExprCurve(example_curve(p))
    f = frame_at(curve, s, tol=1e-8 * max(1.0, p.r**2))
    ref = closed_form_frame(p, s)
    scale = max(1.0, p.r**2)
    for name in ("L", "N", "W1", "W2"):
        np.testing.assert_allclose(getattr(f, name), getattr(ref, name), atol=1e-9 * scale)


def test_expected_mate_slopes():
    p = ExampleParams(1, 2)
    assert expected_mate(p, "I")[1] == pytest.approx(math.sqrt(2))
    assert expected_mate(p, "II")[1] == pytest.approx(math.sqrt(5 / 6))
    with pytest.raises(InvalidParams):
        expected_mate(ExampleParams(2, 1), "II")


def test_expected_mate_is_pseudo_arc():
    for case in ("I", "II"):
        spec, _ = expected_mate(ExampleParams(1, 2), case)
        curve = ExprCurve(spec)
        for s in np.linspace(*spec.domain, 5):
            assert max(pseudo_arc_residual(curve, s)) < 1e-12


def test_example_constants():
    assert example_constants(ExampleParams(1, 2), "I") == (0.0, 0.5)
    assert example_constants(ExampleParams(1, 2), "II") == pytest.approx((1 / 3, -0.25))
    with pytest.raises(ValueError):
        example_constants(ExampleParams(1, 2), "III")


def test_write_corpus(tmp_path):
    paths = write_corpus(tmp_path)
    assert len(paths) == len(DEFAULT_PARAMS)
    for path in paths:
        spec = load_spec(path)
        assert json.loads(path.read_text())["parametrization"] == "pseudo_arc"
        assert spec.domain == (-1.0, 1.0)
