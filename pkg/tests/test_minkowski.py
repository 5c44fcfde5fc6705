import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nullbertrand.corpus import ExampleParams, closed_form_frame
from nullbertrand.minkowski import (
    causal_character,
    det4,
    gram_residual,
    mink_dot,
    project_onto_spacelike_plane,
    vec4,
)

E = np.eye(4)


def test_dot_examples():
    assert mink_dot(E[0], E[0]) == -1.0
    v = vec4(1, 1, 0, 0)
    assert mink_dot(v, v) == 0.0
    f = closed_form_frame(ExampleParams(1, 2), 0.0)
    assert mink_dot(f.L, f.N) == pytest.approx(1.0, abs=1e-15)


def test_causal_character():
    assert causal_character(E[0]) == "timelike"
    assert causal_character(E[1]) == "spacelike"
    assert causal_character(vec4(1, 1, 0, 0)) == "null"
    with pytest.raises(ValueError):
        causal_character(E[0], tol=0.0)


def test_vec4_validation():
    with pytest.raises(ValueError):
        vec4(1, 2, 3)
    with pytest.raises(ValueError):
        vec4(1, 2, 3, float("nan"))


def test_det4_examples():
    assert det4(*E) == pytest.approx(1.0)
    assert det4(E[1], E[0], E[2], E[3]) == pytest.approx(-1.0)
    f = closed_form_frame(ExampleParams(1, 2), 0.0)
    assert det4(f.L, f.N, f.W1, f.W2) == pytest.approx(-1.0, abs=1e-14)


def test_gram_residual_examples():
    for s in (-0.8, 0.0, 0.3, 0.9):
        f = closed_form_frame(ExampleParams(1, 2), s)
        assert gram_residual(f.L, f.N, f.W1, f.W2) < 1e-12
    assert gram_residual(E[0], E[0], E[1], E[2]) == pytest.approx(2.0)
    f = closed_form_frame(ExampleParams(1, 2), 0.0)
    assert gram_residual(2 * f.L, f.N, f.W1, f.W2) == pytest.approx(1.0, abs=1e-14)


vectors = st.lists(st.floats(min_value=-10, max_value=10), min_size=4, max_size=4).map(np.array)
scalars = st.floats(min_value=-10, max_value=10)


@given(vectors, vectors, vectors, scalars, scalars)
def test_dot_symmetric_bilinear(u, v, w, a, b):
    assert mink_dot(u, v) == mink_dot(v, u)
    lhs = mink_dot(a * u + b * v, w)
    rhs = a * mink_dot(u, w) + b * mink_dot(v, w)
    scale = max(1.0, np.abs(a * u).max() + np.abs(b * v).max()) * max(1.0, np.abs(w).max())
    assert abs(lhs - rhs) <= 1e-13 * scale


def test_projection_onto_frame_plane():
    f = closed_form_frame(ExampleParams(1, 2), 0.4)
    v = 0.3 * f.W1 - 1.7 * f.W2
    np.testing.assert_allclose(project_onto_spacelike_plane(v, f.W1, f.W2), v, atol=1e-14)
    assert np.abs(project_onto_spacelike_plane(f.L, f.W1, f.W2)).max() < 1e-14
