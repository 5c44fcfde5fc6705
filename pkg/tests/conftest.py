import math

import mpmath
import numpy as np
import pytest
from hypothesis import settings

from nullbertrand.corpus import DEFAULT_PARAMS, ExampleParams, example_curve
from nullbertrand.curves import ExprCurve, spec_from_strings

settings.register_profile("default", deadline=None)
settings.load_profile("default")

POLY_COMPONENTS = ["s + s^3/3 + s^5/5", "s^2", "2*s^3/3", "s - s^3/3 - s^5/5"]


@pytest.fixture(params=DEFAULT_PARAMS, ids=lambda p: f"a{p[0]:g}b{p[1]:g}")
def params(request):
    return ExampleParams(*request.param)


@pytest.fixture
def helix12():
    return ExprCurve(example_curve(ExampleParams(1.0, 2.0)))


@pytest.fixture
def poly_general_spec():
    # null since (1 + w)^2 = 4w + (1 - w)^2 with w = t^2 + t^4
    return spec_from_strings("null_poly", POLY_COMPONENTS, {}, (0.5, 1.5), "general")


def mp_closed_form_frame(a, b, s):
    """Closed-form L, N, W1, W2 of the helix family in mpmath (independent of the package)."""
    a, b, s = mpmath.mpf(a), mpmath.mpf(b), mpmath.mpf(s)
    r = mpmath.sqrt(a**2 + b**2)
    ch, sh = mpmath.cosh(a * s), mpmath.sinh(a * s)
    cb, sb = mpmath.cos(b * s), mpmath.sin(b * s)
    sign = 1 if a * b > 0 else -1
    L = [ch / r, sh / r, cb / r, -sb / r]
    W1 = [a * sh / r, a * ch / r, -b * sb / r, -b * cb / r]
    N = [-(r / 2) * x for x in (ch, sh, -cb, sb)]
    W2 = [sign * x / r for x in (b * sh, b * ch, a * sb, a * cb)]
    return L, N, W1, W2


def mp_helix(a, b, s):
    a, b, s = mpmath.mpf(a), mpmath.mpf(b), mpmath.mpf(s)
    r = mpmath.sqrt(a**2 + b**2)
    return [mpmath.sinh(a * s) / (a * r), mpmath.cosh(a * s) / (a * r),
            mpmath.sin(b * s) / (b * r), mpmath.cos(b * s) / (b * r)]


def as_float(vec):
    return np.array([float(x) for x in vec])


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[number])
