"""The sinh/cosh - sin/cos null helix family and its closed-form answers.

    c(s) = (1/r) [ sinh(as)/a, cosh(as)/a, sin(bs)/b, cos(bs)/b ],  r = sqrt(a^2 + b^2)

with constant curvatures k1 = (b^2 - a^2)/2 and k2 = -|ab|.  Everything here
is written out by hand and serves as ground truth for the numeric pipeline.
"""

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .curves import dump_spec, spec_from_strings
from .errors import InvalidParams
from .frame import CartanFrame
from .minkowski import det4, gram_residual

DEFAULT_PARAMS = ((1.0, 2.0), (1.0, 3.0), (2.0, 5.0))
DEFAULT_DOMAIN = (-1.0, 1.0)

_SCALE = "(1/sqrt(a^2+b^2))"


@dataclass(frozen=True)
class ExampleParams:
    a: float
    b: float

    def __post_init__(self):
        a, b = self.a, self.b
        if not (math.isfinite(a) and math.isfinite(b)):
            raise InvalidParams("a and b must be finite")
        if a == 0 or b == 0:
            raise InvalidParams(f"a and b must be nonzero, got ({a}, {b})")
        if abs(a) == abs(b):
            raise InvalidParams(f"a must differ from +-b, got ({a}, {b})")

    @property
    def r(self):
        return math.sqrt(self.a**2 + self.b**2)

    @property
    def k1(self):
        return (self.b**2 - self.a**2) / 2.0

    @property
    def k2(self):
        # the frame extractor normalizes k2 < 0
        return -abs(self.a * self.b)

    @property
    def tag(self):
        return f"a{self.a:g}_b{self.b:g}".replace("-", "m").replace(".", "p")


def example_curve(p, domain=DEFAULT_DOMAIN):
    return spec_from_strings(
        f"null_helix_{p.tag}",
        [
            f"{_SCALE}*(1/a)*sinh(a*s)",
            f"{_SCALE}*(1/a)*cosh(a*s)",
            f"{_SCALE}*(1/b)*sin(b*s)",
            f"{_SCALE}*(1/b)*cos(b*s)",
        ],
        {"a": p.a, "b": p.b},
        domain,
    )


def _closed_form_vectors(p, s):
    a, b, r = p.a, p.b, p.r
    ch, sh = math.cosh(a * s), math.sinh(a * s)
    cb, sb = math.cos(b * s), math.sin(b * s)
    sign = 1.0 if a * b > 0 else -1.0
    L = np.array([ch, sh, cb, -sb]) / r
    W1 = np.array([a * sh, a * ch, -b * sb, -b * cb]) / r
    N = -(r / 2.0) * np.array([ch, sh, -cb, sb])
    W2 = sign * np.array([b * sh, b * ch, a * sb, a * cb]) / r
    dL = W1
    dW1 = np.array([a * a * ch, a * a * sh, -b * b * cb, b * b * sb]) / r
    dN = -(r / 2.0) * np.array([a * sh, a * ch, b * sb, b * cb])
    dW2 = sign * a * b * np.array([ch, sh, cb, -sb]) / r
    return (L, N, W1, W2), (dL, dN, dW1, dW2)


def closed_form_frame(p, s):
    """Hand-derived Cartan frame at s (W2 flipped when ab < 0 so that k2 < 0)."""
    (L, N, W1, W2), (dL, dN, dW1, dW2) = _closed_form_vectors(p, s)
    k1, k2 = p.k1, p.k2
    frenet = max(
        np.max(np.abs(dL - W1)),
        np.max(np.abs(dN - (k1 * W1 + k2 * W2))),
        np.max(np.abs(dW1 - (-k1 * L - N))),
        np.max(np.abs(dW2 - (-k2 * L))),
    )
    return CartanFrame(
        s=float(s), L=L, N=N, W1=W1, W2=W2, k1=k1, k2=k2, k1_prime=0.0,
        orientation_det=det4(L, N, W1, W2),
        gram_residual=gram_residual(L, N, W1, W2),
        frenet_residual=float(frenet),
    )


def example_constants(p, case):
    """(alpha, beta) of the worked example, expressed in the k2 < 0 frame."""
    ab = abs(p.a * p.b)
    if case == "I":
        return 0.0, 1.0 / ab
    if case == "II":
        return 1.0 / (p.b**2 - p.a**2), -1.0 / (2.0 * ab)
    raise ValueError(f"unknown case {case!r}")


def expected_mate(p, case, domain=None):
    """Closed-form mate as a spec in its pseudo-arc parameter, plus the slope of s -> s_bar."""
    if case == "I":
        slope = math.sqrt(2.0)
        comps = [
            "(2/sqrt(a^2+b^2))*(1/a)*sinh(a*s/sqrt(2))",
            "(2/sqrt(a^2+b^2))*(1/a)*cosh(a*s/sqrt(2))",
            "(2/sqrt(a^2+b^2))*(1/b)*sin(b*s/sqrt(2))",
            "(2/sqrt(a^2+b^2))*(1/b)*cos(b*s/sqrt(2))",
        ]
    elif case == "II":
        if not p.b**2 > p.a**2:
            raise InvalidParams("the case II closed form needs b^2 > a^2")
        slope = math.sqrt((p.a**2 + p.b**2) / (2.0 * (p.b**2 - p.a**2)))
        comps = [
            "(l^2/sqrt(a^2+b^2))*(1/a)*sinh(a*s/l)",
            "(l^2/sqrt(a^2+b^2))*(1/a)*cosh(a*s/l)",
            "-(l^2/sqrt(a^2+b^2))*(1/b)*sin(b*s/l)",
            "-(l^2/sqrt(a^2+b^2))*(1/b)*cos(b*s/l)",
        ]
    else:
        raise ValueError(f"unknown case {case!r}")
    constants = {"a": p.a, "b": p.b}
    if case == "II":
        constants["l"] = slope
    lo, hi = domain or DEFAULT_DOMAIN
    spec = spec_from_strings(f"mate_{case}_{p.tag}", comps, constants, (slope * lo, slope * hi))
    return spec, slope


def default_corpus(domain=DEFAULT_DOMAIN):
    return [example_curve(ExampleParams(a, b), domain) for a, b in DEFAULT_PARAMS]


def write_corpus(directory, domain=DEFAULT_DOMAIN):
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for spec in default_corpus(domain):
        path = directory / f"{spec.name}.json"
        dump_spec(spec, path)
        paths.append(path)
    return paths
