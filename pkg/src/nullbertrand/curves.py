"""Parametric curves in Minkowski 4-space and the operations on them.

Every curve object exposes ``domain``, ``order_loss`` and ``jet(s, order)``
returning a :class:`CurveJet`.  ``order_loss`` says how many Taylor orders
the curve consumes from the expression curve underneath it, so callers can
budget a global jet order K.
"""

import json
import math
from dataclasses import dataclass, field
from math import factorial
from pathlib import Path

import numpy as np

from . import expr
from .errors import (
    PreconditionError,
    QuadratureError,
    RangeError,
    SpecError,
)
from .jets import DEFAULT_ORDER, Jet, jet_variable, sqrt
from .minkowski import mink_dot

PSEUDO_ARC_TOL = 1e-8
QUAD_TOL = 1e-10
PARAMETRIZATIONS = ("pseudo_arc", "general")

_ETA = np.array([-1.0, 1.0, 1.0, 1.0])


class CurveJet:
    """Taylor expansion of a 4-vector valued function at a point.

    ``coeffs`` has shape (4, K + 1); row i holds the normalized Taylor
    coefficients of component i.
    """

    __slots__ = ("s", "coeffs")

    def __init__(self, s, coeffs):
        coeffs = np.array(coeffs, dtype=float)
        if coeffs.ndim != 2 or coeffs.shape[0] != 4:
            raise ValueError(f"curve jet coefficients must have shape (4, K+1), got {coeffs.shape}")
        coeffs.flags.writeable = False
        self.s = float(s)
        self.coeffs = coeffs

    @classmethod
    def from_components(cls, components):
        s0 = components[0].s0
        n = min(c.coeffs.size for c in components)
        return cls(s0, np.array([c.coeffs[:n] for c in components]))

    @property
    def order(self):
        return self.coeffs.shape[1] - 1

    @property
    def position(self):
        return self.coeffs[:, 0].copy()

    def derivative(self, k):
        if not 0 <= k <= self.order:
            raise IndexError(f"derivative order {k} outside 0..{self.order}")
        return factorial(k) * self.coeffs[:, k]

    def component(self, i):
        return Jet(self.s, self.coeffs[i])

    def diff(self):
        k = np.arange(1, self.coeffs.shape[1])
        return CurveJet(self.s, self.coeffs[:, 1:] * k)

    def truncate(self, order):
        if order > self.order:
            raise ValueError(f"cannot raise curve jet order from {self.order} to {order}")
        return CurveJet(self.s, self.coeffs[:, : order + 1])

    def dot(self, other):
        """Minkowski inner product as a scalar jet."""
        n = min(self.coeffs.shape[1], other.coeffs.shape[1])
        total = np.zeros(n)
        for i in range(4):
            total += _ETA[i] * np.convolve(self.coeffs[i, :n], other.coeffs[i, :n])[:n]
        return Jet(self.s, total)

    def _pair(self, other):
        n = min(self.coeffs.shape[1], other.coeffs.shape[1])
        return self.coeffs[:, :n], other.coeffs[:, :n]

    def __add__(self, other):
        a, b = self._pair(other)
        return CurveJet(self.s, a + b)

    def __sub__(self, other):
        a, b = self._pair(other)
        return CurveJet(self.s, a - b)

    def __neg__(self):
        return CurveJet(self.s, -self.coeffs)

    def __mul__(self, scalar):
        if isinstance(scalar, Jet):
            n = min(self.coeffs.shape[1], scalar.coeffs.size)
            rows = [np.convolve(self.coeffs[i, :n], scalar.coeffs[:n])[:n] for i in range(4)]
            return CurveJet(self.s, rows)
        return CurveJet(self.s, self.coeffs * float(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, Jet):
            return self * (1.0 / scalar)
        return CurveJet(self.s, self.coeffs / float(scalar))


@dataclass(frozen=True)
class CurveSpec:
    name: str
    components: tuple
    constants: dict = field(default_factory=dict)
    domain: tuple = (0.0, 1.0)
    parametrization: str = "pseudo_arc"
    sources: tuple = ()

    def __post_init__(self):
        if len(self.components) != 4:
            raise SpecError(f"a curve needs 4 components, got {len(self.components)}")
        lo, hi = self.domain
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise SpecError(f"degenerate domain {self.domain!r}")
        if self.parametrization not in PARAMETRIZATIONS:
            raise SpecError(f"unknown parametrization {self.parametrization!r}")
        for c in self.components:
            expr.check_bound(c, self.constants)


def spec_from_strings(name, components, constants=None, domain=(0.0, 1.0),
                      parametrization="pseudo_arc"):
    constants = {k: float(v) for k, v in (constants or {}).items()}
    asts = tuple(expr.parse_expression(c) for c in components)
    return CurveSpec(name, asts, constants, (float(domain[0]), float(domain[1])),
                     parametrization, tuple(components))


def spec_from_dict(data):
    try:
        name = str(data["name"])
        components = list(data["components"])
        constants = dict(data.get("constants", {}))
        domain = data["domain"]
        parametrization = data.get("parametrization", "pseudo_arc")
    except (KeyError, TypeError) as exc:
        raise SpecError(f"malformed curve spec: {exc}") from None
    if len(domain) != 2:
        raise SpecError("domain must be [s_min, s_max]")
    if not all(isinstance(c, str) for c in components):
        raise SpecError("components must be expression strings")
    return spec_from_strings(name, components, constants, domain, parametrization)


def spec_to_dict(spec):
    sources = spec.sources or tuple(expr.to_source(c) for c in spec.components)
    return {
        "name": spec.name,
        "constants": dict(spec.constants),
        "components": list(sources),
        "parametrization": spec.parametrization,
        "domain": [spec.domain[0], spec.domain[1]],
    }


def load_spec(path):
    """Read a curve-spec JSON file; SpecError for anything malformed."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise SpecError(f"{path}: top-level value must be an object")
    return spec_from_dict(data)


def dump_spec(spec, path):
    Path(path).write_text(json.dumps(spec_to_dict(spec), indent=2) + "\n", encoding="utf-8")


def _check_domain(curve, s, slack=1e-12):
    lo, hi = curve.domain
    if not (lo - slack <= s <= hi + slack):
        raise PreconditionError(f"s = {s!r} outside domain [{lo}, {hi}] of {curve.name}")


class ExprCurve:
    """A curve given by four expressions in ``s``."""

    order_loss = 0

    def __init__(self, spec):
        self.spec = spec
        self.name = spec.name
        self.domain = spec.domain

    def jet(self, s, order=DEFAULT_ORDER):
        _check_domain(self, s)
        var = jet_variable(s, order)
        comps = []
        for ast in self.spec.components:
            v = expr.evaluate(ast, var, self.spec.constants)
            comps.append(v if isinstance(v, Jet) else Jet.constant(v, s, order))
        return CurveJet.from_components(comps)

    def position(self, s):
        _check_domain(self, s)
        return np.array([float(expr.evaluate(a, s, self.spec.constants)) for a in self.spec.components])


def curve_from_spec(spec):
    """Curve object for a spec; ``general`` specs come back pseudo-arc reparametrized."""
    base = ExprCurve(spec)
    if spec.parametrization == "general":
        return ReparametrizedCurve(base)
    return base


def eval_curve(curve, s, order=DEFAULT_ORDER):
    return curve.jet(s, order)


class RescaledCurve:
    """t -> c(lam * t)."""

    def __init__(self, base, lam):
        if lam <= 0:
            raise ValueError("scale factor must be positive")
        self.base = base
        self.lam = float(lam)
        self.order_loss = base.order_loss
        self.name = f"{base.name}*{lam:g}"
        lo, hi = base.domain
        self.domain = (lo / self.lam, hi / self.lam)

    def jet(self, t, order=DEFAULT_ORDER):
        _check_domain(self, t)
        j = self.base.jet(self.lam * t, order)
        scale = self.lam ** np.arange(j.order + 1)
        return CurveJet(t, j.coeffs * scale)

    def position(self, t):
        return self.jet(t, 1).position


def pseudo_arc_residual(curve, s):
    """(|<c', c'>|, |<c'', c''> - 1|) at s."""
    j = curve.jet(s, 2)
    d1, d2 = j.derivative(1), j.derivative(2)
    return abs(mink_dot(d1, d1)), abs(mink_dot(d2, d2) - 1.0)


def validate_pseudo_arc(curve, grid, tol=PSEUDO_ARC_TOL):
    worst = (0.0, 0.0)
    for s in grid:
        n, u = pseudo_arc_residual(curve, s)
        worst = (max(worst[0], n), max(worst[1], u))
    return worst[0] < tol and worst[1] < tol, worst


def arc_integrand(curve, t):
    """<c_tt, c_tt>^(1/4): the pseudo-arc speed of a null curve."""
    d2 = curve.jet(t, 2).derivative(2)
    q = mink_dot(d2, d2)
    if not q > 0.0:
        raise QuadratureError(f"pseudo-arc integrand non-positive at t = {t!r} (<c'',c''> = {q!r})")
    return math.sqrt(math.sqrt(q))


def adaptive_simpson(f, a, b, tol=QUAD_TOL, max_depth=50):
    """Adaptive Simpson quadrature with Richardson correction."""
    if a == b:
        return 0.0
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0
    total = 0.0
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    while stack:
        lo, hi, flo, fmid, fhi, est, eps, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = f(lm), f(rm)
        left = (mid - lo) * (flo + 4.0 * flm + fmid) / 6.0
        right = (hi - mid) * (fmid + 4.0 * frm + fhi) / 6.0
        delta = left + right - est
        if abs(delta) <= 15.0 * eps or depth >= max_depth:
            if depth >= max_depth and abs(delta) > 15.0 * eps:
                raise QuadratureError(f"adaptive Simpson failed to converge on [{lo}, {hi}]")
            total += left + right + delta / 15.0
        else:
            stack.append((mid, hi, fmid, frm, fhi, right, 0.5 * eps, depth + 1))
            stack.append((lo, mid, flo, flm, fmid, left, 0.5 * eps, depth + 1))
    return total


def pseudo_arc_length(curve, t0, t1, tol=QUAD_TOL):
    return adaptive_simpson(lambda t: arc_integrand(curve, t), t0, t1, tol)


def invert_arc(curve, t0, sigma, tol=1e-12):
    """Parameter t >= t0 whose pseudo-arc length from t0 equals sigma.

    Safeguarded Newton on F(t) = length(t0, t) - sigma, bracketed by
    [t0, domain end]; F is strictly increasing because the integrand is
    positive.
    """
    if sigma < 0:
        raise PreconditionError("target length must be non-negative")
    if sigma == 0:
        return float(t0)
    lo, hi = float(t0), float(curve.domain[1])
    total = pseudo_arc_length(curve, lo, hi, tol)
    if sigma > total + tol:
        raise RangeError(f"target length {sigma} exceeds remaining length {total} of {curve.name}")
    if sigma >= total:
        return hi
    f_lo, f_hi = -sigma, total - sigma
    g0 = arc_integrand(curve, lo)
    t = min(max(lo + sigma / g0, lo), hi)
    # F(t) is tracked incrementally from the bracket end nearest t
    for _ in range(100):
        if t - lo <= hi - t:
            F = f_lo + pseudo_arc_length(curve, lo, t, tol)
        else:
            F = f_hi - pseudo_arc_length(curve, t, hi, tol)
        if F < 0:
            lo, f_lo = t, F
        else:
            hi, f_hi = t, F
        if abs(F) < tol or hi - lo < 1e-14 * max(1.0, abs(t)):
            return t
        step = F / arc_integrand(curve, t)
        t_new = t - step
        if not (lo < t_new < hi):
            t_new = 0.5 * (lo + hi)
        if abs(t_new - t) < 1e-15 * max(1.0, abs(t)):
            return t_new
        t = t_new
    raise QuadratureError(f"arc inversion did not converge for sigma = {sigma}")


def _reverse_series(g):
    """Coefficients d of the inverse of u = sum_{k>=1} g[k] d^k (g[0] ignored)."""
    n = g.size - 1
    u = np.zeros(n + 1)
    u[1] = 1.0
    d = u / g[1]
    for _ in range(n):
        # d <- (u - sum_{k>=2} g_k d^k) / g_1, one more correct order per pass
        acc = np.zeros(n + 1)
        p = d.copy()
        for k in range(2, n + 1):
            p = np.convolve(p, d)[: n + 1]
            acc += g[k] * p
        d = (u - acc) / g[1]
    return d


def _compose(c, d):
    """Rows of c (Taylor series in t - t0) composed with t - t0 = d(u)."""
    n = d.size
    m = c.shape[1]
    out = np.zeros((c.shape[0], n))
    for k in range(m - 1, -1, -1):
        for i in range(c.shape[0]):
            out[i] = np.convolve(out[i], d)[:n]
        out[:, 0] += c[:, k]
    return out


class ReparametrizedCurve:
    """A null curve re-expressed in its own pseudo-arc parameter.

    sigma(t) = sigma_anchor + integral_{t_anchor}^{t} <c_tt, c_tt>^(1/4) dt
    with t_anchor the start of the base domain.  Jets in sigma are obtained
    by series reversion of sigma(t) and composition with the base jets.
    """

    def __init__(self, base, sigma_anchor=0.0, name=None):
        self.base = base
        self.name = name or f"{base.name}[pseudo-arc]"
        self.order_loss = base.order_loss + 1
        self.t_anchor = float(base.domain[0])
        self.sigma_anchor = float(sigma_anchor)
        self._t_of_sigma = {}
        length = pseudo_arc_length(base, base.domain[0], base.domain[1])
        self.domain = (self.sigma_anchor, self.sigma_anchor + length)

    def sigma_of(self, t):
        """Pseudo-arc parameter of base parameter t (remembered for jet())."""
        sigma = self.sigma_anchor + pseudo_arc_length(self.base, self.t_anchor, t)
        self._t_of_sigma[sigma] = float(t)
        return sigma

    def t_of(self, sigma):
        t = self._t_of_sigma.get(sigma)
        if t is None:
            _check_domain(self, sigma)
            sigma_c = min(max(sigma, self.domain[0]), self.domain[1])
            t = invert_arc(self.base, self.t_anchor, sigma_c - self.sigma_anchor)
            self._t_of_sigma[sigma] = t
        return t

    def jet(self, sigma, order=DEFAULT_ORDER):
        t = self.t_of(sigma)
        base = self.base.jet(t, order + 1)
        g = base.diff().diff().dot(base.diff().diff())  # order: order - 1
        if not g.value > 0.0:
            raise QuadratureError(f"pseudo-arc integrand non-positive at t = {t!r}")
        speed = sqrt(sqrt(g)).coeffs
        # sigma - sigma(t) = sum_k speed[k-1]/k (t - t0)^k
        ks = np.arange(1, speed.size + 1)
        sig = np.concatenate(([0.0], speed / ks))
        d = _reverse_series(sig)
        return CurveJet(sigma, _compose(base.coeffs, d))

    def position(self, sigma):
        return self.base.jet(self.t_of(sigma), 1).position


class FrameOffsetCurve:
    """s -> c(s) + alpha W1(s) + beta W2(s) for constant alpha, beta.

    Jets are produced by running the Cartan frame algebra in jet arithmetic
    on the base curve, which costs four Taylor orders.
    """

    def __init__(self, base, alpha, beta, degenerate_tol=1e-10):
        self.base = base
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.degenerate_tol = degenerate_tol
        self.order_loss = base.order_loss + 4
        self.domain = base.domain
        self.name = f"{base.name}+({self.alpha:g})W1+({self.beta:g})W2"

    def jet(self, s, order=DEFAULT_ORDER):
        from .frame import frame_fields

        cj = self.base.jet(s, order + 4)
        fields = frame_fields(cj, self.degenerate_tol)
        out = cj.truncate(order)
        if self.alpha:
            out = out + fields.W1 * self.alpha
        if self.beta:
            out = out + fields.W2 * self.beta
        return out

    def position(self, s):
        return self.jet(s, 1).position


def offset_curve(base, alpha, beta, degenerate_tol=1e-10):
    """Offset curve, probing the base frame once so a degenerate base fails early."""
    from .frame import FRAME_MIN_ORDER, frame_fields

    frame_fields(base.jet(base.domain[0], FRAME_MIN_ORDER + 1), degenerate_tol)
    return FrameOffsetCurve(base, alpha, beta, degenerate_tol)
