"""Cartan frames and curvatures of null curves in Minkowski 4-space.

For a pseudo-arc parametrized null curve the derivative vectors relate to
the frame by

    c'  = L
    c'' = W1
    c''' = -k1 L - N
    c'''' = -k1' L - 2 k1 W1 - k2 W2

With <L, N> = 1 this inverts to k1 = <c''', c'''>/2, N = -c''' - k1 L,
k1' = <c'''', c'''> and v = c'''' + k1' L + 2 k1 W1 = -k2 W2.  The sign is
fixed by k2 = -|v| < 0.  All of it runs in jet arithmetic, so derivatives
of the frame fields (needed for the Frenet residual and for offset curves)
come out exact to roundoff.
"""

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .curves import PSEUDO_ARC_TOL, CurveJet
from .errors import DegenerateCurve, NullBertrandError, PseudoArcViolation
from .jets import DEFAULT_ORDER, sqrt
from .minkowski import det4, gram_residual, mink_dot

DEGENERATE_TOL = 1e-10
FRAME_MIN_ORDER = 4


class DegenerateParametrization(PseudoArcViolation, DegenerateCurve):
    """c'' vanishes: not pseudo-arc parametrizable and no Cartan frame exists."""


@dataclass(frozen=True)
class FrameFields:
    """Jet-valued frame along the curve near one point."""

    L: CurveJet
    N: CurveJet
    W1: CurveJet
    W2: CurveJet
    k1: object
    k2: object
    k1_prime: object


@dataclass(frozen=True)
class CartanFrame:
    s: float
    L: np.ndarray
    N: np.ndarray
    W1: np.ndarray
    W2: np.ndarray
    k1: float
    k2: float
    k1_prime: float
    orientation_det: float
    gram_residual: float
    frenet_residual: float
    null_residual: float = 0.0
    unit_residual: float = 0.0


def frame_fields(cj, degenerate_tol=DEGENERATE_TOL):
    """Frame algebra on a curve jet of order K >= 4; fields come back at order K - 4."""
    if cj.order < FRAME_MIN_ORDER:
        raise ValueError(f"frame extraction needs a jet of order >= 4, got {cj.order}")
    K = cj.order - 4
    d1 = cj.diff()
    d2 = d1.diff()
    d3 = d2.diff()
    d4 = d3.diff()
    L = d1.truncate(K)
    W1 = d2.truncate(K)
    c3 = d3.truncate(K)
    k1 = c3.dot(c3) * 0.5
    N = -c3 - L * k1
    k1p = d4.dot(c3)
    v = d4 + L * k1p + W1 * (k1 * 2.0)
    vv = v.dot(v)
    if vv.value < -degenerate_tol:
        raise PseudoArcViolation(f"<v, v> = {vv.value:.3e} < 0 at s = {cj.s}: not a null Cartan curve")
    if vv.value <= 0.0 or math.sqrt(vv.value) < degenerate_tol:
        raise DegenerateCurve(
            f"|v| = {math.sqrt(max(vv.value, 0.0)):.3e} at s = {cj.s}: "
            "c', c'', c''', c'''' are linearly dependent (k2 = 0)"
        )
    norm_v = sqrt(vv)
    return FrameFields(L=L, N=N, W1=W1, W2=v / norm_v, k1=k1, k2=-norm_v, k1_prime=k1p)


def frenet_residual_from_fields(f):
    """Max-norm violation of the Frenet system L' = W1, N' = k1 W1 + k2 W2,
    W1' = -k1 L - N, W2' = -k2 L at the expansion point."""
    if f.L.order < 1:
        return math.nan
    k1, k2 = f.k1.value, f.k2.value
    L, N = f.L.position, f.N.position
    W1, W2 = f.W1.position, f.W2.position
    residuals = (
        f.L.derivative(1) - W1,
        f.N.derivative(1) - (k1 * W1 + k2 * W2),
        f.W1.derivative(1) - (-k1 * L - N),
        f.W2.derivative(1) - (-k2 * L),
    )
    return float(max(np.max(np.abs(r)) for r in residuals))


def _jet_for_frame(curve, s, order):
    requested = order - curve.order_loss
    if requested < FRAME_MIN_ORDER:
        raise ValueError(
            f"jet order {order} too low for {curve.name} (consumes {curve.order_loss} orders)"
        )
    return curve.jet(s, requested)


def frame_at(curve, s, order=DEFAULT_ORDER, tol=PSEUDO_ARC_TOL, degenerate_tol=DEGENERATE_TOL,
             validate=True):
    """Cartan frame of ``curve`` at ``s``.

    ``order`` is the global jet budget K; derived curves receive
    K - curve.order_loss.  With ``validate=False`` the pseudo-arc check is
    skipped and the algebra is applied as is (used to measure how badly a
    non-conforming curve breaks the Frenet system).
    """
    cj = _jet_for_frame(curve, s, order)
    d1, d2 = cj.derivative(1), cj.derivative(2)
    null_res = abs(mink_dot(d1, d1))
    unit_res = abs(mink_dot(d2, d2) - 1.0)
    if validate and (null_res >= tol or unit_res >= tol):
        if np.max(np.abs(d2)) < degenerate_tol:
            raise DegenerateParametrization(f"c'' = 0 at s = {s}")
        raise PseudoArcViolation(
            f"{curve.name} at s = {s}: |<c',c'>| = {null_res:.3e}, |<c'',c''> - 1| = {unit_res:.3e}"
        )
    f = frame_fields(cj, degenerate_tol)
    L, N, W1, W2 = f.L.position, f.N.position, f.W1.position, f.W2.position
    return CartanFrame(
        s=float(s),
        L=L,
        N=N,
        W1=W1,
        W2=W2,
        k1=f.k1.value,
        k2=f.k2.value,
        k1_prime=f.k1_prime.value,
        orientation_det=det4(L, N, W1, W2),
        gram_residual=gram_residual(L, N, W1, W2),
        frenet_residual=frenet_residual_from_fields(f),
        null_residual=float(null_res),
        unit_residual=float(unit_res),
    )


def frenet_residuals(curve, s, order=DEFAULT_ORDER, validate=True, **kwargs):
    if order - curve.order_loss < FRAME_MIN_ORDER + 1:
        raise ValueError("Frenet residual needs one jet order beyond the frame")
    return frame_at(curve, s, order, validate=validate, **kwargs).frenet_residual


@dataclass(frozen=True)
class TableRow:
    s: float
    frame: CartanFrame = None
    error: str = ""

    @property
    def ok(self):
        return self.frame is not None


def curvature_table(curve, grid, order=DEFAULT_ORDER, jobs=1, **kwargs):
    """One row per grid point, in grid order; failures are recorded per row."""

    def row(s):
        try:
            return TableRow(float(s), frame_at(curve, s, order, **kwargs))
        except (NullBertrandError, ArithmeticError) as exc:
            return TableRow(float(s), None, f"{type(exc).__name__}: {exc}")

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(row, grid))
    return [row(s) for s in grid]


TABLE_COLUMNS = (
    ["s", "k1", "k2"]
    + [f"L{i}" for i in range(4)]
    + [f"N{i}" for i in range(4)]
    + [f"W1_{i}" for i in range(4)]
    + [f"W2_{i}" for i in range(4)]
    + ["gram_residual", "frenet_residual", "orientation_det", "status"]
)


def fmt(x):
    return f"{float(x):.17g}"


def table_to_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TABLE_COLUMNS)
    for r in rows:
        if r.frame is None:
            w.writerow([fmt(r.s)] + ["nan"] * (len(TABLE_COLUMNS) - 2) + [r.error])
            continue
        f = r.frame
        values = [f.s, f.k1, f.k2, *f.L, *f.N, *f.W1, *f.W2,
                  f.gram_residual, f.frenet_residual, f.orientation_det]
        w.writerow([fmt(v) for v in values] + ["ok"])
    return buf.getvalue()
