"""Classical and (1,2)-Bertrand analysis of null Cartan curves.

A (1,2)-Bertrand mate is c + alpha W1 + beta W2 with constant alpha, beta.
It exists when either alpha = 0 and beta k2 != 1 (case I) or alpha != 0
and alpha k1 + beta k2 = 1 (case II).  The mate is itself a Cartan curve
only when ds_bar/ds = ell0 is constant along the grid, which is checked
explicitly before anything is built.
"""

import csv
import io
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .curves import FrameOffsetCurve, ReparametrizedCurve, arc_integrand
from .errors import ConditionFailed, DegenerateCurve, NoSolution, PreconditionError
from .frame import DEGENERATE_TOL, frame_at, fmt
from .jets import DEFAULT_ORDER
from .minkowski import mink_dot, project_onto_spacelike_plane

CONDITION_TOL = 1e-8
ELL0_CONSTANCY_TOL = 1e-8
K1_CONSTANCY_TOL = 1e-8


@dataclass
class BertrandCondition:
    case: str  # "I", "II" or "none"
    alpha: float
    beta: float
    condition_residual: float
    min_gap: float  # min over the grid of 1 - beta*k2 (case I diagnostic)
    ell0: float
    ell0_constancy_residual: float
    cartan_mate_feasible: bool
    reason: str = ""


@dataclass
class FitResult:
    alpha: float
    beta: float
    residual: float
    rank: int
    line_direction: tuple = None  # set when (k1, k2) is constant on the grid
    description: str = ""


@dataclass
class ObstructionReport:
    alpha_forced: float
    obstruction: float
    k1_mean: float
    k1_variation: float
    k1_constant: bool
    classical_mate_possible: bool


@dataclass
class MateRow:
    s: float
    s_bar: float
    s_bar_predicted: float
    k1_bar_pred: float
    k1_bar_meas: float
    abs_k2_bar_pred: float
    k2_bar_meas: float
    plane_residual: float
    L_rel_residual: float
    N_rel_residual: float
    rotation_angle: float
    error: str = ""


@dataclass
class MateReport:
    case: str
    alpha: float
    beta: float
    ell0: float
    ell0_predicted: float
    ell0_constancy_residual: float
    predicted_k1_bar: float
    predicted_abs_k2_bar: float
    measured_k1_bar: float
    measured_k2_bar: float
    k1_bar_error: float
    abs_k2_bar_error: float
    rotation_angle: float
    predicted_rotation_angle: float
    rotation_identity_residual: float
    plane_coincidence_residual: float
    L_relation_residual: float
    N_relation_residual: float
    correspondence_residual: float
    curvature_sum_residual: float  # (k1_bar^2 + k2_bar^2) alpha^2 - 1, case II only
    rows: list = field(default_factory=list, repr=False)

    def to_dict(self, include_rows=False):
        d = asdict(self)
        if not include_rows:
            d.pop("rows")
        return d

    @property
    def worst_residual(self):
        parts = [self.k1_bar_error, self.abs_k2_bar_error, self.plane_coincidence_residual,
                 self.L_relation_residual, self.N_relation_residual]
        return max(parts)


def curvatures_on_grid(curve, grid, order=DEFAULT_ORDER, **kwargs):
    frames = [frame_at(curve, s, order, **kwargs) for s in grid]
    k1 = np.array([f.k1 for f in frames])
    k2 = np.array([f.k2 for f in frames])
    return frames, k1, k2


def _relative_spread(values):
    values = np.asarray(values, dtype=float)
    scale = max(abs(float(np.mean(values))), 1e-300)
    return float((values.max() - values.min()) / scale)


def predicted_ell0(case, alpha, beta, k1, k2):
    """ell0 = sqrt(1 - beta k2) in case I, (alpha^2 (k1^2 + k2^2))^(1/4) in case II."""
    k1 = np.asarray(k1, dtype=float)
    k2 = np.asarray(k2, dtype=float)
    if case == "I":
        return np.sqrt(np.abs(1.0 - beta * k2))
    return (alpha**2 * (k1**2 + k2**2)) ** 0.25


def classify(alpha, beta, k1, k2, tol=CONDITION_TOL):
    k1 = np.asarray(k1, dtype=float)
    k2 = np.asarray(k2, dtype=float)
    gap = 1.0 - beta * k2
    min_gap = float(gap.min())
    if alpha == 0.0:
        if beta == 0.0:
            return "none", 0.0, min_gap, "alpha = beta = 0: the mate coincides with the curve"
        if min_gap > tol:
            return "I", 0.0, min_gap, ""
        return "none", 0.0, min_gap, "case I needs 1 - beta*k2 > 0 on the whole grid"
    residual = float(np.max(np.abs(alpha * k1 + beta * k2 - 1.0)))
    if residual < tol:
        return "II", residual, min_gap, ""
    return "none", residual, min_gap, f"alpha*k1 + beta*k2 - 1 reaches {residual:.3e}"


def check_condition(curve, alpha, beta, grid, tol=CONDITION_TOL, order=DEFAULT_ORDER,
                    ell0_tol=ELL0_CONSTANCY_TOL, **kwargs):
    _, k1, k2 = curvatures_on_grid(curve, grid, order, **kwargs)
    return _condition_from_curvatures(float(alpha), float(beta), k1, k2, tol, ell0_tol)


def _condition_from_curvatures(alpha, beta, k1, k2, tol, ell0_tol):
    case, residual, min_gap, reason = classify(alpha, beta, k1, k2, tol)
    if case == "none":
        return BertrandCondition(case, alpha, beta, residual, min_gap, math.nan, math.nan, False,
                                 reason)
    ell0 = predicted_ell0(case, alpha, beta, k1, k2)
    spread = _relative_spread(ell0)
    feasible = spread < ell0_tol
    if not feasible:
        reason = f"ell0 varies by {spread:.3e} (relative): the mate is not a Cartan curve"
    return BertrandCondition(case, alpha, beta, residual, min_gap, float(np.mean(ell0)), spread,
                             feasible, reason)


def fit_constants(curve, grid, tol=CONDITION_TOL, order=DEFAULT_ORDER, **kwargs):
    """Least-squares (alpha, beta) for alpha k1 + beta k2 = 1 over the grid."""
    if len(grid) < 2:
        raise PreconditionError("fitting needs at least two grid points")
    _, k1, k2 = curvatures_on_grid(curve, grid, order, **kwargs)
    return fit_from_curvatures(k1, k2, tol)


def fit_from_curvatures(k1, k2, tol=CONDITION_TOL):
    A = np.column_stack([k1, k2])
    rhs = np.ones(len(k1))
    (alpha, beta), *_ = np.linalg.lstsq(A, rhs, rcond=None)
    residual = float(np.max(np.abs(A @ np.array([alpha, beta]) - rhs)))
    _, sv, vt = np.linalg.svd(A)
    rank = int(np.sum(sv > 1e-10 * max(sv[0], 1e-300)))
    if residual > tol:
        raise NoSolution(
            f"no constants satisfy alpha*k1 + beta*k2 = 1 on the grid (residual {residual:.3e})"
        )
    direction = None
    if rank < 2:
        direction = tuple(float(x) for x in vt[1])
        if direction[0] < 0 or (direction[0] == 0 and direction[1] < 0):
            direction = (-direction[0], -direction[1])
        description = (
            f"(alpha, beta) = ({alpha:.17g}, {beta:.17g}) + t*({direction[0]:.17g}, "
            f"{direction[1]:.17g}), t real; minimum-norm representative at t = 0"
        )
    else:
        description = f"unique solution (alpha, beta) = ({alpha:.17g}, {beta:.17g})"
    return FitResult(float(alpha), float(beta), residual, rank, direction, description)


def classical_bertrand_obstruction(curve, grid, order=DEFAULT_ORDER, tol=1e-10, **kwargs):
    """Numeric form of the classical-Bertrand impossibility.

    A classical mate c + alpha W1 forces k1 = 1/alpha and then alpha k2 = 0.
    With alpha forced to 1/mean(k1), max |alpha k2| > 0 rules the mate out.
    """
    _, k1, k2 = curvatures_on_grid(curve, grid, order, **kwargs)
    return obstruction_from_curvatures(k1, k2, tol)


def obstruction_from_curvatures(k1, k2, tol=1e-10):
    k1 = np.asarray(k1, dtype=float)
    k2 = np.asarray(k2, dtype=float)
    if np.max(np.abs(k2)) < DEGENERATE_TOL:
        raise DegenerateCurve("k2 vanishes on the grid: the obstruction hypothesis fails")
    if np.min(np.abs(k1)) < tol:
        raise PreconditionError("k1 vanishes on the grid: no classical mate equation to solve")
    k1_mean = float(np.mean(k1))
    alpha_forced = 1.0 / k1_mean
    obstruction = float(np.max(np.abs(alpha_forced * k2)))
    variation = float(k1.max() - k1.min())
    k1_constant = variation < K1_CONSTANCY_TOL * max(1.0, abs(k1_mean))
    possible = k1_constant and obstruction <= tol
    return ObstructionReport(alpha_forced, obstruction, k1_mean, variation, k1_constant, possible)


def plane_coincidence_residual(base_frame, mate_frame):
    """How far the mate's W1, W2 stick out of span{W1, W2} of the base.

    The projection is Minkowski-orthogonal; the remainder is measured in
    the coordinate (Euclidean) norm, since it may be null.
    """
    worst = 0.0
    for w in (mate_frame.W1, mate_frame.W2):
        rest = w - project_onto_spacelike_plane(w, base_frame.W1, base_frame.W2)
        worst = max(worst, float(np.linalg.norm(rest)))
    return worst


def construct_mate(curve, alpha, beta, grid, order=DEFAULT_ORDER, tol=CONDITION_TOL,
                   ell0_tol=ELL0_CONSTANCY_TOL, degenerate_tol=DEGENERATE_TOL):
    """Build the (1,2)-Bertrand mate and check every predicted relation.

    Returns ``(mate, report)``; ``mate`` is the offset curve in its own
    pseudo-arc parameter, anchored so that s_bar = ell0 * s at the grid start.
    Measured quantities come from a fresh frame extraction on the mate.
    """
    grid = [float(s) for s in grid]
    if len(grid) < 1:
        raise PreconditionError("empty grid")
    base_frames, k1, k2 = curvatures_on_grid(curve, grid, order, degenerate_tol=degenerate_tol)
    alpha, beta = float(alpha), float(beta)
    cond = _condition_from_curvatures(alpha, beta, k1, k2, tol, ell0_tol)
    if cond.case == "none" or not cond.cartan_mate_feasible:
        raise ConditionFailed(cond.reason or "no (1,2)-Bertrand mate for these constants")
    case = cond.case
    ell0_pred = predicted_ell0(case, alpha, beta, k1, k2)
    ell0 = cond.ell0

    offset = FrameOffsetCurve(curve, alpha, beta, degenerate_tol)
    s_start = float(curve.domain[0])
    mate = ReparametrizedCurve(offset, sigma_anchor=ell0 * s_start,
                               name=f"mate({curve.name}; {alpha:g}, {beta:g})")

    rows = []
    measured_speed = []
    for s, bf, l0 in zip(grid, base_frames, ell0_pred):
        speed = arc_integrand(offset, s)
        measured_speed.append(speed)
        s_bar = mate.sigma_of(s)
        mf = frame_at(mate, s_bar, order, degenerate_tol=degenerate_tol)
        k1_pred = bf.k1 / l0**2
        k2_pred = abs(bf.k2) / l0**2
        if case == "I":
            L_res = np.max(np.abs(mf.L - l0 * bf.L))
            N_res = np.max(np.abs(mf.N - bf.N / l0))
        else:
            L_res = np.max(np.abs(mf.L + (alpha / l0) * bf.N))
            N_res = np.max(np.abs(mf.N + (l0 / alpha) * bf.L))
        angle = math.atan2(mink_dot(mf.W1, bf.W2), mink_dot(mf.W1, bf.W1))
        rows.append(MateRow(
            s=s, s_bar=s_bar, s_bar_predicted=ell0 * s,
            k1_bar_pred=k1_pred, k1_bar_meas=mf.k1,
            abs_k2_bar_pred=k2_pred, k2_bar_meas=mf.k2,
            plane_residual=plane_coincidence_residual(bf, mf),
            L_rel_residual=float(L_res), N_rel_residual=float(N_res),
            rotation_angle=angle,
        ))

    k1_bar = np.array([r.k1_bar_meas for r in rows])
    k2_bar = np.array([r.k2_bar_meas for r in rows])
    if case == "I":
        pred_angle = 0.0
        rot_identity = 0.0
        curv_sum = math.nan
    else:
        cos_t = -alpha * k1 / ell0_pred**2
        sin_t = -alpha * k2 / ell0_pred**2
        pred_angle = float(math.atan2(np.mean(sin_t), np.mean(cos_t)))
        rot_identity = float(np.max(np.abs(cos_t**2 + sin_t**2 - 1.0)))
        curv_sum = float(np.max(np.abs((k1_bar**2 + k2_bar**2) * alpha**2 - 1.0)))

    report = MateReport(
        case=case,
        alpha=alpha,
        beta=beta,
        ell0=float(np.mean(measured_speed)),
        ell0_predicted=ell0,
        ell0_constancy_residual=_relative_spread(measured_speed),
        predicted_k1_bar=float(np.mean([r.k1_bar_pred for r in rows])),
        predicted_abs_k2_bar=float(np.mean([r.abs_k2_bar_pred for r in rows])),
        measured_k1_bar=float(np.mean(k1_bar)),
        measured_k2_bar=float(np.mean(k2_bar)),
        k1_bar_error=float(max(abs(r.k1_bar_meas - r.k1_bar_pred) for r in rows)),
        abs_k2_bar_error=float(max(abs(abs(r.k2_bar_meas) - r.abs_k2_bar_pred) for r in rows)),
        rotation_angle=float(np.mean([r.rotation_angle for r in rows])),
        predicted_rotation_angle=pred_angle,
        rotation_identity_residual=rot_identity,
        plane_coincidence_residual=float(max(r.plane_residual for r in rows)),
        L_relation_residual=float(max(r.L_rel_residual for r in rows)),
        N_relation_residual=float(max(r.N_rel_residual for r in rows)),
        correspondence_residual=float(max(abs(r.s_bar - r.s_bar_predicted) for r in rows)),
        curvature_sum_residual=curv_sum,
        rows=rows,
    )
    return mate, report


MATE_TABLE_COLUMNS = ("s", "s_bar", "k1_bar_pred", "k1_bar_meas", "abs_k2_bar_pred",
                      "k2_bar_meas", "plane_residual", "L_rel_residual", "N_rel_residual")


def mate_table_to_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(MATE_TABLE_COLUMNS)
    for r in rows:
        w.writerow([fmt(getattr(r, c)) for c in MATE_TABLE_COLUMNS])
    return buf.getvalue()


def sample_mate(mate, count):
    """Polyline samples (s_bar, x0..x3) across the mate's domain."""
    lo, hi = mate.domain
    out = []
    for sb in np.linspace(lo, hi, count):
        sb = float(min(max(sb, lo), hi))
        out.append((sb, *mate.position(sb)))
    return out
