"""Cartan frames, curvatures and (1,2)-Bertrand mates of null curves in Minkowski 4-space."""

from .bertrand import (
    check_condition,
    classical_bertrand_obstruction,
    construct_mate,
    fit_constants,
    plane_coincidence_residual,
)
from .curves import (
    CurveJet,
    CurveSpec,
    ExprCurve,
    RescaledCurve,
    ReparametrizedCurve,
    curve_from_spec,
    eval_curve,
    invert_arc,
    load_spec,
    offset_curve,
    pseudo_arc_length,
    pseudo_arc_residual,
    spec_from_strings,
)
from .frame import CartanFrame, curvature_table, frame_at, frenet_residuals
from .jets import Jet, jet_variable

__all__ = [
    "CartanFrame", "CurveJet", "CurveSpec", "ExprCurve", "Jet", "ReparametrizedCurve",
    "RescaledCurve", "check_condition", "classical_bertrand_obstruction", "construct_mate",
    "curvature_table", "curve_from_spec", "eval_curve", "fit_constants", "frame_at",
    "frenet_residuals", "invert_arc", "jet_variable", "load_spec", "offset_curve",
    "plane_coincidence_residual", "pseudo_arc_length", "pseudo_arc_residual",
    "spec_from_strings",
]
