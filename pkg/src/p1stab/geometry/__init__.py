"""Floating-point differential geometry on the Riemann sphere."""

from .chern_weil import ChernWeilReport, chern_weil_gap
from .curvature import curvature, degree_integral, lambda_f_chart
from .fields import (
    ChartMap,
    MetricField,
    conformal_scale,
    constant_metric,
    fs_metric,
    geodesic_point,
    round_product_metric,
    scale_metric,
    transition_residual,
)
from .forms import HermitianForm, form_geodesic
from .functionals import (
    FunctionalValue,
    bergman_kernel_deviation,
    defining_equation_residual,
    donaldson,
    donaldson_derivative,
    donaldson_fs,
    geodesic_distance,
    l2_form,
    relative_log_values,
)
from .grid import QuadratureGrid

__all__ = [
    "ChartMap",
    "ChernWeilReport",
    "FunctionalValue",
    "HermitianForm",
    "MetricField",
    "QuadratureGrid",
    "bergman_kernel_deviation",
    "chern_weil_gap",
    "conformal_scale",
    "constant_metric",
    "curvature",
    "defining_equation_residual",
    "degree_integral",
    "donaldson",
    "donaldson_derivative",
    "donaldson_fs",
    "form_geodesic",
    "fs_metric",
    "geodesic_distance",
    "geodesic_point",
    "l2_form",
    "lambda_f_chart",
    "relative_log_values",
    "round_product_metric",
    "scale_metric",
    "transition_residual",
]
