from .grid import GridChart, PatchChart
from .metric import (
    ComplexMetricField,
    DegenerateChartError,
    DegenerateMetricError,
    bers_from_quadratic_perturbation,
    fuchsian_flat,
    metric_from_lambda_w,
    poincare_patch_metric,
)
from .operators import (
    bers_laplacian_apply,
    del_J,
    del_ops,
    delbar_J,
    dbar_del_two_form,
    directional_D,
    gauss_curvature_defect,
    project_forms,
)

__all__ = [
    "GridChart",
    "PatchChart",
    "ComplexMetricField",
    "DegenerateChartError",
    "DegenerateMetricError",
    "bers_from_quadratic_perturbation",
    "fuchsian_flat",
    "metric_from_lambda_w",
    "poincare_patch_metric",
    "bers_laplacian_apply",
    "del_J",
    "del_ops",
    "delbar_J",
    "dbar_del_two_form",
    "directional_D",
    "gauss_curvature_defect",
    "project_forms",
]
