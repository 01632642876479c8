"""Numerical verification of Hermitian metric families on Hopf and Calabi-Eckmann manifolds."""

from .charts import (AmbientPoint, ChartPoint, Family, ManifoldSpec, calabi_eckmann, chart_coords,
                     chart_transition, embed, hopf, sample_points)
from .errors import (GeometryError, ModeCapExceeded, NotNormal, OutsideChart, OutsideOverlap,
                     PreconditionViolated, SingularMetric, StepTooLarge)
from .metrics import hermitian_metric, real_metric

__all__ = [
    "AmbientPoint", "ChartPoint", "Family", "ManifoldSpec", "calabi_eckmann", "chart_coords",
    "chart_transition", "embed", "hopf", "sample_points",
    "GeometryError", "ModeCapExceeded", "NotNormal", "OutsideChart", "OutsideOverlap",
    "PreconditionViolated", "SingularMetric", "StepTooLarge",
    "hermitian_metric", "real_metric",
]
