"""Reconstruction of piecewise-smooth functions from nonuniform Fourier
samples by weighted least squares, with computable stability diagnostics:
frame constants, out-of-band residuals, subspace gaps and growth constants.
"""

from .analysis import (GapReport, ResidualCurve, TriangleReport, gap, residual,
                       residual_curve, verify_gap_bound, verify_triangle_bound)
from .errors import (BandwidthTooSmallError, NugsError, QuadratureError,
                     UnstableReconstructionError)
from .estimator import NonuniformFourierRegressor, parse_space
from .experiments import (ErrorRow, ScalingRow, error_curve, max_stable_dimension,
                          scaling_table)
from .fourier import (FourierData, FunctionSpec, basis_transform,
                      interval_exponential, l2_error, project, sample_function)
from .sampling import SampleSet, SchemeSpec, density, generate, weights
from .solver import (FrameConstants, Reconstruction, design_matrix, frame_lower,
                     reconstruct, stability_constant)
from .spaces import (GrowthConstants, OrthoBasis, SpaceSpec, build_basis,
                     derivative_growth, dimension, evaluate, growth_constants,
                     sup_growth)

__version__ = "0.1.0"

__all__ = [
    "BandwidthTooSmallError", "ErrorRow", "FourierData", "FrameConstants",
    "FunctionSpec", "GapReport", "GrowthConstants", "NonuniformFourierRegressor",
    "NugsError", "OrthoBasis", "QuadratureError", "Reconstruction", "ResidualCurve",
    "SampleSet", "ScalingRow", "SchemeSpec", "SpaceSpec", "TriangleReport",
    "UnstableReconstructionError", "basis_transform", "build_basis", "density",
    "derivative_growth", "design_matrix", "dimension", "error_curve", "evaluate",
    "frame_lower", "gap", "generate", "growth_constants", "interval_exponential",
    "l2_error", "max_stable_dimension", "parse_space", "project", "reconstruct",
    "residual", "residual_curve", "sample_function", "scaling_table",
    "stability_constant", "sup_growth", "verify_gap_bound",
    "verify_triangle_bound", "weights",
]
