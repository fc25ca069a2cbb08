"""Estimator-style interface to the reconstruction pipeline.

``NonuniformFourierRegressor`` follows the scikit-learn contract
(``fit``/``predict``/``get_params``/``set_params``) without importing
scikit-learn: parameters are constructor keywords stored verbatim, fitted
state lives in trailing-underscore attributes, and inputs are validated by
the helpers in :mod:`nugs.validation`.  ``fit`` consumes transform samples
(frequencies and complex values); ``predict`` evaluates the reconstructed
function at positions in [0, 1).
"""

from __future__ import annotations

import numpy as np

from . import fourier, sampling, solver, spaces
from .fourier import FourierData
from .sampling import SampleSet
from .spaces import SpaceSpec
from .validation import as_complex_array, as_float_array, check_positions, check_same_length

_PARAM_NAMES = ("space", "bandwidth", "rank_rtol")


def parse_space(text: str) -> SpaceSpec:
    """Parse the compact space syntax used by the CLI and the estimator.

    ``trig:M``, ``legendre:M``, ``piecewise_const:L``, ``spline:D:L`` and
    ``piecewise_poly:w1,w2,...:m0,m1,...``.
    """
    parts = text.strip().split(":")
    kind = parts[0]
    try:
        if kind == "trig" and len(parts) == 2:
            return SpaceSpec.trig(int(parts[1]))
        if kind == "legendre" and len(parts) == 2:
            return SpaceSpec.legendre(int(parts[1]))
        if kind == "piecewise_const" and len(parts) == 2:
            return SpaceSpec.piecewise_const(int(parts[1]))
        if kind == "spline" and len(parts) == 3:
            return SpaceSpec.spline(int(parts[1]), int(parts[2]))
        if kind == "piecewise_poly" and len(parts) == 3:
            knots = [float(t) for t in parts[1].split(",") if t]
            degs = [int(t) for t in parts[2].split(",")]
            return SpaceSpec.piecewise_poly(knots, degs)
    except ValueError as exc:
        raise ValueError(f"bad space spec {text!r}: {exc}") from None
    raise ValueError(f"bad space spec {text!r}")


class NonuniformFourierRegressor:
    """Weighted least-squares function recovery from transform samples.

    Parameters
    ----------
    space : str or SpaceSpec
        Reconstruction space, e.g. ``"legendre:8"`` or ``SpaceSpec.trig(5)``.
    bandwidth : float or None
        Declared band half-width K; ``None`` uses the largest sampled
        frequency magnitude.
    rank_rtol : float
        Relative singular-value cutoff for declaring the problem unstable.

    Attributes (after ``fit``)
    --------------------------
    coef_ : complex ndarray, coefficients in the orthonormal basis.
    density_, frame_lower_, stability_ratio_ : sampling diagnostics.
    sigma_min_, sigma_max_, residual_ : solve diagnostics.
    """

    def __init__(self, space="legendre:8", bandwidth=None, rank_rtol=1e-12):
        self.space = space
        self.bandwidth = bandwidth
        self.rank_rtol = rank_rtol

    # -- sklearn plumbing ---------------------------------------------------

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in _PARAM_NAMES}

    def set_params(self, **params) -> "NonuniformFourierRegressor":
        for name, value in params.items():
            if name not in _PARAM_NAMES:
                raise ValueError(f"unknown parameter {name!r}")
            setattr(self, name, value)
        return self

    # -- fitting ------------------------------------------------------------

    def _space_spec(self) -> SpaceSpec:
        return parse_space(self.space) if isinstance(self.space, str) else self.space

    def fit(self, X, y, sample_weight=None) -> "NonuniformFourierRegressor":
        """Fit to frequencies ``X`` (shape (n,) or (n, 1)) and complex values ``y``."""
        omega = as_float_array(X, "X")
        values = as_complex_array(y, "y")
        check_same_length(omega, values, "X", "y")
        order = np.argsort(omega)
        omega, values = omega[order], values[order]
        k = self.bandwidth if self.bandwidth is not None else float(np.max(np.abs(omega)))
        s = SampleSet(points=omega, bandwidth=k)
        if sample_weight is None:
            mu = sampling.weights(s)
        else:
            mu = as_float_array(sample_weight, "sample_weight")[order]
            check_same_length(omega, mu, "X", "sample_weight")
        basis = fourier.cached_basis(self._space_spec())
        rec = solver.reconstruct(basis, FourierData(s, values, mu),
                                 rank_rtol=self.rank_rtol)
        self.basis_ = basis
        self.coef_ = rec.coefficients
        self.residual_ = rec.residual
        self.sigma_min_ = rec.sigma_min
        self.sigma_max_ = rec.sigma_max
        self.density_ = sampling.density(s)
        self.frame_lower_ = rec.sigma_min**2
        self.stability_ratio_ = (1.0 + self.density_) / rec.sigma_min
        self.n_features_in_ = 1
        return self

    def predict(self, X) -> np.ndarray:
        """Reconstructed function values at positions in [0, 1)."""
        if not hasattr(self, "coef_"):
            raise ValueError("estimator is not fitted; call fit first")
        xs = check_positions(np.asarray(X, dtype=float).ravel(), "X")
        return self.coef_ @ spaces.evaluate(self.basis_, xs)

    def score(self, X, y) -> float:
        """1 minus the relative squared data misfit at the given samples."""
        yv = as_complex_array(y, "y")
        pred = fourier.basis_transform(self.basis_, as_float_array(X, "X")) @ self.coef_
        denom = float(np.sum(np.abs(yv - np.mean(yv)) ** 2))
        if denom == 0.0:
            return 0.0
        return 1.0 - float(np.sum(np.abs(yv - pred) ** 2)) / denom
