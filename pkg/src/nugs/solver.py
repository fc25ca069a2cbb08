"""Weighted least-squares reconstruction and computable frame constants.

The reconstruction minimizes ``sum_n mu_n |b_n - (A a)_n|^2`` where
``A[n, i]`` is the transform of basis function i at frequency n.  The
solve factorizes ``diag(sqrt(mu)) A`` by SVD (an orthogonal factorization;
normal equations are never formed), which also yields the conditioning
diagnostics and degrades gracefully at near rank deficiency.

The lower frame constant is the smallest eigenvalue of the weighted Gram,
equal to the squared smallest singular value of the scaled matrix.  The
upper constant is not computable from finitely many evaluations, so the
density-based bound ``(1 + delta)^2`` is reported and the stability ratio
is ``(1 + delta) / sqrt(lower)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import fourier, sampling
from .errors import UnstableReconstructionError
from .fourier import FourierData
from .sampling import SampleSet
from .spaces import OrthoBasis, SpaceSpec


@dataclass(frozen=True)
class Reconstruction:
    """Coefficients in the space's orthonormal basis plus diagnostics.

    ``residual`` is the square root of the minimized weighted misfit;
    ``sigma_min``/``sigma_max`` are the extreme singular values of the
    scaled design matrix.
    """

    space: SpaceSpec
    coefficients: np.ndarray
    residual: float
    sigma_min: float
    sigma_max: float

    def to_json(self) -> str:
        return json.dumps({
            "space": json.loads(self.space.to_json()),
            "coefficients": [[c.real, c.imag] for c in self.coefficients],
            "residual": self.residual,
            "sigma_min": self.sigma_min,
            "sigma_max": self.sigma_max,
        })

    @classmethod
    def from_json(cls, text: str) -> "Reconstruction":
        d = json.loads(text)
        coeffs = np.array([complex(re, im) for re, im in d["coefficients"]])
        return cls(space=SpaceSpec.from_json(json.dumps(d["space"])),
                   coefficients=coeffs, residual=float(d["residual"]),
                   sigma_min=float(d["sigma_min"]), sigma_max=float(d["sigma_max"]))


@dataclass(frozen=True)
class FrameConstants:
    """Computable stability quantities of a (samples, space) pair.

    lower        : sharp lower frame constant (can be 0).
    upper_bound  : density bound (1 + delta)^2 on the upper constant.
    ratio        : (1 + delta) / sqrt(lower); +inf when lower is 0.
    density      : largest ghost-padded gap delta of the sample set.
    implied_tail : the margin eps with (1+delta)/(1-eps-delta) = ratio,
                   or None when it falls outside (0, 1 - delta).
    """

    lower: float
    upper_bound: float
    ratio: float
    density: float
    implied_tail: float | None

    def to_json(self) -> str:
        return json.dumps({"lower": self.lower, "upper_bound": self.upper_bound,
                           "ratio": self.ratio, "density": self.density,
                           "implied_tail": self.implied_tail})


def design_matrix(basis: OrthoBasis, s: SampleSet) -> np.ndarray:
    """Matrix of basis transforms at the sample frequencies, (N, dim)."""
    return fourier.basis_transform(basis, s.points)


def _scaled_svd(basis: OrthoBasis, s: SampleSet, weights=None):
    mu = sampling.weights(s) if weights is None else np.asarray(weights, dtype=float)
    a = design_matrix(basis, s)
    b = np.sqrt(mu)[:, None] * a
    u, sig, vh = np.linalg.svd(b, full_matrices=False)
    return a, mu, u, sig, vh


def reconstruct(basis: OrthoBasis, data: FourierData, *,
                rank_rtol: float = 1e-12) -> Reconstruction:
    """Solve the weighted least-squares problem for the given data.

    Raises ``UnstableReconstructionError`` when the system is
    underdetermined or the scaled design matrix is numerically
    rank-deficient (lower frame constant is effectively zero).
    """
    n, dim = len(data.samples), basis.dim
    if n < dim:
        raise UnstableReconstructionError(
            f"underdetermined: {n} samples for dimension {dim}; "
            "increase bandwidth or shrink space")
    mu = data.weights
    a = design_matrix(basis, data.samples)
    b = np.sqrt(mu)[:, None] * a
    u, sig, vh = np.linalg.svd(b, full_matrices=False)
    if sig[0] == 0.0 or sig[-1] < rank_rtol * sig[0]:
        raise UnstableReconstructionError(
            "unstable: lower frame constant is numerically zero, "
            "increase bandwidth or shrink space")
    rhs = np.sqrt(mu) * data.values
    coeffs = vh.conj().T @ ((u.conj().T @ rhs) / sig)
    misfit = data.values - a @ coeffs
    residual = float(np.sqrt(np.sum(mu * np.abs(misfit) ** 2)))
    return Reconstruction(space=basis.space, coefficients=coeffs,
                          residual=residual, sigma_min=float(sig[-1]),
                          sigma_max=float(sig[0]))


def frame_lower(basis: OrthoBasis, s: SampleSet, weights=None) -> float:
    """Sharp lower frame constant: squared smallest singular value of the
    scaled design matrix (0 at exact rank deficiency)."""
    if len(s) < basis.dim:
        return 0.0
    _, _, _, sig, _ = _scaled_svd(basis, s, weights)
    return float(sig[-1] ** 2)


def stability_constant(basis: OrthoBasis, s: SampleSet) -> FrameConstants:
    """Frame constants and the density-based stability ratio."""
    delta = sampling.density(s)
    lower = frame_lower(basis, s)
    upper = (1.0 + delta) ** 2
    ratio = (1.0 + delta) / np.sqrt(lower) if lower > 0 else float("inf")
    implied = None
    if np.isfinite(ratio):
        eps = 1.0 - delta - (1.0 + delta) / ratio
        if 0.0 < eps < 1.0 - delta:
            implied = float(eps)
    return FrameConstants(lower=lower, upper_bound=upper, ratio=float(ratio),
                          density=delta, implied_tail=implied)
