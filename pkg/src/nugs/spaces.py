"""Reconstruction spaces on the unit interval and their orthonormal bases.

Five kinds are supported: complex exponentials (``trig``), algebraic
polynomials (``legendre``), piecewise polynomials on arbitrary knots
(``piecewise_poly``), splines of degree d on uniform cells (``spline``)
and piecewise constants (``piecewise_const``).

Every non-trig space is realized as per-cell coefficients in shifted,
normalized Legendre polynomials, which are orthonormal on each cell under
the plain L2 inner product.  This makes Gram matrices, derivatives and
Fourier transforms exact, and makes orthonormalization a plain QR in
coefficient space.  Cells are half-open ``[a, b)``.

The module also computes the two intrinsic growth constants of a space:
the worst-case derivative growth and the worst-case sup-norm growth of a
unit-norm member per cell, both of which are sharp (a generalized
eigenproblem and a reproducing-kernel maximum, not literature bounds).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .validation import check_positions

KINDS = ("trig", "legendre", "piecewise_poly", "spline", "piecewise_const")
_KNOT_SEPARATION = 1e-14


@dataclass(frozen=True)
class SpaceSpec:
    """Descriptor of a reconstruction space.

    Use the factory classmethods; the constructor is shared across kinds
    and not every field applies to every kind.
    """

    kind: str
    degree: int = 0                      # trig/legendre order, spline degree
    knots: tuple[float, ...] = ()        # interior knots (piecewise_poly)
    degrees: tuple[int, ...] = ()        # per-cell degrees (piecewise_poly)
    cells: int = 0                       # cell count (spline, piecewise_const)

    @classmethod
    def trig(cls, m: int) -> "SpaceSpec":
        return cls(kind="trig", degree=int(m))

    @classmethod
    def legendre(cls, m: int) -> "SpaceSpec":
        return cls(kind="legendre", degree=int(m))

    @classmethod
    def piecewise_poly(cls, knots, degrees) -> "SpaceSpec":
        return cls(kind="piecewise_poly", knots=tuple(float(w) for w in knots),
                   degrees=tuple(int(m) for m in degrees))

    @classmethod
    def spline(cls, d: int, l: int) -> "SpaceSpec":
        return cls(kind="spline", degree=int(d), cells=int(l))

    @classmethod
    def piecewise_const(cls, l: int) -> "SpaceSpec":
        return cls(kind="piecewise_const", cells=int(l))

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown space kind {self.kind!r}")
        if self.kind in ("trig", "legendre"):
            if self.degree < 0:
                raise ValueError("order must be nonnegative")
        elif self.kind == "piecewise_poly":
            w = self.knots
            if any(not (0.0 < t < 1.0) for t in w):
                raise ValueError("knots must lie strictly inside (0, 1)")
            if any(b - a < _KNOT_SEPARATION for a, b in zip(w, w[1:])):
                raise ValueError("knots must be separated by more than 1e-14")
            if len(self.degrees) != len(w) + 1:
                raise ValueError("need one degree per subinterval")
            if any(m < 0 for m in self.degrees):
                raise ValueError("degrees must be nonnegative")
        elif self.kind == "spline":
            if self.degree < 0 or self.cells < 1:
                raise ValueError("spline needs degree >= 0 and cells >= 1")
        else:
            if self.cells < 1:
                raise ValueError("piecewise_const needs cells >= 1")

    def to_json(self) -> str:
        d = {"kind": self.kind, "knots": list(self.knots),
             "degrees": list(self.degrees), "d": None, "l": None, "m": None}
        if self.kind in ("trig", "legendre"):
            d["m"] = self.degree
        elif self.kind == "spline":
            d["d"], d["l"] = self.degree, self.cells
        elif self.kind == "piecewise_const":
            d["l"] = self.cells
        return json.dumps(d)

    @classmethod
    def from_json(cls, text: str) -> "SpaceSpec":
        d = json.loads(text)
        kind = d["kind"]
        if kind in ("trig", "legendre"):
            return cls(kind=kind, degree=int(d["m"]))
        if kind == "spline":
            return cls(kind=kind, degree=int(d["d"]), cells=int(d["l"]))
        if kind == "piecewise_const":
            return cls(kind=kind, cells=int(d["l"]))
        return cls.piecewise_poly(d["knots"], d["degrees"])


@dataclass(frozen=True)
class GrowthConstants:
    """Sharp per-cell growth of unit-norm members of a space.

    derivative_growth : sup of ||f'|| over cells, unit cell norm (1/length).
    sup_growth        : sup of ||f||_inf over cells, unit cell norm.
    """

    derivative_growth: float
    sup_growth: float


def breakpoints(space: SpaceSpec) -> np.ndarray:
    """Cell boundaries of the space's partition of [0, 1]."""
    if space.kind == "piecewise_poly":
        return np.array((0.0, *space.knots, 1.0))
    if space.kind in ("spline", "piecewise_const"):
        return np.linspace(0.0, 1.0, space.cells + 1)
    return np.array((0.0, 1.0))


def min_spacing(space: SpaceSpec) -> float:
    """Smallest cell width of the partition (1.0 for knot-free kinds)."""
    return float(np.min(np.diff(breakpoints(space))))


def dimension(space: SpaceSpec) -> int:
    if space.kind == "trig":
        return 2 * space.degree + 1
    if space.kind == "legendre":
        return space.degree + 1
    if space.kind == "piecewise_poly":
        return sum(m + 1 for m in space.degrees)
    if space.kind == "spline":
        return space.cells + space.degree
    return space.cells


@dataclass(frozen=True)
class OrthoBasis:
    """Orthonormal basis realization of a space.

    For polynomial kinds, ``coeffs[i, j, n]`` holds the coefficient of the
    n-th normalized shifted Legendre polynomial on cell j in basis function
    i.  For ``trig`` the basis is the exponentials with integer orders.
    """

    space: SpaceSpec
    breaks: np.ndarray
    coeffs: np.ndarray | None = None      # (dim, n_cells, p)
    orders: np.ndarray | None = None      # (dim,) for trig

    @property
    def dim(self) -> int:
        return len(self.orders) if self.orders is not None else self.coeffs.shape[0]

    @property
    def local_dim(self) -> int:
        return 0 if self.coeffs is None else self.coeffs.shape[2]


def legendre_values(p: int, t: np.ndarray) -> np.ndarray:
    """P_0..P_{p-1} at points t in [-1, 1], shape (p, len(t))."""
    t = np.asarray(t, dtype=float)
    out = np.empty((p, t.size))
    if p > 0:
        out[0] = 1.0
    if p > 1:
        out[1] = t
    for n in range(1, p - 1):
        out[n + 1] = ((2 * n + 1) * t * out[n] - n * out[n - 1]) / (n + 1)
    return out


@lru_cache(maxsize=256)
def _deriv_matrix_unit(p: int) -> np.ndarray:
    """Derivative map in normalized-Legendre coordinates on a unit cell."""
    d = np.zeros((p, p))
    for n in range(p):
        for k in range((n + 1) % 2, n, 2):  # k < n with n - k odd
            d[k, n] = 2.0 * math.sqrt((2 * n + 1) * (2 * k + 1))
    return d


def deriv_matrix(p: int, h: float) -> np.ndarray:
    """Map local coefficients of a polynomial to those of its derivative."""
    return _deriv_matrix_unit(p) / h


def _bspline_all_values(d: int, l: int, x: np.ndarray) -> np.ndarray:
    """Values of all l+d clamped uniform B-splines of degree d, (l+d, len(x))."""
    tau = np.concatenate((np.zeros(d + 1), np.arange(1, l) / l, np.ones(d + 1)))
    nfun = len(tau) - 1
    vals = np.zeros((nfun, x.size))
    idx = np.clip(np.searchsorted(tau, x, side="right") - 1, 0, nfun - 1)
    vals[idx, np.arange(x.size)] = 1.0
    for r in range(1, d + 1):
        new = np.zeros((nfun - r, x.size))
        for i in range(nfun - r):
            den1 = tau[i + r] - tau[i]
            den2 = tau[i + r + 1] - tau[i + 1]
            if den1 > 0:
                new[i] += (x - tau[i]) / den1 * vals[i]
            if den2 > 0:
                new[i] += (tau[i + r + 1] - x) / den2 * vals[i + 1]
        vals = new
    return vals[: l + d]


@lru_cache(maxsize=64)
def _bspline_cell_coeffs(d: int, l: int) -> np.ndarray:
    """Raw B-spline coefficients in the per-cell Legendre frame, (l+d, l, d+1)."""
    p = d + 1
    gx, gw = np.polynomial.legendre.leggauss(p)
    breaks = np.linspace(0.0, 1.0, l + 1)
    h = 1.0 / l
    # Gauss nodes for every cell at once
    mids = (breaks[:-1] + breaks[1:]) / 2
    nodes = mids[:, None] + (h / 2) * gx[None, :]          # (l, p)
    bvals = _bspline_all_values(d, l, nodes.ravel()).reshape(l + d, l, p)
    t = 2 * (nodes - breaks[:-1, None]) / h - 1            # (l, p)
    norm = np.sqrt((2 * np.arange(p) + 1) / h)
    leg = legendre_values(p, t.ravel()).reshape(p, l, p)   # (n, cell, node)
    phi = leg * norm[:, None, None]
    # coeff[i, j, n] = sum_q w_q * B_i(x_jq) * phi_n(x_jq), w_q = gw * h/2
    coeff = np.einsum("ijq,njq,q->ijn", bvals, phi, gw * h / 2)
    coeff.setflags(write=False)
    return coeff


def build_basis(space: SpaceSpec) -> OrthoBasis:
    """Construct the canonical orthonormal basis of a space.

    Piecewise-polynomial kinds are exactly orthonormal by construction;
    splines start from the B-spline basis and are orthonormalized by QR in
    the (isometric) local Legendre coordinates.
    """
    breaks = breakpoints(space)
    if np.min(np.diff(breaks)) < _KNOT_SEPARATION:
        raise ValueError("cells narrower than 1e-14 are not representable")
    if space.kind == "trig":
        m = space.degree
        return OrthoBasis(space, breaks, orders=np.arange(-m, m + 1))
    if space.kind == "legendre":
        p = space.degree + 1
        coeffs = np.eye(p)[:, None, :]
    elif space.kind == "piecewise_const":
        l = space.cells
        coeffs = np.eye(l)[:, :, None]
    elif space.kind == "piecewise_poly":
        p = max(space.degrees) + 1
        ncell = len(space.degrees)
        coeffs = np.zeros((dimension(space), ncell, p))
        row = 0
        for j, mj in enumerate(space.degrees):
            for n in range(mj + 1):
                coeffs[row, j, n] = 1.0
                row += 1
    else:
        raw = _bspline_cell_coeffs(space.degree, space.cells)
        nb = raw.shape[0]
        q, _ = np.linalg.qr(raw.reshape(nb, -1).T)
        # fix signs so the realization is deterministic
        lead = np.argmax(np.abs(q), axis=0)
        signs = np.sign(q[lead, np.arange(nb)])
        signs[signs == 0] = 1.0
        coeffs = (q * signs).T.reshape(raw.shape)
    c = np.ascontiguousarray(coeffs)
    c.setflags(write=False)
    return OrthoBasis(space, breaks, coeffs=c)


def evaluate(basis: OrthoBasis, x) -> np.ndarray:
    """Basis values at positions in [0, 1); shape (dim,) or (dim, len(x))."""
    scalar = np.isscalar(x) or np.ndim(x) == 0
    xs = check_positions(x)
    if basis.orders is not None:
        out = np.exp(2j * np.pi * basis.orders[:, None] * xs[None, :])
    else:
        breaks, coeffs = basis.breaks, basis.coeffs
        dim, ncell, p = coeffs.shape
        out = np.zeros((dim, xs.size))
        idx = np.clip(np.searchsorted(breaks, xs, side="right") - 1, 0, ncell - 1)
        for j in np.unique(idx):
            sel = idx == j
            a, b = breaks[j], breaks[j + 1]
            h = b - a
            t = 2 * (xs[sel] - a) / h - 1
            phi = legendre_values(p, t) * np.sqrt((2 * np.arange(p) + 1) / h)[:, None]
            out[:, sel] = coeffs[:, j, :] @ phi
    return out[:, 0] if scalar else out


def _restriction_frame(basis: OrthoBasis, j: int, rtol: float = 1e-12):
    """Orthonormal coefficient frame of the space restricted to cell j.

    Returns (w, h) where the columns of w are local coefficient vectors of
    an orthonormal basis of the restriction, or None when every basis
    function vanishes on the cell.
    """
    bj = basis.coeffs[:, j, :]
    s = np.linalg.svd(bj, compute_uv=False)
    if s.size == 0 or s[0] <= 0.0:
        return None
    rank = int(np.sum(s > rtol * s[0]))
    if rank == 0:
        return None
    _, _, vh = np.linalg.svd(bj, full_matrices=False)
    return vh[:rank].T


def derivative_growth(space: SpaceSpec) -> float:
    """Largest ||f'|| over cells among unit-cell-norm members of the space.

    Computed per cell as the largest generalized eigenvalue of the
    derivative Gram against the restriction Gram; both are exact in the
    Legendre coefficient frame.  The trig derivative Gram is diagonal, so
    that case is closed-form.
    """
    if space.kind == "trig":
        return 2.0 * np.pi * space.degree
    basis = build_basis(space)
    p = basis.local_dim
    best = 0.0
    for j in range(len(basis.breaks) - 1):
        w = _restriction_frame(basis, j)
        if w is None:
            continue
        h = basis.breaks[j + 1] - basis.breaks[j]
        smax = np.linalg.svd(deriv_matrix(p, h) @ w, compute_uv=False)
        if smax.size:
            best = max(best, float(smax[0]))
    return best


def _golden_max(f, lo: float, hi: float, xtol: float = 1e-10) -> float:
    """Golden-section maximum of a unimodal-enough scalar function."""
    inv = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - inv * (b - a)
    d = a + inv * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = f(d)
    return max(f(a), f(b), fc, fd)


def sup_growth(space: SpaceSpec) -> float:
    """Largest sup-norm over cells among unit-cell-norm members.

    Uses the reproducing-kernel identity: with an orthonormal basis of the
    restriction, the squared sup equals the maximum of the kernel diagonal,
    which is searched on a Chebyshev grid with golden-section refinement.
    """
    if space.kind == "trig":
        # kernel diagonal is constant by translation invariance
        return math.sqrt(2 * space.degree + 1)
    basis = build_basis(space)
    p = basis.local_dim
    norm = np.sqrt(2 * np.arange(p) + 1)
    best = 0.0
    for j in range(len(basis.breaks) - 1):
        w = _restriction_frame(basis, j)
        if w is None:
            continue
        a, b = basis.breaks[j], basis.breaks[j + 1]
        h = b - a

        def kernel(x):
            t = np.atleast_1d(2 * (np.asarray(x) - a) / h - 1)
            phi = legendre_values(p, t) * (norm / math.sqrt(h))[:, None]
            return np.sum((w.T @ phi) ** 2, axis=0)

        grid = (a + b) / 2 + (h / 2) * np.cos(np.pi * np.arange(64) / 63.0)
        vals = kernel(grid)
        i = int(np.argmax(vals))
        lo = grid[min(i + 1, 63)]   # grid is descending in x
        hi = grid[max(i - 1, 0)]
        peak = _golden_max(lambda x: float(kernel(x)[0]), lo, hi)
        best = max(best, peak)
    return math.sqrt(best)


def growth_constants(space: SpaceSpec) -> GrowthConstants:
    return GrowthConstants(derivative_growth(space), sup_growth(space))
