"""Fourier transforms of basis and test functions at arbitrary frequencies.

The transform convention is ``F(w) = int_0^1 f(x) exp(-2 pi i w x) dx``.

For the polynomial kinds every basis function is a per-cell Legendre
polynomial, whose transform has the closed form

    int_a^b phi_n(x) exp(-2 pi i w x) dx
        = sqrt((2n+1) h) * exp(-pi i w (a+b)) * (-i)^n * j_n(pi w h)

with h = b - a and j_n the spherical Bessel function (odd/even in w, so
negative frequencies follow by parity).  Quadrature is used only for
user-supplied functions and as a cross-check oracle in the tests.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import spherical_jn

from . import sampling, spaces
from .errors import QuadratureError
from .quadrature import gauss_rule, panel_edges, panel_nodes
from .sampling import SampleSet
from .spaces import OrthoBasis, SpaceSpec
from .validation import as_complex_array, check_same_length

_TWO_PI = 2.0 * np.pi


# ---------------------------------------------------------------------------
# test functions


@dataclass(frozen=True)
class FunctionSpec:
    """A square-integrable function on (0, 1).

    Either a closure-free expression tree over {x, const, +, -, *, neg,
    pow, sin, cos, exp} or a member of a reconstruction space given by its
    coefficients.  ``jumps`` lists interior discontinuity locations so that
    quadrature panels never straddle one.
    """

    kind: str                                   # "expr" | "coeffs"
    expr: tuple = ()
    space: SpaceSpec | None = None
    coefficients: tuple = ()
    jumps: tuple[float, ...] = ()

    @classmethod
    def from_expr(cls, expr, jumps=()) -> "FunctionSpec":
        return cls(kind="expr", expr=_as_tuple_tree(expr),
                   jumps=tuple(float(t) for t in jumps))

    @classmethod
    def from_coefficients(cls, space: SpaceSpec, coefficients) -> "FunctionSpec":
        coeffs = tuple(complex(c) for c in np.asarray(coefficients).ravel())
        if len(coeffs) != spaces.dimension(space):
            raise ValueError("coefficient count must match the space dimension")
        jumps = tuple(float(t) for t in spaces.breakpoints(space)[1:-1])
        return cls(kind="coeffs", space=space, coefficients=coeffs, jumps=jumps)

    @classmethod
    def benchmark(cls) -> "FunctionSpec":
        """The built-in smooth benchmark x^2 + x sin(4 pi x) - e^{x/2} cos(3 pi x)^2."""
        x = ("x",)
        expr = ("sub",
                ("add", ("pow", x, 2),
                 ("mul", x, ("sin", ("mul", ("const", 4 * np.pi), x)))),
                ("mul", ("exp", ("mul", ("const", 0.5), x)),
                 ("pow", ("cos", ("mul", ("const", 3 * np.pi), x)), 2)))
        return cls(kind="expr", expr=expr)

    def to_json(self) -> str:
        if self.kind == "expr":
            return json.dumps({"kind": "expr", "expr": _tree_to_json(self.expr),
                               "jumps": list(self.jumps)})
        return json.dumps({"kind": "coeffs", "space": json.loads(self.space.to_json()),
                           "coefficients": [[c.real, c.imag] for c in self.coefficients]})

    @classmethod
    def from_json(cls, text: str) -> "FunctionSpec":
        d = json.loads(text)
        if d["kind"] == "expr":
            return cls.from_expr(d["expr"], d.get("jumps", ()))
        space = SpaceSpec.from_json(json.dumps(d["space"]))
        coeffs = [complex(re, im) for re, im in d["coefficients"]]
        return cls.from_coefficients(space, coeffs)


def _as_tuple_tree(node):
    if isinstance(node, (list, tuple)):
        return tuple(_as_tuple_tree(c) if isinstance(c, (list, tuple)) else c
                     for c in node)
    raise ValueError(f"malformed expression node {node!r}")


def _tree_to_json(node):
    return [(_tree_to_json(c) if isinstance(c, tuple) else c) for c in node]


def _eval_expr(node, x):
    op = node[0]
    if op == "x":
        return x
    if op == "const":
        return np.full_like(x, float(node[1]))
    if op == "add":
        return _eval_expr(node[1], x) + _eval_expr(node[2], x)
    if op == "sub":
        return _eval_expr(node[1], x) - _eval_expr(node[2], x)
    if op == "mul":
        return _eval_expr(node[1], x) * _eval_expr(node[2], x)
    if op == "neg":
        return -_eval_expr(node[1], x)
    if op == "pow":
        return _eval_expr(node[1], x) ** int(node[2])
    if op == "sin":
        return np.sin(_eval_expr(node[1], x))
    if op == "cos":
        return np.cos(_eval_expr(node[1], x))
    if op == "exp":
        return np.exp(_eval_expr(node[1], x))
    raise ValueError(f"unknown expression op {op!r}")


@lru_cache(maxsize=128)
def cached_basis(space: SpaceSpec) -> OrthoBasis:
    return spaces.build_basis(space)


def evaluate_function(f: FunctionSpec, x) -> np.ndarray:
    """Pointwise values of a function spec (complex for coefficient members)."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if f.kind == "expr":
        return _eval_expr(f.expr, xs)
    basis = cached_basis(f.space)
    return np.asarray(f.coefficients) @ spaces.evaluate(basis, xs)


# ---------------------------------------------------------------------------
# closed-form transforms


def interval_exponential(a: float, b: float, omega) -> complex | np.ndarray:
    """Transform of the indicator of [a, b): (b-a) e^{-pi i w (a+b)} sinc(w (b-a))."""
    if not a < b:
        raise ValueError("need a < b")
    w = np.asarray(omega, dtype=float)
    out = (b - a) * np.exp(-1j * np.pi * w * (a + b)) * np.sinc(w * (b - a))
    return out if out.ndim else complex(out)


def cell_transforms(breaks: np.ndarray, p: int, omegas: np.ndarray) -> np.ndarray:
    """Transforms of every normalized cell-Legendre function, (n_w, n_cell, p)."""
    w = np.asarray(omegas, dtype=float)
    a, b = breaks[:-1], breaks[1:]
    h = b - a
    z = np.pi * np.abs(w)[:, None] * h[None, :]
    phase = np.exp(-1j * np.pi * w[:, None] * (a + b)[None, :])
    sign = np.where(w >= 0, -1j, 1j)[:, None]
    out = np.empty((w.size, h.size, p), dtype=complex)
    for n in range(p):
        out[:, :, n] = (math.sqrt(2 * n + 1) * np.sqrt(h)[None, :]
                        * phase * sign**n * spherical_jn(n, z))
    return out


def basis_transform(basis: OrthoBasis, omega) -> np.ndarray:
    """Transforms of all basis functions; shape (dim,) or (n_w, dim)."""
    scalar = np.isscalar(omega) or np.ndim(omega) == 0
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    if basis.orders is not None:
        diff = w[:, None] - basis.orders[None, :]
        out = np.exp(-1j * np.pi * diff) * np.sinc(diff)
    else:
        out = np.empty((w.size, basis.dim), dtype=complex)
        p = basis.local_dim
        for lo in range(0, w.size, 512):
            chunk = slice(lo, min(lo + 512, w.size))
            t = cell_transforms(basis.breaks, p, w[chunk])
            out[chunk] = np.einsum("wjn,djn->wd", t, basis.coeffs)
    return out[0] if scalar else out


# ---------------------------------------------------------------------------
# quadrature transforms of arbitrary functions


@dataclass(frozen=True)
class FourierData:
    """Complex transform samples paired with their frequencies and weights."""

    samples: SampleSet
    values: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        vals = as_complex_array(self.values, "values")
        wts = np.asarray(self.weights, dtype=float)
        check_same_length(self.samples.points, vals, "samples", "values")
        check_same_length(self.samples.points, wts, "samples", "weights")
        vals.setflags(write=False)
        wts.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "weights", wts)


def transform_integrals(f: FunctionSpec, omegas, abs_tol: float = 1e-12,
                        nodes: int = 16) -> np.ndarray:
    """Quadrature values of F(w) on an arbitrary frequency list.

    One composite panel grid (split at jumps, panel width at most
    1/(4 max|w| + 1)) is shared by all frequencies so the function is
    evaluated once; convergence is certified per frequency by comparison
    with the halved grid, and stragglers are refined individually.
    """
    w = np.atleast_1d(np.asarray(omegas, dtype=float))
    wmax = float(np.max(np.abs(w))) if w.size else 0.0
    width = 1.0 / (4.0 * wmax + 1.0)
    vals = _batched_oscillatory(f, w, width, nodes)
    ref = _batched_oscillatory(f, w, width / 2.0, nodes)
    bad = np.abs(ref - vals) > abs_tol
    out = ref
    for i in np.nonzero(bad)[0]:
        out[i] = _refine_single(f, float(w[i]), width / 4.0, nodes, abs_tol)
    return out


def _batched_oscillatory(f: FunctionSpec, w: np.ndarray, width: float,
                         nodes: int) -> np.ndarray:
    edges = panel_edges(0.0, 1.0, f.jumps, width)
    xs, ws = panel_nodes(edges, nodes)
    fw = evaluate_function(f, xs) * ws
    out = np.empty(w.size, dtype=complex)
    chunk = max(1, int(2e6 // max(xs.size, 1)))
    for lo in range(0, w.size, chunk):
        sel = slice(lo, min(lo + chunk, w.size))
        out[sel] = np.exp(-2j * np.pi * w[sel, None] * xs[None, :]) @ fw
    return out


def _refine_single(f: FunctionSpec, omega: float, width: float, nodes: int,
                   abs_tol: float, max_rounds: int = 10) -> complex:
    prev = None
    for _ in range(max_rounds):
        edges = panel_edges(0.0, 1.0, f.jumps, width)
        xs, ws = panel_nodes(edges, nodes)
        val = complex(np.exp(-2j * np.pi * omega * xs) @ (evaluate_function(f, xs) * ws))
        if prev is not None and abs(val - prev) <= abs_tol:
            return val
        prev = val
        width /= 2.0
    raise QuadratureError(
        f"transform quadrature did not converge at frequency {omega:g}")


def sample_function(f: FunctionSpec, s: SampleSet, abs_tol: float = 1e-12) -> FourierData:
    """Transform samples of ``f`` on a sample set, with midpoint weights attached."""
    values = transform_integrals(f, s.points, abs_tol=abs_tol)
    return FourierData(samples=s, values=values, weights=sampling.weights(s))


def project(f: FunctionSpec, basis: OrthoBasis, abs_tol: float = 1e-12) -> np.ndarray:
    """Coefficients of the orthogonal projection of ``f`` onto the space."""
    if basis.orders is not None:
        # projection coefficients are transform values at the integer orders
        return transform_integrals(f, basis.orders.astype(float), abs_tol=abs_tol)
    cuts = sorted(set(f.jumps) | set(basis.breaks[1:-1]))
    nodes = max(24, basis.local_dim + 8)
    coeffs = None
    width = 0.25
    for _ in range(8):
        edges = panel_edges(0.0, 1.0, cuts, width)
        xs, ws = panel_nodes(edges, nodes)
        vals = evaluate_function(f, xs) * ws
        new = spaces.evaluate(basis, xs) @ vals
        if coeffs is not None and np.max(np.abs(new - coeffs)) <= abs_tol:
            return new
        coeffs = new
        width /= 2.0
    raise QuadratureError("projection quadrature did not converge")


def l2_error(f: FunctionSpec, coefficients, basis: OrthoBasis,
             tol: float = 1e-10) -> float:
    """L2 distance on (0, 1) between ``f`` and a coefficient vector.

    Panels honor both the function's jumps and the basis cells; refinement
    stops when the returned norm is stable to ``tol``.
    """
    coeffs = np.asarray(coefficients, dtype=complex)
    cuts = sorted(set(f.jumps) | set(basis.breaks[1:-1]))
    nodes = max(24, basis.local_dim + 8)

    def integrand(xs):
        g = coeffs @ spaces.evaluate(basis, xs)
        return np.abs(evaluate_function(f, xs) - g) ** 2

    width = 0.125
    prev = None
    for _ in range(8):
        edges = panel_edges(0.0, 1.0, cuts, width)
        xs, ws = panel_nodes(edges, nodes)
        val = math.sqrt(max(float(ws @ integrand(xs)), 0.0))
        if prev is not None and abs(val - prev) <= tol * max(1.0, val):
            return val
        prev = val
        width /= 2.0
    raise QuadratureError("error-norm quadrature did not converge")


def function_norm(f: FunctionSpec, tol: float = 1e-10) -> float:
    """L2 norm of a function spec on (0, 1)."""
    space = SpaceSpec.piecewise_const(1)
    return l2_error(f, np.zeros(1), cached_basis(space), tol=tol)


# ---------------------------------------------------------------------------
# CSV exchange


def save_data_csv(path, data: FourierData) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("omega,re,im,weight\n")
        for w, v, mu in zip(data.samples.points, data.values, data.weights):
            fh.write(f"{float(w)!r},{float(v.real)!r},{float(v.imag)!r},{float(mu)!r}\n")


def load_data_csv(path, bandwidth: float | None = None) -> tuple[FourierData, bool]:
    """Read ``omega,re,im[,weight]`` rows.

    Returns the data and a flag telling whether weights came from the file;
    when the column is absent they are computed from the points.
    """
    omegas, vals, wts = [], [], []
    with open(path, encoding="utf-8") as fh:
        header = [c.strip() for c in fh.readline().strip().split(",")]
        if header[:3] != ["omega", "re", "im"]:
            raise ValueError(f"{path}: expected header omega,re,im[,weight]")
        has_w = len(header) > 3 and header[3] == "weight"
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != (4 if has_w else 3):
                raise ValueError(f"{path}:{lineno}: expected "
                                 f"{4 if has_w else 3} fields, got {len(parts)}")
            try:
                row = [float(p) for p in parts]
            except ValueError:
                raise ValueError(f"{path}:{lineno}: malformed number") from None
            omegas.append(row[0])
            vals.append(complex(row[1], row[2]))
            if has_w:
                wts.append(row[3])
    order = np.argsort(omegas)
    pts = np.asarray(omegas)[order]
    if bandwidth is None:
        bandwidth = float(np.max(np.abs(pts)))
    s = SampleSet(points=pts, bandwidth=bandwidth)
    values = np.asarray(vals)[order]
    weights = np.asarray(wts)[order] if has_w else sampling.weights(s)
    return FourierData(samples=s, values=values, weights=weights), has_w
