"""Nonuniform frequency sets: generation, density and compensation weights.

A sample set is a strictly increasing sequence of real frequencies inside
the band [-K, K].  Density and weights both use the wrap-around ghost
points ``w_0 = w_N - 2K`` and ``w_{N+1} = w_1 + 2K``, which makes the
weights telescope to exactly 2K.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .prng import SplitMix64
from .validation import as_float_array, check_strictly_increasing

SCHEME_KINDS = ("uniform", "jittered", "log")


@dataclass(frozen=True)
class SampleSet:
    """Ordered nonuniform frequencies with a declared bandwidth.

    Parameters
    ----------
    points : ndarray
        Strictly increasing frequencies (cycles per unit length).
    bandwidth : float
        Half-width K of the band; every point satisfies ``|w| <= K``.
    """

    points: np.ndarray
    bandwidth: float

    def __post_init__(self):
        pts = as_float_array(self.points, "points")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        check_strictly_increasing(pts, "points")
        k = float(self.bandwidth)
        if not np.isfinite(k) or k <= 0:
            raise ValueError("bandwidth must be positive")
        object.__setattr__(self, "bandwidth", k)
        if np.any(np.abs(pts) > k):
            raise ValueError("all points must lie in [-K, K]")

    def __len__(self) -> int:
        return self.points.size

    def with_ghosts(self) -> np.ndarray:
        """Points extended by the two wrap-around ghost points."""
        pts = self.points
        k = self.bandwidth
        return np.concatenate(([pts[-1] - 2 * k], pts, [pts[0] + 2 * k]))


@dataclass(frozen=True)
class SchemeSpec:
    """Descriptor of a deterministic sampling scheme.

    kind is one of ``uniform``, ``jittered``, ``log``.  ``theta`` is the
    jitter fraction in [0, 1); ``seed`` drives the SplitMix64 generator so
    jittered output is bit-reproducible.
    """

    kind: str
    n: int
    k: float
    theta: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in SCHEME_KINDS:
            raise ValueError(f"unknown scheme kind {self.kind!r}")
        if self.n < 2:
            raise ValueError("schemes require at least 2 points")
        if self.k <= 0:
            raise ValueError("bandwidth must be positive")
        if not (0.0 <= self.theta < 1.0):
            raise ValueError("jitter fraction must lie in [0, 1)")
        if self.kind == "log" and self.n % 2 != 0:
            raise ValueError("log scheme requires an even sample count")

    def to_json(self) -> str:
        return json.dumps({"kind": self.kind, "n": self.n, "k": self.k,
                           "theta": self.theta, "seed": self.seed})

    @classmethod
    def from_json(cls, text: str) -> "SchemeSpec":
        d = json.loads(text)
        return cls(kind=d["kind"], n=int(d["n"]), k=float(d["k"]),
                   theta=float(d.get("theta", 0.0)), seed=int(d.get("seed", 0)))


def generate(spec: SchemeSpec) -> SampleSet:
    """Generate the sample set described by ``spec``.

    uniform:  midpoint grid ``w_n = -K + (n - 1/2) * 2K/N``.
    jittered: midpoint grid plus independent uniform offsets bounded by
              ``theta * K/N`` (spacing stays positive for theta < 1).
    log:      two-sided geometric progression, N/2 points per side running
              from K/N up to K, mirrored about zero.
    """
    n, k = spec.n, spec.k
    if spec.kind == "uniform":
        pts = _midpoint_grid(n, k)
    elif spec.kind == "jittered":
        pts = _midpoint_grid(n, k)
        if spec.theta > 0.0:
            rng = SplitMix64(spec.seed)
            bound = spec.theta * k / n
            pts = pts + bound * np.array([rng.uniform_signed() for _ in range(n)])
    else:
        m = n // 2
        if m == 1:
            side = np.array([k])
        else:
            # ratio N**(2/(N-2)) carries K/N to K in m-1 steps
            logs = np.log(k / n) + np.arange(m) * (2.0 * np.log(n) / (n - 2))
            side = np.exp(logs)
            side[-1] = k
        pts = np.concatenate((-side[::-1], side))
    return SampleSet(points=pts, bandwidth=float(k))


def _midpoint_grid(n: int, k: float) -> np.ndarray:
    return -k + (np.arange(1, n + 1) - 0.5) * (2.0 * k / n)


def density(s: SampleSet) -> float:
    """Largest consecutive gap, ghost points included.

    This is the smallest delta for which the set is delta-dense at its
    declared bandwidth; values below 1 indicate stable sampling.
    """
    return float(np.max(np.diff(s.with_ghosts())))


def weights(s: SampleSet) -> np.ndarray:
    """Midpoint compensation weights ``mu_n = (w_{n+1} - w_{n-1}) / 2``.

    Ghost points close the band, so the weights always sum to exactly 2K.
    """
    ext = s.with_ghosts()
    return (ext[2:] - ext[:-2]) / 2.0


def save_samples_csv(path, s: SampleSet) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("omega\n")
        for w in s.points:
            fh.write(f"{float(w)!r}\n")


def load_samples_csv(path, bandwidth: float | None = None) -> SampleSet:
    pts = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "omega":
            raise ValueError(f"{path}: expected header 'omega', got {header!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            try:
                pts.append(float(line))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: malformed value {line!r}") from None
    arr = np.asarray(pts)
    if bandwidth is None:
        bandwidth = float(np.max(np.abs(arr))) if arr.size else 0.0
    return SampleSet(points=arr, bandwidth=bandwidth)
