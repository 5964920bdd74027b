"""Separated point sets on the line: densities, covering, transforms.

A set is either Periodic (a finite offset pattern repeated with period T,
densities exact) or Explicit (a finite sorted list inside a window,
densities are sliding-window estimates at a stated radius).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

ENDPOINT_TOL = 1e-12


@dataclass(frozen=True)
class DensityReport:
    d_minus: float
    d_plus: float
    exact: bool
    radius: float | None = None


@dataclass(frozen=True)
class SeparatedSet:
    kind: str  # "periodic" | "explicit"
    offsets: tuple[float, ...] = ()
    period: float = 0.0
    points: tuple[float, ...] = ()
    window: tuple[float, float] = (0.0, 0.0)
    separation: float = 0.0

    @classmethod
    def periodic(cls, offsets, period: float) -> "SeparatedSet":
        period = float(period)
        if period <= 0:
            raise ValueError("period must be positive")
        offs = tuple(sorted(float(o) for o in offsets))
        if not offs:
            raise ValueError("need at least one offset")
        if offs[0] < 0 or offs[-1] >= period:
            raise ValueError("offsets must lie in [0, period)")
        if len(offs) == 1:
            sep = period
        else:
            gaps = [b - a for a, b in zip(offs, offs[1:])]
            gaps.append(offs[0] + period - offs[-1])
            sep = min(gaps)
        if sep <= 0:
            raise ValueError("offsets are not separated")
        return cls(kind="periodic", offsets=offs, period=period, separation=sep)

    @classmethod
    def explicit(cls, points, window) -> "SeparatedSet":
        pts = tuple(sorted(float(p) for p in points))
        lo, hi = float(window[0]), float(window[1])
        if len(pts) < 2:
            raise ValueError("explicit set needs at least two points")
        if pts[0] < lo or pts[-1] > hi:
            raise ValueError("points must lie inside the window")
        sep = min(b - a for a, b in zip(pts, pts[1:]))
        if sep <= 0:
            raise ValueError("points are not separated")
        return cls(kind="explicit", points=pts, window=(lo, hi), separation=sep)

    @classmethod
    def lattice(cls, step: float, shift: float = 0.0) -> "SeparatedSet":
        step = float(step)
        if step <= 0:
            raise ValueError("lattice step must be positive")
        return cls.periodic([float(shift) % step], step)

    @classmethod
    def integers(cls) -> "SeparatedSet":
        return cls.lattice(1.0)

    @property
    def is_periodic(self) -> bool:
        return self.kind == "periodic"

    def points_in(self, lo: float, hi: float) -> np.ndarray:
        """Sorted points of the set inside [lo, hi] (endpoint tolerant)."""
        if hi < lo:
            return np.empty(0)
        if self.is_periodic:
            out = []
            for o in self.offsets:
                n0 = math.ceil((lo - o - ENDPOINT_TOL) / self.period)
                n1 = math.floor((hi - o + ENDPOINT_TOL) / self.period)
                if n1 >= n0:
                    out.append(o + self.period * np.arange(n0, n1 + 1))
            return np.sort(np.concatenate(out)) if out else np.empty(0)
        pts = np.asarray(self.points)
        return pts[(pts >= lo - ENDPOINT_TOL) & (pts <= hi + ENDPOINT_TOL)]


def beurling_densities(s: SeparatedSet, R="exact") -> DensityReport:
    """Lower/upper uniform densities; exact for periodic sets.

    For explicit sets R is the averaging half-width of the sliding count
    window; candidate centers sit at the elements and at midpoints of
    consecutive elements, where the count function takes its extremes.
    """
    if s.is_periodic:
        d = len(s.offsets) / s.period
        return DensityReport(d, d, exact=True)
    if R == "exact":
        raise ValueError("explicit sets need a finite averaging radius R")
    R = float(R)
    lo, hi = s.window
    if R > (hi - lo) / 2:
        raise ValueError(f"R={R} exceeds half the window length {(hi - lo) / 2}")
    pts = np.asarray(s.points)
    mids = (pts[:-1] + pts[1:]) / 2.0
    centers = np.concatenate([pts, mids])
    centers = centers[(centers >= lo + R) & (centers <= hi - R)]
    if centers.size == 0:
        centers = np.array([(lo + hi) / 2.0])
    counts = np.array(
        [np.count_nonzero((pts >= c - R - ENDPOINT_TOL) & (pts <= c + R + ENDPOINT_TOL)) for c in centers]
    )
    return DensityReport(
        float(counts.min() / (2 * R)), float(counts.max() / (2 * R)), exact=False, radius=R
    )


def covering_constant(s: SeparatedSet) -> int:
    """sup_x of the number of set points in the closed interval [x, x+1].

    Exact for periodic sets: the supremum is attained when an interval
    endpoint touches a point, so scanning y in {o, o-1} per offset over
    one period is exhaustive. Both closed endpoints count.
    """
    if s.is_periodic:
        cands = [o for o in s.offsets] + [o - 1.0 for o in s.offsets]
    else:
        lo, hi = s.window
        cands = [p for p in s.points if p + 1.0 <= hi + ENDPOINT_TOL]
        cands += [p - 1.0 for p in s.points if p - 1.0 >= lo - ENDPOINT_TOL]
        if not cands:
            cands = [lo]
    best = 0
    for y in cands:
        best = max(best, int(s.points_in(y, y + 1.0).size))
    return best


def translate(s: SeparatedSet, delta: float) -> SeparatedSet:
    delta = float(delta)
    if s.is_periodic:
        offs = sorted((o + delta) % s.period for o in s.offsets)
        return SeparatedSet.periodic(offs, s.period)
    return SeparatedSet.explicit(
        [p + delta for p in s.points], (s.window[0] + delta, s.window[1] + delta)
    )


def scale(s: SeparatedSet, a: float) -> SeparatedSet:
    a = float(a)
    if a <= 0:
        raise ValueError("scale factor must be positive")
    if s.is_periodic:
        return SeparatedSet.periodic([o * a for o in s.offsets], s.period * a)
    return SeparatedSet.explicit(
        [p * a for p in s.points], (s.window[0] * a, s.window[1] * a)
    )


def restrict(s: SeparatedSet, window) -> SeparatedSet:
    lo, hi = float(window[0]), float(window[1])
    pts = s.points_in(lo, hi)
    if pts.size < 2:
        raise ValueError(f"restriction to [{lo}, {hi}] leaves {pts.size} point(s)")
    return SeparatedSet.explicit(pts.tolist(), (lo, hi))


def transform(s: SeparatedSet, op: str, value) -> SeparatedSet:
    """Dispatch helper: op is 'translate', 'scale' or 'restrict'."""
    if op == "translate":
        return translate(s, value)
    if op == "scale":
        return scale(s, value)
    if op == "restrict":
        return restrict(s, value)
    raise ValueError(f"unknown transform {op!r}")


def set_from_config(cfg: dict) -> SeparatedSet:
    """Build a set from a config block.

    Accepted forms: {"periodic": {"offsets": [...], "period": T}},
    {"explicit": {"points": [...], "window": [a, b]}},
    {"lattice": {"step": a, "shift": d}}.
    """
    if "periodic" in cfg:
        sub = cfg["periodic"]
        return SeparatedSet.periodic(sub["offsets"], sub["period"])
    if "explicit" in cfg:
        sub = cfg["explicit"]
        return SeparatedSet.explicit(sub["points"], sub["window"])
    if "lattice" in cfg:
        sub = cfg["lattice"]
        return SeparatedSet.lattice(sub["step"], sub.get("shift", 0.0))
    raise ValueError("set config needs one of: periodic, explicit, lattice")
