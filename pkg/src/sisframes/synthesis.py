"""Functions spanned by generator shifts: evaluation with certified tails.

A SISFunction holds coefficients on a window of the shift set wide enough
to cover its evaluation window plus the truncation radius, so every
evaluation differs from the corresponding infinite series (with
sup-bounded coefficients off the window) by at most ``tail_bound``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .generator import FAMILY_EXP, Generator
from .sets import SeparatedSet, covering_constant
from .spectral import wiener_norm

TAIL_TARGET = 1e-12


def _tail_factor(g: Generator, rho: float, sep: float) -> float:
    """Bound on sum of envelope values over shifts at distance >= rho."""
    env = g.decay
    if env.kind == "exponential":
        return float(env(rho)) * 2.0 / (1.0 - math.exp(-g.alpha * sep))
    eff = env.rate * rho - env.slope
    if eff <= 0:
        return math.inf
    return float(env(rho)) * 2.0 / (1.0 - math.exp(-eff * sep))


def default_radius(g: Generator, sep: float, cmax: float) -> float:
    """Smallest shift-truncation radius meeting the tail target."""
    rho = 2.0
    while _tail_factor(g, rho, sep) * max(cmax, 1e-300) > TAIL_TARGET and rho < 1e4:
        rho *= 1.25
    return rho


@dataclass(frozen=True)
class SISFunction:
    g: Generator
    gamma: SeparatedSet
    points: np.ndarray
    coeffs: np.ndarray
    eval_window: tuple[float, float]
    radius: float
    tail_bound: float

    def __call__(self, x):
        return synthesize(self, x)


def sis_function(
    g: Generator,
    gamma: SeparatedSet,
    coeffs,
    eval_window,
    rho: float | None = None,
) -> SISFunction:
    """Assemble f = sum c_gamma G(. - gamma) evaluable on ``eval_window``.

    ``coeffs`` may be a callable mapping a point array to values, a dict
    keyed by rounded point values, or an array aligned with the points of
    gamma in [lo - rho, hi + rho].
    """
    lo, hi = float(eval_window[0]), float(eval_window[1])
    probe = np.array([1.0])
    if callable(coeffs):
        cmax_guess = float(np.max(np.abs(np.atleast_1d(coeffs(probe))))) or 1.0
    elif isinstance(coeffs, dict):
        cmax_guess = max((abs(v) for v in coeffs.values()), default=1.0)
    else:
        cmax_guess = float(np.max(np.abs(coeffs))) if len(coeffs) else 1.0
    if rho is None:
        rho = default_radius(g, gamma.separation, max(cmax_guess, 1.0))
    pts = gamma.points_in(lo - rho, hi + rho)
    if pts.size == 0:
        raise ValueError("no shift points in the padded evaluation window")
    if callable(coeffs):
        values = np.asarray(coeffs(pts), dtype=complex)
    elif isinstance(coeffs, dict):
        values = np.array([complex(coeffs.get(round(float(p), 9), 0.0)) for p in pts])
    else:
        values = np.asarray(coeffs, dtype=complex)
        if values.shape != pts.shape:
            raise ValueError(
                f"need {pts.size} coefficients for gamma in [{lo - rho}, {hi + rho}], got {values.size}"
            )
    cmax = float(np.max(np.abs(values))) if values.size else 0.0
    tail = _tail_factor(g, rho, gamma.separation) * cmax
    return SISFunction(g, gamma, pts, values, (lo, hi), float(rho), float(tail))


def synthesize(f: SISFunction, x):
    """Evaluate the truncated shift series at x (scalar or array).

    Sums the shifts within the truncation radius; the result is within
    ``f.tail_bound`` of the full series. Points outside the declared
    evaluation window are rejected.
    """
    scalar = np.isscalar(x) or (isinstance(x, np.ndarray) and x.ndim == 0)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    lo, hi = f.eval_window
    if xs.min() < lo - 1e-12 or xs.max() > hi + 1e-12:
        raise ValueError(f"evaluation point outside window [{lo}, {hi}]")
    out = np.zeros(xs.shape, dtype=complex)
    chunk = max(1, int(2e6 // max(f.points.size, 1)))
    for i in range(0, xs.size, chunk):
        xc = xs[i : i + chunk]
        diff = xc[:, None] - f.points[None, :]
        mask = np.abs(diff) <= f.radius
        vals = np.where(mask, f.g.sample(diff.ravel()).reshape(diff.shape), 0.0)
        out[i : i + chunk] = vals @ f.coeffs
    return complex(out[0]) if scalar else out


@dataclass(frozen=True)
class BesselReport:
    p: float
    trials: int
    max_ratio: float
    covering: int
    wiener: float
    ok: bool


def bessel_bound_check(
    g: Generator,
    gamma: SeparatedSet,
    trials: int = 50,
    p: float = 2,
    seed: int = 0,
    coeff_halfwidth: float = 20.0,
) -> BesselReport:
    """Empirical check of the amalgam upper bound on synthesis operators.

    For random coefficient vectors, verifies
        ||sum c G(.-gamma)||_p <= N(Gamma)^(1/q) ||G||_W ||c||_p,
    q = p/(p-1), with grid-estimated norms and a 1% slack for the grid
    error. Reports the worst observed ratio.
    """
    if p not in (1, 2, math.inf):
        raise ValueError("p must be 1, 2 or inf")
    ncov = covering_constant(gamma)
    wnorm = wiener_norm(g)
    exponent = 0.0 if p == 1 else (0.5 if p == 2 else 1.0)
    bound_const = ncov**exponent * wnorm

    rng = np.random.default_rng(seed)
    lo, hi = -coeff_halfwidth, coeff_halfwidth
    reach = default_radius(g, gamma.separation, 1.0)
    grid = np.arange(lo - reach, hi + reach, 1.0 / 64.0)
    pts = gamma.points_in(lo, hi)
    mat = g.sample((grid[:, None] - pts[None, :]).ravel()).reshape(grid.size, pts.size)

    worst = 0.0
    for _ in range(trials):
        c = rng.standard_normal(pts.size) + 1j * rng.standard_normal(pts.size)
        fv = mat @ c
        if p == math.inf:
            fnorm = float(np.max(np.abs(fv)))
            cnorm = float(np.max(np.abs(c)))
        elif p == 2:
            fnorm = float(np.sqrt(np.trapezoid(np.abs(fv) ** 2, grid)))
            cnorm = float(np.linalg.norm(c))
        else:
            fnorm = float(np.trapezoid(np.abs(fv), grid))
            cnorm = float(np.sum(np.abs(c)))
        worst = max(worst, fnorm / (bound_const * cnorm))
    return BesselReport(p, trials, worst, ncov, wnorm, ok=bool(worst <= 1.01))
