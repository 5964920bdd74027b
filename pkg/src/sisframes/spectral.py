"""Fourier analysis of generators and the integer-shift stability screen.

Family-K transforms have a closed form: substituting u = e^{alpha x}
turns the transform into a Mellin integral of the rational part, which a
keyhole contour evaluates as a residue sum over the poles of R with the
log branch cut along [0, inf) (legitimate because the admission
conditions keep poles off that ray). Family-C transforms (and the
independent oracle for family K) use adaptive quadrature.

Stability of integer shifts is screened on a frequency grid: shifts are
stable exactly when no fiber {ghat(n + b)}_n vanishes identically, so the
per-b figure of merit is the largest fiber magnitude and the verdict
thresholds its minimum over b. This is a numerical screen, not a proof.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .generator import FAMILY_EXP, FAMILY_GAUSS, Generator
from .sets import SeparatedSet

T_MIN = 1e-3          # below this |t| the residue prefactor is treacherous
EPS_STAB = 1e-8
STAB_GRID_DEFAULT = 256
FIBER_HALF_WIDTH = 8  # initial n range of the fiber scan
QUAD_TAIL = 1e-13


@dataclass(frozen=True)
class SpectrumSample:
    t: float
    value: complex
    method: str  # "residue" | "quadrature"
    err_est: float


@dataclass(frozen=True)
class StabilityVerdict:
    stable: bool
    margin: float
    witness_b: float
    grid_size: int
    method: str = "numerical (grid)"


@dataclass(frozen=True)
class XiReport:
    xi_prime: bool
    xi_triple_prime: bool
    xi_double_prime: bool | str
    max_order: int
    top_poles: tuple[complex, ...]
    details: dict = field(default_factory=dict)

    @property
    def implies_stable(self) -> bool:
        return self.xi_prime or self.xi_triple_prime or self.xi_double_prime is True


# ---------------------------------------------------------------------------
# quadrature path

def _support_radius(g: Generator) -> float:
    """X with the envelope tail mass beyond [-X, X] below QUAD_TAIL."""
    env = g.decay
    if env.kind == "exponential":
        return math.log(max(env.amp, 1e-6) / (env.rate * QUAD_TAIL / 2)) / env.rate
    x = max(3.0, 2.0 * (env.slope / env.rate + 1.0))
    while env(x) / max(env.rate * x - env.slope, 1.0) > QUAD_TAIL / 2:
        x *= 1.25
    return x


def quad_transform(g: Generator, t: float) -> SpectrumSample:
    """Oracle transform by adaptive quadrature over the essential support."""
    X = _support_radius(g)
    val, err = quad(
        lambda x: g.sample(np.array([x]))[0] * cmath.exp(-2j * math.pi * x * t),
        -X,
        X,
        complex_func=True,
        limit=400,
        epsabs=1e-12,
        epsrel=1e-11,
    )
    return SpectrumSample(t, val, "quadrature", float(abs(err)) + QUAD_TAIL)


def _gl_panels(g: Generator, t_max: float, splits: int):
    X = _support_radius(g)
    width = min(0.5, 2.5 / max(t_max, 1.0)) / (2.0**splits)
    n_panels = max(8, int(math.ceil(2 * X / width)))
    nodes16, weights16 = np.polynomial.legendre.leggauss(16)
    edges = np.linspace(-X, X, n_panels + 1)
    mid = (edges[:-1] + edges[1:]) / 2.0
    half = (edges[1:] - edges[:-1]) / 2.0
    xs = (mid[:, None] + half[:, None] * nodes16[None, :]).ravel()
    ws = (half[:, None] * weights16[None, :]).ravel()
    return xs, ws


def spectrum_grid(g: Generator, ts: np.ndarray) -> tuple[np.ndarray, float]:
    """ghat on many frequencies at once via composite Gauss-Legendre.

    Refines the panel width until two resolutions agree; returns the
    values and one shared error estimate (disagreement plus tail mass).
    """
    ts = np.asarray(ts, dtype=float)
    t_max = float(np.max(np.abs(ts))) if ts.size else 1.0
    prev = None
    for splits in range(4):
        xs, ws = _gl_panels(g, t_max, splits)
        gv = g.sample(xs) * ws
        vals = np.empty(ts.shape, dtype=complex)
        chunk = 512
        for i in range(0, ts.size, chunk):
            tc = ts[i : i + chunk]
            vals[i : i + chunk] = np.exp(-2j * math.pi * np.outer(tc, xs)) @ gv
        if prev is not None:
            diff = float(np.max(np.abs(vals - prev)))
            if diff < 1e-12:
                return vals, diff + QUAD_TAIL
        prev = vals
    return prev, QUAD_TAIL + 1e-10


# ---------------------------------------------------------------------------
# residue path (family K)

def _series_div(a: list[complex], b: list[complex], order: int) -> list[complex]:
    """Power-series quotient a/b to the given order; b[0] != 0."""
    out = []
    for i in range(order + 1):
        acc = a[i] if i < len(a) else 0j
        for j in range(1, i + 1):
            bj = b[j] if j < len(b) else 0j
            acc -= bj * out[i - j]
        out.append(acc / b[0])
    return out


def _strip_log(w: complex) -> complex:
    arg = cmath.phase(w)
    if arg <= 0.0:
        arg += 2.0 * math.pi
    return complex(math.log(abs(w)), arg)


def residue_transform(g: Generator, t: float) -> SpectrumSample:
    """Closed-form family-K transform via the keyhole residue sum.

    ghat(t) = (1/alpha) * 2*pi*i/(1 - e^{2*pi*i*s}) * sum_w Res[R(u) u^{s-1}]
    at s = -2*pi*i*t/alpha, branch arg u in (0, 2*pi). The exponentials
    are combined per pole so no intermediate overflows for large |t|.
    """
    if g.family != FAMILY_EXP:
        raise ValueError("residue transform applies to family K only")
    if abs(t) < T_MIN:
        raise ValueError(f"|t| < {T_MIN}: the prefactor is near its removable point")
    alpha = g.alpha
    s = -2j * math.pi * t / alpha
    num, den = g.r.num, g.r.den

    total = 0j
    big_e = 2j * math.pi * s  # real, = 4 pi^2 t / alpha
    for w, d in g.r.poles:
        taylor_p = num.taylor_coeffs(w, d - 1)
        qw = den.deflate(w, d)
        taylor_q = qw.taylor_coeffs(w, d - 1)
        gcoef = _series_div(taylor_p, taylor_q, d - 1)
        # Res = w^s * sum_i g_i * ff_{d-1-i}(s) / (d-1-i)! * w^{i-d}
        bsum = 0j
        for i in range(d):
            k = d - 1 - i
            ff = 1.0 + 0j
            for j in range(1, k + 1):
                ff *= s - j
            bsum += gcoef[i] * ff / math.factorial(k) * w ** (i - d)
        logw = _strip_log(w)
        if t >= 0:
            # 1/(1 - e^E) = -e^{-E}/(1 - e^{-E}) with E = 2 pi i s real > 0
            expo = s * (logw - 2j * math.pi)
            total += -cmath.exp(expo) / (1.0 - cmath.exp(-big_e)) * bsum
        else:
            total += cmath.exp(s * logw) / (1.0 - cmath.exp(big_e)) * bsum
    val = 2j * math.pi / alpha * total
    return SpectrumSample(float(t), val, "residue", 1e-11 * (1.0 + abs(val)))


def fourier_transform(g: Generator, t: float) -> SpectrumSample:
    """ghat(t) by the best available method for the generator family."""
    if g.family == FAMILY_EXP and abs(t) >= T_MIN:
        return residue_transform(g, t)
    return quad_transform(g, t)


def _spectrum_many(g: Generator, ts: np.ndarray) -> np.ndarray:
    """Values of ghat on a batch of frequencies (no per-point records)."""
    ts = np.asarray(ts, dtype=float)
    if g.family == FAMILY_EXP:
        out = np.empty(ts.shape, dtype=complex)
        for i, t in enumerate(ts.ravel()):
            if abs(t) >= T_MIN:
                out.ravel()[i] = residue_transform(g, float(t)).value
            else:
                out.ravel()[i] = quad_transform(g, float(t)).value
        return out
    vals, _ = spectrum_grid(g, ts)
    return vals


# ---------------------------------------------------------------------------
# stability screen

def _fiber_floor(g: Generator, b: float, n_max: int) -> tuple[float, int, int]:
    """Largest |ghat| on the fiber b + Z, certified against the tail.

    Returns (floor, attaining n, n_max actually used). The window is
    enlarged until frequencies just beyond it are below floor/10, so the
    in-window maximum is the fiber supremum; fibers that are zero to
    machine precision are reported as such without a tail fight.
    """
    n_max = max(4, int(n_max))
    for _ in range(7):
        ns = np.arange(-n_max, n_max + 1)
        vals = np.abs(_spectrum_many(g, ns + b))
        floor = float(vals.max())
        n_at = int(ns[int(vals.argmax())])
        probe = np.concatenate([n_max + 1 + np.arange(3), -(n_max + 1) - np.arange(3)])
        tail = float(np.max(np.abs(_spectrum_many(g, probe + b))))
        if floor < 10 * EPS_STAB or tail < floor / 10.0:
            return floor, n_at, n_max
        n_max *= 2
    return floor, n_at, n_max


def periodized_spectrum(g: Generator, b: float, n_max: int = FIBER_HALF_WIDTH) -> float:
    """sup over the fiber b + Z of |ghat|, with a certified tail cutoff."""
    floor, _, _ = _fiber_floor(g, b, n_max)
    return floor


def stability_profile(g: Generator, grid_size: int = STAB_GRID_DEFAULT) -> tuple[np.ndarray, np.ndarray]:
    """Fiber suprema over a uniform b grid of [0, 1)."""
    if grid_size < 16:
        raise ValueError("grid_size must be at least 16")
    bs = np.arange(grid_size) / grid_size
    if g.family == FAMILY_GAUSS:
        # one shared quadrature rule for the whole (n, b) frequency grid
        ns = np.arange(-FIBER_HALF_WIDTH, FIBER_HALF_WIDTH + 1)
        ts = (ns[:, None] + bs[None, :]).ravel()
        vals, _ = spectrum_grid(g, ts)
        mags = np.abs(vals).reshape(len(ns), len(bs))
        return bs, mags.max(axis=0)
    floors = np.array([_fiber_floor(g, float(b), FIBER_HALF_WIDTH)[0] for b in bs])
    return bs, floors


def stability_check(g: Generator, grid_size: int = STAB_GRID_DEFAULT) -> StabilityVerdict:
    """Grid screen of Lemma-style integer-shift stability.

    Stable iff every fiber b + Z carries some spectrum mass; the margin
    is the worst fiber supremum over a uniform b grid.
    """
    bs, floors = stability_profile(g, grid_size)
    idx = int(floors.argmin())
    return StabilityVerdict(
        stable=bool(floors[idx] > EPS_STAB),
        margin=float(floors[idx]),
        witness_b=float(bs[idx]),
        grid_size=grid_size,
    )


# ---------------------------------------------------------------------------
# pole-collision conditions

COLLISION_TOL = 1e-9


def _collides(w: complex, wp: complex, alpha: float, gaps=None) -> int | float | None:
    """Integer n (or gap value) with w = wp * e^{alpha n}, if one exists.

    Without gaps the lattice is alpha*Z; with gaps it is alpha*(given
    values). The modulus ratio pins the candidate, so no search needed.
    """
    rho = math.log(abs(w) / abs(wp)) / alpha
    if gaps is None:
        n = round(rho)
        cand = [float(n)]
    else:
        cand = [gv for gv in gaps if abs(gv - rho) < 0.25]
    for gv in cand:
        if abs(gv - rho) <= COLLISION_TOL * (1.0 + abs(gv)):
            if abs(w - wp * cmath.exp(alpha * gv)) <= COLLISION_TOL * abs(w):
                return gv
    return None


def _periodic_gap_values(gamma: SeparatedSet, span: float) -> list[float]:
    """Values attainable as (point of Gamma) - (point of Gamma), |gap| <= span."""
    out = set()
    T = gamma.period
    kmax = int(math.ceil(span / T)) + 1
    for o in gamma.offsets:
        for op_ in gamma.offsets:
            for k in range(-kmax, kmax + 1):
                gv = op_ - o + k * T
                if abs(gv) <= span + 1.0:
                    out.add(round(gv, 12))
    return sorted(out)


def xi_check(g: Generator, gamma: SeparatedSet | str = "Z") -> XiReport:
    """Evaluate the pole-collision stability conditions on max-order poles.

    xi_prime: a single pole carries the maximal order. xi_triple_prime:
    some maximal-order pole w has no partner w' with w = w' e^{alpha n},
    n integer (the branch-free multiplicative reading). xi_double_prime
    is the same collision test against the gap set of a periodic Gamma;
    for explicit windows it is reported "not-evaluated" since weak limits
    are not computable from a finite sample.
    """
    orders = {}
    for w, d in g.r.poles:
        orders[w] = d
    if not orders:
        return XiReport(True, True, True, 0, (), {"note": "no poles"})
    dmax = max(orders.values())
    top = tuple(sorted((w for w, d in orders.items() if d == dmax), key=lambda z: (abs(z), cmath.phase(z))))

    collisions = []
    free = []
    for w in top:
        hit = False
        for wp in top:
            if wp is w:
                continue
            n = _collides(w, wp, g.alpha)
            if n is not None:
                collisions.append((w, wp, int(n)))
                hit = True
        if not hit:
            free.append(w)
    xi_p = len(top) == 1
    xi_3 = len(free) > 0

    if isinstance(gamma, str) and gamma == "Z":
        xi_2: bool | str = xi_3
    elif isinstance(gamma, SeparatedSet) and gamma.is_periodic:
        spread = 0.0
        mods = [abs(w) for w in top]
        if len(mods) > 1:
            spread = (math.log(max(mods)) - math.log(min(mods))) / g.alpha
        gaps = _periodic_gap_values(gamma, spread + 2.0)
        xi_2 = False
        for w in top:
            if all(
                _collides(w, wp, g.alpha, gaps=[gv * 1.0 for gv in gaps]) is None
                for wp in top
                if wp is not w
            ):
                xi_2 = True
                break
    else:
        xi_2 = "not-evaluated"

    return XiReport(
        xi_prime=xi_p,
        xi_triple_prime=xi_3,
        xi_double_prime=xi_2,
        max_order=dmax,
        top_poles=top,
        details={"collisions": collisions, "collision_free": free},
    )


# ---------------------------------------------------------------------------
# Wiener amalgam norm

def wiener_norm(g: Generator) -> float:
    """Sum over unit intervals of the sup of |G|.

    Per-interval sups come from 64-point subsampling with a sampled-slope
    midpoint correction, capped by the decay envelope; the sum stops once
    the envelope contribution is negligible.
    """
    env = g.decay
    k = 0
    while env(max(0.0, float(k))) > 1e-14 and k < 10_000:
        k += 1
    kmax = k
    total = 0.0
    for k in range(-kmax - 1, kmax + 1):
        xs = k + np.arange(65) / 64.0
        vals = np.abs(g.sample(xs))
        gmax = float(vals.max())
        slope_corr = 0.75 * float(np.max(np.abs(np.diff(vals))))
        dist = 0.0 if k <= 0 <= k + 1 else min(abs(k), abs(k + 1))
        total += min(float(env(dist)), gmax + slope_corr)
    return total
