"""Complex polynomial and rational-function arithmetic.

Polynomials are dense coefficient vectors indexed by power. The root
finder is a simultaneous Aberth-Ehrlich iteration with Weierstrass-disk
cluster analysis, which keeps multiple roots honest (a bare tolerance
merge cannot, since an m-fold root scatters its approximations over a
disk of radius ~eps^(1/m)).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

MAX_DEGREE = 64

EPS_ROOT = 1e-10        # residual acceptance, relative to coefficient scale
DELTA_CLUSTER = 1e-7    # baseline merge radius, relative to root magnitude
EPS_COPRIME = 1e-8
POLE_TOL = 1e-12        # |Q(z)| below this (relative) signals a pole
ITERATION_CAP = 500
RESTARTS = 4


class RootFindingError(RuntimeError):
    """Aberth iteration failed to converge within the restart budget."""


def _trim(coeffs) -> tuple[complex, ...]:
    c = [complex(v) for v in coeffs]
    top = max((abs(v) for v in c), default=0.0)
    if top == 0.0:
        return ()
    cut = 1e-14 * top
    end = len(c)
    while end > 0 and abs(c[end - 1]) <= cut:
        end -= 1
    return tuple(c[:end])


@dataclass(frozen=True)
class ComplexPoly:
    """Dense complex polynomial; ``coeffs[j]`` multiplies ``z**j``.

    Trailing (near-)zero coefficients are trimmed on construction; the
    zero polynomial is the empty tuple and reports ``degree == -1``.
    """

    coeffs: tuple[complex, ...]

    def __init__(self, coeffs):
        object.__setattr__(self, "coeffs", _trim(coeffs))
        if self.degree > MAX_DEGREE:
            raise ValueError(f"polynomial degree {self.degree} exceeds cap {MAX_DEGREE}")

    @classmethod
    def zero(cls) -> "ComplexPoly":
        return cls(())

    @classmethod
    def from_roots(cls, roots, lead: complex = 1.0) -> "ComplexPoly":
        c = np.array([lead], dtype=complex)
        for r in roots:
            c = np.convolve(c, np.array([-complex(r), 1.0], dtype=complex))
        return cls(c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def scale(self) -> float:
        return max((abs(c) for c in self.coeffs), default=0.0)

    def support(self) -> list[int]:
        cut = 1e-14 * self.scale
        return [j for j, c in enumerate(self.coeffs) if abs(c) > cut]

    def __call__(self, z):
        """Horner evaluation; accepts scalars or numpy arrays."""
        if self.is_zero:
            return np.zeros_like(z, dtype=complex) if isinstance(z, np.ndarray) else 0j
        if isinstance(z, np.ndarray):
            acc = np.full(z.shape, self.coeffs[-1], dtype=complex)
            for c in reversed(self.coeffs[:-1]):
                acc = acc * z + c
            return acc
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * z + c
        return acc

    def derivative(self, order: int = 1) -> "ComplexPoly":
        c = self.coeffs
        for _ in range(order):
            c = tuple(j * c[j] for j in range(1, len(c)))
        return ComplexPoly(c)

    def __mul__(self, other):
        if isinstance(other, ComplexPoly):
            if self.is_zero or other.is_zero:
                return ComplexPoly.zero()
            return ComplexPoly(np.convolve(np.array(self.coeffs), np.array(other.coeffs)))
        return ComplexPoly(tuple(complex(other) * c for c in self.coeffs))

    __rmul__ = __mul__

    def __add__(self, other: "ComplexPoly") -> "ComplexPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0j] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0j] * (n - len(other.coeffs))
        return ComplexPoly([x + y for x, y in zip(a, b)])

    def __sub__(self, other: "ComplexPoly") -> "ComplexPoly":
        return self + (-1.0) * other

    def taylor_coeffs(self, w: complex, order: int) -> list[complex]:
        """First ``order + 1`` Taylor coefficients of ``p`` about ``w``.

        Full Horner scheme: each synthetic division by (z - w) strips off
        the next coefficient as its remainder.
        """
        work = list(self.coeffs) if not self.is_zero else [0j]
        out = []
        for _ in range(order + 1):
            if not work:
                out.append(0j)
                continue
            acc = 0j
            steps = []
            for a in reversed(work):
                acc = acc * w + a
                steps.append(acc)
            out.append(steps[-1])
            work = steps[:-1][::-1]
        return out

    def deflate(self, w: complex, mult: int) -> "ComplexPoly":
        """Divide by ``(z - w)**mult``, dropping the (small) remainders."""
        work = list(self.coeffs)
        for _ in range(mult):
            acc = 0j
            steps = []
            for a in reversed(work):
                acc = acc * w + a
                steps.append(acc)
            work = steps[:-1][::-1]
        return ComplexPoly(work)

    def to_json(self) -> list[list[float]]:
        return [[c.real, c.imag] for c in self.coeffs]

    @classmethod
    def from_json(cls, data) -> "ComplexPoly":
        return cls([complex(re, im) for re, im in data])

    def __repr__(self) -> str:
        if self.is_zero:
            return "ComplexPoly(0)"
        terms = [f"({c:.6g})z^{j}" for j, c in enumerate(self.coeffs) if c != 0]
        return "ComplexPoly(" + " + ".join(terms) + ")"


def _aberth_pass(coeffs: np.ndarray, z: np.ndarray, iters: int) -> np.ndarray:
    """Run Aberth-Ehrlich corrections in place; returns the final iterate."""
    n = len(coeffs) - 1
    dcoeffs = coeffs[1:] * np.arange(1, n + 1)
    mags = np.abs(coeffs)
    for _ in range(iters):
        pv = np.polyval(coeffs[::-1], z)
        # Adams-style stopping: residual below the evaluation rounding floor
        zmag = np.abs(z)
        floor = np.polyval(mags[::-1], zmag) * 1e-15
        active = np.abs(pv) > floor
        if not active.any():
            break
        dv = np.polyval(dcoeffs[::-1], z)
        dv = np.where(dv == 0, 1e-300, dv)
        newton = pv / dv
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        sib = np.sum(1.0 / diff, axis=1)
        denom = 1.0 - newton * sib
        denom = np.where(np.abs(denom) < 1e-300, 1e-300, denom)
        corr = newton / denom
        z = np.where(active, z - corr, z)
    return z


def _weierstrass_radii(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Inclusion radii n*|p(z_k)/(lead * prod_{j!=k}(z_k - z_j))|."""
    n = len(z)
    pv = np.polyval(coeffs[::-1], z)
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    denom = coeffs[-1] * np.prod(diff, axis=1)
    denom = np.where(np.abs(denom) == 0, 1e-300, denom)
    return n * np.abs(pv / denom)


def _polish(p: ComplexPoly, root: complex, mult: int) -> complex:
    """Newton-refine ``root`` as a simple zero of the (mult-1)-th derivative."""
    q = p.derivative(mult - 1) if mult > 1 else p
    dq = q.derivative()
    z = root
    for _ in range(60):
        fv = q(z)
        dv = dq(z)
        if dv == 0:
            break
        step = fv / dv
        z -= step
        if abs(step) <= 1e-16 * (1.0 + abs(z)):
            break
    return z


def poly_roots(p: ComplexPoly) -> list[tuple[complex, int]]:
    """All roots of ``p`` with multiplicities, ``[(root, mult), ...]``.

    Aberth-Ehrlich simultaneous iteration with random-perturbation
    restarts; approximations are merged into multiple roots when their
    Weierstrass inclusion disks overlap (or when they fall within the
    baseline relative radius), then the merged root is polished on the
    appropriate derivative.

    Raises RootFindingError if residuals stay above ``EPS_ROOT`` times
    the coefficient scale after all restarts.
    """
    if p.is_zero or p.degree < 1:
        raise ValueError(f"root finding needs degree >= 1, got {p!r}")
    coeffs = np.array(p.coeffs, dtype=complex)
    coeffs = coeffs / np.max(np.abs(coeffs))
    n = len(coeffs) - 1
    if n == 1:
        return [(-coeffs[0] / coeffs[1], 1)]

    rng = np.random.default_rng(1234)
    radius = 1.0 + max(abs(c / coeffs[-1]) for c in coeffs[:-1])
    last_error = ""
    for attempt in range(RESTARTS):
        angles = 2 * np.pi * (np.arange(n) + 0.35) / n + 0.1 * attempt
        z0 = radius * np.exp(1j * angles)
        if attempt > 0:
            z0 = z0 * (1 + 0.2 * rng.standard_normal(n)) + 0.1 * radius * (
                rng.standard_normal(n) + 1j * rng.standard_normal(n)
            )
        z = _aberth_pass(coeffs, z0, ITERATION_CAP)

        radii = _weierstrass_radii(coeffs, z)
        base = DELTA_CLUSTER * np.maximum(1.0, np.abs(z))
        merged_r = np.maximum(radii, base)

        # connected components of overlapping inclusion disks
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i in range(n):
            for j in range(i + 1, n):
                if abs(z[i] - z[j]) <= merged_r[i] + merged_r[j]:
                    parent[find(i)] = find(j)
        groups: dict[int, list[int]] = {}
        for i in range(n):
            groups.setdefault(find(i), []).append(i)

        scaled = ComplexPoly(coeffs)
        result = []
        ok = True
        for idx in groups.values():
            mult = len(idx)
            center = complex(np.mean(z[idx]))
            root = _polish(scaled, center, mult)
            residual = abs(scaled(root))
            bound = EPS_ROOT * max(
                np.polyval(np.abs(coeffs)[::-1], abs(root)), 1e-300
            )
            if residual > bound:
                ok = False
                last_error = (
                    f"residual {residual:.3e} > {bound:.3e} at root {root:.6g}"
                )
                break
            result.append((root, mult))
        if ok:
            result.sort(key=lambda rm: (rm[0].real, rm[0].imag))
            return result

    raise RootFindingError(
        f"no convergence after {RESTARTS} restarts for {p!r}: {last_error}"
    )


def coprime_check(p: ComplexPoly, q: ComplexPoly) -> bool:
    """True when no root of ``q`` is (numerically) a root of ``p``."""
    if p.is_zero or q.is_zero:
        raise ValueError("coprime_check needs non-trivial polynomials")
    if q.degree < 1:
        return True
    for root, _ in poly_roots(q):
        if abs(p(root)) <= EPS_COPRIME * p.scale:
            return False
    return True


def support_gcd(p: ComplexPoly, q: ComplexPoly) -> int | None:
    """GCD of pairwise support-index gaps of ``p`` and of ``q``.

    Returns None (unbounded) when both supports are singletons, i.e.
    every rotation order works.
    """
    if p.is_zero or q.is_zero:
        raise ValueError("support_gcd needs non-trivial polynomials")
    g = 0
    for poly in (p, q):
        supp = poly.support()
        for j in supp[1:]:
            g = math.gcd(g, j - supp[0])
    return g if g > 0 else None


@dataclass(frozen=True)
class RationalFn:
    """Ratio of coprime polynomials with a precomputed pole multiset."""

    num: ComplexPoly
    den: ComplexPoly
    poles: tuple[tuple[complex, int], ...] = field(default=())

    @classmethod
    def make(cls, num: ComplexPoly, den: ComplexPoly) -> "RationalFn":
        if num.is_zero or den.is_zero:
            raise ValueError("rational function needs non-trivial numerator and denominator")
        if not coprime_check(num, den):
            raise ValueError("numerator and denominator share a root")
        poles = tuple(poly_roots(den)) if den.degree >= 1 else ()
        total = sum(m for _, m in poles)
        if total != den.degree:
            raise RootFindingError(
                f"pole orders sum to {total}, expected degree {den.degree}"
            )
        return cls(num, den, poles)

    @property
    def pole_points(self) -> list[complex]:
        return [w for w, _ in self.poles]

    def __call__(self, z):
        return rational_eval(self, z)


def rational_eval(r: RationalFn, z) -> complex | None:
    """Evaluate ``P(z)/Q(z)``; returns None (pole signal) near a pole of Q.

    For ``|z| > 1`` the quotient is rewritten in ``1/z`` so neither
    polynomial overflows: P(z)/Q(z) = z^(degP-degQ) * Prev(1/z)/Qrev(1/z).
    """
    z = complex(z)
    num, den = r.num, r.den
    nscale = max(num.scale, 1e-300)
    dscale = max(den.scale, 1e-300)
    if abs(z) <= 1.0:
        qv = den(z) / dscale
        qfloor = np.polyval(np.abs(np.array(den.coeffs))[::-1], abs(z)) / dscale
        if abs(qv) <= POLE_TOL * max(qfloor, 1e-30):
            return None
        return (num(z) / nscale) / qv * (nscale / dscale)
    w = 1.0 / z
    prev = ComplexPoly(num.coeffs[::-1])
    qrev = ComplexPoly(den.coeffs[::-1])
    qv = qrev(w) / dscale
    qfloor = np.polyval(np.abs(np.array(qrev.coeffs))[::-1], abs(w)) / dscale
    if abs(qv) <= POLE_TOL * max(qfloor, 1e-30):
        return None
    lead = z ** (num.degree - den.degree)
    return lead * (prev(w) / nscale) / qv * (nscale / dscale)
