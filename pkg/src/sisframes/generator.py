"""Generator families and their validated construction.

Family "K": G(z) = R(e^{alpha z}) with R = P/Q rational, 1 <= deg P < deg Q,
P(0) = 0 and Q nonvanishing on [0, inf); exponentially decaying and
2*pi*i/alpha periodic.

Family "C": G(z) = exp(-alpha z^2/2) * R(e^{alpha z}) with Q nonvanishing
on [0, inf); Gaussian decay. The letters are the wire tags used by the
config schema.

Evaluation never forms e^{alpha z} when it would overflow: for
Re(alpha z) > 0 the rational part is rewritten in e^{-alpha z},
    P(u)/Q(u) = u^(deg P - deg Q) * Prev(1/u) / Qrev(1/u),
which is an exact identity, so accuracy is uniform across the axis.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .polyrat import ComplexPoly, RationalFn, coprime_check, support_gcd

FAMILY_EXP = "K"
FAMILY_GAUSS = "C"

REAL_AXIS_TOL = 1e-9      # pole-on-[0,inf) rejection tolerance
COINCIDENT_TOL = 1e-12


class GeneratorError(ValueError):
    """A construction request violates the family admission conditions."""


@dataclass(frozen=True)
class DecayEnvelope:
    """Pointwise bound |G(x)| <= bound(|x|) on the real axis.

    kind "exponential": amp * exp(-rate * r)
    kind "gaussian":    amp * exp(-alpha * r^2 / 2 + slope * r)
    """

    kind: str
    rate: float
    amp: float
    slope: float = 0.0
    poly_growth: int = 0

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if self.kind == "exponential":
            out = self.amp * np.exp(-self.rate * r)
        else:
            out = self.amp * np.exp(-self.rate * r * r / 2.0 + self.slope * r)
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class Generator:
    """A validated member of family K or C.

    k is the largest rotation order with R(e^{2 pi i / k} z) = c R(z)
    (None = every order works, possible only in family C); sym_const is
    that c (family K only). q is the denominator degree. strip_poles are
    the logs of the poles of R taken in the strip 0 < Im < 2*pi, repeated
    by pole order.
    """

    family: str
    alpha: float
    r: RationalFn
    k: int | None
    sym_const: complex | None
    q: int
    strip_poles: tuple[complex, ...]
    decay: DecayEnvelope

    @property
    def period(self) -> complex:
        return 2j * math.pi / self.alpha

    def eval_at(self, z) -> complex | None:
        """G(z) for complex z; None signals a pole of the rational part."""
        z = complex(z)
        t = self.alpha * z
        num, den = self.r.num, self.r.den
        m, n = num.degree, den.degree
        if t.real <= 0.0:
            u = cmath.exp(t)
            qv = den(u)
            if abs(qv) <= 1e-12 * _abs_eval(den, abs(u)):
                return None
            rat = num(u) / qv
            gauss_exp = 0j
        else:
            w = cmath.exp(-t)
            prev = ComplexPoly(num.coeffs[::-1])
            qrev = ComplexPoly(den.coeffs[::-1])
            qv = qrev(w)
            if abs(qv) <= 1e-12 * _abs_eval(qrev, abs(w)):
                return None
            rat = prev(w) / qv
            gauss_exp = (m - n) * t
        if self.family == FAMILY_GAUSS:
            gauss_exp = gauss_exp - self.alpha * z * z / 2.0
        if gauss_exp == 0j:
            return rat
        return rat * cmath.exp(gauss_exp)

    def __call__(self, z):
        return self.eval_at(z)

    def sample(self, x) -> np.ndarray:
        """Vectorized G on real points; poles cannot occur on the axis."""
        x = np.asarray(x, dtype=float)
        t = self.alpha * x
        num, den = self.r.num, self.r.den
        m, n = num.degree, den.degree
        out = np.empty(x.shape, dtype=complex)
        left = t <= 0.0
        right = ~left
        if left.any():
            u = np.exp(t[left])
            val = num(u) / den(u)
            if self.family == FAMILY_GAUSS:
                val = val * np.exp(-self.alpha * x[left] ** 2 / 2.0)
            out[left] = val
        if right.any():
            w = np.exp(-t[right])
            prev = ComplexPoly(num.coeffs[::-1])
            qrev = ComplexPoly(den.coeffs[::-1])
            expo = (m - n) * t[right]
            if self.family == FAMILY_GAUSS:
                expo = expo - self.alpha * x[right] ** 2 / 2.0
            out[right] = prev(w) / qrev(w) * np.exp(expo)
        return out

    def quasi_period_factor(self, z: complex) -> complex:
        """Family C: G(z + 2 pi i/alpha) = factor(z) * G(z)."""
        if self.family != FAMILY_GAUSS:
            raise GeneratorError("quasi-period factor is a family-C notion")
        return cmath.exp(-2j * math.pi * z + 2.0 * math.pi**2 / self.alpha)

    def to_config(self) -> dict:
        return {
            "class": self.family,
            "alpha": self.alpha,
            "P": self.r.num.to_json(),
            "Q": self.r.den.to_json(),
        }


def _abs_eval(p: ComplexPoly, r: float) -> float:
    return float(np.polyval(np.abs(np.array(p.coeffs))[::-1], r)) if not p.is_zero else 0.0


def _real_axis_pole(root: complex) -> bool:
    return abs(root.imag) < REAL_AXIS_TOL and root.real >= -REAL_AXIS_TOL


def _strip_logs(poles) -> tuple[complex, ...]:
    out = []
    for w, mult in poles:
        arg = cmath.phase(w)
        if arg <= 0.0:
            arg += 2.0 * math.pi
        out.extend([complex(math.log(abs(w)), arg)] * mult)
    out.sort(key=lambda v: (v.imag, v.real))
    return tuple(out)


def _sym_const(r: RationalFn, k: int) -> complex:
    omega = cmath.exp(2j * math.pi / k)
    candidates = [1.234 + 0.567j, 0.789 - 1.123j, 2.31 + 0.17j, 0.45 + 1.9j]
    vals = []
    for z0 in candidates:
        v0 = r(z0)
        v1 = r(omega * z0)
        if v0 is None or v1 is None or abs(v0) < 1e-12:
            continue
        vals.append(v1 / v0)
        if len(vals) == 2:
            break
    if len(vals) < 2 or abs(vals[0] - vals[1]) > 1e-10 * max(1.0, abs(vals[0])):
        raise GeneratorError(f"symmetry constant inconsistent for order {k}")
    return vals[0]


def _envelope(family: str, alpha: float, r: RationalFn) -> DecayEnvelope:
    m, n = r.num.degree, r.den.degree
    val = min(r.num.support(), default=0)
    # influence zone: where e^{alpha x} is within a factor e^5 of some pole
    mods = [abs(w) for w in r.pole_points] or [1.0]
    lo = (math.log(min(mods)) - 5.0) / alpha
    hi = (math.log(max(mods)) + 5.0) / alpha
    xs = [np.linspace(lo - 3.0, hi + 3.0, 4001)]
    for w in r.pole_points:
        c = math.log(abs(w)) / alpha
        xs.append(np.linspace(c - 0.5, c + 0.5, 2001))
    grid = np.concatenate(xs)

    if family == FAMILY_EXP:
        rate = alpha * min(n - m, val)
        ratio_hi = abs(r.num.coeffs[-1] / r.den.coeffs[-1])
        ratio_lo = abs(r.num.coeffs[val] / r.den.coeffs[0])
        vals = np.abs(_raw_rational(r, alpha, grid)) * np.exp(rate * np.abs(grid))
        amp = 1.02 * max(float(vals.max()), ratio_hi, ratio_lo)
        return DecayEnvelope("exponential", rate, amp)

    slope = alpha * max(0, m - n)
    vals = np.abs(_raw_rational(r, alpha, grid)) * np.exp(-slope * np.abs(grid))
    lim_hi = abs(r.num.coeffs[-1] / r.den.coeffs[-1])
    lim_lo = abs(r.num.coeffs[0] / r.den.coeffs[0]) if abs(r.num.coeffs[0]) > 0 else 0.0
    amp = 1.02 * max(float(vals.max()), lim_hi, lim_lo)
    return DecayEnvelope("gaussian", alpha, amp, slope=slope, poly_growth=max(0, m - n))


def _raw_rational(r: RationalFn, alpha: float, x: np.ndarray) -> np.ndarray:
    """R(e^{alpha x}) on real points, overflow-safe (no Gaussian factor)."""
    t = alpha * x
    out = np.empty(x.shape, dtype=complex)
    left = t <= 0.0
    if left.any():
        u = np.exp(t[left])
        out[left] = r.num(u) / r.den(u)
    if (~left).any():
        w = np.exp(-t[~left])
        prev = ComplexPoly(r.num.coeffs[::-1])
        qrev = ComplexPoly(r.den.coeffs[::-1])
        out[~left] = prev(w) / qrev(w) * np.exp((r.num.degree - r.den.degree) * t[~left])
    return out


def make_generator(family: str, alpha: float, P: ComplexPoly, Q: ComplexPoly) -> Generator:
    """Validate (P, Q) for the requested family and assemble a Generator.

    Rejections are per admission condition: (A) degree ordering, (B)
    vanishing of P at 0, (C) no pole of R on [0, inf) -- the same (C)
    applies to family C.
    """
    if family not in (FAMILY_EXP, FAMILY_GAUSS):
        raise GeneratorError(f"unknown family {family!r}, expected 'K' or 'C'")
    if not (alpha > 0.0) or not math.isfinite(alpha):
        raise GeneratorError("alpha must be a positive finite real")
    if P.is_zero or Q.is_zero:
        raise GeneratorError("P and Q must be non-trivial")
    if not coprime_check(P, Q):
        raise GeneratorError("P and Q share a zero")

    if family == FAMILY_EXP:
        if abs(P.coeffs[0]) > 1e-14 * P.scale:
            raise GeneratorError("condition (B) fails: P(0) != 0")
        if not (1 <= P.degree < Q.degree):
            raise GeneratorError(
                f"condition (A) fails: need 1 <= deg P < deg Q, got {P.degree}, {Q.degree}"
            )

    r = RationalFn.make(P, Q)
    for w, _ in r.poles:
        if _real_axis_pole(w):
            raise GeneratorError(f"condition (C) fails: Q vanishes at {w:.6g} on [0, inf)")

    k = support_gcd(P, Q)
    sym_const = None
    if family == FAMILY_EXP:
        if k is None:
            # monomial P and Q cannot satisfy (A)+(C); defensive only
            raise GeneratorError("unbounded symmetry order is impossible in family K")
        sym_const = _sym_const(r, k)

    return Generator(
        family=family,
        alpha=float(alpha),
        r=r,
        k=k,
        sym_const=sym_const,
        q=Q.degree,
        strip_poles=_strip_logs(r.poles),
        decay=_envelope(family, alpha, r),
    )


def hsec(alpha: float = 1.0) -> Generator:
    """The hyperbolic secant generator e^{alpha x} / (e^{2 alpha x} + 1)."""
    return make_generator(FAMILY_EXP, alpha, ComplexPoly([0, 1]), ComplexPoly([1, 0, 1]))


def hsec_combination(alpha: float, a, b) -> Generator:
    """Finite combination sum_j a_j * Hsec_alpha(x - b_j) as one family-K generator.

    Assembled over the common denominator prod_j (u^2 + e^{2 alpha b_j});
    requires e^{2 alpha b_j} off (-inf, 0] and pairwise distinct.
    """
    a = [complex(v) for v in a]
    b = [complex(v) for v in b]
    if len(a) != len(b) or not a:
        raise GeneratorError("need equally many coefficients and shifts, at least one")
    big = [cmath.exp(2.0 * alpha * bj) for bj in b]
    for j, ej in enumerate(big):
        if abs(ej.imag) < 1e-14 * abs(ej) and ej.real <= 0.0:
            raise GeneratorError(f"shift b[{j}] puts e^(2 alpha b) on (-inf, 0]")
        for l in range(j):
            if abs(ej - big[l]) <= COINCIDENT_TOL * max(abs(ej), abs(big[l])):
                raise GeneratorError(f"shifts b[{j}] and b[{l}] coincide mod the period")

    den = ComplexPoly([1])
    for ej in big:
        den = den * ComplexPoly([ej, 0, 1])
    num = ComplexPoly.zero()
    for j, (aj, bj, ej) in enumerate(zip(a, b, big)):
        term = ComplexPoly([0, aj * cmath.exp(alpha * bj)])
        for l, el in enumerate(big):
            if l != j:
                term = term * ComplexPoly([el, 0, 1])
        num = num + term
    g = make_generator(FAMILY_EXP, alpha, num, den)
    if g.k != 2 or g.q != 2 * len(a):
        raise GeneratorError(
            f"degenerate combination: expected k=2, q={2*len(a)}, got k={g.k}, q={g.q}"
        )
    return g


def gaussian_combination(alpha: float, a0, a=(), b=()) -> Generator:
    """Family-C generator e^{-alpha x^2/2} (a0 + sum_j a_j/(e^{alpha x} + e^{alpha b_j}))."""
    a = [complex(v) for v in a]
    b = [float(v) for v in b]
    if len(a) != len(b):
        raise GeneratorError("need equally many coefficients and shifts")
    big = [math.exp(alpha * bj) for bj in b]
    for j in range(len(big)):
        for l in range(j):
            if abs(big[j] - big[l]) <= COINCIDENT_TOL * max(big[j], big[l]):
                raise GeneratorError(f"shifts b[{j}] and b[{l}] coincide mod the period")

    den = ComplexPoly([1])
    for ej in big:
        den = den * ComplexPoly([ej, 1])
    num = complex(a0) * den
    for j, aj in enumerate(a):
        term = ComplexPoly([aj])
        for l, el in enumerate(big):
            if l != j:
                term = term * ComplexPoly([el, 1])
        num = num + term
    g = make_generator(FAMILY_GAUSS, alpha, num, den)
    if g.q != len(a):
        raise GeneratorError(f"degenerate combination: expected q={len(a)}, got q={g.q}")
    return g


def generator_from_config(cfg: dict) -> Generator:
    """Build a generator from a config block.

    Accepted forms:
      {"class": "K"|"C", "alpha": a, "P": [[re,im],...], "Q": [...]}
      {"hsec_combo": {"alpha": a, "a": [...], "b": [...]}}
      {"gauss_combo": {"alpha": a, "a0": v, "a": [...], "b": [...]}}
    Coefficient entries may be numbers or [re, im] pairs.
    """
    if "hsec_combo" in cfg:
        sub = cfg["hsec_combo"]
        return hsec_combination(
            float(sub.get("alpha", 1.0)),
            [_as_complex(v) for v in sub["a"]],
            [_as_complex(v) for v in sub["b"]],
        )
    if "gauss_combo" in cfg:
        sub = cfg["gauss_combo"]
        return gaussian_combination(
            float(sub.get("alpha", 1.0)),
            _as_complex(sub.get("a0", 0.0)),
            [_as_complex(v) for v in sub.get("a", [])],
            [float(v) for v in sub.get("b", [])],
        )
    if "class" in cfg:
        P = ComplexPoly([_as_complex(v) for v in cfg["P"]])
        Q = ComplexPoly([_as_complex(v) for v in cfg["Q"]])
        return make_generator(cfg["class"], float(cfg["alpha"]), P, Q)
    raise GeneratorError("config needs one of: class/P/Q, hsec_combo, gauss_combo")


def _as_complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    return complex(v)
