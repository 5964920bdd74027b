import math

import numpy as np
import pytest

from sisframes.sets import SeparatedSet, scale
from sisframes.synthesis import bessel_bound_check, sis_function, synthesize

# direct large-truncation oracle for sum_n Hsec(n), frozen at build time
SUM_HSEC_AT_INTEGERS = 1.5711213299675


def delta0(pts):
    return (np.abs(pts) < 0.5).astype(complex)


def ones(pts):
    return np.ones(pts.shape, dtype=complex)


def alternating(pts):
    return np.where(np.round(pts).astype(int) % 2 == 0, 1.0, -1.0).astype(complex)


def test_single_shift(hsec_gen, integers):
    f = sis_function(hsec_gen, integers, delta0, (-5, 5))
    assert synthesize(f, 0.0) == pytest.approx(0.5)
    assert synthesize(f, 2.0) == pytest.approx(0.5 / math.cosh(2.0), abs=1e-12)


def test_telescoping_vanishes(exg_gen, integers):
    f = sis_function(exg_gen, integers, ones, (-3, 3))
    xs = np.linspace(-3, 3, 640)
    assert np.max(np.abs(synthesize(f, xs))) <= max(f.tail_bound, 1e-12)


def test_constant_coefficient_sum(hsec_gen, integers):
    f = sis_function(hsec_gen, integers, ones, (-2, 2))
    assert synthesize(f, 0.0) == pytest.approx(SUM_HSEC_AT_INTEGERS, abs=1e-10)


def test_linearity(hsec_gen, integers, rng):
    window = (-4, 4)
    probe = sis_function(hsec_gen, integers, ones, window)
    pts = probe.points
    c1 = rng.standard_normal(pts.size) + 1j * rng.standard_normal(pts.size)
    c2 = rng.standard_normal(pts.size) + 1j * rng.standard_normal(pts.size)
    lam = 0.7 - 0.2j
    xs = np.linspace(-4, 4, 41)
    f1 = sis_function(hsec_gen, integers, c1, window, rho=probe.radius)
    f2 = sis_function(hsec_gen, integers, c2, window, rho=probe.radius)
    f12 = sis_function(hsec_gen, integers, c1 + lam * c2, window, rho=probe.radius)
    lhs = synthesize(f12, xs)
    rhs = synthesize(f1, xs) + lam * synthesize(f2, xs)
    assert np.max(np.abs(lhs - rhs)) <= 1e-13 * max(1.0, np.max(np.abs(rhs)))


def test_tail_certificate_doubling(hsec_gen, integers, rng):
    window = (-2, 2)
    base = sis_function(hsec_gen, integers, ones, window)
    wide = sis_function(hsec_gen, integers, ones, window, rho=2 * base.radius)
    xs = np.linspace(-2, 2, 33)
    assert np.max(np.abs(synthesize(base, xs) - synthesize(wide, xs))) <= base.tail_bound


def test_eval_window_enforced(hsec_gen, integers):
    f = sis_function(hsec_gen, integers, ones, (-1, 1))
    with pytest.raises(ValueError):
        synthesize(f, 3.0)


def test_signed_periodization_antiperiodic(hsec_gen, integers):
    f = sis_function(hsec_gen, integers, alternating, (-1, 3))
    xs = np.linspace(0.0, 1.0, 101)
    lhs = synthesize(f, xs + 1.0)
    rhs = -synthesize(f, xs)
    assert np.max(np.abs(lhs - rhs)) <= 2 * f.tail_bound + 1e-12


def test_coefficients_as_dict(hsec_gen, integers):
    f = sis_function(hsec_gen, integers, {0.0: 2.0}, (-1, 1))
    assert synthesize(f, 0.0) == pytest.approx(1.0)


@pytest.mark.parametrize("p", [1, 2, math.inf])
def test_bessel_bound(hsec_gen, integers, p):
    rep = bessel_bound_check(hsec_gen, integers, trials=15, p=p, seed=3)
    assert rep.ok and rep.max_ratio <= 1.01


def test_bessel_denser_set(gauss_gen):
    half = scale(SeparatedSet.integers(), 0.5)
    rep = bessel_bound_check(gauss_gen, half, trials=10, p=2, seed=4)
    assert rep.ok
    assert rep.covering == 3


def test_single_spike_ratio_below_one(hsec_gen, integers):
    # one-term series: ||G||_inf over N^1 * ||G||_W is far under the bound
    rep = bessel_bound_check(hsec_gen, integers, trials=1, p=math.inf, seed=0)
    assert rep.max_ratio <= 1.0
