import math

import numpy as np
import pytest
from scipy.integrate import quad

from sisframes.sets import SeparatedSet
from sisframes.spectral import (
    fourier_transform,
    periodized_spectrum,
    quad_transform,
    residue_transform,
    spectrum_grid,
    stability_check,
    wiener_norm,
    xi_check,
)


def hsec_hat(t):
    return (math.pi / 2.0) / math.cosh(math.pi**2 * t)


def test_hsec_transform_at_zero(hsec_gen):
    s = quad_transform(hsec_gen, 0.0)
    assert s.method == "quadrature"
    assert abs(s.value - math.pi / 2) < 1e-10


@pytest.mark.parametrize("t", [0.1, 0.25, 0.5, -0.7, 1.0, 2.5])
def test_hsec_residue_matches_sech_form(hsec_gen, t):
    r = residue_transform(hsec_gen, t)
    q = quad_transform(hsec_gen, t)
    assert abs(r.value - hsec_hat(t)) < 1e-9
    assert abs(q.value - hsec_hat(t)) < 1e-9
    assert abs(r.value - q.value) <= r.err_est + q.err_est


def test_residue_rejects_small_t(hsec_gen):
    with pytest.raises(ValueError):
        residue_transform(hsec_gen, 1e-4)
    s = fourier_transform(hsec_gen, 1e-4)
    assert s.method == "quadrature"


def test_gaussian_closed_form(gauss_gen):
    for t in (0.0, 0.15, 0.4, -0.8):
        s = quad_transform(gauss_gen, t)
        exact = math.sqrt(2 * math.pi) * math.exp(-2 * math.pi**2 * t**2)
        assert abs(s.value - exact) < 1e-12


def test_spectrum_grid_agrees_with_scalar_path(gauss_gen, zoo_c):
    ts = np.array([-1.5, -0.3, 0.0, 0.2, 0.9])
    for g in zoo_c.values():
        vals, err = spectrum_grid(g, ts)
        for t, v in zip(ts, vals):
            s = quad_transform(g, float(t))
            assert abs(v - s.value) <= err + s.err_est + 1e-12


def test_oracle_equivalence_zoo(zoo_k, rng):
    """Residue and quadrature transforms agree across the family-K zoo."""
    ts = rng.uniform(-3, 3, 40)
    ts = ts[np.abs(ts) >= 1e-3]
    for name, g in zoo_k.items():
        for t in ts[:20]:
            r = residue_transform(g, float(t))
            q = quad_transform(g, float(t))
            assert abs(r.value - q.value) < 1e-9, f"{name} at t={t}"
            assert abs(r.value - q.value) <= r.err_est + q.err_est


def test_hermitian_symmetry(zoo_k, rng):
    for name, g in zoo_k.items():
        if any(abs(c.imag) > 1e-14 for c in g.r.num.coeffs + g.r.den.coeffs):
            continue  # complex coefficients: no conjugate symmetry expected
        for t in rng.uniform(0.01, 2.5, 10):
            a = fourier_transform(g, float(t)).value
            b = fourier_transform(g, -float(t)).value
            assert abs(b - a.conjugate()) < 1e-10


@pytest.mark.parametrize("gen_name", ["hsec", "gauss"])
def test_energy_consistency(gen_name, hsec_gen, gauss_gen):
    g = hsec_gen if gen_name == "hsec" else gauss_gen
    time_side, _ = quad(lambda x: abs(g.sample(np.array([x]))[0]) ** 2, -40, 40, limit=300)
    freq_side, _ = quad(
        lambda t: abs(fourier_transform(g, t).value) ** 2, -4.0, 4.0, limit=300
    )
    assert freq_side == pytest.approx(time_side, rel=1e-6)


def test_periodized_floor_hsec(hsec_gen):
    # the fiber supremum at b = 0.5 sits at n = 0
    floor = periodized_spectrum(hsec_gen, 0.5, n_max=8)
    assert floor == pytest.approx(hsec_hat(0.5), rel=1e-9)


def test_periodized_floor_vanishing_fiber(exg_gen):
    assert periodized_spectrum(exg_gen, 0.0) < 1e-12


def test_periodized_floor_gaussian_positive(gauss_gen):
    for b in (0.0, 0.25, 0.5):
        assert periodized_spectrum(gauss_gen, b) > 1e-3


def test_stability_hsec(hsec_gen):
    v = stability_check(hsec_gen)
    assert v.stable and v.margin > 1e-3
    assert v.witness_b == pytest.approx(0.5)
    assert v.method == "numerical (grid)"


def test_stability_gaussian(gauss_gen):
    v = stability_check(gauss_gen)
    assert v.stable and v.margin > 1e-3


def test_stability_exg_fails(exg_gen):
    v = stability_check(exg_gen)
    assert not v.stable
    assert v.witness_b == 0.0


def test_stability_grid_floor(hsec_gen):
    with pytest.raises(ValueError):
        stability_check(hsec_gen, grid_size=8)


def test_xi_hsec(hsec_gen):
    rep = xi_check(hsec_gen)
    assert not rep.xi_prime  # two maximal-order poles
    assert rep.xi_triple_prime
    assert rep.xi_double_prime is True
    assert rep.max_order == 1 and len(rep.top_poles) == 2


def test_xi_exg_collides(exg_gen):
    rep = xi_check(exg_gen)
    assert not rep.xi_prime and not rep.xi_triple_prime
    # the witness collision i -> i*e at lattice distance 1
    assert any(abs(n) == 1 for _, _, n in rep.details["collisions"])


def test_xi_prime_single_top_pole(zoo_k):
    rep = xi_check(zoo_k["double_pole"])
    assert rep.xi_prime and rep.max_order == 2


def test_xi_gamma_variants(hsec_gen):
    as_set = xi_check(hsec_gen, SeparatedSet.integers())
    assert as_set.xi_double_prime is True
    exp = SeparatedSet.explicit([0.0, 1.0, 2.5], (-1, 3))
    assert xi_check(hsec_gen, exp).xi_double_prime == "not-evaluated"


def test_xi_never_contradicts_stability(zoo_k, zoo_c):
    """Where a pole-collision condition holds, the numerical margin is positive."""
    for name, g in {**zoo_k, **zoo_c}.items():
        rep = xi_check(g)
        if rep.xi_prime or rep.xi_triple_prime:
            v = stability_check(g, grid_size=64)
            assert v.margin > 0, f"{name}: margin {v.margin}"
            assert v.stable, f"{name}"


def test_wiener_norm_values(hsec_gen, gauss_gen):
    # frozen oracle values: sum of per-interval sups computed directly
    w = wiener_norm(hsec_gen)
    direct = 1.0 + 2 * sum(0.5 / math.cosh(k) for k in range(1, 40))
    assert direct <= w <= 1.02 * direct

    wg = wiener_norm(gauss_gen)
    direct_g = 2 * sum(math.exp(-(k**2) / 2.0) for k in range(0, 12))
    assert direct_g <= wg <= 1.02 * direct_g


def test_wiener_envelope_bound(zoo_k):
    for g in zoo_k.values():
        env = g.decay
        bound = env.amp * (1.0 + 2.0 / (1.0 - math.exp(-env.rate)))
        assert wiener_norm(g) <= bound
