import cmath
import math

import numpy as np
import pytest

from sisframes.generator import (
    GeneratorError,
    gaussian_combination,
    generator_from_config,
    hsec,
    hsec_combination,
    make_generator,
)
from sisframes.polyrat import ComplexPoly

Z = ComplexPoly([0, 1])


def test_symmetry_order_table():
    g = make_generator("K", 1.0, Z, ComplexPoly([1, 0, 1]))
    assert g.k == 2 and g.q == 2
    assert abs(g.sym_const - (-1)) < 1e-12

    g = make_generator("K", 1.0, Z, ComplexPoly([1, 0, 0, 0, 1]))
    assert g.k == 4
    assert abs(g.sym_const - 1j) < 1e-12

    g = make_generator("K", 1.0, Z, ComplexPoly([1, 2, 1]))
    assert g.k == 1
    assert abs(g.sym_const - 1) < 1e-12


def test_strip_poles_hsec():
    g = hsec()
    assert len(g.strip_poles) == 2
    assert abs(g.strip_poles[0] - 1j * math.pi / 2) < 1e-12
    assert abs(g.strip_poles[1] - 3j * math.pi / 2) < 1e-12


def test_condition_rejections():
    with pytest.raises(GeneratorError, match=r"\(B\)"):
        make_generator("K", 1.0, ComplexPoly([1]), ComplexPoly([1, 0, 1]))
    with pytest.raises(GeneratorError, match=r"\(A\)"):
        make_generator("K", 1.0, ComplexPoly([0, 0, 0, 1]), ComplexPoly([1, 0, 1]))
    # root of Q at +1 sits on [0, inf)
    with pytest.raises(GeneratorError, match=r"\(C\)"):
        make_generator("K", 1.0, Z, ComplexPoly.from_roots([1.0, -3.0]))
    with pytest.raises(GeneratorError, match=r"\(C\)"):
        make_generator("C", 1.0, ComplexPoly([1]), ComplexPoly([0, 0, 1]))
    with pytest.raises(GeneratorError):
        make_generator("K", -1.0, Z, ComplexPoly([1, 0, 1]))
    with pytest.raises(GeneratorError):
        make_generator("X", 1.0, Z, ComplexPoly([1, 0, 1]))


def test_gaussian_family_accepts_nonvanishing_p0():
    g = make_generator("C", 1.0, ComplexPoly([1]), ComplexPoly([1]))
    assert g.q == 0 and g.k is None and g.sym_const is None
    assert g.eval_at(0.0) == pytest.approx(1.0)


def test_hsec_values():
    g = hsec()
    assert g.eval_at(0.0) == pytest.approx(0.5)
    assert g.eval_at(1j * math.pi / 2) is None  # pole of the rational part
    # far-field value against the extended-exponent closed form
    v = g.eval_at(50.0)
    exact = math.exp(-50.0) / (1.0 + math.exp(-100.0))
    assert abs(v - exact) <= 1e-12 * exact
    v = g.eval_at(-700.0)
    assert v == pytest.approx(math.exp(-700.0), rel=1e-12)
    assert np.isfinite(g.eval_at(700.0))


def test_sample_matches_pointwise(zoo_k, zoo_c):
    xs = np.linspace(-25, 25, 257)
    for g in list(zoo_k.values()) + list(zoo_c.values()):
        vec = g.sample(xs)
        ptw = np.array([g.eval_at(x) for x in xs])
        assert np.max(np.abs(vec - ptw)) <= 1e-13 * max(1.0, np.max(np.abs(ptw)))


def test_periodicity_and_symmetry_random_strip_points(zoo_k, rng):
    for g in zoo_k.values():
        period = g.period
        zs = rng.uniform(-3, 3, 50) + 1j * rng.uniform(0.05, 1.8, 50)
        for z in zs:
            v = g.eval_at(z)
            if v is None or abs(v) < 1e-14:
                continue
            vp = g.eval_at(z + period)
            assert abs(vp - v) <= 1e-10 * abs(v)
            vs = g.eval_at(z + period / g.k)
            assert abs(vs - g.sym_const * v) <= 1e-10 * abs(v)


@pytest.mark.parametrize("alpha", [1.0, 1.7])
def test_quasi_periodicity_gaussian_family(alpha, rng):
    g = gaussian_combination(alpha, 0.0, [1.0], [0.4])
    period = 2j * math.pi / alpha
    for _ in range(20):
        z = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.0, 1.0))
        v = g.eval_at(z)
        if v is None or abs(v) < 1e-300:
            continue
        factor = cmath.exp(-2j * math.pi * z + 2.0 * math.pi**2 / alpha)
        lhs = g.eval_at(z + period)
        assert abs(lhs - factor * v) <= 1e-9 * abs(factor * v)


def test_quasi_periodicity_alpha1_explicit_factor(gauss_gen, rng):
    # the alpha = 1 factor in closed form: e^{-2 pi i z + 2 pi^2}
    for _ in range(10):
        z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        lhs = gauss_gen.eval_at(z + 2j * math.pi)
        rhs = cmath.exp(-2j * math.pi * z + 2 * math.pi**2) * gauss_gen.eval_at(z)
        assert abs(lhs - rhs) <= 1e-10 * abs(rhs)


def test_decay_envelope_grid(zoo_k, zoo_c):
    xs = np.linspace(-30.0, 30.0, 10_000)
    for name, g in {**zoo_k, **zoo_c}.items():
        vals = np.abs(g.sample(xs))
        bounds = g.decay(np.abs(xs))
        assert np.all(vals <= bounds * (1 + 1e-12)), f"envelope violated for {name}"


def test_hsec_combination_single_term_is_hsec():
    g1 = hsec_combination(1.0, [1.0], [0.0])
    g0 = hsec()
    xs = np.linspace(-5, 5, 101)
    assert np.max(np.abs(g1.sample(xs) - g0.sample(xs))) < 1e-14


def test_hsec_combination_counts():
    g = hsec_combination(1.0, [1.0, 1.0], [0.3, 0.8])
    assert g.k == 2 and g.q == 4


def test_hsec_combination_rejections():
    with pytest.raises(GeneratorError, match="coincide"):
        hsec_combination(1.0, [1.0, 1.0], [0.3, 0.3])
    # e^{2b} on the negative real axis
    with pytest.raises(GeneratorError, match=r"\(-inf, 0\]"):
        hsec_combination(1.0, [1.0], [1j * math.pi / 2])
    with pytest.raises(GeneratorError):
        hsec_combination(1.0, [1.0, 1.0], [0.2])


def test_gaussian_combination_cases():
    g0 = gaussian_combination(1.0, 1.0)
    assert g0.q == 0

    g1 = gaussian_combination(1.0, 0.0, [1.0], [0.0])
    assert g1.q == 1
    (w, m), = g1.r.poles
    assert m == 1 and abs(w - (-1.0)) < 1e-12

    alpha = 1.3
    g2 = gaussian_combination(alpha, 0.0, [1.0, 2.0], [0.25, 0.75])
    got = sorted(w.real for w, _ in g2.r.poles)
    expect = sorted([-math.exp(0.25 * alpha), -math.exp(0.75 * alpha)])
    assert np.allclose(got, expect, rtol=1e-12)


def test_config_forms():
    g = generator_from_config({"class": "K", "alpha": 1.0, "P": [[0, 0], [1, 0]], "Q": [[1, 0], [0, 0], [1, 0]]})
    assert g.k == 2
    g2 = generator_from_config({"hsec_combo": {"a": [1.0], "b": [0.0]}})
    assert abs(g2.eval_at(0.3) - g.eval_at(0.3)) < 1e-14
    g3 = generator_from_config({"gauss_combo": {"alpha": 2.0, "a0": 1.0}})
    assert g3.family == "C" and g3.q == 0
    with pytest.raises(GeneratorError):
        generator_from_config({})
    # roundtrip through the emitted config block
    g4 = generator_from_config(hsec_combination(1.0, [1, -1], [0, 1]).to_config())
    assert g4.q == 4
