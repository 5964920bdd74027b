import math

import numpy as np
import pytest

from sisframes.polyrat import (
    ComplexPoly,
    RationalFn,
    RootFindingError,
    coprime_check,
    poly_roots,
    rational_eval,
    support_gcd,
)


def as_dict(roots):
    return {complex(round(w.real, 6), round(w.imag, 6)): m for w, m in roots}


def test_roots_quadratic():
    roots = as_dict(poly_roots(ComplexPoly([1, 0, 1])))
    assert roots == {1j: 1, -1j: 1}


def test_roots_perfect_cube():
    roots = poly_roots(ComplexPoly([-8, 12, -6, 1]))
    assert len(roots) == 1
    w, m = roots[0]
    assert m == 3 and abs(w - 2.0) < 1e-9


def test_roots_eighth_unit_circle():
    p = ComplexPoly([1, 0, 0, 0, 1])
    roots = poly_roots(p)
    assert sorted(m for _, m in roots) == [1, 1, 1, 1]
    # direct-evaluation oracle for each reported root
    for w, _ in roots:
        assert abs(p(w)) < 1e-12


def test_reconstruction_random():
    rng = np.random.default_rng(7)
    for deg in (2, 5, 8, 12):
        c = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
        p = ComplexPoly(c)
        roots = poly_roots(p)
        assert sum(m for _, m in roots) == p.degree
        q = ComplexPoly.from_roots(
            [w for w, m in roots for _ in range(m)], lead=p.coeffs[-1]
        )
        err = max(abs(a - b) for a, b in zip(p.coeffs, q.coeffs))
        assert err <= 1e-9 * p.scale


def test_roots_rejects_constants():
    with pytest.raises(ValueError):
        poly_roots(ComplexPoly([3.0]))
    with pytest.raises(ValueError):
        poly_roots(ComplexPoly.zero())


def test_degree_cap():
    with pytest.raises(ValueError):
        ComplexPoly([0.0] * 65 + [1.0])


def test_coprime_examples():
    z = ComplexPoly([0, 1])
    assert coprime_check(z, ComplexPoly([1, 0, 1]))
    assert not coprime_check(ComplexPoly([-1, 1]), ComplexPoly([-1, 0, 1]))
    # clustered near-zero root of q lands under the tolerance
    assert not coprime_check(z, ComplexPoly.from_roots([-1e-15, -2.0]))


def test_support_gcd_examples():
    z = ComplexPoly([0, 1])
    assert support_gcd(z, ComplexPoly([1, 0, 1])) == 2
    assert support_gcd(z, ComplexPoly([1, 0, 0, 0, 1])) == 4
    assert support_gcd(z, ComplexPoly([1, 2, 1])) == 1
    assert support_gcd(z, ComplexPoly([1])) is None  # both monomials


@pytest.mark.parametrize(
    "pc,qc",
    [
        ([0, 1], [1, 0, 1]),
        ([0, 1], [1, 0, 0, 0, 1]),
        ([0, 1], [1, 2, 1]),
        ([0, 0, 1.5, 0, 0.5], [2, 0, 1, 0, 3, 0, 1]),
    ],
)
def test_support_gcd_maximality(pc, qc):
    """g admits a rotation constant; no larger non-divisor order does."""
    p, q = ComplexPoly(pc), ComplexPoly(qc)
    r = RationalFn.make(p, q)
    g = support_gcd(p, q)
    rng = np.random.default_rng(11)
    pts = rng.standard_normal(20) + 1j * rng.standard_normal(20)

    def ratios(k):
        omega = np.exp(2j * np.pi / k)
        out = []
        for z in pts:
            v0, v1 = rational_eval(r, z), rational_eval(r, omega * z)
            if v0 is None or v1 is None or abs(v0) < 1e-9:
                continue
            out.append(v1 / v0)
        return np.array(out)

    vals = ratios(g)
    c = vals[0]
    assert np.max(np.abs(vals - c)) <= 1e-10 * max(1.0, abs(c))
    for k in range(g + 1, 2 * q.degree + 1):
        if g % k == 0:
            continue
        vals = ratios(k)
        spread = np.max(np.abs(vals - vals.mean()))
        assert spread > 1e-6, f"unexpected rotation constant at order {k}"


def test_rational_eval_examples():
    r = RationalFn.make(ComplexPoly([0, 1]), ComplexPoly([1, 0, 1]))
    assert rational_eval(r, 1.0) == pytest.approx(0.5)
    assert rational_eval(r, 1j) is None
    assert rational_eval(r, 0.0) == 0.0
    # large argument goes through the reversed form without overflow
    assert rational_eval(r, 1e150) == pytest.approx(1e-150)


def test_rational_requires_coprime():
    with pytest.raises(ValueError):
        RationalFn.make(ComplexPoly([-1, 1]), ComplexPoly([-1, 0, 1]))


def test_pole_orders_sum():
    den = ComplexPoly.from_roots([2.0, 2.0, -1.0 + 0.5j])
    r = RationalFn.make(ComplexPoly([0, 1]), den)
    assert sum(m for _, m in r.poles) == den.degree
    orders = {complex(round(w.real, 6), round(w.imag, 6)): m for w, m in r.poles}
    assert orders[(2 + 0j)] == 2


def test_taylor_and_deflate():
    p = ComplexPoly([1, 2, 3])
    assert np.allclose(p.taylor_coeffs(1.0, 2), [6, 8, 3])
    cube = ComplexPoly([-8, 12, -6, 1])
    assert np.allclose(cube.deflate(2.0, 2).coeffs, [-2, 1])


def test_json_roundtrip():
    p = ComplexPoly([1 + 2j, 0, 3.5])
    assert ComplexPoly.from_json(p.to_json()) == p
