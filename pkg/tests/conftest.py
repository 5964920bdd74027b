import numpy as np
import pytest

from sisframes.generator import (
    gaussian_combination,
    hsec,
    hsec_combination,
    make_generator,
)
from sisframes.polyrat import ComplexPoly
from sisframes.sets import SeparatedSet


@pytest.fixture(scope="session")
def hsec_gen():
    return hsec()


@pytest.fixture(scope="session")
def gauss_gen():
    return make_generator("C", 1.0, ComplexPoly([1]), ComplexPoly([1]))


@pytest.fixture(scope="session")
def exg_gen():
    # difference of unit-shifted secants; integer shifts are unstable
    return hsec_combination(1.0, [1.0, -1.0], [0.0, 1.0])


@pytest.fixture(scope="session")
def zoo_k():
    """Stable family-K zoo, q <= 6."""
    return {
        "hsec": hsec(),
        "combo2": hsec_combination(1.0, [1.0, 1.0], [0.3, 0.8]),
        "combo3": hsec_combination(1.0, [1.0, 0.5 + 0.25j, 2.0], [0.2, 0.7, 1.3]),
        "quartic": make_generator("K", 1.0, ComplexPoly([0, 1]), ComplexPoly([1, 0, 0, 0, 1])),
        "double_pole": make_generator("K", 1.0, ComplexPoly([0, 1]), ComplexPoly([4, 4, 1])),
        "alpha07": hsec(0.7),
    }


@pytest.fixture(scope="session")
def zoo_c():
    return {
        "gauss": make_generator("C", 1.0, ComplexPoly([1]), ComplexPoly([1])),
        "gauss1": gaussian_combination(1.0, 0.0, [1.0], [0.0]),
        "gauss2": gaussian_combination(1.0, 1.5, [1.0, 2.0], [0.25, 0.75]),
    }


@pytest.fixture(scope="session")
def integers():
    return SeparatedSet.integers()


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240607)
