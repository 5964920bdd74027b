"""Sampling, stability and Gabor-frame analysis for shift-invariant spaces
generated by rational-exponential and Gaussian-damped generators."""

from .polyrat import ComplexPoly, RationalFn, coprime_check, poly_roots, rational_eval, support_gcd
from .generator import (
    DecayEnvelope,
    Generator,
    GeneratorError,
    gaussian_combination,
    generator_from_config,
    hsec,
    hsec_combination,
    make_generator,
)
from .sets import (
    DensityReport,
    SeparatedSet,
    beurling_densities,
    covering_constant,
    restrict,
    scale,
    set_from_config,
    transform,
    translate,
)
from .spectral import (
    SpectrumSample,
    StabilityVerdict,
    XiReport,
    fourier_transform,
    periodized_spectrum,
    quad_transform,
    residue_transform,
    spectrum_grid,
    stability_check,
    wiener_norm,
    xi_check,
)
from .synthesis import BesselReport, SISFunction, bessel_bound_check, sis_function, synthesize
from .frames import (
    FrameReport,
    GaborReport,
    InterpolationReport,
    PreGramian,
    gabor_frame_sweep,
    interpolate_demo,
    lower_frame_bound,
    pre_gramian,
    sampling_verdict,
    schur_upper,
)
from .counterexample import (
    ConstructionError,
    NonUniquenessReport,
    VanisherSolution,
    build_vanisher,
    densify,
    verify_exg_example,
    verify_hdef_example,
    verify_nonuniqueness,
)

__version__ = "0.1.0"
