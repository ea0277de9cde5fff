"""Bandlimited signals under time warps.

Synthesis and analysis of bandlimited signals, warp classification and
bandwidth transport, re-bandlimiting of warped signals with exact spectral
tail accounting, the warped-kernel Hilbert space of the composition range,
and structure-function (de Branges-Rovnyak) generalizations.
"""

__version__ = "0.1.0"

from ._kernels import backend, warm_up
from .debranges import (
    AffineBoundednessReport,
    DbrMeasure,
    StructureFunction,
    affine_boundedness_test,
    custom_structure,
    dbr_kernel,
    dbr_measure_bound_check,
    exponential_structure,
    hg_norm,
    mean_type_gate,
    poly_exp_structure,
)
from .growth import (
    CoefficientSequence,
    GrowthEstimate,
    MeanTypeEstimate,
    estimate_growth,
    estimate_order,
    estimate_type,
    maclaurin_coefficients,
    mean_type,
    scale_coefficients,
)
from .paley_wiener import (
    BandlimitedSignal,
    BandSpec,
    RealGrid,
    Spectrum,
    TimeSamples,
    default_grid,
    forward_transform,
    iid_spectrum_signal,
    kernel_section,
    l2_inner,
    l2_norm,
    pw_kernel,
    random_signal,
    sample_on_grid,
    sinc_signal,
    synthesize,
)
from .range_rkhs import (
    ExpansionCoefficients,
    GramSystem,
    WarpedKernel,
    build_gram,
    injectivity_probe,
    orthonormality_defect,
    project_onto_kernels,
    pullback_norm_check,
    range_inner_product,
    warped_kernel_eval,
)
from .truncation import (
    TruncationResult,
    WarpedSignal,
    error_curve,
    truncate_to_band,
    warp_signal,
)
from .warps import (
    MeasureBoundReport,
    Warp,
    WarpClassification,
    affine_warp,
    check_measure_bound,
    classify,
    cubic_criterion,
    cubic_warp,
    identity_warp,
    invert_monotone,
    polynomial_warp,
    weighted_target_band,
)

__all__ = [name for name in dir() if not name.startswith("_")]
