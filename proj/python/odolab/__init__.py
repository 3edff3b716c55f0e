"""Odometer maps W_L on truncated Fock spaces."""

from ._odolab import (
    BoundaryZeroSuspected,
    CapExceeded,
    CertificateError,
    Error,
    InputError,
    NotIsometric,
    NumericalFailure,
    PreconditionError,
    RangeNotContained,
    Symbol,
    build_wl,
    build_wl_adjoint,
    classify,
    coburn_bound,
    defect,
    douglas_factor,
    gallery_build,
    gallery_names,
    hyponormality_probe,
    is_inner,
    norm_report,
    toeplitz_truncation,
    verify,
)

__version__ = "0.1.0"
