# SPDX-License-Identifier: Apache-2.0
"""Coverage probability and area spectral efficiency of dense small-cell networks."""

from ._scncov import (
    CSV_HEADER,
    AseResult,
    ChannelParams,
    ConfigError,
    CoveragePoint,
    DomainError,
    IoError,
    NumericError,
    ase,
    coverage_probability,
    hyp2f1,
    los_probability,
    mc_coverage,
    path_loss,
    rho1,
    rho2,
    rician_cdf,
    rician_k,
    rician_pdf,
    run_sweep,
    sweep_csv,
)

__all__ = [
    "CSV_HEADER",
    "AseResult",
    "ChannelParams",
    "ConfigError",
    "CoveragePoint",
    "DomainError",
    "IoError",
    "NumericError",
    "ase",
    "coverage_probability",
    "hyp2f1",
    "los_probability",
    "mc_coverage",
    "path_loss",
    "rho1",
    "rho2",
    "rician_cdf",
    "rician_k",
    "rician_pdf",
    "run_sweep",
    "sweep_csv",
]
