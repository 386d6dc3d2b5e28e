"""Airy functions and the cubic oscillatory integral."""
from .airy import (
    OMEGA,
    AiryBranch,
    AiryValue,
    OscillatoryIntegral,
    airy,
    airy_bi,
    airy_solution,
    branch_valleys,
    cubic_oscillatory_integral,
    descent_valleys,
    sector_branch,
    valley_quadrature,
)

__all__ = [
    "OMEGA",
    "AiryBranch",
    "AiryValue",
    "OscillatoryIntegral",
    "airy",
    "airy_bi",
    "airy_solution",
    "branch_valleys",
    "cubic_oscillatory_integral",
    "descent_valleys",
    "sector_branch",
    "valley_quadrature",
]
