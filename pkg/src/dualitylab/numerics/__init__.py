"""Special functions, quadrature and root finding used by every other module."""

from .oscillatory import fourier_cosine_transform, kernel_cutoff, kernel_tail_bound, wynn_epsilon
from .quadrature import (
    DEFAULT_QUAD,
    QuadConfig,
    QuadResult,
    integrate_halfline,
    integrate_interval,
)
from .roots import find_root_bracketed
from .special import duplication_residual, gamma, log_gamma, zeta_real, zeta_tail

__all__ = [
    "DEFAULT_QUAD",
    "QuadConfig",
    "QuadResult",
    "duplication_residual",
    "find_root_bracketed",
    "fourier_cosine_transform",
    "gamma",
    "integrate_halfline",
    "integrate_interval",
    "kernel_cutoff",
    "kernel_tail_bound",
    "log_gamma",
    "wynn_epsilon",
    "zeta_real",
    "zeta_tail",
]
