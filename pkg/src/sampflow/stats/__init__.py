from .describe import Coverage, Histogram, coverage, histogram
from .distribution import ChiSquareResult, KsResult, chi_square_gof, ks_two_sample
from .sample_size import CochranParams, cochran_min_sample
from .special import (inverse_normal_cdf, kolmogorov_sf, normal_cdf,
                      regularized_lower_gamma, regularized_upper_gamma)

__all__ = [
    "ChiSquareResult", "CochranParams", "Coverage", "Histogram", "KsResult",
    "chi_square_gof", "cochran_min_sample", "coverage", "histogram",
    "inverse_normal_cdf", "kolmogorov_sf", "ks_two_sample", "normal_cdf",
    "regularized_lower_gamma", "regularized_upper_gamma",
]
