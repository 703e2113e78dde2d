"""Distribution-free level-alpha limits on out-of-sample losses."""

from lalim._core import (
    __version__,
    binomial_cdf,
    binomial_quantile,
    ceil_fraction,
    curve,
    exact_tail_a,
    k_star_finite,
    k_star_infinite,
    k_star_single,
    limit,
    log_binomial,
    oracle_exceeds,
    oracle_pmf,
    order_pmf,
    tail_a,
    tail_a_all,
)

__all__ = [
    "__version__",
    "binomial_cdf",
    "binomial_quantile",
    "ceil_fraction",
    "curve",
    "exact_tail_a",
    "k_star_finite",
    "k_star_infinite",
    "k_star_single",
    "limit",
    "log_binomial",
    "oracle_exceeds",
    "oracle_pmf",
    "order_pmf",
    "tail_a",
    "tail_a_all",
]
