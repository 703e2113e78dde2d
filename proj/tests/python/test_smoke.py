"""Smoke tests for the python module."""

import math

import pytest

import lalim


def test_order_pmf_pinned_values():
    assert lalim.order_pmf(1, 1, 1, 0) == pytest.approx(0.5, abs=1e-14)
    assert lalim.order_pmf(4, 2, 2, 4) == pytest.approx(5 / 15, abs=1e-14)


def test_tail_matches_exact_fraction():
    num, den = lalim.exact_tail_a(4, 4, 2, 2)
    assert (num, den) == (1, 3)
    assert lalim.tail_a(4, 4, 2, 2) == pytest.approx(num / den, rel=1e-12)


def test_oracles_agree_with_the_fast_path():
    for n in range(1, 5):
        for m in range(1, 4):
            for i in range(1, m + 1):
                for j in range(n + 1):
                    num, den = lalim.oracle_pmf(n, m, i, j)
                    assert lalim.order_pmf(n, m, i, j) == pytest.approx(
                        num / den, abs=1e-12
                    )


def test_limit_query():
    out = lalim.limit([1.0, 2.0, 3.0, 4.0], m=2, beta=1.0, alpha=0.35)
    assert out["k_star"] == 4
    assert out["limit"] == 4.0
    assert out["ordinal"] == 2
    assert out["exact_coverage"] == pytest.approx(2 / 3, rel=1e-12)


def test_infinite_batch_and_sentinel():
    out = lalim.limit([1.0, 2.0, 3.0], m="inf", beta=1.0, alpha=0.1)
    assert out["k_star"] == 4
    assert math.isinf(out["limit"])
    out = lalim.limit([1.0, 2.0, 3.0], m=math.inf, beta=0.5, alpha=0.4)
    assert out["ordinal"] is None


def test_curve_reproduces_limit():
    losses = [0.5, 1.5, 0.25, 2.0, 1.0]
    points = lalim.curve(losses, m=3, beta=0.5)
    assert len(points) == len(losses) + 1
    out = lalim.limit(losses, m=3, beta=0.5, alpha=0.2)
    k, alpha, lim = next(p for p in points if p[1] <= 0.2)
    assert (k, lim) == (out["k_star"], out["limit"])


def test_binomial_quantile():
    assert lalim.binomial_quantile(0.95, 150, 0.8) == 128
    assert lalim.binomial_quantile(0.0, 10, 0.5) == 0


def test_errors_are_python_exceptions():
    with pytest.raises(ValueError):
        lalim.order_pmf(4, 2, 0, 0)
    with pytest.raises(ValueError):
        lalim.limit([1.0], m=0, alpha=0.1)
    with pytest.raises(ValueError):
        lalim.exact_tail_a(1, 400, 200, 10)
    with pytest.raises(RuntimeError):
        lalim.limit([], alpha=0.1)
