import math

import numpy as np
import pytest

from gbm_cutoff.cubic_solver import (
    CubicCoefficients,
    cardano_unique_real,
    correction_root,
    solve_log_cubic,
)
from gbm_cutoff.errors import ToolkitError


def bisect_root(f, lo, hi, iters=200):
    """Oracle: plain bisection on a sign-changing bracket."""
    flo = f(lo)
    assert flo * f(hi) < 0, "oracle bracket must change sign"
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if flo * fm <= 0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def random_cutoff_cubics(n, seed):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        gamma = rng.uniform(0.1, 2.0)
        b = rng.uniform(-1.0, 1.0)
        a = rng.uniform(-1.0, 1.0)
        log_eps = -rng.uniform(5.0, 30.0)
        out.append(CubicCoefficients(gamma, b, a, log_eps))
    return out


class TestCardano:
    def test_perfect_cube(self):
        assert cardano_unique_real(CubicCoefficients(1.0, 0.0, 0.0, -8.0)) == pytest.approx(2.0, abs=1e-12)

    def test_cutoff_coefficients_perfect_cube(self):
        c = CubicCoefficients.from_cutoff(1.0, 0.0, 0.0, math.exp(-8.0))
        assert cardano_unique_real(c) == pytest.approx(2.0, abs=1e-12)

    def test_reference_cubic_against_bisection(self):
        c = CubicCoefficients(0.3, 0.15, 0.9, -10.0)
        t = cardano_unique_real(c)
        ref = bisect_root(c, 0.0, 10.0)
        assert abs(t - ref) < 1e-9
        assert 2.7 < t < 2.9
        assert abs(c(t)) < 1e-9 * (1.0 + abs(c.c0))

    def test_random_suite_residual_and_bisection(self):
        for c in random_cutoff_cubics(100, seed=41):
            t = cardano_unique_real(c)
            assert abs(c(t)) < 1e-9 * (1.0 + abs(c.c0))
            hi = 10.0 * (1.0 + abs(c.c0))
            ref = bisect_root(c, 0.0, hi)
            assert abs(t - ref) < 1e-9

    def test_monotone_in_log_eps(self):
        for gamma, b, a in [(1.0, 0.5, 0.2), (0.3, 0.0, 0.9), (2.0, 1.0, 0.0)]:
            roots = [
                cardano_unique_real(CubicCoefficients(gamma, b, a, -float(n)))
                for n in range(5, 31)
            ]
            assert all(r2 > r1 for r1, r2 in zip(roots, roots[1:]))

    def test_triple_root(self):
        # (t - 1)^3 = t^3 - 3 t^2 + 3 t - 1
        assert cardano_unique_real(CubicCoefficients(1.0, -3.0, 3.0, -1.0)) == pytest.approx(1.0, abs=1e-9)

    def test_three_real_roots_refused(self):
        # roots 1, 2, 3
        with pytest.raises(ToolkitError) as err:
            cardano_unique_real(CubicCoefficients(1.0, -6.0, 11.0, -6.0))
        assert err.value.code == "ambiguous_roots"

    def test_double_plus_simple_refused(self):
        # (t - 1)^2 (t - 3) = t^3 - 5 t^2 + 7 t - 3
        with pytest.raises(ToolkitError) as err:
            cardano_unique_real(CubicCoefficients(1.0, -5.0, 7.0, -3.0))
        assert err.value.code == "ambiguous_roots"

    def test_linear_fallback(self):
        assert cardano_unique_real(CubicCoefficients(0.0, 0.0, 2.0, -5.0)) == pytest.approx(2.5)

    def test_quadratic_two_roots_refused(self):
        with pytest.raises(ToolkitError) as err:
            cardano_unique_real(CubicCoefficients(0.0, 1.0, 0.0, -1.0))
        assert err.value.code == "ambiguous_roots"

    def test_quadratic_double_root(self):
        # (t - 1)^2: single distinct value is acceptable
        assert cardano_unique_real(CubicCoefficients(0.0, 1.0, -2.0, 1.0)) == pytest.approx(1.0)

    def test_extreme_constant_term_precision(self):
        # cube-root cancellation regime: huge |ln eps|
        c = CubicCoefficients(0.7, 0.3, 0.1, -1000.0)
        t = cardano_unique_real(c)
        assert abs(c(t)) < 1e-9 * (1.0 + abs(c.c0))


class TestLogCubic:
    def test_ell_zero_identical_to_cardano(self):
        c = CubicCoefficients(0.3, 0.15, 0.9, -10.0)
        assert solve_log_cubic(c, 0) == cardano_unique_real(c)

    def test_reference_log_cubic(self):
        c = CubicCoefficients(1.0, 0.0, 0.0, -8.0)
        T = solve_log_cubic(c, 1)
        f = lambda t: t**3 - math.log(t) - 8.0
        ref = bisect_root(f, 1.0, 4.0)
        assert abs(T - ref) < 1e-9
        assert 2.0 < T < 2.2

    def test_random_suite_residual(self):
        for k, c in enumerate(random_cutoff_cubics(100, seed=42)):
            ell = 1 + (k % 3)
            T = solve_log_cubic(c, ell)
            res = c(T) - ell * math.log(T)
            assert abs(res) < 1e-9 * (1.0 + abs(c.c0))

    def test_requires_positive_cubic_coefficient(self):
        with pytest.raises(ToolkitError) as err:
            solve_log_cubic(CubicCoefficients(-1.0, 0.0, 0.0, -8.0), 1)
        assert err.value.code == "bad_coefficients"


class TestCorrectionRoot:
    def test_ell_zero_gives_zero(self):
        c = CubicCoefficients(1.0, 0.0, 0.0, -8.0)
        assert correction_root(2.0, c, 0) == 0.0

    def test_reference_small_positive_root(self):
        c = CubicCoefficients(1.0, 0.0, 0.0, -8.0)
        r = correction_root(2.0, c, 1)
        f = lambda s: s**3 + 6.0 * s**2 + 12.0 * s - math.log(2.0)
        ref = bisect_root(f, 0.0, 1.0)
        assert abs(r - ref) < 1e-9
        assert 0.0 < r < 0.1

    def test_residual_on_random_suite(self):
        for k, c in enumerate(random_cutoff_cubics(60, seed=43)):
            t_eps = cardano_unique_real(c)
            if t_eps <= 1.0:
                continue
            ell = 1 + (k % 2)
            r = correction_root(t_eps, c, ell)
            corr = CubicCoefficients(
                c.c3,
                3.0 * c.c3 * t_eps + c.c2,
                3.0 * c.c3 * t_eps**2 + 2.0 * c.c2 * t_eps + c.c1,
                -ell * math.log(t_eps),
            )
            assert abs(corr(r)) < 1e-9 * (1.0 + abs(corr.c0))

    def test_consistency_with_log_cubic_at_small_eps(self):
        # tau = t + r approximates the log-cubic root T within 5% at eps = e^-20
        for gamma, b, a in [(0.3, 0.15, 0.9), (1.0, 0.2, 0.0), (0.5, 0.0, 0.5)]:
            c = CubicCoefficients.from_cutoff(gamma, b, a, math.exp(-20.0))
            t_eps = cardano_unique_real(c)
            for ell in (1, 2):
                T = solve_log_cubic(c, ell)
                r = correction_root(t_eps, c, ell)
                assert abs(T - (t_eps + r)) / T < 0.05

    def test_requires_t_above_one(self):
        c = CubicCoefficients(1.0, 0.0, 0.0, -8.0)
        with pytest.raises(ToolkitError) as err:
            correction_root(0.9, c, 1)
        assert err.value.code == "bad_coefficients"
