"""Real-root solving for the cutoff cubics.

The cutoff time scale in the first-order regime solves
``c3 t^3 + c2 t^2 + c1 t + c0 = 0`` (with c0 = ln(eps)), possibly with an
extra ``-ell_star ln(t)`` term.  The solvers here return the unique real
root via the classical depressed-cubic radicals, then polish with Newton
steps: the radical form loses digits to cube-root cancellation when the
constant term dominates, while the polished root carries an explicit
residual certificate.  A cubic with three distinct real roots is refused
rather than silently tie-broken.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .errors import ToolkitError

# Residual contract for every returned root: |poly(t)| <= RESIDUAL_TOL * (1 + |c0|).
RESIDUAL_TOL = 1e-9
# Relative slack when classifying the depressed-cubic discriminant as zero.
DISCRIMINANT_TOL = 1e-12


@dataclass
class CubicCoefficients:
    """c3 t^3 + c2 t^2 + c1 t + c0.  c3 = 0 falls back to quadratic/linear."""

    c3: float
    c2: float
    c1: float
    c0: float

    @classmethod
    def from_cutoff(cls, gamma: float, b: float, a: float, eps: float) -> "CubicCoefficients":
        """Coefficients of the cutoff equation gamma t^3 + b t^2 + a t + ln(eps) = 0."""
        if not 0.0 < eps < 1.0:
            raise ToolkitError("bad_epsilon", "eps must lie in (0, 1)")
        return cls(gamma, b, a, math.log(eps))

    def __call__(self, t: float) -> float:
        return ((self.c3 * t + self.c2) * t + self.c1) * t + self.c0

    def derivative(self, t: float) -> float:
        return (3.0 * self.c3 * t + 2.0 * self.c2) * t + self.c1


def _polish(f, fprime, t: float, target: float, max_steps: int = 4) -> float:
    """Newton-polish an approximate root until the residual target is met."""
    best, best_res = t, abs(f(t))
    for _ in range(max_steps):
        if best_res <= 0.25 * target:
            break
        fp = fprime(t)
        if fp == 0.0 or not math.isfinite(fp):
            break
        t = t - f(t) / fp
        res = abs(f(t))
        if res < best_res:
            best, best_res = t, res
    return best


def cardano_unique_real(c: CubicCoefficients) -> float:
    """The unique real root of the cubic, by Cardano radicals plus polishing.

    Raises ``ambiguous_roots`` when the cubic has more than one distinct
    real root (negative depressed discriminant, or a double root next to a
    simple one): the cutoff setting guarantees uniqueness, so a silent
    choice would mask a modeling error.
    """
    if c.c3 == 0.0:
        return _degenerate_root(c)

    shift = -c.c2 / (3.0 * c.c3)
    p = (3.0 * c.c3 * c.c1 - c.c2**2) / (3.0 * c.c3**2)
    q = (2.0 * c.c2**3 - 9.0 * c.c3 * c.c2 * c.c1 + 27.0 * c.c3**2 * c.c0) / (27.0 * c.c3**3)
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    disc_scale = (q / 2.0) ** 2 + abs(p / 3.0) ** 3

    target = RESIDUAL_TOL * (1.0 + abs(c.c0))
    if disc > DISCRIMINANT_TOL * disc_scale:
        root = math.sqrt(disc)
        s = np.cbrt(-q / 2.0 + root) + np.cbrt(-q / 2.0 - root)
        t = float(s + shift)
    elif disc >= -DISCRIMINANT_TOL * disc_scale:
        if abs(p) > DISCRIMINANT_TOL * (1.0 + p**2) or abs(q) > DISCRIMINANT_TOL * (1.0 + q**2):
            # double root beside a simple one: two distinct real values
            raise ToolkitError("ambiguous_roots", "repeated real root is not unique")
        t = shift  # triple root
    else:
        raise ToolkitError("ambiguous_roots", "cubic has three distinct real roots")

    t = _polish(c, c.derivative, t, target)
    if abs(c(t)) > target:
        t = _bracketed_refine(c, t, target)
    return t


def _degenerate_root(c: CubicCoefficients) -> float:
    """Quadratic/linear fallback for c3 = 0."""
    target = RESIDUAL_TOL * (1.0 + abs(c.c0))
    if c.c2 == 0.0:
        if c.c1 == 0.0:
            raise ToolkitError("ambiguous_roots", "constant polynomial has no isolated root")
        return -c.c0 / c.c1
    disc = c.c1**2 - 4.0 * c.c2 * c.c0
    scale = c.c1**2 + abs(4.0 * c.c2 * c.c0)
    if disc > DISCRIMINANT_TOL * scale:
        raise ToolkitError("ambiguous_roots", "quadratic has two distinct real roots")
    if disc < -DISCRIMINANT_TOL * scale:
        raise ToolkitError("no_real_root", "quadratic has no real root")
    t = -c.c1 / (2.0 * c.c2)
    return _polish(c, c.derivative, t, target)


def _bracketed_refine(f, t0: float, target: float) -> float:
    """Brent fallback around an approximate root when Newton stalls."""
    step = max(1.0, abs(t0))
    for _ in range(64):
        lo, hi = t0 - step, t0 + step
        if f(lo) * f(hi) < 0:
            t = float(scipy.optimize.brentq(f, lo, hi, xtol=1e-15, rtol=8.9e-16))
            if abs(f(t)) <= target:
                return t
            break
        step *= 2.0
    raise ToolkitError("bracket_failure", "could not certify the residual contract")


def solve_log_cubic(c: CubicCoefficients, ell_star: int) -> float:
    """Unique root of c3 T^3 + c2 T^2 + c1 T - ell_star ln(T) + c0 = 0.

    Starts from the Cardano root of the ell_star = 0 cubic and refines by
    bracketing; the log term is a small perturbation beyond the turning
    region.
    """
    if ell_star < 0:
        raise ToolkitError("bad_coefficients", "ell_star must be nonnegative")
    if ell_star == 0:
        return cardano_unique_real(c)
    if not c.c3 > 0.0:
        raise ToolkitError("bad_coefficients", "log-cubic requires c3 > 0")

    def g(t):
        return c(t) - ell_star * math.log(t)

    def gprime(t):
        return c.derivative(t) - ell_star / t

    t0 = cardano_unique_real(c)
    if t0 <= 0.0:
        raise ToolkitError("bracket_failure", "cubic seed root is not positive")
    lo, hi = t0 / 2.0, 4.0 * t0
    if g(lo) * g(hi) > 0:
        raise ToolkitError("bracket_failure", f"no sign change on [{lo:.6g}, {hi:.6g}]")
    t = float(scipy.optimize.brentq(g, lo, hi, xtol=1e-15, rtol=8.9e-16))
    t = _polish(g, gprime, t, RESIDUAL_TOL * (1.0 + abs(c.c0)))
    if abs(g(t)) > RESIDUAL_TOL * (1.0 + abs(c.c0)):
        raise ToolkitError("bracket_failure", "log-cubic residual contract not met")
    return t


def correction_root(t_eps: float, c: CubicCoefficients, ell_star: int) -> float:
    """Root r of the correction cubic around an established cutoff time t_eps:

        c3 r^3 + (3 c3 t + c2) r^2 + (3 c3 t^2 + 2 c2 t + c1) r - ell_star ln(t) = 0.

    Cardano radicals seed a Newton iteration against this cubic; the
    residual contract is certified on the cubic itself.  The caller
    exposes tau_eps = t_eps + r.
    """
    if ell_star < 0:
        raise ToolkitError("bad_coefficients", "ell_star must be nonnegative")
    if ell_star == 0:
        return 0.0
    if not c.c3 > 0.0:
        raise ToolkitError("bad_coefficients", "correction cubic requires c3 > 0")
    if not t_eps > 1.0:
        raise ToolkitError("bad_coefficients", "correction form requires t_eps > 1")

    gamma, b, a = c.c3, c.c2, c.c1
    a2 = 3.0 * gamma * t_eps + b
    a1 = 3.0 * gamma * t_eps**2 + 2.0 * b * t_eps + a
    a0 = -ell_star * math.log(t_eps)
    corr = CubicCoefficients(gamma, a2, a1, a0)

    # closed-form radicals as the initial guess
    p_t = a1 / gamma - a2**2 / (3.0 * gamma**2)
    q_t = (
        2.0 * a2**3 / (27.0 * gamma**3)
        - a1 * a2 / (3.0 * gamma**2)
        - ell_star * c.c0 / (gamma * t_eps)
    )
    disc = (q_t / 2.0) ** 2 + (p_t / 3.0) ** 3
    if disc >= 0.0:
        root = math.sqrt(disc)
        r = float(np.cbrt(-q_t / 2.0 + root) + np.cbrt(-q_t / 2.0 - root) - a2 / (3.0 * gamma))
    else:
        r = 0.0

    target = RESIDUAL_TOL * (1.0 + abs(a0))
    r = _polish(corr, corr.derivative, r, target, max_steps=40)
    if abs(corr(r)) > target:
        r = _bracketed_refine(corr, r, target)
    return r
