"""delta-mixing times by monotone bisection, plus the ratio checks that
connect them to the cutoff time scale.

tau_eps(delta) is the first time the normalized mean square
E|X_t(x)|^2 / eps^2 drops to delta.  The evaluator must be a closed-form
(noise-free) mean square: an MC estimate would break the infimum
definition.  Both tau(delta)/tau(1-delta) and tau(delta)/t_eps approach 1
as eps -> 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import ToolkitError

# Absolute-plus-relative width of the final bisection bracket.
BRACKET_TOL = 1e-8
# Doubling search gives up past this horizon.
T_CAP = 1e6


@dataclass
class MixingTimeResult:
    delta: float
    eps: float
    tau: float
    t_ref: Optional[float]
    tau_over_t_ref: Optional[float]
    tau_ratio: float  # tau(delta) / tau(1 - delta)

    def to_dict(self) -> dict:
        out = {
            "delta": float(self.delta),
            "eps": float(self.eps),
            "tau": float(self.tau),
            "tau_ratio": float(self.tau_ratio),
        }
        if self.t_ref is not None:
            out["t_ref"] = float(self.t_ref)
            out["tau_over_t_ref"] = float(self.tau_over_t_ref)
        return out


def _first_crossing(msq: Callable[[float], float], threshold: float) -> float:
    """inf{t >= 0 : msq(t) <= threshold} for a non-increasing msq."""
    if msq(0.0) <= threshold:
        return 0.0
    lo, hi = 0.0, 1.0
    while msq(hi) > threshold:
        lo, hi = hi, 2.0 * hi
        if hi > T_CAP:
            raise ToolkitError("no_decay", f"mean square stays above target up to t = {T_CAP:g}")
    while hi - lo > BRACKET_TOL * (1.0 + hi):
        mid = 0.5 * (lo + hi)
        if msq(mid) <= threshold:
            hi = mid
        else:
            lo = mid
    return hi


def mixing_time(
    msq: Callable[[float], float],
    eps: float,
    delta: float,
    t_ref: Optional[float] = None,
) -> MixingTimeResult:
    """tau_eps(delta) by doubling plus bisection on a monotone evaluator."""
    if not 0.0 < eps < 1.0:
        raise ToolkitError("bad_epsilon", "eps must lie in (0, 1)")
    if not 0.0 < delta < 1.0:
        raise ToolkitError("bad_delta", "delta must lie in (0, 1)")
    tau = _first_crossing(msq, delta * eps**2)
    tau_other = _first_crossing(msq, (1.0 - delta) * eps**2)
    if tau_other > 0.0:
        ratio = tau / tau_other
    else:
        ratio = 1.0 if tau == 0.0 else math.inf
    return MixingTimeResult(
        delta=delta,
        eps=eps,
        tau=tau,
        t_ref=t_ref,
        tau_over_t_ref=None if t_ref is None else tau / t_ref,
        tau_ratio=ratio,
    )


def mixing_ratio_check(
    t_eps_of: Callable[[float], float],
    msq: Callable[[float], float],
    eps_list,
    delta: float,
) -> list[MixingTimeResult]:
    """Both mixing ratios for each eps; they trend to 1 as eps shrinks."""
    if not 0.0 < delta <= 0.5:
        raise ToolkitError("bad_delta", "delta must lie in (0, 1/2]")
    return [mixing_time(msq, eps, delta, t_ref=t_eps_of(eps)) for eps in eps_list]
