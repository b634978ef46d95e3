"""Monte Carlo oracle: path sampling under three representations plus a
truncated stochastic Magnus exponent, and mean-square estimation.

Every path draws from its own counter-based substream, keyed by
(seed, path index), so estimates are reproducible bit for bit no matter
how paths are batched or distributed over threads.  The reduction uses
exact compensated summation over the per-path values in index order.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg
from numpy.random import Generator, Philox

from .errors import ToolkitError
from .linalg_core import fro
from .system import GBMSystem

SCHEMES = ("exact_commutative", "exact_first_order", "euler_maruyama", "magnus_truncated")

_BATCH = 8192
_U64 = (1 << 64) - 1


def _rng(seed: int, index: int) -> Generator:
    """Independent substream for one path: Philox keyed by (seed, index)."""
    return Generator(Philox(key=[seed & _U64, index & _U64]))


def _threads() -> int:
    raw = os.environ.get("GBM_CUTOFF_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _nsteps(t: float, dt: float) -> int:
    if not (dt > 0.0 and dt <= t):
        raise ToolkitError("bad_timestep", f"need 0 < dt <= t, got dt={dt}, t={t}")
    n = int(round(t / dt))
    if n < 1 or abs(n * dt - t) > 1e-9 * max(t, 1.0):
        raise ToolkitError("bad_timestep", f"t/dt = {t / dt} is not an integer")
    return n


class PathFunctionals(NamedTuple):
    """Left-endpoint Riemann functionals of one Brownian path on [0, t]."""

    w_t: float
    int_w: float
    int_w2: float
    int_sw: float


@dataclass
class BrownianPath:
    """Increments of a single path; functionals recompute deterministically."""

    dt: float
    increments: np.ndarray

    @classmethod
    def sample(cls, t: float, dt: float, seed: int, index: int) -> "BrownianPath":
        n = _nsteps(t, dt)
        inc = _rng(seed, index).standard_normal(n) * math.sqrt(dt)
        return cls(dt=dt, increments=inc)

    def functionals(self, t: float) -> PathFunctionals:
        if t == 0.0:
            return PathFunctionals(0.0, 0.0, 0.0, 0.0)
        n = _nsteps(t, self.dt)
        if n > self.increments.size:
            raise ToolkitError("path_too_short", f"path covers {self.increments.size} steps, need {n}")
        inc = self.increments[:n]
        cum = np.cumsum(inc)
        w_left = np.concatenate([[0.0], cum[:-1]])
        s_left = np.arange(n) * self.dt
        return PathFunctionals(
            w_t=float(cum[-1]),
            int_w=float(np.sum(w_left) * self.dt),
            int_w2=float(np.sum(w_left**2) * self.dt),
            int_sw=float(np.sum(s_left * w_left) * self.dt),
        )


def sample_gaussian_pair(t: float, seed: int, index: int) -> tuple[float, float]:
    """One exact draw of (W_t, int_0^t W_s ds).

    The pair is bivariate normal with covariance [[t, t^2/2], [t^2/2, t^3/3]];
    sampling goes through the explicit Cholesky factor of that 2x2 matrix.
    """
    if not t > 0:
        raise ToolkitError("bad_time", "t must be positive")
    z = _rng(seed, index).standard_normal(2)
    w = math.sqrt(t) * z[0]
    integral = 0.5 * t**1.5 * z[0] + math.sqrt(t**3 / 12.0) * z[1]
    return float(w), float(integral)


def sample_gaussian_pairs(t: float, seed: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Exact pairs for path indices 0..n-1 (same draws as sample_gaussian_pair)."""
    if not t > 0:
        raise ToolkitError("bad_time", "t must be positive")
    z = np.empty((n, 2))
    for i in range(n):
        z[i] = _rng(seed, i).standard_normal(2)
    w = math.sqrt(t) * z[:, 0]
    integral = 0.5 * t**1.5 * z[:, 0] + math.sqrt(t**3 / 12.0) * z[:, 1]
    return w, integral


def _first_order_matrices(sys: GBMSystem) -> tuple[np.ndarray, np.ndarray]:
    """(C, threshold) with validity check [A, C] = [B, C] = 0 for C = [B, A]."""
    A, B = sys.A, sys.B
    C = B @ A - A @ B
    thr = sys.tol * sys.bracket_scale()
    if fro(A @ C - C @ A) > thr or fro(B @ C - C @ B) > thr:
        raise ToolkitError("representation_invalid", "[A,C] or [B,C] does not vanish")
    return C, thr


def sample_exact_first_order(sys: GBMSystem, t: float, seed: int, index: int) -> np.ndarray:
    """X_t(x) = exp(tA + W_t B + (t W_t / 2 - int W ds) C) x with one exact pair."""
    C, _ = _first_order_matrices(sys)
    w, integral = sample_gaussian_pair(t, seed, index)
    M = t * sys.A + w * sys.B + (0.5 * t * w - integral) * C
    return scipy.linalg.expm(M) @ sys.x


def euler_maruyama(sys: GBMSystem, t: float, dt: float, seed: int, index: int) -> np.ndarray:
    """One Euler-Maruyama path of the Ito form dX = (A + B^2/2) X dt + B X dW."""
    if t == 0.0:
        return sys.x.copy()
    n = _nsteps(t, dt)
    inc = _rng(seed, index).standard_normal(n) * math.sqrt(dt)
    drift = sys.A + 0.5 * (sys.B @ sys.B)
    if sys.dim == 1:
        # scalar update collapses to a product of per-step factors
        factors = 1.0 + drift[0, 0] * dt + sys.B[0, 0] * inc
        return sys.x * np.prod(factors)
    X = sys.x.copy()
    for k in range(n):
        X = X + dt * (drift @ X) + inc[k] * (sys.B @ X)
    return X


def magnus_exponent(sys: GBMSystem, path: BrownianPath, t: float) -> np.ndarray:
    """Truncated stochastic Magnus exponent Y_t, term for term:

        (A + B^2/2) t + B W_t
        + [B, A + B^2/2] (t W_t / 2 - int W)        - B^2 t / 2
        + [[A + B^2/2, B], B] (int W^2 / 2 - W_t int W / 2 + t W_t^2 / 2)
        + [[A + B^2/2, B], A + B^2/2] (int sW - t int W / 2 - t^2 W_t / 12)

    with all path functionals taken as left-endpoint sums.  Higher-order
    nested commutators are outside this truncation.
    """
    A, B = sys.A, sys.B
    f = path.functionals(t)
    D = A + 0.5 * (B @ B)
    DB = D @ B - B @ D  # [D, B]
    C1 = -DB            # [B, D]
    C2 = DB @ B - B @ DB
    C3 = DB @ D - D @ DB
    return (
        D * t
        + B * f.w_t
        + C1 * (0.5 * t * f.w_t - f.int_w)
        - 0.5 * (B @ B) * t
        + C2 * (0.5 * f.int_w2 - 0.5 * f.w_t * f.int_w + 0.5 * t * f.w_t**2)
        + C3 * (f.int_sw - 0.5 * t * f.int_w - t**2 * f.w_t / 12.0)
    )


@dataclass
class MCEstimate:
    value: float
    std_error: float
    n_paths: int
    seed: int
    scheme: str

    def to_dict(self) -> dict:
        return {
            "value": float(self.value),
            "std_error": float(self.std_error),
            "n_paths": int(self.n_paths),
            "seed": int(self.seed),
            "scheme": self.scheme,
        }


def _batch_exact(sys, t, scheme, seed, lo, hi) -> np.ndarray:
    nb = hi - lo
    z = np.empty((nb, 2 if scheme == "exact_first_order" else 1))
    for i in range(nb):
        z[i] = _rng(seed, lo + i).standard_normal(z.shape[1])
    if scheme == "exact_first_order":
        C, _ = _first_order_matrices(sys)
        w = math.sqrt(t) * z[:, 0]
        integral = 0.5 * t**1.5 * z[:, 0] + math.sqrt(t**3 / 12.0) * z[:, 1]
        xi = 0.5 * t * w - integral
        M = t * sys.A[None] + w[:, None, None] * sys.B[None] + xi[:, None, None] * C[None]
    else:
        w = math.sqrt(t) * z[:, 0]
        M = t * sys.A[None] + w[:, None, None] * sys.B[None]
    X = scipy.linalg.expm(M) @ sys.x
    return np.einsum("ni,ni->n", X, X)


def _batch_euler(sys, t, dt, seed, lo, hi) -> np.ndarray:
    n = _nsteps(t, dt)
    nb = hi - lo
    inc = np.empty((nb, n))
    for i in range(nb):
        inc[i] = _rng(seed, lo + i).standard_normal(n)
    inc *= math.sqrt(dt)
    drift = sys.A + 0.5 * (sys.B @ sys.B)
    if sys.dim == 1:
        factors = 1.0 + drift[0, 0] * dt + sys.B[0, 0] * inc
        X = sys.x[0] * np.prod(factors, axis=1)
        return X * X
    driftT = drift.T
    BT = sys.B.T
    X = np.broadcast_to(sys.x, (nb, sys.dim)).copy()
    for k in range(n):
        X = X + dt * (X @ driftT) + inc[:, k, None] * (X @ BT)
    return np.einsum("ni,ni->n", X, X)


def _batch_magnus(sys, t, dt, seed, lo, hi) -> np.ndarray:
    n = _nsteps(t, dt)
    nb = hi - lo
    inc = np.empty((nb, n))
    for i in range(nb):
        inc[i] = _rng(seed, lo + i).standard_normal(n)
    inc *= math.sqrt(dt)
    cum = np.cumsum(inc, axis=1)
    w_t = cum[:, -1]
    w_left = np.hstack([np.zeros((nb, 1)), cum[:, :-1]])
    s_left = np.arange(n) * dt
    int_w = w_left.sum(axis=1) * dt
    int_w2 = (w_left**2).sum(axis=1) * dt
    int_sw = (w_left * s_left).sum(axis=1) * dt

    A, B = sys.A, sys.B
    D = A + 0.5 * (B @ B)
    DB = D @ B - B @ D
    C1, C2, C3 = -DB, DB @ B - B @ DB, DB @ D - D @ DB
    u1 = 0.5 * t * w_t - int_w
    u2 = 0.5 * int_w2 - 0.5 * w_t * int_w + 0.5 * t * w_t**2
    u3 = int_sw - 0.5 * t * int_w - t**2 * w_t / 12.0
    Y = (
        (D * t - 0.5 * (B @ B) * t)[None]
        + w_t[:, None, None] * B[None]
        + u1[:, None, None] * C1[None]
        + u2[:, None, None] * C2[None]
        + u3[:, None, None] * C3[None]
    )
    X = scipy.linalg.expm(Y) @ sys.x
    return np.einsum("ni,ni->n", X, X)


def _batch_values(sys, t, scheme, dt, seed, lo, hi) -> np.ndarray:
    if scheme in ("exact_commutative", "exact_first_order"):
        return _batch_exact(sys, t, scheme, seed, lo, hi)
    if scheme == "euler_maruyama":
        return _batch_euler(sys, t, dt, seed, lo, hi)
    return _batch_magnus(sys, t, dt, seed, lo, hi)


def estimate_mean_square(
    sys: GBMSystem,
    t: float,
    scheme: str,
    n_paths: int,
    dt: float = 1e-3,
    seed: int = 0,
) -> MCEstimate:
    """Monte Carlo estimate of E|X_t(x)|^2 with its standard error.

    Paths are indexed 0..n_paths-1 on deterministic substreams; identical
    (seed, scheme, n_paths, dt) reproduce the estimate bit for bit under
    any GBM_CUTOFF_THREADS setting.
    """
    if scheme not in SCHEMES:
        raise ToolkitError("bad_scheme", f"scheme must be one of {SCHEMES}")
    if n_paths < 100:
        raise ToolkitError("bad_path_count", "need at least 100 paths")
    if t < 0:
        raise ToolkitError("bad_time", "t must be nonnegative")

    if scheme == "exact_commutative":
        thr = sys.tol * sys.bracket_scale()
        if fro(sys.A @ sys.B - sys.B @ sys.A) > thr:
            raise ToolkitError("representation_invalid", "[A,B] does not vanish")
    if scheme == "exact_first_order":
        _first_order_matrices(sys)

    if t == 0.0:
        return MCEstimate(
            value=float(sys.x @ sys.x), std_error=0.0,
            n_paths=n_paths, seed=seed, scheme=scheme,
        )

    values = np.empty(n_paths)
    spans = [(lo, min(lo + _BATCH, n_paths)) for lo in range(0, n_paths, _BATCH)]

    def fill(span):
        lo, hi = span
        values[lo:hi] = _batch_values(sys, t, scheme, dt, seed, lo, hi)

    workers = _threads()
    if workers > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, spans))
    else:
        for span in spans:
            fill(span)

    mean = math.fsum(values) / n_paths
    var = math.fsum((v - mean) ** 2 for v in values) / (n_paths - 1)
    return MCEstimate(
        value=mean,
        std_error=math.sqrt(var / n_paths),
        n_paths=n_paths,
        seed=seed,
        scheme=scheme,
    )
