"""Asymptotic parameters of t -> exp(tQ)y for a Hurwitz-stable Q.

For y != 0 the trajectory behaves like (t^(ell-1) / e^(qt)) * S(t) with an
almost-periodic carrier S(t) = sum_k exp(i theta_k t) v_k.  This module
extracts (q, ell, theta_k, v_k) from the eigenstructure of Q:

* eigenvalues are clustered (relative gap 1e-7) and a spectral projector
  per cluster is built from a reordered complex Schur form plus one
  Sylvester solve;
* q is the slowest decay rate among clusters that actually carry a
  component of y, ell the largest Jordan chain height y attains there;
* only chains of maximal height survive the t^(ell-1) normalization, so
  clusters of lower height are dropped from the carrier.

The liminf/limsup envelope [K0, K1] of |S| is estimated on a deterministic
grid; the true extrema of an almost-periodic function are not computable
in closed form for incommensurate frequencies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ToolkitError
from .linalg_core import CLUSTER_GAP, as_matrix, as_vector, cluster_values, is_hurwitz

# A generalized-eigenspace component below this fraction of |y| counts as zero.
COMPONENT_TOL = 1e-9
# Envelope grid: 10^4 points spanning 100 beat periods of the slowest gap.
GRID_POINTS = 10_000
GRID_PERIODS_X_2PI = 200.0 * math.pi


@dataclass
class SpectralAsymptotics:
    q: float
    ell: int
    m: int
    thetas: list[float]
    vs: list[np.ndarray]
    K0: float
    K1: float

    def carrier(self, t: float) -> np.ndarray:
        """S(t) = sum_k exp(i theta_k t) v_k (complex d-vector)."""
        out = np.zeros_like(self.vs[0], dtype=complex)
        for theta, v in zip(self.thetas, self.vs):
            out = out + np.exp(1j * theta * t) * v
        return out

    def to_dict(self) -> dict:
        return {
            "q": float(self.q),
            "ell": int(self.ell),
            "m": int(self.m),
            "thetas": [float(t) for t in self.thetas],
            "vs": [{"re": list(map(float, v.real)), "im": list(map(float, v.imag))} for v in self.vs],
            "K0": float(self.K0),
            "K1": float(self.K1),
        }


def spectral_projector(Q, members, radius: float) -> np.ndarray:
    """Projector onto the joint generalized eigenspace of the eigenvalues
    in `members`, along the complementary one.

    Built from the complex Schur form reordered so the selected eigenvalues
    lead, then decoupled with a Sylvester solve.
    """
    Qc = as_matrix(Q, "Q").astype(complex)
    n = Qc.shape[0]
    members = np.asarray(members, dtype=complex)

    def selected(lam):
        return bool(np.min(np.abs(lam - members)) <= radius)

    T, Z, sdim = scipy.linalg.schur(Qc, output="complex", sort=selected)
    k = int(sdim)
    if k == 0 or k > n:
        raise ToolkitError("eig_failure", "Schur reordering selected no eigenvalues")
    if k == n:
        return np.eye(n, dtype=complex)
    T11, T12, T22 = T[:k, :k], T[:k, k:], T[k:, k:]
    X = scipy.linalg.solve_sylvester(T11, -T22, -T12)
    top = np.hstack([np.eye(k, dtype=complex), -X])
    M = np.vstack([top, np.zeros((n - k, n), dtype=complex)])
    return Z @ M @ Z.conj().T


def is_diagonalizable(M, gap: float = CLUSTER_GAP) -> bool:
    """True when every eigenvalue cluster has full geometric multiplicity."""
    M = as_matrix(M, "M")
    lam = np.linalg.eigvals(M)
    scale = gap * (1.0 + float(np.max(np.abs(lam))))
    for idx in cluster_values(lam, gap):
        rep = complex(np.mean(lam[idx]))
        sv = np.linalg.svd(M.astype(complex) - rep * np.eye(M.shape[0]), compute_uv=False)
        geometric = int(np.sum(sv <= scale * (1.0 + sv[0])))
        if geometric < len(idx):
            return False
    return True


def extract_asymptotics(Q, y, margin: float = 0.0) -> SpectralAsymptotics:
    """Extract (q, ell, m, thetas, vs, K0, K1) for exp(tQ)y.

    Q must be Hurwitz stable with the given margin and y nonzero.
    """
    Q = as_matrix(Q, "Q")
    y = as_vector(y, "y")
    ynorm = float(np.linalg.norm(y))
    if ynorm == 0.0:
        raise ToolkitError("zero_vector", "y must be nonzero")
    if not is_hurwitz(Q, margin):
        raise ToolkitError("not_stable", "Q is not Hurwitz stable at the given margin")

    lam = np.linalg.eigvals(Q)
    clusters = cluster_values(lam, CLUSTER_GAP)
    yc = y.astype(complex)

    # component of y, chain height and top-of-chain vector per cluster
    carriers = []
    for idx in clusters:
        members = lam[idx]
        rep = complex(np.mean(members))
        others = np.delete(lam, idx)
        if others.size:
            radius = 0.5 * float(min(abs(m - o) for m in members for o in others))
        else:
            radius = np.inf
        P = spectral_projector(Q, members, radius)
        comp = P @ yc
        if np.linalg.norm(comp) <= COMPONENT_TOL * ynorm:
            continue
        N = Q.astype(complex) - rep * np.eye(Q.shape[0])
        height, top = 1, comp
        z = comp
        for j in range(1, len(idx)):
            z = N @ z
            if np.linalg.norm(z) > COMPONENT_TOL * ynorm:
                height, top = j + 1, z
        carriers.append({"rep": rep, "height": height, "top": top})

    if not carriers:
        raise ToolkitError("eig_failure", "no spectral component of y exceeds threshold")

    q = -max(c["rep"].real for c in carriers)
    lead_tol = CLUSTER_GAP * (1.0 + abs(q))
    leading = [c for c in carriers if c["rep"].real >= -q - lead_tol]
    ell = max(c["height"] for c in leading)
    kept = sorted(
        (c for c in leading if c["height"] == ell),
        key=lambda c: -c["rep"].imag,
    )

    fact = math.factorial(ell - 1)
    thetas = [c["rep"].imag for c in kept]
    vs = [c["top"] / fact for c in kept]

    if len(kept) == 1:
        K0 = K1 = float(np.linalg.norm(vs[0]))
    else:
        th = np.asarray(thetas)
        gaps = np.abs(th[:, None] - th[None, :])
        nz = gaps[gaps > 1e-12 * (1.0 + np.max(np.abs(th)))]
        g = float(np.min(nz))
        ts = np.linspace(0.0, GRID_PERIODS_X_2PI / g, GRID_POINTS)
        V = np.vstack(vs)                       # (m, d)
        S = np.exp(1j * np.outer(ts, th)) @ V   # (grid, d)
        norms = np.linalg.norm(S, axis=1)
        K0, K1 = float(np.min(norms)), float(np.max(norms))

    return SpectralAsymptotics(
        q=float(q), ell=int(ell), m=len(kept), thetas=thetas, vs=vs, K0=K0, K1=K1
    )


def normalized_state(Q, y, asym: SpectralAsymptotics, t: float) -> np.ndarray:
    """(e^(qt) / t^(ell-1)) exp(tQ) y — the quantity that converges to S(t)."""
    Q = as_matrix(Q, "Q")
    y = as_vector(y, "y")
    state = scipy.linalg.expm(t * Q) @ y
    return math.exp(asym.q * t) / t ** (asym.ell - 1) * state
