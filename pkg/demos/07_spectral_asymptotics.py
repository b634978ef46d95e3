"""What exp(tQ)y looks like for large t, extracted from the spectrum of Q.

For Hurwitz-stable Q the trajectory behaves like

    exp(tQ) y  ~  e^{-q t} t^{ell-1} sum_k e^{i theta_k t} v_k

where q is the slowest decay rate carried by y, ell the largest Jordan
chain height it attains there, theta_k the oscillation frequencies and
[K0, K1] the envelope of the almost-periodic carrier.  These parameters
feed every cutoff time scale in the package.
"""

import numpy as np

from gbm_cutoff import extract_asymptotics
from gbm_cutoff.spectral_asymptotics import normalized_state

cases = {
    "diagonal, slow mode dominates": (np.diag([-1.0, -2.0]), np.array([1.0, 1.0])),
    "Jordan block (polynomial growth factor t)": (
        np.array([[-1.0, 1.0], [0.0, -1.0]]),
        np.array([0.0, 1.0]),
    ),
    "rotation times decay (oscillating carrier)": (
        np.array([[-1.0, 2.0], [-2.0, -1.0]]),
        np.array([1.0, 0.0]),
    ),
}

for name, (Q, y) in cases.items():
    asym = extract_asymptotics(Q, y)
    print(f"{name}:")
    print(f"  q = {asym.q:.4f}   ell = {asym.ell}   m = {asym.m}")
    print(f"  thetas = {[round(t, 4) for t in asym.thetas]}")
    print(f"  K0 = {asym.K0:.6f}   K1 = {asym.K1:.6f}")
    for t in (10.0, 20.0, 50.0):
        res = np.linalg.norm(normalized_state(Q, y, asym, t) - asym.carrier(t))
        print(f"  normalization residual at t = {t:4.0f}: {res:.3e}")
    print()

print("the Jordan case converges like 1/t (chain height 2); the simple")
print("chains converge exponentially fast.")
