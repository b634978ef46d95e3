"""delta-mixing times and their asymptotic ratios.

tau_eps(delta) is the first time the normalized mean square drops to
delta.  Both tau(delta)/tau(1-delta) and tau(delta)/t_eps converge to 1
as eps -> 0: the mixing time forgets delta and matches the cutoff time.
"""

import math

import numpy as np

from gbm_cutoff import (
    GBMSystem,
    cutoff_time_commutative,
    mean_square_commutative,
    mixing_ratio_check,
)

scalar = GBMSystem(A=np.array([[-1.0]]), B=np.array([[0.5]]), x=np.array([1.0]))
msq = lambda t: mean_square_commutative(scalar, t)
t_eps_of = lambda eps: cutoff_time_commutative(scalar, eps).t_eps

print("scalar system, delta = 0.1:")
print(f"{'eps':>8} {'tau':>10} {'tau/t_eps':>10} {'tau(d)/tau(1-d)':>16}")
rows = mixing_ratio_check(t_eps_of, msq, [math.exp(-n) for n in (5, 10, 20, 30)], 0.1)
for row, n in zip(rows, (5, 10, 20, 30)):
    print(f"  e^-{n:<3} {row.tau:10.4f} {row.tau_over_t_ref:10.4f} {row.tau_ratio:16.4f}")

print("\nboth ratios tighten toward 1; the exact closed form here is")
print("tau(delta) = (2|ln eps| - ln delta) / 1.5, so tau/t_eps = 1 + |ln delta|/(2|ln eps|).")

print("\ndelta sweep at eps = e^-10 (monotone in delta):")
from gbm_cutoff import mixing_time

for delta in (0.05, 0.1, 0.5, 0.9):
    res = mixing_time(msq, math.exp(-10.0), delta)
    print(f"  delta = {delta:4.2f}:  tau = {res.tau:.4f}")
