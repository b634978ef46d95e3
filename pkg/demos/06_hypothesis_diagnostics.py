"""Which hypothesis regime does a coefficient pair satisfy?

check_pair reports four bracket-based regimes with explicit residuals.
It also exposes a structural obstruction: if C = [A, B] commutes with A
(or B), every power trace of C vanishes, so C is nilpotent; a nonzero
nilpotent matrix is never normal, which makes "C normal + first-order
non-commutative" jointly infeasible.  The classic nilpotent triple below
triggers exactly that diagnostic.
"""

import numpy as np

from gbm_cutoff import check_pair


def elementary(i, j, d=3):
    E = np.zeros((d, d))
    E[i - 1, j - 1] = 1.0
    return E


pairs = {
    "commuting diagonal": (np.diag([-2.0, -3.0]), np.diag([1.0, 0.5])),
    "Jordan drift vs diagonal": (np.array([[-1.0, 1.0], [0.0, -1.0]]), np.diag([1.0, 2.0])),
    "nilpotent triple (A=E23, B=E12)": (elementary(2, 3), elementary(1, 2)),
}

for name, (A, B) in pairs.items():
    rep = check_pair(A, B)
    print(f"{name}:")
    print(f"  normal_B    = {rep.normal_B}")
    print(f"  commutative = {rep.commutative}")
    print(f"  normal_C    = {rep.normal_C}")
    print(f"  first_order = {rep.first_order}")
    print(f"  infeasible  = {rep.hypothesis_set_infeasible}")
    print(f"  trace(C^k)  = {rep.nilpotence_witness}")
    worst = max(rep.residuals.values())
    print(f"  largest bracket residual = {worst:.3e} (threshold {rep.threshold:.1e})")
    print()
