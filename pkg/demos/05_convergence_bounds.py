"""
Quantitative convergence bounds
===============================

The distance between the summed operator series and the limit inverse
admits a pointwise bound through first and second moduli of smoothness
of the cofactor. This script evaluates the bound, checks it against
the measured residual, and sweeps the convergence table the command
line tool also produces.
"""

import numpy as np

from bernseries import (
    GridSpec,
    admissible_n,
    bernstein_limit_rhs,
    check_bound,
    convergence_table,
    corpus_entry,
    epsilon_step,
    omega,
    standard_corpus,
    theorem52_rhs,
)
from bernseries.polyfun import FunctionHandle

grid = GridSpec.uniform(129)
h = corpus_entry("cheb6")
n, rho = 32, 1.0

# The modulus step shrinks like 1/sqrt(n); the bound only applies once
# the doubled step stays below 1/2.
print(f"modulus step at (n={n}, rho={rho}): {epsilon_step(n, rho):.6f}")
print(f"admissible: {admissible_n(n, rho)} "
      f"(n=8 would be {admissible_n(8, rho)})")

eps = epsilon_step(n, rho)
handle = FunctionHandle.from_polynomial(h)
print(f"moduli of the cofactor: "
      f"w1={omega(handle, 1, eps, grid):.6f}, "
      f"w2={omega(handle, 2, eps, grid):.6f}")

# check_bound measures the residual profile on the grid and compares
# it pointwise with the bound profile.
rep = check_bound(h, n, rho, grid)
print(f"\nbound check at (n={n}, rho={rho}): satisfied={rep.satisfied}, "
      f"margin={rep.margin:.3e}, iterations={rep.iterations}")
print(f"largest residual {np.max(rep.lhs):.3e} vs "
      f"largest bound {np.max(rep.rhs):.3e}")

# Sweeping n shows both the measured residual and its bound shrinking;
# rows below the admissibility threshold carry no bound value.
print("\n   n   sup residual   sup bound")
for rec in convergence_table(h, rho, [8, 16, 32, 64, 128], grid):
    bound = "   -" if np.isnan(rec.sup_rhs) else f"{rec.sup_rhs:.6f}"
    print(f"  {rec.n:4d}   {rec.sup_h:.8f}    {bound}")

# The whole bundled corpus passes the bound across parameters; this is
# the same sweep the acceptance tests run.
worst = None
for name, hh in standard_corpus().items():
    for r in (0.5, 1.0, 2.0):
        m = check_bound(hh, 32, r, grid).margin
        if worst is None or m < worst[0]:
            worst = (m, name, r)
print(f"\nsmallest margin over the corpus at n=32: "
      f"{worst[0]:.3e} ({worst[1]}, rho={worst[2]})")

# At a single point the two limiting bounds can be compared directly;
# the sampling-limit form stays a constant factor above.
x = 0.5
big = theorem52_rhs(corpus_entry("affine"), 16, 1e4, x, grid)
ref = bernstein_limit_rhs(corpus_entry("affine"), 16, x, grid)
print(f"\nlarge-parameter bound at x={x}: {big:.6f}; "
      f"sampling-limit form: {ref:.6f}; ratio {big / ref:.4f}")
