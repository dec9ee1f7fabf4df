"""The pentadiagonal core: banded LU, power iteration, and why the
plain power method stalls on the implicit matrices.

The implicit scheme's interior matrix with a frozen coefficient is
A = I + K with K skew-symmetric.  Its eigenvalues are 1 + i*mu (complex
pairs!), so real power iteration has nothing to converge to: the
Rayleigh quotient locks at exactly 1 while the eigen-residual stays
O(||K||).  Power iteration on the Gram operator A^T A is the sound
probe; it recovers sigma_max, and invertibility needs no iteration at
all: sigma_min >= 1 by structure.
"""

import numpy as np

from kdvlab import (
    CnConfig,
    GammaMode,
    Grid1D,
    WaveField,
    gram_power_iteration,
    invertibility_certificate,
    matvec,
    power_iteration,
    solve_banded,
)
from kdvlab.crank_nicolson import EIGEN_PROBE_PARAMS, assemble_lagged

# assemble the alpha = 1000, beta = 1 probe instance on a constant state
grid = Grid1D(-20.0, 20.0, 204)
field = WaveField(grid, 0.0, np.full(204, 0.4))
cfg = CnConfig(params=EIGEN_PROBE_PARAMS, gamma_mode=GammaMode.FROZEN_MIDPOINT)
A, _ = assemble_lagged(field, cfg)
print(f"A: n = {A.n}, bands ({A.sub2[0]:.1f}, {A.sub1[0]:.2f}, 1, {A.sup1[0]:.2f}, {A.sup2[0]:.1f})")

rng = np.random.default_rng(0)
b = rng.standard_normal(A.n)
x = solve_banded(A, b)
print(f"banded LU residual: {np.max(np.abs(matvec(A, x) - b)):.2e}")
print(f"||x|| / ||b|| = {np.linalg.norm(x) / np.linalg.norm(b):.4f}  (<= 1: sigma_min >= 1)")

plain = power_iteration(A, np.ones(A.n), tol=1e-10, max_iters=10_000)
print(
    f"plain power iteration: estimate = {plain.estimate:.6f}, "
    f"converged = {plain.converged}, residual = {plain.residual:.3g}"
)
gram = gram_power_iteration(A, tol=1e-10, max_iters=100_000)
print(
    f"gram power iteration:  sigma_max = {gram.estimate:.4f}, "
    f"converged = {gram.converged}, residual = {gram.residual:.3g}"
)
print(invertibility_certificate(A))
