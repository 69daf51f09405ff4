# %% [markdown]
# # The harmonic-oscillator model
#
# The Rayleigh quotient of the oscillator has every Hermite function as a
# critical point with exactly ``m`` descending directions at ``f_m``.  Its
# gradient flow runs down to the lowest occupied mode.

# %%
import numpy as np

from strichartz.qmho import qmho_flow, qmho_hessian_matrix

traj = qmho_flow([1.0, 0.1, 0.1], n_steps=2000)
for i in (0, 10, 100, 500, 2000):
    print(i, f"Q={traj.Q[i]:.10f}", np.round(traj.alpha[i] / traj.norm[i], 6))

# %%
for m in range(4):
    H = qmho_hessian_matrix(m, 8)
    print(m, np.diag(H), "negative:", int(np.sum(np.diag(H) < 0)))
