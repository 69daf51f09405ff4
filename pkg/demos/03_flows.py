# %% [markdown]
# # Gradient and Hamiltonian flows
#
# The gradient flow climbs the functional on the unit sphere.  Started
# near the Gaussian it returns to it; started near ``f_1`` with a small
# even perturbation it leaves ``f_1`` and climbs to the Gaussian value
# ``1/sqrt(12)``.  An odd perturbation cannot do that, because the flow
# preserves parity.

# %%
import math

import numpy as np

from strichartz.flows import gradient_flow, hamiltonian_flow, strichartz_value
from strichartz.lambda_table import build_lambda_table

table = build_lambda_table(8)
print("S(Gaussian) =", strichartz_value([1.0], table), " 1/sqrt(12) =", 1 / math.sqrt(12))

# %%
for label, pert in [("e0 + 0.05 e4", (0, 4)), ("e1 + 0.05 e0", (1, 0)), ("e1 + 0.05 e3", (1, 3))]:
    a0 = np.zeros(9)
    a0[pert[0]], a0[pert[1]] = 1.0, 0.05
    rep = gradient_flow(a0, table, max_steps=3000)
    print(f"{label:14s} S: {rep.S[0]:.6f} -> {rep.S[-1]:.6f}  steps={len(rep) - 1} "
          f"converged={rep.converged}")

# %% [markdown]
# ## Hamiltonian flow
#
# RK4 on random data; ``H``, the mass ``P`` and the oscillator energy
# ``Q`` are all conserved.  A single Hermite mode only rotates its phase.

# %%
table6 = build_lambda_table(6)
rng = np.random.default_rng(1)
a0 = rng.standard_normal(7) + 1j * rng.standard_normal(7)
a0 /= np.linalg.norm(a0)
rep = hamiltonian_flow(a0, table6, dt=1e-4, n_steps=10_000, record_every=1000)
for name in ("H", "P", "Q"):
    print(name, f"relative drift {rep.relative_drift(name):.1e}")

e3 = np.zeros(7, dtype=complex)
e3[3] = 1.0
rep = hamiltonian_flow(e3, table6, dt=1e-3, n_steps=1000)
print("mode 3 after t=1:", np.round(rep.final, 6))
