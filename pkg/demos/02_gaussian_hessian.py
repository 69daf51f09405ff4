# %% [markdown]
# # The Hessian at the Gaussian in one, two and three dimensions
#
# In ``d`` dimensions the Gaussian Hessian is a Gram-type matrix over
# multi-indices shifted by a multiple of the identity.  Nonpositivity
# means the Gaussian is a local maximizer on the truncated sphere; the
# zero eigenvalues come from translations and the phase/dilation pair.

# %%
import time

import numpy as np

from strichartz.hessian import spectrum_gaussian, zero_mode_check_gaussian

# %%
for d, N in [(1, 400), (2, 10), (3, 8)]:
    t0 = time.perf_counter()
    g = spectrum_gaussian(d, N)
    print(f"d={d} N={N}: counts (neg, zero, pos) = {g.counts}, gap = {g.gap:.6f}, "
          f"{time.perf_counter() - t0:.1f}s")
    print("   symmetry checks", {k: f"{v:.1e}" for k, v in zero_mode_check_gaussian(d).items()})

# %% [markdown]
# ## Normalization of the gap
#
# The gap depends on how the second variation is scaled.  Three scalings
# are available; the unscaled one is the default.

# %%
for conv in ("section8", "iminus", "paper-h"):
    print(conv, f"{spectrum_gaussian(3, 6, convention=conv).gap:.6f}")

# %% [markdown]
# ## Spectrum near zero in three dimensions
#
# The largest eigenvalues at ``N = 8``: four zeros, then the negative cluster.

# %%
ev = spectrum_gaussian(3, 8).spectrum.eigenvalues
print(np.round(ev[-12:], 6))
