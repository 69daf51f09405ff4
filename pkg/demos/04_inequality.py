# %% [markdown]
# # The combinatorial bound behind nonpositivity
#
# In one dimension the Gaussian Hessian is nonpositive exactly when the
# central trinomial coefficient ``T_n`` never exceeds ``3^(n-1)``.  The
# check below is in exact integer arithmetic.

# %%
from strichartz.inequality import column_sum_sweep, hessest_check, trinomial_sequence

for n, T in trinomial_sequence(10):
    if n:
        print(n, T, 3 ** (n - 1), "equal" if T == 3 ** (n - 1) else "")

# %%
rep = hessest_check(10_000)
print("passed:", rep.passed, " equalities:", rep.equalities, " key steps:", rep.key_steps)

# %% [markdown]
# ## Column sums in higher dimensions
#
# Each column sum of the unshifted matrix is compared with the diagonal
# shift.  The tightest columns are the translation directions.

# %%
for d in (2, 3):
    rows = column_sum_sweep(d, 8)
    worst = max(rows, key=lambda r: r["lhs"] / r["rhs"])
    print(f"d={d}: {len(rows)} columns, all ok={all(r['ok'] for r in rows)}, "
          f"max ratio {worst['lhs'] / worst['rhs']:.6f} at k={worst['k']}")
