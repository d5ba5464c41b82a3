# %% [markdown]
# # Telling two states apart
#
# A test between a null state `sigma` and an alternative `rho` is an effect
# `0 <= M <= I`. With prior weight `lam` on the null, its Bayes error is
# `lam Tr[sigma M] + (1 - lam) Tr[rho (I - M)]`. The best test projects onto the
# positive eigenspace of `rho - s sigma` with `s = lam / (1 - lam)`, and its
# error is a function of the trace norm of that matrix alone.

# %%
import numpy as np

from qsuff import hypothesis as ht
from qsuff import quantum
from qsuff.random import default_rng, rand_effect

rho = np.diag([0.75, 0.25])
sigma = np.array([[0.5, 0.2], [0.2, 0.5]])

dec = ht.optimal_test(rho, sigma, s=1.0)
print("optimal test at s = 1:\n", np.round(dec.test.real, 4))
print("Tr[(rho - sigma)_+] =", round(dec.tr_pos, 6), " Tr[(rho - sigma)_-] =", round(dec.tr_neg, 6))
print("optimal error at lam = 1/2:", round(dec.error, 6))

# %% [markdown]
# Random effects never do better. The gap below is how much worse the best of
# a thousand random tests is.

# %%
rng = default_rng(0)
tries = [ht.bayes_error_of_test(rho, sigma, rand_effect(2, rng), 0.5) for _ in range(1000)]
print("best random effect:", round(min(tries), 6), " excess:", f"{min(tries) - dec.error:.2e}")

# %% [markdown]
# ## The whole curve
#
# Sweeping `s` traces the L1 curve `s -> ||rho - s sigma||_1`. Outside
# `[exp(-Dmax(sigma||rho)), exp(Dmax(rho||sigma))]` the matrix is semidefinite
# and the curve is just `|1 - s|`, so the default grid covers that window.

# %%
grid = ht.default_grid(rho, sigma, count=9)
for p in ht.sweep_curves(rho, sigma, grid):
    print(f"s={p.s:7.4f}  l1={p.l1:.4f}  tr_neg={p.tr_neg:.4f}  P_e={p.pe:.4f}")

# %% [markdown]
# ## Processing can only hurt
#
# After a channel the curve can only drop. The deficiency `eps` is the largest
# drop over all thresholds. For a unitary it is zero; for depolarizing noise it
# is not.

# %%
U = quantum.unitary_channel(np.array([[0, 1], [1, 0]]))
noisy = quantum.depolarizing_channel(2, 0.5)
grid = ht.default_grid(rho, sigma)
print("eps, unitary     :", f"{ht.deficiency_epsilon(rho, sigma, U, grid):.2e}")
print("eps, depolarizing:", round(ht.deficiency_epsilon(rho, sigma, noisy, grid), 6))
rep = ht.check_dpi_pointwise(rho, sigma, noisy, grid)
print("smallest monotonicity slack:", f"{rep.min_slack:.2e}")

# %% [markdown]
# Complete positivity is not needed for this. A noisy transpose is positive
# but not completely positive, and it still shrinks the curve.

# %%
def noisy_transpose(X, p=0.8):
    return p * X.T + (1 - p) * np.trace(X) * np.eye(2) / 2


rep = ht.check_dpi_pointwise(rho, sigma, noisy_transpose, grid)
print("noisy transpose, smallest slack:", f"{rep.min_slack:.2e}")
