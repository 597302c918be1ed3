# %% [markdown]
# # Finite batches do not give a unique mutual information
#
# Sample many batches and look at how plug-in MI scatters around the channel
# value, and how the scatter shrinks with batch length.

# %%
from fractions import Fraction

from pingpong_eve.metrics import AttackMix
from pingpong_eve.montecarlo import SampleConfig, convergence_study, mi_histogram, sampled_mi_values, total_variation
from pingpong_eve.table1 import table1_report

# %% [markdown]
# The six-bit scenario: sampled histogram against the exact enumeration.

# %%
cfg = SampleConfig(seed=7, trials=100_000, batch_length=6, alice="100110", attacks="susuus")
sampled = mi_histogram(sampled_mi_values(None, cfg))
exact = {mi: float(p) for mi, p in table1_report().mi_histogram}
for mi in sorted(exact):
    print(f"I={mi:.3f}  exact {exact[mi]:.4f}  sampled {sampled.get(mi, 0):.4f}")
print(f"total variation: {total_variation(sampled, exact):.4f}")

# %% [markdown]
# Convergence with random Alice bits and a balanced attack mix. The reference
# is what the plug-in estimator tends to: the unconditioned channel MI.

# %%
cfg = SampleConfig(seed=11, trials=500, batch_length=6, mix=AttackMix(Fraction(1, 2)))
report = convergence_study(cfg, [6, 60, 600, 6000])
print(f"{'n':>6} {'mean':>7} {'std':>7} {'ref':>7} {'MAD':>7}")
for r in report.rows:
    print(f"{r.n:6d} {r.mean_mi:7.4f} {r.std_mi:7.4f} {r.asymptotic_mi:7.4f} {r.mean_abs_dev:7.4f}")
