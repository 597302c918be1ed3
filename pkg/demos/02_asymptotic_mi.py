# %% [markdown]
# # Channel-level mutual information
#
# With infinitely long batches, Eve's and Bob's information is fixed by the
# per-slot channel. Eve knows which attack she applied, so her information is
# conditioned on the attack; Bob only sees the attack-averaged channel.

# %%
from fractions import Fraction

import numpy as np

from pingpong_eve.channel import default_channel
from pingpong_eve.metrics import AttackMix, asymptotic_mi, mixture_joint

channel = default_channel()

print(f"Eve, pure u:            {asymptotic_mi(channel, AttackMix(0), 'eve'):.3f} bits")
print(f"Bob, balanced u/s mix:  {asymptotic_mi(channel, AttackMix(Fraction(1, 2)), 'bob'):.3f} bits")

# %% [markdown]
# Bob's averaged channel is a binary symmetric channel with flip probability 1/4:

# %%
for (a, b), p in mixture_joint(channel, AttackMix(Fraction(1, 2)), "bob").items():
    print(f"P(a={a}, b={b}) = {p}")

# %% [markdown]
# Sweep the fraction of symmetrized slots. Eve's conditioned information stays
# flat while the unconditioned information dips at the balanced mix.

# %%
print(f"{'prob_s':>6} {'Eve|x':>7} {'Eve':>7} {'Bob':>7}")
for ps in np.linspace(0, 1, 11):
    mix = AttackMix(Fraction(ps).limit_denominator(10))
    print(
        f"{float(mix.prob_s):6.1f} "
        f"{asymptotic_mi(channel, mix, 'eve', True):7.4f} "
        f"{asymptotic_mi(channel, mix, 'eve', False):7.4f} "
        f"{asymptotic_mi(channel, mix, 'bob', False):7.4f}"
    )
