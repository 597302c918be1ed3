# %% [markdown]
# # Plugging in a different attack channel
#
# The channel is a value. Here Eve's `u` attack only partially randomizes
# `a=1`: with probability 1/2 both parties keep the 1, otherwise (b, e) is
# uniform. The file format is one `x a b e p` entry per line.

# %%
import tempfile
from pathlib import Path

from pingpong_eve.channel import load_channel
from pingpong_eve.enumeration import enumerate_eve_batches, support_size
from pingpong_eve.metrics import AttackMix, asymptotic_mi, ensemble_metrics

text = """\
u 0 0 0 1
u 1 1 1 5/8
u 1 0 0 1/8
u 1 0 1 1/8
u 1 1 0 1/8
s 0 0 0 1/4
s 0 0 1 1/4
s 0 1 0 1/4
s 0 1 1 1/4
s 1 1 1 1
"""
path = Path(tempfile.mkdtemp()) / "partial.txt"
path.write_text(text)
channel = load_channel(path)

# %%
print("batches:", support_size("100110", "susuus", "eve", channel))
report = ensemble_metrics(enumerate_eve_batches(channel, "100110", "susuus"))
for row in report.rows[:6]:
    print(row.eve, row.probability, row.qber, f"{row.mi_bits:.3f}")
print("expected QBER:", report.expected_qber)
print(f"Eve, pure u, channel MI: {asymptotic_mi(channel, AttackMix(0), 'eve'):.4f} bits")
