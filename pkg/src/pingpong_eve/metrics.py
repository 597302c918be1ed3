"""QBER, plug-in mutual information and channel-level mutual information.

All logarithms are base 2. Probabilities stay exact (``Fraction``) until an
entropy is taken.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

from .channel import (
    BITS,
    AttackChannel,
    AttackKind,
    BitString,
    InputError,
    Observer,
    default_channel,
)
from .enumeration import BatchEnsemble

__all__ = [
    "DISPLAY_DECIMALS",
    "AttackMix",
    "BatchMetrics",
    "MetricsReport",
    "binary_entropy",
    "entropy",
    "qber",
    "plugin_mutual_information",
    "mutual_information",
    "ensemble_metrics",
    "mixture_joint",
    "asymptotic_mi",
]

DISPLAY_DECIMALS = 3


def _xlog2x(p) -> float:
    if p == 0:
        return 0.0
    p = float(p)
    return p * math.log2(p)


def binary_entropy(p) -> float:
    """H(p) in bits, with 0 log 0 = 0."""
    if not 0 <= p <= 1:
        raise ValueError(f"probability must lie in [0, 1], got {p}")
    return -_xlog2x(p) - _xlog2x(1 - p)


def entropy(probs) -> float:
    """Shannon entropy in bits of a collection of weights summing to one."""
    return -sum(_xlog2x(p) for p in probs)


def _pair(x, y):
    x = BitString.coerce(x)
    y = BitString.coerce(y)
    if len(x) != len(y):
        raise InputError(f"length mismatch: {len(x)} vs {len(y)}")
    return x, y


def qber(alice, other) -> Fraction:
    """Fraction of positions where ``other`` differs from ``alice``."""
    alice, other = _pair(alice, other)
    return Fraction(sum(a != b for a, b in zip(alice, other)), len(alice))


def plugin_mutual_information(x, y) -> float:
    """Mutual information (bits) of the empirical joint law of paired positions.

    >>> round(plugin_mutual_information('100110', '100111'), 3)
    0.459
    """
    x, y = _pair(x, y)
    n = len(x)
    joint = Counter(zip(x, y))
    cx = Counter(x)
    cy = Counter(y)
    total = 0.0
    for (a, b), c in joint.items():
        # c/n * log2( (c/n) / ((cx/n)(cy/n)) ); empty cells never appear in the Counter
        total += c / n * math.log2(c * n / (cx[a] * cy[b]))
    # rounding can push exact zeros to ~-1e-17
    return max(total, 0.0)


def mutual_information(joint: Mapping) -> float:
    """I(A;O) in bits from a joint table ``{(a, o): p}``."""
    pa, po = {}, {}
    for (a, o), p in joint.items():
        pa[a] = pa.get(a, 0) + p
        po[o] = po.get(o, 0) + p
    mi = entropy(pa.values()) + entropy(po.values()) - entropy(joint.values())
    return max(mi, 0.0)


@dataclass(frozen=True)
class BatchMetrics:
    eve: BitString
    probability: Fraction
    qber: Fraction
    mi_bits: float
    bob: Optional[BitString] = None
    bob_qber: Optional[Fraction] = None
    bob_mi_bits: Optional[float] = None


@dataclass(frozen=True)
class MetricsReport:
    rows: tuple
    expected_qber: Fraction
    expected_mi_bits: float
    mi_histogram: tuple  # ((rounded mi, total probability), ...) in ascending mi


def ensemble_metrics(ensemble: BatchEnsemble, decimals: int = DISPLAY_DECIMALS) -> MetricsReport:
    """Per-batch QBER and plug-in MI between Alice and Eve, plus their averages.

    Joint ensembles also get Bob's per-batch QBER and MI on each row.

    The expected MI is the probability-weighted mean of per-batch values, not
    the MI of the averaged distribution.
    """
    rows = []
    for o in ensemble:
        rows.append(
            BatchMetrics(
                eve=o.eve,
                probability=o.probability,
                qber=qber(ensemble.alice, o.eve),
                mi_bits=plugin_mutual_information(ensemble.alice, o.eve),
                bob=o.bob,
                bob_qber=None if o.bob is None else qber(ensemble.alice, o.bob),
                bob_mi_bits=None if o.bob is None else plugin_mutual_information(ensemble.alice, o.bob),
            )
        )
    expected_qber = sum((r.probability * r.qber for r in rows), Fraction(0))
    expected_mi = math.fsum(float(r.probability) * r.mi_bits for r in rows)
    hist = {}
    for r in rows:
        # +0.0 folds -0.0 into 0.0
        key = round(r.mi_bits, decimals) + 0.0
        hist[key] = hist.get(key, Fraction(0)) + r.probability
    return MetricsReport(
        rows=tuple(rows),
        expected_qber=expected_qber,
        expected_mi_bits=expected_mi,
        mi_histogram=tuple(sorted(hist.items())),
    )


def _as_fraction(value) -> Fraction:
    if isinstance(value, float):
        # 0.1 -> 1/10 rather than its binary expansion
        return Fraction(str(value))
    return Fraction(value)


@dataclass(frozen=True)
class AttackMix:
    """Per-slot probability of the ``s`` attack and prior P(Alice bit = 1)."""

    prob_s: Fraction = Fraction(0)
    alice_prior: Fraction = field(default=Fraction(1, 2))

    def __post_init__(self):
        for name in ("prob_s", "alice_prior"):
            value = _as_fraction(getattr(self, name))
            if not 0 <= value <= 1:
                raise InputError(f"{name} must lie in [0, 1], got {value}")
            object.__setattr__(self, name, value)

    def weight(self, x: AttackKind) -> Fraction:
        return self.prob_s if x is AttackKind.S else 1 - self.prob_s

    def prior(self, a: int) -> Fraction:
        return self.alice_prior if a == 1 else 1 - self.alice_prior


def mixture_joint(channel: Optional[AttackChannel], mix: AttackMix, observer, conditioned_on_attack: bool = False) -> dict:
    """Exact joint table of Alice's bit and the observer's bit.

    Keys are ``(a, o)``, or ``(x, a, o)`` when conditioning on the attack.
    """
    channel = default_channel() if channel is None else channel
    idx = 3 if Observer.parse(observer) is Observer.EVE else 2
    joint = {}
    for (x, a, b, e), p in channel.table.items():
        o = (x, a, b, e)[idx]
        w = mix.weight(x) * mix.prior(a) * p
        key = (x, a, o) if conditioned_on_attack else (a, o)
        joint[key] = joint.get(key, Fraction(0)) + w
    return joint


def asymptotic_mi(
    channel: Optional[AttackChannel],
    mix: AttackMix,
    observer,
    conditioned_on_attack: Optional[bool] = None,
) -> float:
    """Channel mutual information between Alice and an observer, in bits.

    Conditioned: sum over attacks of P(x) * I(A;O | X=x). Unconditioned:
    I(A;O) of the attack-averaged channel. By default Eve is conditioned
    (she knows her own attacks) and Bob is not.
    """
    observer = Observer.parse(observer)
    if conditioned_on_attack is None:
        conditioned_on_attack = observer is Observer.EVE
    joint = mixture_joint(channel, mix, observer, conditioned_on_attack)
    if not conditioned_on_attack:
        return mutual_information(joint)
    total = 0.0
    for x in AttackKind:
        px = mix.weight(x)
        if px == 0:
            continue
        sub = {(a, o): joint[(x, a, o)] / px for a in BITS for o in BITS}
        total += float(px) * mutual_information(sub)
    return total
