"""Exhaustive enumeration of the batches Eve (and Bob) may end up holding."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .channel import (
    AttackChannel,
    AttackSequence,
    BitString,
    InputError,
    Observer,
    check_lengths,
    default_channel,
    slot_joint,
    slot_marginal,
)

__all__ = [
    "MAX_OUTCOMES",
    "CapacityError",
    "OutcomeBatch",
    "BatchEnsemble",
    "enumerate_eve_batches",
    "enumerate_joint_batches",
    "marginalize_bob",
    "support_size",
]

MAX_OUTCOMES = 2**22


class CapacityError(RuntimeError):
    """Raised when an exhaustive enumeration would be too large."""


@dataclass(frozen=True)
class OutcomeBatch:
    eve: BitString
    probability: Fraction
    bob: Optional[BitString] = None

    def key(self):
        return (str(self.eve), None if self.bob is None else str(self.bob))


@dataclass(frozen=True)
class BatchEnsemble:
    """All possible outcomes for one Alice string and attack sequence.

    Probabilities are exact and sum to one; outcomes are distinct.
    """

    alice: BitString
    attacks: AttackSequence
    outcomes: tuple

    def __post_init__(self):
        outcomes = tuple(self.outcomes)
        object.__setattr__(self, "outcomes", outcomes)
        check_lengths(self.alice, self.attacks)
        n = len(self.alice)
        seen = set()
        total = Fraction(0)
        for o in outcomes:
            if o.probability <= 0:
                raise ValueError(f"outcome {o.key()} has non-positive probability")
            if len(o.eve) != n or (o.bob is not None and len(o.bob) != n):
                raise ValueError(f"outcome {o.key()} has wrong length, expected {n}")
            if o.key() in seen:
                raise ValueError(f"duplicate outcome {o.key()}")
            seen.add(o.key())
            total += o.probability
        if total != 1:
            raise ValueError(f"outcome probabilities sum to {total}, expected 1")

    @property
    def joint(self) -> bool:
        return bool(self.outcomes) and self.outcomes[0].bob is not None

    def __len__(self) -> int:
        return len(self.outcomes)

    def __iter__(self):
        return iter(self.outcomes)

    def probabilities(self) -> dict:
        return {o.key(): o.probability for o in self.outcomes}


def _prepare(alice, attacks):
    alice = BitString.coerce(alice)
    attacks = AttackSequence.coerce(attacks)
    check_lengths(alice, attacks)
    return alice, attacks


def _flip_order(a: int):
    # Alice's own bit first, then its flip; reproduces the published listing
    # order for the first half of the table.
    return lambda v: v ^ a


def _slot_choices(channel, alice, attacks, joint):
    slots = []
    for a, x in zip(alice, attacks):
        if joint:
            dist = slot_joint(channel, x, a)
            order = sorted(dist, key=lambda be: (be[0] ^ a, be[1] ^ a))
        else:
            dist = slot_marginal(channel, x, a, Observer.EVE)
            order = sorted(dist, key=_flip_order(a))
        slots.append([(v, dist[v]) for v in order])
    return slots


def _check_cap(count: int, cap: Optional[int]) -> None:
    if cap is not None and count > cap:
        raise CapacityError(
            f"{count} outcomes exceeds the enumeration cap of {cap}; "
            "use the Monte Carlo sampler (montecarlo.sample_batches) instead"
        )


def _enumerate(channel, alice, attacks, joint, cap):
    channel = default_channel() if channel is None else channel
    alice, attacks = _prepare(alice, attacks)
    slots = _slot_choices(channel, alice, attacks, joint)
    count = 1
    for s in slots:
        count *= len(s)
    _check_cap(count, cap)

    merged = {}
    for path in itertools.product(*slots):
        prob = Fraction(1)
        for _, p in path:
            prob *= p
        if joint:
            key = (tuple(v[1] for v, _ in path), tuple(v[0] for v, _ in path))
        else:
            key = (tuple(v for v, _ in path), None)
        merged[key] = merged.get(key, Fraction(0)) + prob

    outcomes = [
        OutcomeBatch(BitString(eve), prob, None if bob is None else BitString(bob))
        for (eve, bob), prob in merged.items()
    ]
    return BatchEnsemble(alice, attacks, outcomes)


def enumerate_eve_batches(channel: Optional[AttackChannel], alice, attacks, cap: Optional[int] = MAX_OUTCOMES) -> BatchEnsemble:
    """Every batch Eve can obtain, with its exact probability.

    Slots are independent, so a batch's probability is the product of the
    per-slot Eve marginals. Outcomes are ordered lexicographically by
    per-slot choice, earlier slots most significant, where each slot lists
    Alice's bit before its flip.
    """
    return _enumerate(channel, alice, attacks, joint=False, cap=cap)


def enumerate_joint_batches(channel: Optional[AttackChannel], alice, attacks, cap: Optional[int] = MAX_OUTCOMES) -> BatchEnsemble:
    """Every (Eve batch, Bob batch) pair with its exact probability."""
    return _enumerate(channel, alice, attacks, joint=True, cap=cap)


def marginalize_bob(ensemble: BatchEnsemble) -> BatchEnsemble:
    """Sum a joint ensemble over Bob's batch, keeping first-seen Eve order."""
    merged = {}
    for o in ensemble:
        merged[o.eve] = merged.get(o.eve, Fraction(0)) + o.probability
    return BatchEnsemble(
        ensemble.alice,
        ensemble.attacks,
        [OutcomeBatch(eve, p) for eve, p in merged.items()],
    )


def support_size(alice, attacks, mode: str = "eve", channel: Optional[AttackChannel] = None) -> int:
    """Number of outcomes the enumerator would produce, without building them."""
    channel = default_channel() if channel is None else channel
    alice, attacks = _prepare(alice, attacks)
    if mode not in ("eve", "joint"):
        raise InputError(f"mode must be 'eve' or 'joint', got {mode!r}")
    count = 1
    for a, x in zip(alice, attacks):
        if mode == "joint":
            count *= len(slot_joint(channel, x, a))
        else:
            count *= len(slot_marginal(channel, x, a, Observer.EVE))
    return count
