"""Seeded forward sampling of batches and convergence studies of plug-in MI.

Random numbers come from numpy's PCG64. Trials are grouped in blocks of a
size that depends only on the batch length; block ``k`` of length-``n``
batches draws from ``SeedSequence(seed, spawn_key=(n, k))``. Blocks are
therefore independent substreams and results do not depend on how many
worker threads process them.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .channel import (
    BITS,
    AttackChannel,
    AttackKind,
    AttackSequence,
    BitString,
    InputError,
    Observer,
    check_lengths,
    default_channel,
)
from .metrics import AttackMix, asymptotic_mi

__all__ = [
    "BLOCK_SLOTS",
    "SampleConfig",
    "SampleResult",
    "FrequencyTable",
    "ConvergenceRow",
    "ConvergenceReport",
    "sample_batch",
    "sample_batches",
    "plugin_mi_rows",
    "sampled_mi_values",
    "mi_histogram",
    "total_variation",
    "empirical_frequencies",
    "convergence_study",
]

BLOCK_SLOTS = 2**18
_ATTACK_INDEX = {AttackKind.U: 0, AttackKind.S: 1}
_ATTACKS = (AttackKind.U, AttackKind.S)


@dataclass(frozen=True)
class SampleConfig:
    seed: int
    trials: int
    batch_length: int
    mix: AttackMix = field(default_factory=AttackMix)
    attacks: Optional[AttackSequence] = None
    alice: Optional[BitString] = None

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2**64:
            raise InputError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.trials < 1:
            raise InputError(f"trials must be >= 1, got {self.trials}")
        if self.batch_length < 1:
            raise InputError(f"batch_length must be >= 1, got {self.batch_length}")
        if self.attacks is not None:
            object.__setattr__(self, "attacks", AttackSequence.coerce(self.attacks))
            if len(self.attacks) != self.batch_length:
                raise InputError(
                    f"fixed attack sequence has length {len(self.attacks)}, "
                    f"batch_length is {self.batch_length}"
                )
        if self.alice is not None:
            object.__setattr__(self, "alice", BitString.coerce(self.alice))
            if len(self.alice) != self.batch_length:
                raise InputError(
                    f"fixed Alice string has length {len(self.alice)}, "
                    f"batch_length is {self.batch_length}"
                )

    def effective_mix(self) -> AttackMix:
        """Mix implied by fixed strings, falling back to ``mix`` for drawn ones."""
        prob_s = self.mix.prob_s
        prior = self.mix.alice_prior
        if self.attacks is not None:
            prob_s = Fraction(sum(x is AttackKind.S for x in self.attacks), len(self.attacks))
        if self.alice is not None:
            prior = Fraction(sum(self.alice), len(self.alice))
        return AttackMix(prob_s, prior)


@dataclass(frozen=True)
class SampleResult:
    """Sampled slots as ``(trials, n)`` uint8 arrays; attacks use 0=u, 1=s."""

    alice: np.ndarray
    attacks: np.ndarray
    bob: np.ndarray
    eve: np.ndarray


def _cdf(channel: AttackChannel) -> np.ndarray:
    # cdf[x, a, k] = P(cell <= k) for cells k = 2*b + e, k = 0..2
    cdf = np.zeros((2, 2, 3))
    for x in _ATTACKS:
        for a in BITS:
            run = Fraction(0)
            for k in range(3):
                b, e = divmod(k, 2)
                run += channel.table[(x, a, b, e)]
                cdf[_ATTACK_INDEX[x], a, k] = float(run)
    return cdf


def _draw_cells(cdf, x, a, uniforms):
    # inverse-CDF lookup; a probability-one cell is hit for every u in [0, 1)
    thresholds = cdf[x, a]
    return (uniforms[..., None] >= thresholds).sum(axis=-1).astype(np.uint8)


def _block_rng(seed: int, n: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(n, block))))


def _block_sizes(trials: int, n: int):
    per_block = max(1, BLOCK_SLOTS // n)
    sizes = [per_block] * (trials // per_block)
    if trials % per_block:
        sizes.append(trials % per_block)
    return sizes


def _draw_block(cdf, config: SampleConfig, block: int, size: int):
    n = config.batch_length
    rng = _block_rng(int(config.seed), n, block)
    if config.alice is not None:
        a = np.broadcast_to(np.array(config.alice.bits, dtype=np.uint8), (size, n))
    else:
        a = (rng.random((size, n)) < float(config.mix.alice_prior)).astype(np.uint8)
    if config.attacks is not None:
        idx = [_ATTACK_INDEX[x] for x in config.attacks]
        x = np.broadcast_to(np.array(idx, dtype=np.uint8), (size, n))
    else:
        x = (rng.random((size, n)) < float(config.mix.prob_s)).astype(np.uint8)
    cells = _draw_cells(cdf, x, a, rng.random((size, n)))
    return a, x, cells >> 1, cells & 1


def _map_blocks(channel, config, func, workers: int):
    cdf = _cdf(default_channel() if channel is None else channel)
    sizes = _block_sizes(config.trials, config.batch_length)

    def run(block):
        return func(*_draw_block(cdf, config, block, sizes[block]))

    if workers <= 1 or len(sizes) == 1:
        return [run(k) for k in range(len(sizes))]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, range(len(sizes))))


def sample_batch(channel: Optional[AttackChannel], alice, attacks, rng) -> tuple:
    """Draw one (Bob, Eve) batch, each slot independently from the channel.

    ``rng`` is a :class:`numpy.random.Generator` or an integer seed.
    """
    alice = BitString.coerce(alice)
    attacks = AttackSequence.coerce(attacks)
    check_lengths(alice, attacks)
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    cdf = _cdf(default_channel() if channel is None else channel)
    a = np.array(alice.bits, dtype=np.uint8)
    x = np.array([_ATTACK_INDEX[k] for k in attacks], dtype=np.uint8)
    cells = _draw_cells(cdf, x, a, rng.random(len(alice)))
    return BitString(tuple(int(c >> 1) for c in cells)), BitString(tuple(int(c & 1) for c in cells))


def sample_batches(channel: Optional[AttackChannel], config: SampleConfig, workers: int = 1) -> SampleResult:
    parts = _map_blocks(channel, config, lambda *arrs: tuple(np.array(v) for v in arrs), workers)
    return SampleResult(*(np.concatenate([p[i] for p in parts]) for i in range(4)))


def plugin_mi_rows(a: np.ndarray, o: np.ndarray) -> np.ndarray:
    """Plug-in MI (bits) of each row pair of two ``(trials, n)`` bit arrays."""
    a = np.atleast_2d(a).astype(np.int64)
    o = np.atleast_2d(o).astype(np.int64)
    n = a.shape[1]
    code = 2 * a + o
    counts = np.stack([(code == k).sum(axis=1) for k in range(4)], axis=1).astype(float)
    ca = np.stack([counts[:, 0] + counts[:, 1], counts[:, 2] + counts[:, 3]], axis=1)
    co = np.stack([counts[:, 0] + counts[:, 2], counts[:, 1] + counts[:, 3]], axis=1)
    denom = ca[:, [0, 0, 1, 1]] * co[:, [0, 1, 0, 1]]
    nz = counts > 0
    ratio = np.where(nz, counts * n / np.where(nz, denom, 1.0), 1.0)
    mi = (counts / n * np.log2(ratio)).sum(axis=1)
    return np.maximum(mi, 0.0)


def sampled_mi_values(channel: Optional[AttackChannel], config: SampleConfig, observer=Observer.EVE, workers: int = 1) -> np.ndarray:
    """Plug-in MI between Alice and the observer for every sampled trial."""
    eve = Observer.parse(observer) is Observer.EVE
    parts = _map_blocks(
        channel, config, lambda a, x, b, e: plugin_mi_rows(a, e if eve else b), workers
    )
    return np.concatenate(parts)


def mi_histogram(values, decimals: int = 3) -> dict:
    """Relative frequency of each MI value rounded to ``decimals``."""
    rounded = np.round(np.asarray(values, dtype=float), decimals) + 0.0
    keys, counts = np.unique(rounded, return_counts=True)
    total = counts.sum()
    return {float(k): c / total for k, c in zip(keys, counts)}


def total_variation(p: dict, q: dict) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(float(p.get(k, 0)) - float(q.get(k, 0))) for k in keys)


@dataclass(frozen=True)
class FrequencyTable:
    """Counts of sampled ``(x, a, b, e)`` cells; frequencies normalized per ``(x, a)``."""

    counts: dict
    group_totals: dict

    def __getitem__(self, key) -> float:
        x, a, b, e = key
        total = self.group_totals.get((x, a), 0)
        return self.counts.get(key, 0) / total if total else 0.0

    def frequencies(self) -> dict:
        return {k: self[k] for k in self.counts if self.group_totals.get(k[:2])}


def empirical_frequencies(config: SampleConfig, alice=None, channel: Optional[AttackChannel] = None, workers: int = 1) -> FrequencyTable:
    """Tally every sampled slot by attack, Alice bit, Bob bit and Eve bit."""
    if alice is not None:
        config = replace(config, alice=BitString.coerce(alice))

    def tally(a, x, b, e):
        code = ((x.astype(np.int64) * 2 + a) * 2 + b) * 2 + e
        return np.bincount(code.ravel(), minlength=16)

    hist = np.sum(_map_blocks(channel, config, tally, workers), axis=0)
    counts, totals = {}, {}
    for xk in _ATTACKS:
        for a in BITS:
            for b in BITS:
                for e in BITS:
                    c = int(hist[((_ATTACK_INDEX[xk] * 2 + a) * 2 + b) * 2 + e])
                    counts[(xk, a, b, e)] = c
                    totals[(xk, a)] = totals.get((xk, a), 0) + c
    return FrequencyTable(counts, totals)


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    trials: int
    mean_mi: float
    std_mi: float
    asymptotic_mi: float
    mean_abs_dev: float


@dataclass(frozen=True)
class ConvergenceReport:
    rows: tuple

    CSV_HEADER = "n,trials,mean_mi,std_mi,asymptotic_mi,mean_abs_dev"


def convergence_study(
    config: SampleConfig,
    lengths: Sequence[int],
    channel: Optional[AttackChannel] = None,
    observer=Observer.EVE,
    workers: int = 1,
) -> ConvergenceReport:
    """Spread of finite-batch plug-in MI around the channel MI, per batch length.

    ``config.batch_length`` is replaced by each entry of ``lengths``; fixed
    Alice or attack strings must then match every length. The reference is
    the unconditioned channel MI of the effective mix, which is what the
    plug-in estimator converges to.
    """
    rows = []
    for n in lengths:
        cfg = replace(config, batch_length=int(n))
        values = sampled_mi_values(channel, cfg, observer, workers)
        ref = asymptotic_mi(channel, cfg.effective_mix(), observer, conditioned_on_attack=False)
        std = float(values.std(ddof=1)) if len(values) > 1 else 0.0
        rows.append(
            ConvergenceRow(
                n=int(n),
                trials=cfg.trials,
                mean_mi=float(values.mean()),
                std_mi=std,
                asymptotic_mi=ref,
                mean_abs_dev=float(np.abs(values - ref).mean()),
            )
        )
    return ConvergenceReport(tuple(rows))
