"""Exact enumeration and information-theoretic analysis of Eve's attack on the
ping-pong protocol, as described by per-slot conditional distributions."""

from .channel import (
    AttackChannel,
    AttackKind,
    AttackSequence,
    BitString,
    InputError,
    ModelValidationError,
    Observer,
    default_channel,
    load_channel,
    slot_joint,
    slot_marginal,
)
from .enumeration import (
    BatchEnsemble,
    CapacityError,
    OutcomeBatch,
    enumerate_eve_batches,
    enumerate_joint_batches,
    marginalize_bob,
    support_size,
)
from .metrics import (
    AttackMix,
    BatchMetrics,
    MetricsReport,
    asymptotic_mi,
    binary_entropy,
    ensemble_metrics,
    plugin_mutual_information,
    qber,
)
from .montecarlo import (
    ConvergenceReport,
    SampleConfig,
    convergence_study,
    empirical_frequencies,
    sample_batch,
    sample_batches,
)

__version__ = "0.1.0"
