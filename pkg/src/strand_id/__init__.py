"""Multi-draw strand identification over the binary erasure channel."""

from strand_id.channel import NoisyWord
from strand_id.model import Instance, MatchResult, Read, Status, generate_instance, is_correct, true_assignment
from strand_id.pma import run_pma
from strand_id.pruner import run_pruning

__all__ = [
    "Instance",
    "MatchResult",
    "NoisyWord",
    "Read",
    "Status",
    "generate_instance",
    "is_correct",
    "run_pma",
    "run_pruning",
    "true_assignment",
]
