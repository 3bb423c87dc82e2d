"""
Online learning agents for DECoR
"""

from .decor_trainer_agent import (
    EpochRecord,
    TrainerConfig,
    TrainerState,
    initialize,
    propose_candidates,
    run_training,
    sample_direction,
    train_epoch,
)

__all__ = [
    "EpochRecord",
    "TrainerConfig",
    "TrainerState",
    "initialize",
    "propose_candidates",
    "run_training",
    "sample_direction",
    "train_epoch",
]
