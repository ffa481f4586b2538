from .config import ConfigError, ExperimentConfig, derive_seed, load_config
from .stages import (
    StageError,
    cmd_baseline,
    cmd_preprocess,
    cmd_quantum,
    cmd_report,
    cmd_small_sample,
    small_sample_split,
)

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "StageError",
    "cmd_baseline",
    "cmd_preprocess",
    "cmd_quantum",
    "cmd_report",
    "cmd_small_sample",
    "derive_seed",
    "load_config",
    "small_sample_split",
]
