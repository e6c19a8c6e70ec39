"""Mixed-autonomy intersection simulator with a GAT-SAC signal controller."""

from gatsac._core import (
    ACTION_DIM,
    FREE_ROAD_GAP,
    NUM_LANES,
    NUM_PHASES,
    CheckpointError,
    ConfigError,
    IoError,
    Session,
    ShapeError,
    SimConfig,
    VehicleClassParams,
    __version__,
    config_keys,
    evaluate,
    evaluate_baseline,
    fairness_cost,
    idm_acceleration,
    load_config,
    total_cost,
    train,
)

__all__ = [
    "ACTION_DIM",
    "FREE_ROAD_GAP",
    "NUM_LANES",
    "NUM_PHASES",
    "CheckpointError",
    "ConfigError",
    "IoError",
    "Session",
    "ShapeError",
    "SimConfig",
    "VehicleClassParams",
    "__version__",
    "config_keys",
    "evaluate",
    "evaluate_baseline",
    "fairness_cost",
    "idm_acceleration",
    "load_config",
    "total_cost",
    "train",
]
