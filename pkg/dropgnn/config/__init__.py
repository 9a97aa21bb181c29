from dropgnn.config.schemas import (
    DatasetConfig,
    ExperimentConfig,
    MethodConfig,
    ModelConfig,
    RunSettings,
    TrainConfig,
)

__all__ = [
    "DatasetConfig",
    "ExperimentConfig",
    "MethodConfig",
    "ModelConfig",
    "RunSettings",
    "TrainConfig",
]
