from dropgnn.engine.analytic import (
    analytic_example1,
    analytic_example2,
    analytic_example3,
    analytic_model,
)
from dropgnn.engine.augment import augment, augment_all
from dropgnn.engine.checkpoint import load_checkpoint, save_checkpoint
from dropgnn.engine.forward import (
    DropForwardResult,
    ForwardResult,
    GraphBatch,
    drop_gnn_forward,
    forward_batch,
    gnn_forward,
)
from dropgnn.engine.model import (
    Activation,
    Aggregation,
    Augmentation,
    DenseSpec,
    DropoutMode,
    GnnModel,
    LayerSpec,
    RunAggregation,
    Task,
    build_gin,
    gin_input_dim,
)

__all__ = [
    "Activation",
    "Aggregation",
    "Augmentation",
    "DenseSpec",
    "DropForwardResult",
    "DropoutMode",
    "ForwardResult",
    "GnnModel",
    "GraphBatch",
    "LayerSpec",
    "RunAggregation",
    "Task",
    "analytic_example1",
    "analytic_example2",
    "analytic_example3",
    "analytic_model",
    "augment",
    "augment_all",
    "build_gin",
    "drop_gnn_forward",
    "forward_batch",
    "gin_input_dim",
    "gnn_forward",
    "load_checkpoint",
    "save_checkpoint",
]
