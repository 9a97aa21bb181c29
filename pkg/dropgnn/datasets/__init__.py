from dropgnn.datasets.storage import load_dataset, save_dataset
from dropgnn.datasets.synthetic import (
    GENERATORS,
    Dataset,
    gen_4cycles,
    gen_lcc,
    gen_limits1,
    gen_limits2,
    gen_skipcircles,
    gen_triangles,
    generate,
    make_test_copy,
)

__all__ = [
    "GENERATORS",
    "Dataset",
    "gen_4cycles",
    "gen_lcc",
    "gen_limits1",
    "gen_limits2",
    "gen_skipcircles",
    "gen_triangles",
    "generate",
    "load_dataset",
    "make_test_copy",
    "save_dataset",
]
