from dropgnn.utils.file_utils import default_out_dir, ensure_dir, run_dir
from dropgnn.utils.reports import render
from dropgnn.utils.tables import read_csv, write_csv

__all__ = [
    "default_out_dir",
    "ensure_dir",
    "read_csv",
    "render",
    "run_dir",
    "write_csv",
]
