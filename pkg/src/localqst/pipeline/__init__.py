"""
End-to-end evaluation, sweeps and reports
"""

from ..nn.losses import cosine_similarity
from .evaluation import (
    EvalReport,
    FidelityStats,
    NoiseLevelReport,
    Reconstruction,
    RecordEval,
    evaluate_model,
    evaluate_predictions,
    noise_robustness_eval,
    reconstruct_state,
)
from .monitor import ResourceMonitor, default_workers
from .sweep import SweepCell, SweepGrid, SweepTable, run_sweep

__all__ = [
    "EvalReport",
    "FidelityStats",
    "NoiseLevelReport",
    "Reconstruction",
    "RecordEval",
    "ResourceMonitor",
    "SweepCell",
    "SweepGrid",
    "SweepTable",
    "cosine_similarity",
    "default_workers",
    "evaluate_model",
    "evaluate_predictions",
    "noise_robustness_eval",
    "reconstruct_state",
    "run_sweep",
]
