"""Multi-asset relationship-change detection.

Slide a window over a price panel, compute pairwise DTW distance matrices,
and derive per-day co-occurrence networks (with graph-based entropy) and
differential networks (with closer/farther hub counts).
"""

from .dtw import DistanceMatrix, distance_matrix, dtw_distance
from .ingest import AssetMeta, PricePanel, fill_missing, load_panel
from .networks import (
    Graph,
    HubCounts,
    MetricsRow,
    SignedGraph,
    cooccurrence_network,
    connected_components,
    count_hubs,
    difference_matrix,
    differential_network,
    graph_based_entropy,
)
from .pipeline import DaySnapshot, PipelineConfig, RunResult, run
from .preprocess import StandardizedWindow, apply_direction, window_zscore, windows_at
from .synth import Shock, SynthSpec, generate, write_panel

__version__ = "0.1.0"

__all__ = [
    "AssetMeta",
    "PricePanel",
    "load_panel",
    "fill_missing",
    "StandardizedWindow",
    "window_zscore",
    "apply_direction",
    "windows_at",
    "DistanceMatrix",
    "dtw_distance",
    "distance_matrix",
    "Graph",
    "SignedGraph",
    "MetricsRow",
    "HubCounts",
    "cooccurrence_network",
    "connected_components",
    "graph_based_entropy",
    "difference_matrix",
    "differential_network",
    "count_hubs",
    "PipelineConfig",
    "RunResult",
    "DaySnapshot",
    "run",
    "Shock",
    "SynthSpec",
    "generate",
    "write_panel",
    "__version__",
]
