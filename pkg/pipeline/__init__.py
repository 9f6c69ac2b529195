"""Invariant pipeline: configuration, persistent caches, orchestration and reports."""

from .cache import OrderCacheFile
from .config import PipelineConfig, build_config
from .report import InvariantReport, ReportDiff, Verdict, compare_reports
from .service import PipelineService, exit_code, run_pipeline

__all__ = [
    "InvariantReport",
    "OrderCacheFile",
    "PipelineConfig",
    "PipelineService",
    "ReportDiff",
    "Verdict",
    "build_config",
    "compare_reports",
    "exit_code",
    "run_pipeline",
]
