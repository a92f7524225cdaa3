from .experiment import ExperimentConfig, ExperimentReport, RunResult, StageError, run_experiment
from .replay_client import ReplaySummary, replay_to_service
from .main import main

__all__ = [
    "ExperimentConfig",
    "ExperimentReport",
    "RunResult",
    "StageError",
    "run_experiment",
    "ReplaySummary",
    "replay_to_service",
    "main",
]
