"""Output service interface"""
from abc import ABC, abstractmethod
from pathlib import Path
from typing import List, Optional

from lib.experiments.core.context import ExperimentContext
from lib.experiments.strategies.base_experiment import ExperimentResult


class IOutputService(ABC):
    """Output service interface

    Writes the artifacts of a finished experiment: manifest.json, data CSVs,
    summary.json and binary field snapshots.
    """

    @abstractmethod
    def resolve_output_dir(self, config_output: Optional[str], run_name: str,
                           override: Optional[str] = None) -> Path:
        """Pick the output directory.

        Args:
            config_output: output_dir from the config (may be None)
            run_name: name used under the output root
            override: command-line override (wins over the config)

        Returns:
            Directory path (not created yet)
        """
        pass

    @abstractmethod
    def write(self, context: ExperimentContext, result: ExperimentResult,
              overrides: dict, wall_time: float) -> List[Path]:
        """Write every artifact of ``result``.

        Args:
            context: the run's context
            result: the finished experiment result
            overrides: tolerance overrides in effect
            wall_time: run time in seconds

        Returns:
            Paths written
        """
        pass
