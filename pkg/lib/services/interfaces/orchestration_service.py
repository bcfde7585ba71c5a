"""Orchestration service interface"""
from abc import ABC, abstractmethod
from typing import Optional


class IOrchestrationService(ABC):
    """Orchestration service interface

    Coordinates one experiment: config loading, strategy selection, the run
    itself and the output writing.
    """

    @abstractmethod
    def execute_experiment(self, config_path: str, expected_kind: Optional[str] = None,
                           output: Optional[str] = None, jobs: Optional[int] = None):
        """Run the experiment described by a config file.

        Args:
            config_path: path of the YAML config
            expected_kind: kind named on the command line (must match the config)
            output: output directory override
            jobs: worker cap

        Returns:
            RunOutcome with the result, the output directory and the exit code
        """
        pass

    @abstractmethod
    def configure_services(self, output_service, plotdata_service) -> None:
        """Configure the services this coordinator depends on."""
        pass
