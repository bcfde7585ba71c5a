"""Orchestration service implementation"""
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from lib.config_loader import ConfigLoader
from lib.ensemble import set_max_workers
from lib.errors import UsageError
from lib.evolution.picard import footprint_bytes
from lib.experiments.core.context import ExperimentContext
from lib.experiments.experiment_config import ExperimentConfig
from lib.experiments.factory.experiment_factory import ExperimentFactory
from lib.experiments.strategies.base_experiment import ExperimentResult
from lib.services.interfaces.orchestration_service import IOrchestrationService
from lib.spectral import set_fft_workers
from utils.logger import log_execution_time, setup_logger

logger = setup_logger(__name__)

EXIT_PASS = 0
EXIT_CHECK_FAILURE = 1


@dataclass
class RunOutcome:
    result: ExperimentResult
    output_dir: Path
    exit_code: int
    wall_time: float
    overrides: Dict[str, float] = field(default_factory=dict)
    files: List[Path] = field(default_factory=list)


class OrchestrationService(IOrchestrationService):
    """Orchestration service implementation

    Loads and validates the config, selects the strategy, runs it and hands
    the result to the output service. Nothing is written unless the run
    completes.
    """

    def __init__(self):
        self.logger = logger
        self.output_service = None
        self.plotdata_service = None

    def configure_services(self, output_service, plotdata_service) -> None:
        self.output_service = output_service
        self.plotdata_service = plotdata_service
        self.logger.info("services configured")

    def load_config(self, config_path: str, expected_kind: Optional[str] = None) -> ExperimentConfig:
        config = ConfigLoader.load_experiment_config(config_path)
        if expected_kind is not None and config.kind != expected_kind:
            raise UsageError(f"{config_path} describes a '{config.kind}' experiment, not '{expected_kind}'")
        return config

    @staticmethod
    def projection(config: ExperimentConfig) -> Optional[Dict[str, Any]]:
        """Memory projection of the Picard iterate store, for the picard kind only."""
        if config.kind != 'picard':
            return None
        params = config.params
        grid = params.simulation.build_grid()
        return {'grid': grid.describe(), 'samples': params.samples,
                'bytes_per_iterate': footprint_bytes(grid, params.samples)}

    @staticmethod
    def apply_jobs(jobs: Optional[int]) -> None:
        if jobs is not None:
            if jobs < 1:
                raise UsageError(f"--jobs must be at least 1, got {jobs}")
            set_max_workers(jobs)
            set_fft_workers(jobs)

    @log_execution_time(logger)
    def execute_config(self, config: ExperimentConfig, output: Optional[str] = None,
                       jobs: Optional[int] = None, config_path: Optional[str] = None) -> RunOutcome:
        self.apply_jobs(jobs)
        output_dir = self.output_service.resolve_output_dir(config.output_dir, config.run_name, output)
        context = ExperimentContext(config, output_dir, jobs, config_path)
        strategy = ExperimentFactory.get_strategy(config.kind).load_context(context)

        self.logger.info(f"running '{config.kind}' with seed {config.seed} into {output_dir}")
        start = time.perf_counter()
        result = strategy.run()
        wall_time = time.perf_counter() - start

        files = self.output_service.write(context, result, strategy.overrides, wall_time)
        exit_code = EXIT_PASS if result.passed else EXIT_CHECK_FAILURE
        for check in result.failed_checks():
            self.logger.warning(f"check failed: {check.name} = {check.value} (threshold {check.threshold})")
        return RunOutcome(result, output_dir, exit_code, wall_time, dict(strategy.overrides), files)

    def execute_experiment(self, config_path: str, expected_kind: Optional[str] = None,
                           output: Optional[str] = None, jobs: Optional[int] = None) -> RunOutcome:
        config = self.load_config(config_path, expected_kind)
        return self.execute_config(config, output, jobs, config_path)

    def emit_plotdata(self, output_dir: str) -> Dict[str, Any]:
        return self.plotdata_service.emit(Path(output_dir))
