from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

from lib.experiments.experiment_config import ExperimentConfig


@dataclass(frozen=True)
class ExperimentContext:
    """
    Immutable context for one experiment run: the validated config, the
    output directory and the worker cap. Strategies read, never write, it.
    """
    config: ExperimentConfig
    output_dir: Path
    jobs: Optional[int] = None
    config_path: Optional[str] = None
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def kind(self) -> str:
        return self.config.kind

    @property
    def seed(self) -> int:
        return self.config.seed

    @property
    def params(self):
        return self.config.params

    def get(self, key: str, default: Any = None) -> Any:
        """Safe accessor for extra settings."""
        return self.extra.get(key, default)
