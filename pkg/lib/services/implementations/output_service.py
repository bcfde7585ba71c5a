"""Output service implementation"""
import json
from enum import Enum
from pathlib import Path
from typing import Any, List, Optional

import numpy as np
import pandas as pd

from lib import __version__
from lib.config_loader import ConfigLoader
from lib.experiments.core.context import ExperimentContext
from lib.experiments.strategies.base_experiment import ExperimentResult
from lib.services.interfaces.output_service import IOutputService
from utils.logger import setup_logger

TOOL_NAME = 'hartree-lab'
CSV_FLOAT_FORMAT = '%.17g'
SNAPSHOT_SUFFIX = '.hlf'


def to_jsonable(value: Any) -> Any:
    """Plain JSON types; non-finite floats become strings."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if np.isfinite(value) else str(value)
    if isinstance(value, complex):
        return {'re': value.real, 'im': value.imag}
    return value


def write_json(path: Path, payload: dict) -> Path:
    path.write_text(json.dumps(to_jsonable(payload), indent=2, sort_keys=True) + '\n', encoding='utf-8')
    return path


def write_csv(path: Path, frame: pd.DataFrame) -> Path:
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator='\n')
    return path


class OutputService(IOutputService):
    """Output service implementation

    Layout of an experiment directory::

        manifest.json       resolved config, version, seed, wall time, file index
        summary.json        checks with pass/fail, report summaries, overrides
        <table>.csv         one CSV per result table
        snapshots/*.hlf     binary field snapshots
    """

    def __init__(self):
        self.logger = setup_logger(__name__)

    def resolve_output_dir(self, config_output: Optional[str], run_name: str,
                           override: Optional[str] = None) -> Path:
        if override:
            return Path(override)
        if config_output:
            return Path(config_output)
        return Path(ConfigLoader.output_root()) / run_name

    def write(self, context: ExperimentContext, result: ExperimentResult,
              overrides: dict, wall_time: float) -> List[Path]:
        output_dir = Path(context.output_dir)
        output_dir.mkdir(parents=True, exist_ok=True)
        written = []

        tables = {}
        for name, frame in sorted(result.tables.items()):
            path = write_csv(output_dir / f'{name}.csv', frame)
            tables[name] = path.name
            written.append(path)

        snapshots = {}
        if result.snapshots:
            snapshot_dir = output_dir / 'snapshots'
            snapshot_dir.mkdir(exist_ok=True)
            for name, field in sorted(result.snapshots.items()):
                path = field.save(snapshot_dir / f'{name}{SNAPSHOT_SUFFIX}')
                snapshots[name] = str(path.relative_to(output_dir))
                written.append(path)

        summary = {
            'kind': result.kind,
            'passed': result.passed,
            'checks': [check.as_dict() for check in result.checks],
            'tolerance_overrides': overrides,
            'warnings': result.warnings,
            'report': result.summary,
        }
        written.append(write_json(output_dir / 'summary.json', summary))

        manifest = {
            'tool': TOOL_NAME,
            'version': __version__,
            'kind': context.kind,
            'seed': context.seed,
            'jobs': context.jobs,
            'config_path': context.config_path,
            'config': context.config.resolved(),
            'wall_time_seconds': round(wall_time, 3),
            'tables': tables,
            'snapshots': snapshots,
            'plots': [plot.as_dict() for plot in result.plots],
        }
        written.append(write_json(output_dir / 'manifest.json', manifest))
        self.logger.info(f"wrote {len(written)} file(s) to {output_dir}")
        return written
