"""Plot data service implementation"""
import json
from pathlib import Path
from typing import Any, Dict, List

import pandas as pd

from lib.errors import ExperimentOutputError
from lib.services.implementations.output_service import write_csv
from lib.services.interfaces.plotdata_service import IPlotDataService
from utils.logger import setup_logger

PLOT_DIR = 'plotdata'
NOTHING_TO_EMIT = 'nothing-to-emit'
EMITTED = 'emitted'


class PlotDataService(IPlotDataService):
    """Plot data service implementation

    Reads the plot index in manifest.json and rewrites each referenced table
    as long-format rows (series, x, y) under ``plotdata/``, one file per table.
    """

    def __init__(self):
        self.logger = setup_logger(__name__)

    def _series_rows(self, frame: pd.DataFrame, spec: Dict[str, Any], table: str) -> pd.DataFrame:
        missing = [column for column in (spec['x'], spec['y'], spec.get('group_by')) if column
                   and column not in frame.columns]
        if missing:
            raise ExperimentOutputError(f"table {table} lacks column(s) {missing}")
        if spec.get('group_by'):
            parts = []
            for key, group in frame.groupby(spec['group_by'], sort=True):
                parts.append(pd.DataFrame({'series': f"{spec['series']}[{spec['group_by']}={key}]",
                                           'x': group[spec['x']].to_numpy(),
                                           'y': group[spec['y']].to_numpy()}))
            return pd.concat(parts, ignore_index=True)
        return pd.DataFrame({'series': spec['series'], 'x': frame[spec['x']].to_numpy(),
                             'y': frame[spec['y']].to_numpy()})

    def emit(self, output_dir: Path) -> Dict[str, Any]:
        output_dir = Path(output_dir)
        if not output_dir.exists() or not any(output_dir.iterdir()):
            self.logger.info(f"{output_dir} holds no experiment outputs")
            return {'status': NOTHING_TO_EMIT, 'files': []}
        manifest_path = output_dir / 'manifest.json'
        if not manifest_path.exists():
            raise ExperimentOutputError(f"{output_dir} has no manifest.json; not an experiment directory")
        manifest = json.loads(manifest_path.read_text(encoding='utf-8'))
        plots = manifest.get('plots', [])
        if not plots:
            return {'status': NOTHING_TO_EMIT, 'files': []}

        by_table: Dict[str, List[Dict[str, Any]]] = {}
        for spec in plots:
            by_table.setdefault(spec['table'], []).append(spec)

        target = output_dir / PLOT_DIR
        target.mkdir(exist_ok=True)
        files = []
        for table, specs in sorted(by_table.items()):
            source = output_dir / manifest.get('tables', {}).get(table, f'{table}.csv')
            if not source.exists():
                raise ExperimentOutputError(f"missing experiment output {source.name}")
            frame = pd.read_csv(source)
            long = pd.concat([self._series_rows(frame, spec, table) for spec in specs], ignore_index=True)
            files.append(write_csv(target / f'{table}.csv', long))
        self.logger.info(f"emitted {len(files)} plot file(s) under {target}")
        return {'status': EMITTED, 'files': [str(path) for path in files]}
