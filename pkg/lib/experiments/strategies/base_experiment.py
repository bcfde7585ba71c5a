from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from lib.errors import UsageError
from lib.experiments.core.context import ExperimentContext
from lib.spectral import Field
from utils.logger import setup_logger


@dataclass
class CheckResult:
    """One acceptance check; informational checks are reported but never fail a run."""
    name: str
    value: Any
    threshold: Any
    comparison: str
    passed: bool
    asserted: bool = True
    note: str = ''

    def as_dict(self) -> dict:
        return {'name': self.name, 'value': _plain(self.value), 'threshold': _plain(self.threshold),
                'comparison': self.comparison, 'passed': bool(self.passed),
                'asserted': self.asserted, 'note': self.note}


@dataclass
class PlotSeries:
    """Long-format plot series drawn from a written table."""
    table: str
    x: str
    y: str
    series: Optional[str] = None
    group_by: Optional[str] = None

    def as_dict(self) -> dict:
        return {'table': self.table, 'x': self.x, 'y': self.y,
                'series': self.series or self.y, 'group_by': self.group_by}


@dataclass
class ExperimentResult:
    kind: str
    checks: List[CheckResult] = field(default_factory=list)
    tables: Dict[str, pd.DataFrame] = field(default_factory=dict)
    summary: Dict[str, Any] = field(default_factory=dict)
    snapshots: Dict[str, Field] = field(default_factory=dict)
    plots: List[PlotSeries] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks if check.asserted)

    def failed_checks(self) -> List[CheckResult]:
        return [check for check in self.checks if check.asserted and not check.passed]


def _plain(value: Any) -> Any:
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, float) and not np.isfinite(value):
        return str(value)
    return value


_COMPARISONS = {
    '<=': lambda value, threshold: value <= threshold,
    '<': lambda value, threshold: value < threshold,
    '>=': lambda value, threshold: value >= threshold,
    '>': lambda value, threshold: value > threshold,
}


class ExperimentStrategy(ABC):
    """Base class of every experiment kind.

    Subclasses declare ``default_tolerances``; per-run overrides come from the
    config's ``tolerances`` mapping and unknown names are rejected.
    """
    kind: str = ''
    default_tolerances: Dict[str, float] = {}

    def __init__(self):
        self.logger = setup_logger(f'lib.experiments.{self.kind}')
        self.context: Optional[ExperimentContext] = None
        self.tolerances: Dict[str, float] = dict(self.default_tolerances)
        self.overrides: Dict[str, float] = {}

    def load_context(self, context: ExperimentContext) -> 'ExperimentStrategy':
        if context.kind != self.kind:
            raise UsageError(f"config kind '{context.kind}' cannot run as '{self.kind}'")
        unknown = sorted(set(context.config.tolerances) - set(self.default_tolerances))
        if unknown:
            raise UsageError(f"unknown tolerance(s) {unknown} for '{self.kind}'; "
                             f"known: {sorted(self.default_tolerances)}")
        self.context = context
        self.overrides = dict(context.config.tolerances)
        self.tolerances = {**self.default_tolerances, **self.overrides}
        return self

    @property
    def params(self):
        return self.context.params

    @property
    def seed(self) -> int:
        return self.context.seed

    def tolerance(self, name: str) -> float:
        return self.tolerances[name]

    def check(self, name: str, value: Any, threshold: Any, comparison: str = '<=',
              asserted: bool = True, note: str = '') -> CheckResult:
        if comparison == 'flag':
            passed = bool(value) == bool(threshold)
        else:
            passed = bool(np.isfinite(value) and _COMPARISONS[comparison](value, threshold))
        result = CheckResult(name, value, threshold, comparison, passed, asserted, note)
        level = 'info' if passed or not asserted else 'warning'
        getattr(self.logger, level)(f"check {name}: {value} {comparison} {threshold} -> "
                                    f"{'pass' if passed else 'FAIL'}")
        return result

    def seeded(self, simulation):
        """The simulation block with its seed replaced by the run's master seed."""
        return simulation.model_copy(update={'seed': self.seed})

    def new_result(self) -> ExperimentResult:
        return ExperimentResult(kind=self.kind)

    @abstractmethod
    def run(self) -> ExperimentResult:
        """Execute the experiment on the loaded context."""
        pass
