from typing import Dict, List, Type

from lib.errors import UsageError
from lib.experiments.strategies.base_experiment import ExperimentStrategy
from lib.experiments.strategies import (
    AngularCheckExperiment,
    DiracCheckExperiment,
    LpCheckExperiment,
    PicardExperiment,
    PotentialScalingExperiment,
    ScatterExperiment,
    SimulateExperiment,
    StrichartzExperiment,
    TrilinearExperiment,
)


class ExperimentFactory:
    """Experiment strategy registry keyed by kind."""

    _strategies: Dict[str, Type[ExperimentStrategy]] = {
        'simulate': SimulateExperiment,
        'scatter': ScatterExperiment,
        'picard': PicardExperiment,
        'strichartz': StrichartzExperiment,
        'potential-scaling': PotentialScalingExperiment,
        'trilinear': TrilinearExperiment,
        'dirac-check': DiracCheckExperiment,
        'lp-check': LpCheckExperiment,
        'angular-check': AngularCheckExperiment,
    }

    @classmethod
    def get_strategy(cls, kind: str) -> ExperimentStrategy:
        strategy_class = cls._strategies.get(kind)
        if not strategy_class:
            raise UsageError(f"Unknown experiment kind: {kind}")
        return strategy_class()

    @classmethod
    def register_strategy(cls, kind: str, strategy_class: Type[ExperimentStrategy]):
        cls._strategies[kind] = strategy_class

    @classmethod
    def kinds(cls) -> List[str]:
        return sorted({strategy.kind for strategy in cls._strategies.values()})
