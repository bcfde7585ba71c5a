"""Experiment configuration schema.

One YAML document per run. ``kind`` selects the experiment; only the block
named after the kind may be given, every other block is an error. Defaults
are resolved into the model so the dumped model re-creates the run.
"""
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import Field as PydanticField, model_validator

from lib.evolution.config import GridConfig, PotentialConfig, SimulationConfig, StrictModel
from lib.spectral import DEFAULT_N0

ExperimentKind = Literal['simulate', 'scatter', 'picard', 'strichartz', 'potential-scaling',
                         'trilinear', 'dirac-check', 'lp-check', 'angular-check']

KIND_BLOCKS: Dict[str, str] = {
    'simulate': 'simulate',
    'scatter': 'scatter',
    'picard': 'picard',
    'strichartz': 'strichartz',
    'potential-scaling': 'potential_scaling',
    'trilinear': 'trilinear',
    'dirac-check': 'dirac_check',
    'lp-check': 'lp_check',
    'angular-check': 'angular_check',
}


def _require_resolved(grid: GridConfig, scales: List[float]) -> None:
    nyquist = grid.build().xi_max
    above = [M for M in scales if M > nyquist]
    if above:
        raise ValueError(f"bands {above} lie above the Nyquist frequency {nyquist:.4g} of the grid")


class SimulateParams(StrictModel):
    simulation: SimulationConfig = SimulationConfig()
    convergence: bool = False
    convergence_horizon: float = PydanticField(1.0, gt=0)
    save_snapshots: bool = False


class ScatterParams(StrictModel):
    simulation: SimulationConfig = SimulationConfig()
    s: Optional[float] = PydanticField(None, ge=0, le=4)
    N0: float = DEFAULT_N0
    contrast: Optional[PotentialConfig] = None
    surrogate: bool = True
    save_snapshots: bool = True


class PicardParams(StrictModel):
    simulation: SimulationConfig = SimulationConfig()
    horizon: float = PydanticField(2.0, gt=0)
    max_iters: int = PydanticField(8, ge=2)
    samples: int = PydanticField(33, ge=17)
    contraction_start: int = PydanticField(3, ge=1)
    large_amplitude: Optional[float] = PydanticField(4.0, gt=0)
    difference_pairs: int = PydanticField(0, ge=0)
    difference_scale: float = PydanticField(1e-2, gt=0)


class BesovProbe(StrictModel):
    scales: List[float] = [8.0, 16.0, 32.0, 64.0]
    q: float = 2.0
    r: float = 6.0


class StrichartzParams(StrictModel):
    grid: GridConfig = GridConfig(n=64, L=1.5)
    mass: float = PydanticField(1.0, gt=0)
    N0: float = DEFAULT_N0
    ensemble: int = PydanticField(20, ge=1)
    samples: int = PydanticField(128, ge=2)
    window: Optional[float] = PydanticField(0.25, gt=0)
    besov: Optional[BesovProbe] = BesovProbe()
    angular_r: List[float] = [3.6, 4.5]
    angular_scales: List[float] = [8.0, 16.0, 32.0, 64.0]
    radial_control: bool = False
    low_band: bool = True

    @model_validator(mode='after')
    def _bands_resolved(self):
        scales = list(self.angular_scales) + (list(self.besov.scales) if self.besov is not None else [])
        _require_resolved(self.grid, scales)
        return self


class ScalingFitParams(StrictModel):
    label: str
    potential: PotentialConfig = PotentialConfig()
    p: float = 1.5
    scales: List[float]
    expected_slope: Optional[float] = None
    kernel: bool = False
    tolerance_name: str = 'slope'


class PotentialScalingParams(StrictModel):
    n: int = PydanticField(96, ge=8)
    fits: List[ScalingFitParams] = [
        ScalingFitParams(label='yukawa', potential=PotentialConfig(kind='yukawa'), p=1.5,
                         scales=[2.0, 4.0, 8.0, 16.0, 32.0]),
        ScalingFitParams(label='coulomb-low', potential=PotentialConfig(kind='coulomb'), p=1.5,
                         scales=[1.0 / 16, 1.0 / 8, 0.25, 0.5], tolerance_name='coulomb_slope'),
        ScalingFitParams(label='kernel', potential=PotentialConfig(kind='yukawa'), p=1.2,
                         scales=[2.0, 4.0, 8.0, 16.0, 32.0], kernel=True),
    ]
    growth_orders: List[int] = [0, 1, 2, 3, 4]

    @model_validator(mode='after')
    def _unique_labels(self):
        labels = [fit.label for fit in self.fits]
        if len(set(labels)) != len(labels):
            raise ValueError(f"scaling fit labels must be unique, got {labels}")
        return self


class TrilinearParams(StrictModel):
    grid: GridConfig = GridConfig(n=64, L=1.5)
    mass: float = PydanticField(1.0, gt=0)
    potential: PotentialConfig = PotentialConfig()
    r: float = 3.6
    s: float = 0.3
    N0: float = DEFAULT_N0
    equal_bands: List[float] = [8.0, 16.0, 32.0]
    low_band: float = DEFAULT_N0
    tuples: Optional[List[Tuple[float, float, float, float]]] = None
    ensemble: int = PydanticField(8, ge=1)
    samples: int = PydanticField(33, ge=2)
    window: Optional[float] = None
    angular_slot: Optional[Literal[1, 2, 3]] = None

    @model_validator(mode='after')
    def _bands_resolved(self):
        _require_resolved(self.grid, list(self.equal_bands) + [self.low_band])
        return self


class DiracCheckParams(StrictModel):
    grid: GridConfig = GridConfig(n=32, L=16.0)
    mass: float = PydanticField(1.0, gt=0)
    potential: PotentialConfig = PotentialConfig()
    symbol_points: int = PydanticField(200, ge=1)
    evolve_time: float = 0.7
    dt: float = PydanticField(0.01, gt=0)
    steps: int = PydanticField(50, ge=1)
    amplitude: float = PydanticField(0.1, gt=0)


class LpCheckParams(StrictModel):
    grid: GridConfig = GridConfig()
    mass: float = PydanticField(1.0, gt=0)
    N0: float = DEFAULT_N0
    times: Tuple[float, float] = (0.3, 1.1)


class AngularCheckParams(StrictModel):
    grid: GridConfig = GridConfig(n=48, L=12.0)
    commutator_grid: GridConfig = GridConfig(n=64, L=24.0)
    mu0: float = 4.0
    young_instances: int = PydanticField(100, ge=1)
    young_grid: GridConfig = GridConfig(n=32, L=16.0)
    sphere_r_tilde: float = 4.0


class ExperimentConfig(StrictModel):
    kind: ExperimentKind
    name: Optional[str] = None
    output_dir: Optional[str] = None
    seed: int = 0
    tolerances: Dict[str, float] = {}
    simulate: Optional[SimulateParams] = None
    scatter: Optional[ScatterParams] = None
    picard: Optional[PicardParams] = None
    strichartz: Optional[StrichartzParams] = None
    potential_scaling: Optional[PotentialScalingParams] = None
    trilinear: Optional[TrilinearParams] = None
    dirac_check: Optional[DiracCheckParams] = None
    lp_check: Optional[LpCheckParams] = None
    angular_check: Optional[AngularCheckParams] = None

    @model_validator(mode='before')
    @classmethod
    def _fill_kind_block(cls, data):
        """Create the kind's parameter block with defaults when it is omitted."""
        if isinstance(data, dict) and data.get('kind') in KIND_BLOCKS:
            block = KIND_BLOCKS[data['kind']]
            if data.get(block) is None:
                data = {**data, block: {}}
        return data

    @model_validator(mode='after')
    def _one_block(self):
        own = KIND_BLOCKS[self.kind]
        extra = [name for name in KIND_BLOCKS.values() if name != own and getattr(self, name) is not None]
        if extra:
            raise ValueError(f"kind '{self.kind}' does not accept the block(s) {extra}")
        return self

    @property
    def params(self) -> StrictModel:
        return getattr(self, KIND_BLOCKS[self.kind])

    @property
    def run_name(self) -> str:
        return self.name or self.kind

    def resolved(self) -> dict:
        return self.model_dump(mode='json', exclude_none=False)
