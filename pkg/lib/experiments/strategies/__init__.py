"""Experiment strategies, one per experiment kind.

- SimulateExperiment: Hartree flow with conservation and Strang-order checks
- ScatterExperiment: interaction picture, scattering state, residual verdict
- PicardExperiment: Duhamel-Picard contraction and large-data failure
- StrichartzExperiment: Besov and angular Strichartz exponent probes
- PotentialScalingExperiment: dyadic-piece scaling of the potential
- TrilinearExperiment: trilinear estimate ratios across dyadic tuples
- DiracCheckExperiment: Dirac projections and Hartree-Dirac charge
- LpCheckExperiment: transform and Littlewood-Paley identities
- AngularCheckExperiment: spherical-gradient and mixed-norm checks
"""

from .simulate import SimulateExperiment
from .scatter import ScatterExperiment
from .picard import PicardExperiment
from .strichartz import StrichartzExperiment
from .potential_scaling import PotentialScalingExperiment
from .trilinear import TrilinearExperiment
from .dirac_check import DiracCheckExperiment
from .lp_check import LpCheckExperiment
from .angular_check import AngularCheckExperiment

__all__ = [
    'SimulateExperiment',
    'ScatterExperiment',
    'PicardExperiment',
    'StrichartzExperiment',
    'PotentialScalingExperiment',
    'TrilinearExperiment',
    'DiracCheckExperiment',
    'LpCheckExperiment',
    'AngularCheckExperiment',
]
