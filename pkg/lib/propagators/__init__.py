from lib.propagators.free_flow import DispersionRelation, bracket, free_evolve, free_samples
from lib.propagators.dirac import DiracData, dirac_free_evolve, dirac_projector, dirac_split
from lib.propagators.strichartz import (
    SlopeReport,
    angular_strichartz_probe,
    besov_strichartz_probe,
    low_band_strichartz_check,
)

__all__ = [
    'DispersionRelation', 'bracket', 'free_evolve', 'free_samples',
    'DiracData', 'dirac_free_evolve', 'dirac_projector', 'dirac_split',
    'SlopeReport', 'angular_strichartz_probe', 'besov_strichartz_probe', 'low_band_strichartz_check',
]
