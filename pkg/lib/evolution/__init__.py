from lib.evolution.config import GridConfig, InitialData, PotentialConfig, SimulationConfig
from lib.evolution.hartree import energy, hartree_force, interaction_field, mass, trilinear_force
from lib.evolution.integrator import TrajectoryRecord, evolve, integrate, self_convergence_order, strang_step
from lib.evolution.picard import PicardReport, difference_probe, duhamel_picard, duhamel_term

__all__ = [
    'GridConfig', 'InitialData', 'PotentialConfig', 'SimulationConfig',
    'energy', 'hartree_force', 'interaction_field', 'mass', 'trilinear_force',
    'TrajectoryRecord', 'evolve', 'integrate', 'self_convergence_order', 'strang_step',
    'PicardReport', 'difference_probe', 'duhamel_picard', 'duhamel_term',
]
