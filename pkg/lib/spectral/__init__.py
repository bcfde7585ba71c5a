from lib.spectral.grid import Grid3D
from lib.spectral.field import Direction, Field, Representation, set_fft_workers, transform
from lib.spectral.multipliers import (
    MultiplierSpec,
    apply_multiplier,
    bessel_multiplier,
    convolve,
    dealias,
    gradient,
    gradient_multiplier,
)
from lib.spectral.littlewood_paley import (
    DEFAULT_N0,
    BandKind,
    DyadicBand,
    beta,
    beta_tilde,
    chi,
    chi_tilde,
    cutoff_profile,
    project,
    resolved_bands,
)

__all__ = [
    'Grid3D', 'Field', 'Representation', 'Direction', 'transform', 'set_fft_workers',
    'MultiplierSpec', 'apply_multiplier', 'convolve', 'dealias', 'gradient',
    'gradient_multiplier', 'bessel_multiplier',
    'DEFAULT_N0', 'BandKind', 'DyadicBand', 'beta', 'beta_tilde', 'chi', 'chi_tilde',
    'cutoff_profile', 'project', 'resolved_bands',
]
