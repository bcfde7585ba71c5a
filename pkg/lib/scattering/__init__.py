from lib.scattering.variation import (
    EmbeddingCheck,
    VariationSamples,
    embedding_check,
    vp_norm_discrete,
    vp_norm_from_distances,
)
from lib.scattering.diagnostics import (
    ScatteringReport,
    ScatteringState,
    Verdict,
    extract_scattering_state,
    interaction_profile,
    scattering_report,
    window_increment,
)
from lib.scattering.surrogate import SURROGATE_LABEL, SurrogateReport, xs_surrogate, xs_surrogate_norm
from lib.scattering.trilinear import TrilinearReport, default_tuples, trilinear_probe

__all__ = [
    'EmbeddingCheck', 'VariationSamples', 'embedding_check', 'vp_norm_discrete', 'vp_norm_from_distances',
    'ScatteringReport', 'ScatteringState', 'Verdict', 'extract_scattering_state', 'interaction_profile',
    'scattering_report', 'window_increment',
    'SURROGATE_LABEL', 'SurrogateReport', 'xs_surrogate', 'xs_surrogate_norm',
    'TrilinearReport', 'default_tuples', 'trilinear_probe',
]
