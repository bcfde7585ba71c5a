"""Interaction picture, scattering-state extraction, residual curves and verdicts."""
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from lib.angular import hs1_norm
from lib.errors import PreconditionError
from lib.evolution.integrator import TrajectoryRecord
from lib.propagators.free_flow import free_evolve
from lib.spectral import Field
from utils.logger import setup_logger

logger = setup_logger(__name__)

HALVING_FACTOR = 0.5
TAIL_CONSISTENT = 0.10
TAIL_INCONCLUSIVE = 0.50


class Verdict(str, Enum):
    SCATTERING_CONSISTENT = 'scattering-consistent'
    INCONCLUSIVE = 'inconclusive'
    NON_SCATTERING = 'non-scattering-signature'


def interaction_profile(trajectory: TrajectoryRecord, m: float) -> List[Field]:
    """w(t) = exp(it Lambda_m) u(t) for every recorded snapshot."""
    return [free_evolve(u, -t, m).physical() for t, u in zip(trajectory.times, trajectory.snapshots)]


def increment_table(profile: List[Field], times: List[float], s: float) -> pd.DataFrame:
    rows = []
    for j in range(len(profile) - 1):
        rows.append({'t_start': times[j], 't_end': times[j + 1],
                     'increment': hs1_norm(profile[j + 1] - profile[j], s)})
    return pd.DataFrame(rows, columns=['t_start', 't_end', 'increment'])


def window_increment(profile: List[Field], times: List[float], start: float, end: float, s: float) -> float:
    """||w(end) - w(start)||_{H^{s,1}} using the nearest recorded times."""
    times = np.abs(np.asarray(times))
    i = int(np.argmin(np.abs(times - abs(start))))
    j = int(np.argmin(np.abs(times - abs(end))))
    return hs1_norm(profile[j] - profile[i], s)


@dataclass
class ScatteringState:
    phi_plus: Field
    horizon: float
    tail: float
    direction: int = 1


def _index_near(times: List[float], t: float) -> int:
    return int(np.argmin(np.abs(np.asarray(times) - t)))


def extract_scattering_state(trajectory: TrajectoryRecord, m: float, horizon: Optional[float] = None,
                             s: Optional[float] = None, direction: int = 1,
                             profile: Optional[List[Field]] = None) -> ScatteringState:
    """phi_+ = w(T) with the tail proxy ||w(T) - w(T/2)||_{H^{s,1}}.

    ``direction=-1`` reads a backward run (negative times) and returns phi_-.
    """
    s = trajectory.regularity if s is None else s
    reach = max(direction * t for t in trajectory.times)
    horizon = reach if horizon is None else horizon
    if horizon > reach + 1e-12:
        raise PreconditionError(f"trajectory reaches t={reach}, not the horizon {horizon}",
                                constraint="trajectory reaches T")
    profile = interaction_profile(trajectory, m) if profile is None else profile
    end = _index_near(trajectory.times, direction * horizon)
    middle = _index_near(trajectory.times, direction * horizon / 2.0)
    phi_plus = profile[end]
    return ScatteringState(phi_plus, horizon, hs1_norm(phi_plus - profile[middle], s), direction)


@dataclass
class ScatteringReport:
    times: List[float]
    increments: pd.DataFrame
    phi_plus: Field
    phi_norm: float
    tail: float
    horizons: List[float]
    residuals: List[float]
    verdict: Verdict
    thresholds: Dict[str, float] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def residual_ratios(self) -> List[float]:
        """residual(2T) / residual(T) along the horizon ladder."""
        out = []
        for a, b in zip(self.residuals, self.residuals[1:]):
            out.append(b / a if a > 0 else float('nan'))
        return out

    def residual_frame(self) -> pd.DataFrame:
        return pd.DataFrame({'horizon': self.horizons, 'residual': self.residuals})

    def summary(self) -> dict:
        return {
            'verdict': self.verdict.value,
            'tail': self.tail,
            'tail_relative': self.tail / self.phi_norm if self.phi_norm else float('nan'),
            'phi_norm': self.phi_norm,
            'horizons': self.horizons,
            'residuals': self.residuals,
            'residual_ratios': self.residual_ratios,
            'thresholds': self.thresholds,
            'notes': self.notes,
        }


def residual_curve(profile: List[Field], times: List[float], phi_plus: Field, horizon: float,
                   s: float, direction: int = 1) -> List[float]:
    """||u(T_h) - exp(-iT_h Lambda) phi_+|| = ||w(T_h) - phi_+|| at T_h = T/8, T/4, T/2."""
    out = []
    for fraction in (0.125, 0.25, 0.5):
        index = _index_near(times, direction * horizon * fraction)
        out.append(hs1_norm(profile[index] - phi_plus, s))
    return out


def verdict(residuals: List[float], tail: float, phi_norm: float,
            halving: float = HALVING_FACTOR, tail_consistent: float = TAIL_CONSISTENT,
            tail_inconclusive: float = TAIL_INCONCLUSIVE) -> Verdict:
    """Classify a residual ladder r(T/8), r(T/4), r(T/2)."""
    if phi_norm == 0:
        return Verdict.SCATTERING_CONSISTENT if tail == 0 else Verdict.INCONCLUSIVE
    relative_tail = tail / phi_norm
    if relative_tail > tail_inconclusive:
        return Verdict.INCONCLUSIVE
    r8, r4, r2 = residuals
    if r2 <= halving * r4 and relative_tail < tail_consistent:
        return Verdict.SCATTERING_CONSISTENT
    if r4 >= r8 and r2 >= r4:
        return Verdict.NON_SCATTERING
    return Verdict.INCONCLUSIVE


def scattering_report(trajectory: TrajectoryRecord, m: float, s: Optional[float] = None,
                      direction: int = 1, notes: Optional[List[str]] = None,
                      thresholds: Optional[Dict[str, float]] = None) -> ScatteringReport:
    s = trajectory.regularity if s is None else s
    thresholds = {'halving': HALVING_FACTOR, 'tail_consistent': TAIL_CONSISTENT,
                  'tail_inconclusive': TAIL_INCONCLUSIVE, **(thresholds or {})}
    profile = interaction_profile(trajectory, m)
    state = extract_scattering_state(trajectory, m, s=s, direction=direction, profile=profile)
    phi_norm = hs1_norm(trajectory.initial, s)
    residuals = residual_curve(profile, trajectory.times, state.phi_plus, state.horizon, s, direction)
    outcome = verdict(residuals, state.tail, phi_norm, thresholds['halving'],
                      thresholds['tail_consistent'], thresholds['tail_inconclusive'])
    logger.info(f"scattering verdict {outcome.value}: residuals {residuals}, tail {state.tail:.3e}")
    return ScatteringReport(
        times=list(trajectory.times), increments=increment_table(profile, trajectory.times, s),
        phi_plus=state.phi_plus, phi_norm=phi_norm, tail=state.tail,
        horizons=[state.horizon * f for f in (0.125, 0.25, 0.5)], residuals=residuals,
        verdict=outcome, thresholds=thresholds, notes=list(notes or []),
    )
