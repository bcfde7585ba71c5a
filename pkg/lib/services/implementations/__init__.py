"""Service implementations"""
from .output_service import OutputService
from .plotdata_service import PlotDataService
from .orchestration_service import OrchestrationService, RunOutcome

__all__ = [
    'OutputService',
    'PlotDataService',
    'OrchestrationService',
    'RunOutcome',
]
