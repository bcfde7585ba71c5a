"""Service interfaces"""
from .output_service import IOutputService
from .plotdata_service import IPlotDataService
from .orchestration_service import IOrchestrationService

__all__ = [
    'IOutputService',
    'IPlotDataService',
    'IOrchestrationService',
]
