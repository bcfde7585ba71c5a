"""Service factory: creates and wires the services"""
from lib.config_loader import ConfigLoader
from lib.services.implementations import OrchestrationService, OutputService, PlotDataService


class ServiceFactory:
    """Creates and wires every service, once per process"""

    def __init__(self):
        ConfigLoader.load_env()

        self._output_service = None
        self._plotdata_service = None
        self._orchestration_service = None

    def get_output_service(self) -> OutputService:
        if self._output_service is None:
            self._output_service = OutputService()
        return self._output_service

    def get_plotdata_service(self) -> PlotDataService:
        if self._plotdata_service is None:
            self._plotdata_service = PlotDataService()
        return self._plotdata_service

    def get_orchestration_service(self) -> OrchestrationService:
        if self._orchestration_service is None:
            self._orchestration_service = OrchestrationService()
            self._orchestration_service.configure_services(
                output_service=self.get_output_service(),
                plotdata_service=self.get_plotdata_service(),
            )
        return self._orchestration_service

    def cleanup(self):
        """Drop the cached services and reset the worker caps."""
        OrchestrationService.apply_jobs(1)
        self._orchestration_service = None
        self._plotdata_service = None
        self._output_service = None
