"""Plot data service interface"""
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict


class IPlotDataService(ABC):
    """Plot data service interface

    Turns a completed experiment directory into long-format (series, x, y) CSVs.
    """

    @abstractmethod
    def emit(self, output_dir: Path) -> Dict[str, Any]:
        """Emit plot-ready files for one experiment directory.

        Args:
            output_dir: directory written by a completed run

        Returns:
            Dictionary with ``status`` ('emitted' or 'nothing-to-emit') and ``files``
        """
        pass
