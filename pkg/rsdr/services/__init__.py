"""
Service classes for rsdr operations.
"""

from .fit_service import FitService
from .outlier_service import OutlierService
from .simulation_service import SimulationService

__all__ = [
    "FitService",
    "OutlierService",
    "SimulationService",
]
