"""Time-domain simulation of SOA-MZI photonic up-conversion mixers."""

from .detection import OBPFParams, PhotodiodeParams, RFSpectrum
from .metrics import MixerReport
from .mzi import Architecture, ArchitectureConfig
from .pipeline import Bench, OperatingPoint, simulate_cell
from .signalgen import TimeGrid, make_time_grid
from .soa import SOAParams

__version__ = "0.1.0"

__all__ = ["Architecture", "ArchitectureConfig", "Bench", "MixerReport", "OBPFParams", "OperatingPoint",
           "PhotodiodeParams", "RFSpectrum", "SOAParams", "TimeGrid", "make_time_grid", "simulate_cell"]
