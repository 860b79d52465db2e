"""Link-level sidelink V2X simulator with scalable OFDM numerologies."""

from .campaign import BlerCurve, BlerPoint, compute_bler, run_campaign
from .config import SimConfig, load_config, parse_config, validate_config
from .numerology import FrameGeometry, Numerology, grid_geometry
from .results import parse_results, write_results

__version__ = "0.1.0"

__all__ = [
    "BlerCurve",
    "BlerPoint",
    "FrameGeometry",
    "Numerology",
    "SimConfig",
    "compute_bler",
    "grid_geometry",
    "load_config",
    "parse_config",
    "parse_results",
    "run_campaign",
    "validate_config",
    "write_results",
    "__version__",
]
