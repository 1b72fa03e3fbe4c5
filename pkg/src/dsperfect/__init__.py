"""dsperfect package (src layout).

Public API:
    from dsperfect import Lattice, catalog, classify14, verify_lattice
"""
from ._version import __version__, get_version
from .catalog import catalog
from .config import PipelineConfig, load_config
from .design_engine import moment_check, strong_perfection_report
from .genus_tools import genus_symbol, mass, milgram_check, parse_genus_symbol
from .lattice_core import Lattice, dual, rescale, short_vectors
from .pipeline import classify14, verify_lattice
from .theta_forms import feasible_space, fricke_image, theta

__all__ = [
    "__version__", "get_version",
    "Lattice", "dual", "rescale", "short_vectors", "catalog",
    "moment_check", "strong_perfection_report",
    "genus_symbol", "mass", "milgram_check", "parse_genus_symbol",
    "theta", "fricke_image", "feasible_space",
    "PipelineConfig", "load_config", "classify14", "verify_lattice",
]
