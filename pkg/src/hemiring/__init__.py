"""Exact ordered hemirings, pseudonorms and convergence certificates."""

from .errors import HemiringError
from .structures import REGISTERED, get_structure, resolve

__version__ = "0.1.0"

__all__ = ["HemiringError", "REGISTERED", "get_structure", "resolve", "__version__"]
