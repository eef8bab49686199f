"""Hyperbolic cobweb manifolds Cw(2z) built from complete Coxeter orthoschemes."""

from . import cobweb, groups, metrics, orthoscheme, projlin
from .errors import CobwebError

__all__ = ["cobweb", "groups", "metrics", "orthoscheme", "projlin", "CobwebError"]
__version__ = "0.1.0"
