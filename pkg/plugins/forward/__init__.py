"""Forward Plugin - explicit Hamilton-Jacobi solve of the discontinuous-flux problem"""
from .plugin import Plugin

__all__ = ['Plugin']
