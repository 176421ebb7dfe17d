"""Oracle Plugin - Godunov finite-volume reference solve"""
from .plugin import Plugin

__all__ = ['Plugin']
