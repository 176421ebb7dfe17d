"""Backward Plugin - initial data reaching a prescribed profile at time T"""
from .plugin import Plugin

__all__ = ['Plugin']
