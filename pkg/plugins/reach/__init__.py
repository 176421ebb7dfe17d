"""Reach Plugin - reachable-set membership and exact control"""
from .plugin import Plugin

__all__ = ['Plugin']
