"""Optimize Plugin - optimal control of the time-T profile"""
from .plugin import Plugin

__all__ = ['Plugin']
