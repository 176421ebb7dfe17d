"""Optimize Plugin - optimal control of the time-T profile"""
from typing import Any, Dict, List

from plugins.base import BasePlugin
from .handlers import OptimizeHandlers


class Plugin(BasePlugin):
    """Optimize Plugin: minimisation over admissible triples, u0* export"""

    display_name = "optimize"
    description = "Оптимальное управление: минимум стоимости по допустимым тройкам"

    def __init__(self, runner, config):
        super().__init__(runner, config)
        self.handlers = OptimizeHandlers(self)

    def get_name(self) -> str:
        return "Optimize"

    def get_commands(self) -> List[Dict[str, Any]]:
        return [
            {
                'name': 'optimize',
                'help': 'minimise the cost over admissible triples; writes triple.json, u0.json and cost.json',
                'configure': self.handlers.configure,
                'handler': self.handlers.handle_optimize,
            }
        ]
