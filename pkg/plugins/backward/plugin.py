"""Backward Plugin - initial data reaching a prescribed profile at time T"""
from typing import Any, Dict, List

from plugins.base import BasePlugin
from .handlers import BackwardHandlers


class Plugin(BasePlugin):
    """Backward Plugin: fan-and-shock construction of u0 from (R, rho, y)"""

    display_name = "backward"
    description = "Обратное построение начальных данных по (R, rho, y)"

    def __init__(self, runner, config):
        super().__init__(runner, config)
        self.handlers = BackwardHandlers(self)

    def get_name(self) -> str:
        return "Backward"

    def get_commands(self) -> List[Dict[str, Any]]:
        return [
            {
                'name': 'backward',
                'help': 'construct u0 for (R, rho, y); writes u0.json, tmap.csv and roundtrip.json',
                'configure': self.handlers.configure,
                'handler': self.handlers.handle_backward,
            }
        ]
