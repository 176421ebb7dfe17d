"""Oracle Plugin - Godunov finite-volume reference solve"""
from typing import Any, Dict, List

from plugins.base import BasePlugin
from .handlers import OracleHandlers


class Plugin(BasePlugin):
    """Oracle Plugin: Godunov scheme with the interface flux, profile export"""

    display_name = "oracle"
    description = "Эталонное решение схемой Годунова"

    def __init__(self, runner, config):
        super().__init__(runner, config)
        self.handlers = OracleHandlers(self)

    def get_name(self) -> str:
        return "Oracle"

    def initialize(self) -> bool:
        cfl = self.config.solver.cfl
        if not 0.0 < cfl <= 1.0:
            self.logger.error(f"Число Куранта {cfl} вне (0, 1]")
            return False
        return super().initialize()

    def get_commands(self) -> List[Dict[str, Any]]:
        return [
            {
                'name': 'oracle',
                'help': 'Godunov reference solve; writes profile.csv and report.json',
                'configure': self.handlers.configure,
                'handler': self.handlers.handle_oracle,
            }
        ]
