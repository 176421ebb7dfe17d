"""Forward Plugin - explicit Hamilton-Jacobi solve of the discontinuous-flux problem"""
from typing import Any, Dict, List

from plugins.base import BasePlugin
from .handlers import ForwardHandlers


class Plugin(BasePlugin):
    """Forward Plugin: value-function solve, interface checks, profile export"""

    display_name = "forward"
    description = "u(x, T) по явной формуле и проверка условий на интерфейсе"

    def __init__(self, runner, config):
        super().__init__(runner, config)
        self.handlers = ForwardHandlers(self)

    def get_name(self) -> str:
        return "Forward"

    def get_commands(self) -> List[Dict[str, Any]]:
        return [
            {
                'name': 'forward',
                'help': 'solve u(x, T) from the explicit formula; writes profile.csv and interface.json',
                'configure': self.handlers.configure,
                'handler': self.handlers.handle_forward,
            }
        ]
