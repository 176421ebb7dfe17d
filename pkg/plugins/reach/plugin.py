"""Reach Plugin - reachable-set membership and exact control"""
from typing import Any, Dict, List

from plugins.base import BasePlugin
from .handlers import ReachHandlers


class Plugin(BasePlugin):
    """Reach Plugin: `reach check` and `reach control`"""

    display_name = "reach"
    description = "Достижимое множество: проверка принадлежности и точное управление"

    def __init__(self, runner, config):
        super().__init__(runner, config)
        self.handlers = ReachHandlers(self)

    def get_name(self) -> str:
        return "Reach"

    def get_commands(self) -> List[Dict[str, Any]]:
        return [
            {
                'name': 'reach',
                'help': 'reachable set: "check" decides membership, "control" builds exact initial data',
                'configure': self.handlers.configure,
                'handler': self.handlers.handle_reach,
            }
        ]
