import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, List

from config import Config


class BasePlugin(ABC):
    """Базовый класс для всех плагинов команд"""

    # Атрибуты плагина
    display_name: str = ""  # Имя для списка команд
    description: str = ""  # Описание плагина
    version: str = "1.0.0"

    def __init__(self, runner, config: Config):
        self.runner = runner
        self.config = config
        self.name = self.__class__.__name__
        self.logger = logging.getLogger(self.__class__.__module__)

    @abstractmethod
    def get_name(self) -> str:
        """Возвращает имя плагина"""

    @abstractmethod
    def get_commands(self) -> List[Dict[str, Any]]:
        """
        Возвращает подкоманды плагина.

        Каждая запись: {'name': str, 'help': str, 'configure': callable(subparser, common),
        'handler': callable(args)}.
        """

    def get_version(self) -> str:
        return self.version

    def initialize(self) -> bool:
        """Проверка перед регистрацией; False означает, что плагин не загружается"""
        self.logger.debug(f"Плагин {self.get_name()} v{self.version} инициализирован")
        return True

    @property
    def executor(self):
        """Пул потоков текущего запуска (None до разбора аргументов)"""
        return getattr(self.runner, "scheduler", None)

    def shutdown(self):
        self.logger.debug(f"Плагин {self.get_name()} остановлен")
