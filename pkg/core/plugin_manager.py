from typing import Dict, List
import argparse
import importlib
import logging
from plugins.base import BasePlugin

class PluginManager:
    def __init__(self, runner, config):
        self.runner = runner
        self.config = config
        self.plugins: Dict[str, BasePlugin] = {}
        self.commands: Dict[str, BasePlugin] = {}
        self.logger = logging.getLogger(__name__)

    def load_plugin(self, plugin_path: str) -> bool:
        """Загружает плагин по пути"""
        try:
            module = importlib.import_module(plugin_path)
            plugin_class = getattr(module, 'Plugin')
            plugin = plugin_class(self.runner, self.config)

            if plugin.get_name() in self.plugins:
                self.logger.error(f"Плагин {plugin.get_name()} уже загружен")
                return False
            if not plugin.initialize():
                self.logger.error(f"Ошибка инициализации плагина {plugin_path}")
                return False

            self._register_commands(plugin)
            self.plugins[plugin.get_name()] = plugin
            self.logger.debug(f"Плагин {plugin.get_name()} загружен")
            return True

        except Exception as e:
            self.logger.error(f"Ошибка загрузки плагина {plugin_path}: {e}")
            return False

    def _register_commands(self, plugin: BasePlugin):
        """Запоминает подкоманды плагина; парсер собирается в build_parser"""
        names = [command['name'] for command in plugin.get_commands()]
        for name in names:
            if name in self.commands:
                raise ValueError(f"команда {name} уже зарегистрирована плагином {self.commands[name].get_name()}")
        for name in names:
            self.commands[name] = plugin

    def build_parser(self, parent: argparse.ArgumentParser, common: argparse.ArgumentParser) -> argparse.ArgumentParser:
        """Добавляет подкоманды всех загруженных плагинов в parent; common: парсер общих флагов"""
        subparsers = parent.add_subparsers(dest='command', metavar='COMMAND')
        subparsers.required = True
        for plugin in self.plugins.values():
            for command in plugin.get_commands():
                sub = subparsers.add_parser(command["name"], help=command.get("help", ""), parents=[common])
                command['configure'](sub, common)
                sub.set_defaults(handler=command['handler'])
        return parent

    def get_command_names(self) -> List[str]:
        return sorted(self.commands)

    def shutdown_all(self):
        """Завершает работу всех плагинов"""
        for plugin in self.plugins.values():
            plugin.shutdown()
