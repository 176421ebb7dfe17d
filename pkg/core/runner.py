import argparse
import logging
from pathlib import Path
from typing import List, Optional, Sequence

from config import Config, with_overrides
from core.plugin_manager import PluginManager
from core.scheduler import TaskScheduler
from solvers.errors import DfluxError
from utils.log_filters import setup_run_context

logger = logging.getLogger(__name__)

# Плагины команд в порядке регистрации подкоманд
DEFAULT_PLUGINS = (
    ("plugins.forward", "Forward"),
    ("plugins.oracle", "Oracle"),
    ("plugins.backward", "Backward"),
    ("plugins.optimize", "Optimize"),
    ("plugins.reach", "Reach"),
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SOLVER = 3


class DfluxRunner:
    """Ядро CLI: загружает плагины команд, разбирает аргументы и вызывает обработчик."""

    def __init__(self, config: Config):
        self.config = config
        self.plugin_manager = PluginManager(self, config)
        self.scheduler: Optional[TaskScheduler] = None

    def load_plugin(self, plugin_path: str) -> bool:
        return self.plugin_manager.load_plugin(plugin_path)

    def load_default_plugins(self) -> List[str]:
        """Загружает все плагины команд; возвращает имена тех, что не загрузились"""
        failed = []
        for path, title in DEFAULT_PLUGINS:
            if self.load_plugin(path):
                logger.debug(f"✓ {title} загружен")
            else:
                logger.error(f"✗ Ошибка загрузки {title}")
                failed.append(title)
        return failed

    def build_parser(self) -> argparse.ArgumentParser:
        # Общие флаги допустимы и до, и после имени подкоманды
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--config", type=Path, default=argparse.SUPPRESS, help="problem file (JSON)")
        common.add_argument("--out", type=Path, default=argparse.SUPPRESS, help="output directory")
        common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker thread cap")
        common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="64-bit seed for randomized suites")
        parser = argparse.ArgumentParser(
            prog="dflux",
            description="Conservation laws with a flux discontinuous at x=0: forward solves, "
            "backward construction, optimal and exact control.",
            parents=[common],
        )
        return self.plugin_manager.build_parser(parser, common)

    def run(self, argv: Optional[Sequence[str]] = None) -> int:
        """Разбирает argv и выполняет подкоманду; возвращает код выхода"""
        args = self.build_parser().parse_args(argv)
        for name in ("config", "out", "threads", "seed"):
            if not hasattr(args, name):
                setattr(args, name, None)
        self.config = with_overrides(
            self.config,
            command=args.command,
            out_dir=args.out,
            threads=args.threads,
            seed=args.seed,
        )
        setup_run_context(self.config.app.command, self.config.solver.seed)
        for plugin in self.plugin_manager.plugins.values():
            plugin.config = self.config
        self.scheduler = TaskScheduler(self.config)
        self.scheduler.start()
        try:
            args.handler(args)
            return EXIT_OK
        except DfluxError as e:
            logger.error(f"{type(e).__name__}: {e}")
            logger.debug("Трассировка", exc_info=True)
            return e.exit_code
        finally:
            self.shutdown()

    def shutdown(self):
        self.plugin_manager.shutdown_all()
        if self.scheduler is not None:
            self.scheduler.stop()
