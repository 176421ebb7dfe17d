# Загружаем переменные окружения
import sys

from config import get_config

cfg = get_config()

# Настройка логирования
from utils.logging_setup import setup_logging

setup_logging(cfg)

import logging

logger = logging.getLogger(__name__)

# Импортируем ядро CLI
from core.runner import DfluxRunner, EXIT_SOLVER


def main(argv=None) -> int:
    runner = DfluxRunner(cfg)
    try:
        logger.debug("Загрузка плагинов...")

        # порядок регистрации подкоманд: forward, oracle, backward, optimize, reach
        failed = runner.load_default_plugins()
        if failed:
            logger.warning(f"Не загружены плагины: {failed}")

        return runner.run(argv)

    except KeyboardInterrupt:
        logger.info('Остановка по Ctrl+C')
        runner.shutdown()
        return EXIT_SOLVER
    except Exception as e:
        logger.error(f"Непредвиденная ошибка: {e}", exc_info=True)
        runner.shutdown()
        return EXIT_SOLVER


if __name__ == '__main__':
    sys.exit(main())
