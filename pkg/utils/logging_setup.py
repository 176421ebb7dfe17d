import logging
import logging.config
from pathlib import Path

from utils.log_filters import setup_run_context

LOG_FILE_NAME = "dflux.log"

# stdout занят сводками команд, логи идут в stderr
CONSOLE_FORMAT = "%(asctime)s | %(levelname)-8s | %(name)s | %(message)s"
FILE_FORMAT = (
    "%(asctime)s | %(levelname)-8s | %(name)s | %(run_command)s seed=%(run_seed)s"
    " | %(filename)s:%(lineno)d | %(message)s"
)

# Сторонние логгеры, которые выше WARNING не интересны
QUIET_LOGGERS = ("matplotlib", "numexpr", "numba")


def _handlers(log_level: int, log_file: Path | None) -> dict:
    handlers = {
        "console": {
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "level": log_level,
            "formatter": "console",
        },
    }
    if log_file is not None:
        handlers["file"] = {
            "class": "logging.handlers.TimedRotatingFileHandler",
            "level": log_level,
            "formatter": "file",
            "filename": str(log_file),
            "when": "midnight",
            "backupCount": 7,
            "encoding": "utf-8",
        }
    return handlers


def setup_logging(cfg) -> None:
    """
    Консоль (stderr) и файл logs/dflux.log с ротацией в полночь.

    В окружении testing файл не пишется. Контекст запуска (команда, seed) попадает в
    файловый формат через RunContextFilter.
    """
    log_level = getattr(logging, (cfg.app.log_level or "INFO").upper(), logging.INFO)

    log_file = None
    if cfg.app.env != "testing":
        logs_dir: Path = cfg.paths.logs_dir
        logs_dir.mkdir(parents=True, exist_ok=True)
        log_file = logs_dir / LOG_FILE_NAME

    handlers = _handlers(log_level, log_file)
    names = list(handlers)
    logging.config.dictConfig(
        {
            "version": 1,
            "disable_existing_loggers": False,
            "formatters": {
                "console": {"format": CONSOLE_FORMAT, "datefmt": "%Y-%m-%d %H:%M:%S"},
                "file": {"format": FILE_FORMAT, "datefmt": "%Y-%m-%d %H:%M:%S"},
            },
            "handlers": handlers,
            "loggers": {
                name: {"level": "WARNING", "handlers": names, "propagate": False} for name in QUIET_LOGGERS
            },
            "root": {"level": log_level, "handlers": names},
        }
    )

    setup_run_context(cfg.app.command, cfg.solver.seed)
