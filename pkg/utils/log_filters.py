"""
Фильтр логов с контекстом запуска.

RunContextFilter добавляет в каждую запись поля run_command и run_seed и укорачивает
длинные числовые списки в сообщениях, чтобы массивы решателя не засоряли лог:
- [0.1, 0.2, ..., 9.9] длиной больше MAX_ITEMS -> [0.1, 0.2, 0.3, … (+97), 9.9]
- то же для numpy-представлений без запятых: [0.1 0.2 0.3 ...]
"""

import logging
import re
from typing import Optional

MAX_ITEMS = 8

_NUMBER = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?|nan|inf|-inf"


class RunContextFilter(logging.Filter):
    """Добавляет контекст запуска и сжимает длинные числовые последовательности."""

    PATTERNS = {
        # Список через запятую: [1.0, 2.0, ...]
        "comma_list": re.compile(rf"\[\s*(?:(?:{_NUMBER})\s*,\s*){{{MAX_ITEMS},}}(?:{_NUMBER})\s*\]"),
        # numpy-массив через пробелы: [1. 2. 3. ...]
        "space_list": re.compile(rf"\[\s*(?:(?:{_NUMBER})\s+){{{MAX_ITEMS},}}(?:{_NUMBER})\s*\]"),
    }

    def __init__(self, command: Optional[str] = None, seed: Optional[int] = None):
        super().__init__()
        self.command = command or "-"
        self.seed = "-" if seed is None else str(seed)

    @staticmethod
    def _compact(match) -> str:
        """[a, b, c, d, ..., z] -> [a, b, c, … (+n), z]"""
        items = re.findall(_NUMBER, match.group(0))
        if len(items) <= MAX_ITEMS:
            return match.group(0)
        head = ", ".join(items[:3])
        return f"[{head}, … (+{len(items) - 4}), {items[-1]}]"

    def compact(self, text: str) -> str:
        text = self.PATTERNS["comma_list"].sub(self._compact, text)
        return self.PATTERNS["space_list"].sub(self._compact, text)

    def filter(self, record: logging.LogRecord) -> bool:
        record.run_command = self.command
        record.run_seed = self.seed
        if record.msg and isinstance(record.msg, str) and not record.args:
            record.msg = self.compact(record.msg)
        return True


def setup_run_context(
    command: Optional[str] = None,
    seed: Optional[int] = None,
    root_logger: Optional[logging.Logger] = None,
) -> RunContextFilter:
    """
    Подключает RunContextFilter ко всем handlers корневого логгера.

    Старые экземпляры фильтра снимаются, поэтому повторный вызов с новой командой безопасен.
    """
    if root_logger is None:
        root_logger = logging.getLogger()

    ctx = RunContextFilter(command, seed)
    for handler in root_logger.handlers:
        for old in [f for f in handler.filters if isinstance(f, RunContextFilter)]:
            handler.removeFilter(old)
        handler.addFilter(ctx)

    root_logger.debug("Run context filter activated")
    return ctx
