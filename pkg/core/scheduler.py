import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Iterable, List, Optional


class TaskScheduler:
    """
    Пул рабочих потоков для внутренних циклов решателей.

    Передаётся в solve_profile / minimize / membership как executor: от него нужен только
    упорядоченный map(func, items). При threads == 1 задачи выполняются в текущем потоке.
    """

    def __init__(self, config):
        self.config = config
        self.logger = logging.getLogger(__name__)
        self.threads = max(1, int(config.solver.threads))
        self._pool: Optional[ThreadPoolExecutor] = None
        self.tasks_done = 0

    def start(self):
        """Запускает пул потоков"""
        if self.threads > 1 and self._pool is None:
            self._pool = ThreadPoolExecutor(max_workers=self.threads, thread_name_prefix="dflux")
            self.logger.info(f"TaskScheduler запущен: потоков={self.threads}")

    def map(self, func: Callable[[Any], Any], items: Iterable[Any]) -> List[Any]:
        """Применяет func к items; порядок результатов совпадает с порядком входа."""
        items = list(items)
        if self._pool is None or len(items) < 2:
            results = [func(item) for item in items]
        else:
            results = list(self._pool.map(func, items))
        self.tasks_done += len(items)
        return results

    def stop(self):
        """Останавливает пул"""
        if self._pool is not None:
            self._pool.shutdown(wait=True)
            self._pool = None
            self.logger.info(f"TaskScheduler остановлен, задач выполнено: {self.tasks_done}")
