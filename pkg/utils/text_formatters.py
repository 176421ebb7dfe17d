from typing import Any, Dict, Iterable, Optional

import pandas as pd
from tabulate import tabulate

# Настройка логирования
import logging
logger = logging.getLogger(__name__)


def format_number(value: Any, digits: int = 6) -> str:
    """
    Число для отчёта: общий формат с digits значащими цифрами.

    Args:
        value: число, None или что угодно ещё

    Returns:
        str: отформатированное значение
    """
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "да" if value else "нет"
    if isinstance(value, (int, float)):
        return f"{value:.{digits}g}"
    return str(value)


def format_table(df: pd.DataFrame, max_rows: Optional[int] = 20) -> str:
    """DataFrame в таблицу psql; длинные таблицы укорачиваются с середины"""
    if df.empty:
        return "(пусто)"
    if max_rows is not None and len(df) > max_rows:
        half = max_rows // 2
        df = pd.concat([df.head(half), df.tail(half)])
    return tabulate(df, headers="keys", tablefmt="psql", showindex=False, floatfmt=".6g")


def format_summary(title: str, values: Dict[str, Any], skip: Iterable[str] = ()) -> str:
    """Сводка «ключ: значение» с заголовком; вложенные словари и списки пропускаются"""
    skip = set(skip)
    rows = [
        (key, format_number(val))
        for key, val in values.items()
        if key not in skip and not isinstance(val, (dict, list, tuple))
    ]
    if not rows:
        return title
    return f"{title}\n" + tabulate(rows, headers=["параметр", "значение"], tablefmt="psql")
