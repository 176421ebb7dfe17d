"""Text reports for the optimize command"""
from typing import Any, Dict

import pandas as pd

from utils.text_formatters import format_summary, format_table


def format_optimize_report(payload: Dict[str, Any]) -> str:
    values = {
        "сторона": payload["side"],
        "R": payload["R"],
        "J̃": payload["Jtilde"],
        "J": payload.get("J"),
        "ограничений сработало": payload.get("clamp_count"),
        **payload["bounds"],
    }
    text = format_summary(f"optimize: T={payload['T']:g}, C={payload['C']:g}", values)
    if payload.get("history"):
        text += "\nуточнение сетки уровней:\n" + format_table(pd.DataFrame(payload["history"]))
    return text
