"""Text reports for the backward command"""
from typing import Any, Dict

import pandas as pd

from utils.text_formatters import format_summary, format_table


def format_backward_report(payload: Dict[str, Any]) -> str:
    text = format_summary(
        f"backward: сторона={payload['side']}, R={payload['R']:g}, T={payload['T']:g}",
        payload,
        skip=("command", "side", "R", "T", "seed"),
    )
    if payload.get("history"):
        text += "\nуточнение по N:\n" + format_table(pd.DataFrame(payload["history"]))
    return text
