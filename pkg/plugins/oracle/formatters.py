"""Text reports for the oracle command"""
from typing import Any, Dict

from utils.text_formatters import format_summary


def format_oracle_report(payload: Dict[str, Any]) -> str:
    return format_summary(
        f"oracle: T={payload['T']:g}, dx={payload['dx']:g}",
        {
            "шагов": payload["steps"],
            "cfl": payload["cfl"],
            "u(0-,T)": payload["trace_minus"],
            "u(0+,T)": payload["trace_plus"],
            "|f(u+) - g(u-)|": payload["rh_residual"],
            "L1 до forward": payload.get("l1_vs_forward"),
        },
    )
