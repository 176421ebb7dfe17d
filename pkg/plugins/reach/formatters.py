"""Text reports for the reach command"""
from typing import Any, Dict

from solvers.reachable import MembershipResult
from utils.text_formatters import format_summary


def format_membership_report(res: MembershipResult) -> str:
    title = "reach check: профиль достижим" if res.member else "reach check: профиль недостижим"
    return format_summary(title, {"сторона": res.side, "R": res.R, "нарушение": res.violation})


def format_control_report(payload: Dict[str, Any]) -> str:
    return format_summary(
        f"reach control: сторона={payload['side']}, R={payload['R']:g}",
        {
            "N": payload["N"],
            "L1 ошибка": payload["l1_error"],
            "λ1": payload["lambda1"],
            "λ2": payload["lambda2"],
            "уровней": payload["plan"]["n_levels"],
            "кусков u0": payload["plan"]["u0_pieces"],
        },
    )
