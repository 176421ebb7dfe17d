"""Text reports for the forward command"""
import pandas as pd

from solvers.hj_forward import InterfaceReport, SolutionField
from utils.text_formatters import format_summary, format_table


def format_forward_report(sol: SolutionField, report: InterfaceReport, tmap_violations: int) -> str:
    summary = format_summary(
        f"forward: T={sol.T:g}, точек={sol.x_grid.size}",
        {
            "R1(T)": sol.R1_T,
            "L1(T)": sol.L1_T,
            "мера нарушений RH": report.rh_violation_measure,
            "мера нарушений энтропии": report.entropy_violation_measure,
            "dt": report.dt,
            "нарушений монотонности t±": tmap_violations,
        },
    )
    traces = pd.DataFrame(
        {"t": sol.t_grid, "u(0-,t)": sol.trace_minus, "u(0+,t)": sol.trace_plus, "R1": sol.R1, "L1": sol.L1}
    )
    return f"{summary}\n{format_table(traces, max_rows=10)}"
