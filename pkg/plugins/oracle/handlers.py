"""Oracle plugin handlers"""
import logging

import numpy as np

from services.io_service import write_frame, write_json
from services.problem_loader import load_problem
from solvers import godunov, hj_forward
from utils.file_utils import effective_seed, output_dir, resolve_problem_path
from .formatters import format_oracle_report

logger = logging.getLogger(__name__)


class OracleHandlers:
    """Handlers for oracle plugin"""

    def __init__(self, plugin):
        self.plugin = plugin
        self.logger = logging.getLogger(__name__)

    def configure(self, parser, common):
        parser.add_argument("--dx", type=float, help="cell width (overrides oracle.dx)")
        parser.add_argument(
            "--compare",
            action="store_true",
            help="also run the explicit solver on the problem grid and report the L1 distance",
        )

    def handle_oracle(self, args):
        """oracle: godunov.run; profile.csv и report.json"""
        cfg = self.plugin.config
        problem = load_problem(resolve_problem_path(args.config, cfg))
        seed = effective_seed(args.seed, problem.seed, cfg)
        params = problem.oracle_params()
        dx = args.dx or params["dx"]
        cfl = params["cfl"] if params["cfl"] is not None else cfg.solver.cfl
        u0 = problem.initial_data()

        prof = godunov.run(u0, problem.pair, problem.T, dx, cfl=cfl, x_min=params["x_min"], x_max=params["x_max"])
        minus, plus = (float(v) for v in prof.u_at(np.array([-0.5 * dx, 0.5 * dx])))
        rh = abs(float(problem.pair.f(plus)) - float(problem.pair.g(minus)))

        payload = {
            "command": "oracle",
            "seed": seed,
            "T": problem.T,
            "dx": dx,
            "cfl": cfl,
            "steps": prof.steps,
            "trace_minus": minus,
            "trace_plus": plus,
            "rh_residual": rh,
        }
        if args.compare:
            grid = problem.grid()
            sol = hj_forward.solve_profile(
                u0,
                problem.pair,
                problem.T,
                grid,
                hj_forward.SearchParams(tie_tol=cfg.solver.tie_tol),
                executor=self.plugin.executor,
            )
            payload["l1_vs_forward"] = hj_forward.l1_distance(sol.x_grid, sol.u, prof.u_at(sol.x_grid))
            self.logger.info(f"oracle: L1 до явного решения {payload['l1_vs_forward']:.3e}")

        out = output_dir(cfg, "oracle")
        write_frame(prof.to_frame(), out / "profile.csv")
        write_json(payload, out / "report.json")
        self.logger.info(f"oracle: результаты записаны в {out}")
        print(format_oracle_report(payload))
