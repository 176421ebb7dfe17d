"""Optimize plugin handlers"""
import logging

import pandas as pd

from services.io_service import write_frame, write_json, write_stepfn
from services.problem_loader import load_problem
from solvers import control
from utils.file_utils import effective_seed, output_dir, resolve_problem_path
from .formatters import format_optimize_report

logger = logging.getLogger(__name__)


class OptimizeHandlers:
    """Handlers for optimize plugin"""

    def __init__(self, plugin):
        self.plugin = plugin
        self.logger = logging.getLogger(__name__)

    def configure(self, parser, common):
        parser.add_argument(
            "--no-forward",
            action="store_true",
            help="skip the forward solve of u0* (J is then not reported)",
        )

    def handle_optimize(self, args):
        """optimize: control.minimize; triple.json, u0.json, candidates.csv, cost.json"""
        cfg = self.plugin.config
        problem = load_problem(resolve_problem_path(args.config, cfg))
        seed = effective_seed(args.seed, problem.seed, cfg)
        target = problem.target()
        disc = problem.disc()
        forward = problem.forward_after_optimize() and not args.no_forward

        result = control.minimize(target, problem.T, problem.pair, disc, executor=self.plugin.executor, forward=forward)

        out = output_dir(cfg, "optimize")
        write_json(result.triple.to_dict(), out / "triple.json")
        write_stepfn(result.u0, out / "u0.json")
        write_frame(pd.DataFrame(list(result.candidates), columns=["R", "Jtilde"]), out / "candidates.csv")
        payload = {"command": "optimize", "seed": seed, "T": problem.T, "C": target.C, **result.report()}
        write_json(payload, out / "cost.json")
        self.logger.info(f"optimize: результаты записаны в {out}")
        print(format_optimize_report(payload))
