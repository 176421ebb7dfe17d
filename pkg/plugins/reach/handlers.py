"""Reach plugin handlers"""
import logging

import numpy as np
import pandas as pd

from services.io_service import write_frame, write_json, write_stepfn
from services.problem_loader import load_problem
from solvers import reachable
from utils.file_utils import effective_seed, output_dir, resolve_problem_path
from .formatters import format_control_report, format_membership_report

logger = logging.getLogger(__name__)


class ReachHandlers:
    """Handlers for reach plugin"""

    def __init__(self, plugin):
        self.plugin = plugin
        self.logger = logging.getLogger(__name__)

    def configure(self, parser, common):
        sub = parser.add_subparsers(dest="reach_cmd", metavar="{check,control}")
        sub.required = True
        sub.add_parser("check", help="decide whether the target profile is reachable at T", parents=[common])
        ctl = sub.add_parser(
            "control", help="initial data reaching the target while keeping the exterior data", parents=[common]
        )
        ctl.add_argument("--N", type=int, dest="levels", help="level resolution (overrides reach.N)")

    def handle_reach(self, args):
        if args.reach_cmd == "check":
            return self.handle_check(args)
        return self.handle_control(args)

    def _load(self, args):
        cfg = self.plugin.config
        problem = load_problem(resolve_problem_path(args.config, cfg))
        return cfg, problem, effective_seed(args.seed, problem.seed, cfg)

    def handle_check(self, args):
        """reach check: membership.json и, для достижимой цели, witness.csv"""
        cfg, problem, seed = self._load(args)
        spec = problem.reach_spec()
        target = problem.reach_target()
        params = problem.reach_params()

        res = reachable.membership(
            target.W, spec, problem.pair, grid=params["grid"], side=target.side, executor=self.plugin.executor
        )

        out = output_dir(cfg, "reach check")
        write_json({"command": "reach check", "seed": seed, **res.to_dict()}, out / "membership.json")
        if res.member and res.witness is not None and res.witness.x_block.size:
            w = res.witness
            write_frame(pd.DataFrame({"x": w.x_block, "t": w.t, "rho": w.rho}), out / "witness.csv")
        self.logger.info(f"reach check: результаты записаны в {out}")
        print(format_membership_report(res))

    def handle_control(self, args):
        """reach control: u0.json, profile.csv (u и цель W) и report.json"""
        cfg, problem, seed = self._load(args)
        spec = problem.reach_spec()
        target = problem.reach_target()
        params = problem.reach_params()
        N = args.levels or params["N"]

        result = reachable.exact_control(
            target, spec, problem.pair, N=N, grid=params["grid"], nx=params["nx"], executor=self.plugin.executor
        )

        out = output_dir(cfg, "reach control")
        write_stepfn(result.u0, out / "u0.json")
        x = result.sol.x_grid
        frame = pd.DataFrame({"x": x, "u": result.sol.u, "W": np.asarray(target.W(x), dtype=float)})
        write_frame(frame, out / "profile.csv")
        payload = {"command": "reach control", "seed": seed, "N": N, **result.report()}
        write_json(payload, out / "report.json")
        self.logger.info(f"reach control: результаты записаны в {out}")
        print(format_control_report(payload))
