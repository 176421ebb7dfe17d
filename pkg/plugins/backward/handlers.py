"""Backward plugin handlers"""
import logging

from services.io_service import stepfn_frame, write_frame, write_json, write_stepfn
from services.problem_loader import load_problem
from solvers import backward
from utils.file_utils import effective_seed, output_dir, resolve_problem_path
from .formatters import format_backward_report

logger = logging.getLogger(__name__)


class BackwardHandlers:
    """Handlers for backward plugin"""

    def __init__(self, plugin):
        self.plugin = plugin
        self.logger = logging.getLogger(__name__)

    def configure(self, parser, common):
        parser.add_argument("--N", type=int, dest="levels", help="level resolution (overrides backward.N)")
        parser.add_argument(
            "--target-l1",
            type=float,
            dest="target_l1",
            help="refine by doubling N until the round-trip L1 error is below this value",
        )

    def handle_backward(self, args):
        """backward: construct или refine; u0.json, u0_pieces.csv, tmap.csv, roundtrip.json"""
        cfg = self.plugin.config
        problem = load_problem(resolve_problem_path(args.config, cfg))
        seed = effective_seed(args.seed, problem.seed, cfg)
        spec = problem.backward_spec()
        params = problem.backward_params()
        N = args.levels or params["N"]
        target_l1 = args.target_l1 or params["target_l1"]

        if target_l1 is not None:
            plan = backward.refine(
                spec, problem.pair, target_l1, N0=N, n_max=params["n_max"], nx=params["nx"], executor=self.plugin.executor
            )
            l1 = plan.history[-1][1]
        else:
            plan = backward.construct(spec, problem.pair, N, executor=self.plugin.executor)
            l1 = backward.round_trip_error(plan, nx=params["nx"])

        bv_ok = plan.total_variation() <= plan.bv_bound() * (1.0 + 1e-9) + 1e-12
        if not bv_ok:
            self.logger.warning(f"Оценка BV нарушена: TV={plan.total_variation():.6g} > {plan.bv_bound():.6g}")

        out = output_dir(cfg, "backward")
        write_stepfn(plan.u0, out / "u0.json")
        write_frame(stepfn_frame(plan.u0), out / "u0_pieces.csv")
        write_frame(plan.tmap_frame(), out / "tmap.csv")
        payload = {
            "command": "backward",
            "seed": seed,
            "N": N,
            "l1": l1,
            "bv_ok": bv_ok,
            "tmap_decreasing": plan.tmap_decreasing(),
            **plan.summary(),
        }
        write_json(payload, out / "roundtrip.json")
        self.logger.info(f"backward: результаты записаны в {out}")
        print(format_backward_report(payload))
