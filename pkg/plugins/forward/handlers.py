"""Forward plugin handlers"""
import logging

from services.io_service import write_frame, write_json
from services.problem_loader import load_problem
from solvers import hj_forward
from utils.file_utils import effective_seed, output_dir, resolve_problem_path
from .formatters import format_forward_report

logger = logging.getLogger(__name__)


class ForwardHandlers:
    """Handlers for forward plugin"""

    def __init__(self, plugin):
        self.plugin = plugin
        self.logger = logging.getLogger(__name__)

    def configure(self, parser, common):
        parser.add_argument("--nt", type=int, help="number of interface sample times (overrides grid.nt)")

    def handle_forward(self, args):
        """forward: solve_profile + check_interface; profile.csv и interface.json"""
        cfg = self.plugin.config
        problem = load_problem(resolve_problem_path(args.config, cfg))
        seed = effective_seed(args.seed, problem.seed, cfg)
        grid = problem.grid()
        if args.nt:
            grid = hj_forward.GridSpec(grid.x_min, grid.x_max, grid.nx, nt=args.nt)
        search = hj_forward.SearchParams(tie_tol=cfg.solver.tie_tol)

        sol = hj_forward.solve_profile(
            problem.initial_data(), problem.pair, problem.T, grid, search, executor=self.plugin.executor
        )
        report = hj_forward.check_interface(sol, tol=cfg.solver.interface_tol)
        violations = hj_forward.tmap_monotonicity_violations(sol)
        if violations:
            self.logger.warning(f"t-отображение не монотонно в {violations} точках")

        out = output_dir(cfg, "forward")
        write_frame(sol.to_frame(), out / "profile.csv")
        payload = {
            "command": "forward",
            "seed": seed,
            "interface": report.to_dict(),
            "tmap_violations": violations,
            **sol.sidecar(),
        }
        write_json(payload, out / "interface.json")
        self.logger.info(f"forward: результаты записаны в {out}")
        print(format_forward_report(sol, report, violations))
