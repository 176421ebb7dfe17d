#!/usr/bin/env python3
"""Generate problem files for the CLI: fixed examples plus a seeded batch of random Riemann problems"""
import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

# Get project root
PROJECT_ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(PROJECT_ROOT))

from config import get_config  # noqa: E402

CONFIGS_DIR = PROJECT_ROOT / "configs"

SQRT2 = math.sqrt(2.0)

# f = u²/2 справа, g = u² слева
QUAD = {"f": {"kind": "quadratic", "a": 0.5}, "g": {"kind": "quadratic", "a": 1.0}}

EXAMPLES = {
    "riemann_quad.json": {
        "name": "Riemann 1 | 0 for the quadratic pair",
        "fluxes": QUAD,
        "T": 1.0,
        "initial": {"riemann": {"left": 1.0, "right": 0.0}},
        "grid": {"x_min": -2.0, "x_max": 2.0, "nx": 401, "nt": 41},
        "oracle": {"dx": 0.002},
    },
    "backward_block.json": {
        "name": "Block of length 1 from rho(x) = -sqrt(2)(2 - x)",
        "fluxes": QUAD,
        "T": 1.0,
        "backward": {
            "R": 1.0,
            "rho": {"at0": -2.0 * SQRT2, "slope": SQRT2},
            "y": {"pieces": [{"lo": -2.0 * SQRT2, "hi": 0.0, "kind": "const", "value": -2.0 * SQRT2}]},
            "N": 8,
            "nx": 201,
            "refine": {"target_l1": 0.01, "n_max": 256},
        },
    },
    "optimize_generated.json": {
        "name": "Target generated by R = 1, rho = -sqrt(2)",
        "fluxes": QUAD,
        "T": 1.0,
        "target": {
            "C": 2.0,
            "k": {
                "from_triple": {
                    "R": 1.0,
                    "rho": {"breakpoints": [0.0], "values": [-SQRT2], "domain": [0.0, 1.0]},
                    "y": {"pieces": [{"lo": -SQRT2, "hi": 0.0, "kind": "const", "value": -SQRT2}]},
                }
            },
        },
        "disc": {"n_R": 17, "n_levels": 200, "max_refine": 2},
        "forward": True,
    },
    "reach_generated.json": {
        "name": "Reachable profile from a plus-side witness",
        "fluxes": QUAD,
        "T": 1.0,
        "reach": {
            "C1": -2.0,
            "C2": 3.0,
            "B1": -4.0,
            "B2": 4.0,
            "N": 32,
            "nx": 401,
            "target": {
                "witness": {
                    "side": "plus",
                    "R": 1.0,
                    "rho": {"at0": -2.0 * SQRT2, "slope": SQRT2},
                    "y": {
                        "pieces": [
                            {"lo": -3.0, "hi": 0.0, "kind": "const", "value": -3.0},
                            {"lo": 1.0, "hi": 3.0, "kind": "const", "value": 1.0},
                        ]
                    },
                }
            },
        },
    },
}


def random_riemann(rng: np.random.Generator, index: int) -> dict:
    """Случайная задача Римана для пары квадратичных потоков со случайными коэффициентами"""
    a_f, a_g = rng.uniform(0.25, 2.0, size=2)
    b_f, b_g = rng.uniform(-1.0, 1.0, size=2)
    c_f, c_g = rng.uniform(-0.5, 0.5, size=2)
    left, right = rng.uniform(-2.0, 2.0, size=2)
    return {
        "name": f"random Riemann #{index}",
        "fluxes": {
            "f": {"kind": "quadratic", "a": float(a_f), "b": float(b_f), "c": float(c_f)},
            "g": {"kind": "quadratic", "a": float(a_g), "b": float(b_g), "c": float(c_g)},
        },
        "T": 1.0,
        "initial": {"riemann": {"left": float(left), "right": float(right)}},
        "grid": {"x_min": -3.0, "x_max": 3.0, "nx": 241, "nt": 21},
        "oracle": {"dx": 0.005, "x_min": -4.0, "x_max": 4.0},
    }


def generate_test_data(count: int, seed: int, out_dir: Path = CONFIGS_DIR):
    """Пишет примеры и count случайных задач; одинаковый seed даёт одинаковые файлы"""
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, payload in EXAMPLES.items():
        (out_dir / name).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    rng = np.random.default_rng(seed)
    random_dir = out_dir / "random"
    random_dir.mkdir(exist_ok=True)
    for i in range(count):
        payload = random_riemann(rng, i)
        payload["seed"] = seed
        (random_dir / f"riemann_{i:03d}.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    print(f"✅ Test data generated successfully!")
    print(f"📊 {len(EXAMPLES)} examples and {count} random Riemann problems (seed={seed})")
    print(f"📁 Location: {out_dir}")


if __name__ == '__main__':
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=20)
    parser.add_argument("--seed", type=int, default=None, help="defaults to DFLUX_SEED")
    parser.add_argument("--out", type=Path, default=CONFIGS_DIR)
    args = parser.parse_args()
    seed = args.seed if args.seed is not None else get_config().solver.seed
    generate_test_data(args.count, seed % 2**64, args.out)
