"""Time the CGS construction on the bundled problems and tabulate the systems.

    python scripts/run_examples.py                 # all problems, merged
    python scripts/run_examples.py --no-merge      # raw branching segments
    python scripts/run_examples.py --repeat 3 --json timings.json
"""

import argparse
import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from geodisc.cgs import CGSConfig, compute_cgs, verify_system
from geodisc.gb import clear_cache
from geodisc.frontend.cli import load_problem

ROOT = Path(__file__).resolve().parent.parent
DEFAULT_PROBLEMS = [
    "toy_ax_xy.ideal",
    "toy_ax_b.ideal",
    "singular_conics.ideal",
    "tangent_circle.ideal",
    "aligned_points.ideal",
    "orthic_isosceles.ideal",
    "skaters.ideal",
]


@dataclass
class RunConfig:
    problems: list[str] = field(default_factory=lambda: list(DEFAULT_PROBLEMS))
    merge: bool = True
    repeat: int = 1
    verify: int = 0
    seed: int = 0


@dataclass
class RunResult:
    problem: str
    segments: int
    best_seconds: float
    lpps: list[list[str]]
    verify_failures: int | None = None


def run_one(name: str, cfg: RunConfig) -> RunResult:
    prob = load_problem(ROOT / "problems" / name)
    I = prob.H + prob.T if prob.T.generators else prob.H
    best = float("inf")
    for _ in range(cfg.repeat):
        clear_cache()
        t0 = time.perf_counter()
        gs = compute_cgs(I, prob.ring, prob.null, prob.nonnull, CGSConfig(merge=cfg.merge))
        best = min(best, time.perf_counter() - t0)
    failures = len(verify_system(gs, samples=cfg.verify, seed=cfg.seed)) if cfg.verify else None
    return RunResult(name, len(gs), best, [s.lpp_strings() for s in gs], failures)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("problems", nargs="*", help="file names under problems/")
    ap.add_argument("--no-merge", action="store_true")
    ap.add_argument("--repeat", type=int, default=1)
    ap.add_argument("--verify", type=int, default=0, help="sampled soundness checks per cell")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", metavar="OUT")
    args = ap.parse_args()
    cfg = RunConfig(merge=not args.no_merge, repeat=args.repeat, verify=args.verify, seed=args.seed)
    if args.problems:
        cfg.problems = args.problems

    results = [run_one(name, cfg) for name in cfg.problems]
    print(f"{'problem':<24} {'segments':>8} {'seconds':>9}  lpps")
    for r in results:
        lpps = " | ".join("[" + ", ".join(l) + "]" for l in r.lpps)
        extra = "" if r.verify_failures is None else f"  verify failures: {r.verify_failures}"
        print(f"{r.problem:<24} {r.segments:>8} {r.best_seconds:>9.3f}  {lpps}{extra}")
    if args.json:
        Path(args.json).write_text(json.dumps({"config": asdict(cfg), "results": [asdict(r) for r in results]}, indent=2))


if __name__ == "__main__":
    main()
