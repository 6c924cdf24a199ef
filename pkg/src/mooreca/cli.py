"""Command-line interface: ``mooreca matrix | analyze | run``."""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

import numpy as np

from . import debugprint
from ._version import __version__
from .config import JobConfig
from .config import ValidatedJob
from .dynamics import fixed_points
from .dynamics import goe_census
from .dynamics import is_nilpotent
from .dynamics import reversibility
from .dynamics import step_backward
from .errors import CAError
from .errors import CAErrorCode
from .grid import Configuration
from .io import dumps_json
from .io import read_grid
from .io import write_grid
from .io import write_json
from .io import write_matrix
from .io import write_pgm
from .rulematrix import RuleMatrix
from .rulematrix import build_from_resolver
from .rulematrix import build_theorem_matrix
from .rulematrix import cross_check
from .stepper import step


def _rule_matrix(job: ValidatedJob, builder: str | None = None) -> RuleMatrix:
    builder = builder or job.config.builder
    if builder == "theorem" and job.boundary.is_named:
        return build_theorem_matrix(job.boundary.name, job.dims, job.coeffs)
    return build_from_resolver(job.boundary, job.dims, job.coeffs)


def _header(job: ValidatedJob, T: RuleMatrix) -> dict[str, Any]:
    return {
        "p": job.field.p,
        "m": job.dims.m,
        "n": job.dims.n,
        "spec": job.boundary.name,
        "coeffs": job.coeffs.to_dict(),
        "builder": T.builder,
        "boundary": job.boundary.to_dict(),
    }


def cmd_matrix(job: ValidatedJob) -> list[Path]:
    """Write the rule matrix as ``matrix.csv`` plus ``matrix.json``.

    With ``check`` set, the closed-form and resolver builders are compared
    first and any differing entry aborts with ``BuilderMismatch``.
    """
    cfg = job.config
    if cfg.check:
        if not job.boundary.is_named:
            debugprint.debug("matrix: --check skipped, custom specs have no closed form")
        else:
            diffs = cross_check(job.boundary.name, job.dims, job.coeffs)
            if diffs:
                for row, col, got, want in diffs:
                    print(
                        f"mismatch at ({row}, {col}): theorem={got} resolver={want}",
                        file=sys.stderr,
                    )
                raise CAError(
                    CAErrorCode.BUILDER_MISMATCH,
                    f"{len(diffs)} entries differ between builders for {job.boundary.name}",
                    {"mismatches": [list(d) for d in diffs]},
                )
    T = _rule_matrix(job)
    out = cfg.out or Path(".")
    return write_matrix(out / "matrix.csv", out / "matrix.json", T, _header(job, T))


def cmd_analyze(job: ValidatedJob) -> dict[str, Any]:
    """Reversibility, nilpotency, fixed points and GOE count of the rule."""
    T = _rule_matrix(job)
    rev = reversibility(T, job.coeffs, compute_inverse=False)
    nil = is_nilpotent(T)
    fix = fixed_points(T)
    goe = goe_census(T, rev.rank)
    report: dict[str, Any] = {
        "p": job.field.p,
        "m": job.dims.m,
        "n": job.dims.n,
        "spec": job.boundary.name,
        "coeffs": job.coeffs.to_dict(),
        "rank": rev.rank,
        "full_rank": rev.full_rank,
        "method": rev.method.value,
        "nilpotent": nil.nilpotent,
        "nilpotency_index": nil.index,
        "fixed_point_dimension": fix.dimension,
        "goe_count": str(goe.goe_count),
    }
    if job.config.out is not None:
        write_json(job.config.out / "report.json", report)
    return report


def _initial(job: ValidatedJob) -> Configuration:
    cfg = job.config
    if cfg.initial is None:
        return Configuration.random(job.field, job.dims, np.random.default_rng(cfg.seed))
    c = read_grid(cfg.initial)
    if c.field != job.field:
        raise CAError(
            CAErrorCode.FIELD_MISMATCH,
            f"initial frame is over {c.field}, job is over {job.field}",
        )
    if c.dims != job.dims:
        raise CAError(
            CAErrorCode.DIMENSION_MISMATCH,
            f"initial frame is {c.dims}, job is {job.dims}",
        )
    return c


def cmd_run(job: ValidatedJob) -> list[Path]:
    """Evolve the initial frame ``steps`` times, writing every frame.

    Frames go to ``frame_0000.txt`` onwards (plus ``.pgm`` images when
    requested). Backward runs apply the inverse rule matrix.
    """
    cfg = job.config
    out = cfg.out or Path(".")
    state = _initial(job)
    report = None
    if cfg.backward:
        report = reversibility(_rule_matrix(job), job.coeffs)
        if not report.inverse_available:
            raise CAError(
                CAErrorCode.NOT_REVERSIBLE,
                f"rule matrix has rank {report.rank} < {report.size}, no backward run",
                {"rank": report.rank, "size": report.size},
            )
    written: list[Path] = []
    for t in range(cfg.steps + 1):
        if t:
            if report is not None:
                state = step_backward(state, report)
            else:
                state = step(state, job.coeffs, job.boundary)
        written.append(write_grid(out / f"frame_{t:04d}.txt", state))
        if cfg.pgm:
            written.append(write_pgm(out / f"frame_{t:04d}.pgm", state))
    return written


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON file of job settings")
    common.add_argument("--p", type=int, help="prime modulus")
    common.add_argument("--m", type=int, help="lattice rows")
    common.add_argument("--n", type=int, help="lattice columns")
    common.add_argument("--coeffs", help="rule weights a,b,c,d,e,f,g,h")
    common.add_argument("--spec", help="boundary spec: nb pb ab rb phi psi tau sigma lambda xi phi90 phi180 phi270")
    common.add_argument("--sides", help="custom boundary top,bottom,left,right (overrides --spec)")
    common.add_argument("--builder", choices=["resolver", "theorem"], help="matrix builder")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--seed", type=int, help="seed for random initial frames")
    common.add_argument("--verbose", action="store_true", default=None, help="debug output on stderr")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mooreca",
        description="Linear cellular automata over Z_p with mixed boundary conditions.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common_flags()

    matrix = sub.add_parser("matrix", parents=[common], help="export the rule matrix")
    matrix.add_argument(
        "--check", action="store_true", default=None, help="compare closed form with resolver"
    )

    sub.add_parser("analyze", parents=[common], help="rank, nilpotency, fixed points, GOE count")

    run = sub.add_parser("run", parents=[common], help="evolve a configuration")
    run.add_argument("--initial", type=Path, help="initial frame in grid text format")
    run.add_argument("--steps", type=int, help="number of steps")
    run.add_argument("--backward", action="store_true", default=None, help="apply the inverse rule")
    run.add_argument("--pgm", action="store_true", default=None, help="also write PGM images")
    return parser


_FLAG_KEYS = (
    "p", "m", "n", "coeffs", "spec", "sides", "builder", "out", "seed",
    "verbose", "check", "initial", "steps", "backward", "pgm",
)


def load_config(args: argparse.Namespace) -> JobConfig:
    base = JobConfig.load(args.config) if args.config is not None else JobConfig()
    return base.merged({key: getattr(args, key, None) for key in _FLAG_KEYS})


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args)
        if config.verbose:
            debugprint.enable()
        job = config.validate()
        if args.command == "matrix":
            for path in cmd_matrix(job):
                print(path)
        elif args.command == "analyze":
            sys.stdout.write(dumps_json(cmd_analyze(job)))
        else:
            for path in cmd_run(job):
                print(path)
    except CAError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
