"""``qcorr`` command line: compute, sweep, random, fixture."""
from __future__ import annotations

import argparse
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _accel
from . import entanglement as ent
from . import nonorthogonality as nonorth
from .discord import discord_a
from .errors import InvalidStateError, QCorrError, UnsupportedDimsError
from .measures import (
    JOINT,
    MEASURES,
    SEQUENTIAL,
    MeasureConfig,
    MeasureReport,
    classify,
)
from .optimize import OptimizerConfig
from .random_states import random_density, random_pure, random_strictly_classical
from .states import (
    GHZ3,
    bell_state,
    load_state,
    make_paper_family,
    save_state,
    state_to_json,
    validate,
)

EXIT_OK = 0
EXIT_INVALID_STATE = 2
EXIT_UNSUPPORTED = 3

ALIASES = {
    "q": "q_total", "qqc": "q_qc", "qcq": "q_cq", "qs": "q_s", "qs2": "q_s2",
    "qmp": "q_mp", "qsmp": "q_smp", "discord": "discord_a",
}
MEASURE_NAMES = list(MEASURES) + ["discord_a", "classify"]
SWEEP_COLUMNS = ["q_total", "q_qc", "q_cq", "q_s", "q_s2", "discord_a"]


def canonical_measure(name: str) -> str:
    name = ALIASES.get(name, name)
    if name not in MEASURE_NAMES:
        raise argparse.ArgumentTypeError(
            f"unknown measure {name!r}; choose from {', '.join(MEASURE_NAMES + list(ALIASES))}")
    return name


def config_from_args(args) -> MeasureConfig:
    return MeasureConfig(
        entanglement={"concurrence": ent.CONCURRENCE, "entropy": ent.ENTROPY}[args.e],
        nonorthogonality={"fidelity": nonorth.FIDELITY, "entropy": nonorth.ENTROPY}[args.f],
        pairs={"unordered": nonorth.UNORDERED, "ordered": nonorth.ORDERED}[args.pairs],
        mode=args.mode,
        optimizer=OptimizerConfig(multistart=args.multistart, seed=args.seed),
    )


def evaluate(name: str, rho, cfg: MeasureConfig):
    """Value and JSON-ready payload of one measure."""
    if name == "discord_a":
        v = discord_a(rho)
        return v, {"measure": name, "value": v}
    if name == "classify":
        c = classify(rho, cfg)
        return c.kind, {"measure": name, **c.to_dict()}
    out = MEASURES[name](rho, cfg)
    if isinstance(out, MeasureReport):
        return out.value, out.to_dict()
    return float(out), {"measure": name, "value": float(out)}


# --------------------------------------------------------------------------- #
# Subcommands                                                                 #
# --------------------------------------------------------------------------- #

def cmd_compute(args) -> int:
    try:
        rho = load_state(args.input)
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_INVALID_STATE
    except InvalidStateError as exc:
        print(f"error: invalid state: {exc}", file=sys.stderr)
        return EXIT_INVALID_STATE
    cfg = config_from_args(args)
    try:
        _, payload = evaluate(args.measure, rho, cfg)
    except UnsupportedDimsError as exc:
        print(f"error: unsupported dims: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    if args.measure not in ("discord_a", "classify"):
        payload["config"] = cfg.to_dict()
        if not args.decomposition:
            payload.pop("decomposition_used", None)
    print(json.dumps(payload, indent=2))
    return EXIT_OK


def sweep_rows(start: float, stop: float, steps: int, measures, cfg: MeasureConfig,
               jobs: int = 1) -> list[str]:
    grid = np.linspace(start, stop, steps)

    def row(a):
        rho = make_paper_family(float(a))
        vals = [evaluate(m, rho, cfg)[0] for m in measures]
        return ",".join(f"{x:.9f}" for x in [a, *vals])

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(row, grid))
    return [row(a) for a in grid]


def cmd_sweep(args) -> int:
    if not (0.0 <= args.start <= args.stop <= 1.0) or args.steps < 2:
        print("error: need 0 <= from <= to <= 1 and steps >= 2", file=sys.stderr)
        return EXIT_INVALID_STATE
    measures = [m for m in SWEEP_COLUMNS if m in args.measures]
    unknown = set(args.measures) - set(SWEEP_COLUMNS)
    if unknown:
        print(f"error: unknown sweep columns {sorted(unknown)}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    cfg = config_from_args(args)
    rows = sweep_rows(args.start, args.stop, args.steps, measures, cfg, args.jobs)
    text = "\n".join([",".join(["a", *measures]), *rows]) + "\n"
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w", newline="\n") as fh:
            fh.write(text)
    return EXIT_OK


SAMPLERS = ("mixed", "pure", "classical")


def parse_dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(x) for x in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"dims must look like 2x2, got {text!r}")
    if len(dims) < 2 or any(d < 2 for d in dims):
        raise argparse.ArgumentTypeError(f"dims must list at least two subsystems, got {text!r}")
    return dims


def random_summary(count: int, dims, seed: int, measure: str, sampler: str,
                   cfg: MeasureConfig) -> str:
    rng = np.random.default_rng(seed)
    values, nonneg, reduction, classical = [], 0, 0, 0
    for _ in range(count):
        if sampler == "pure":
            rho = random_pure(dims, rng)
        elif sampler == "classical":
            rho = random_strictly_classical(dims, rng)
        else:
            rho = random_density(dims, rng)
        v, _ = evaluate(measure, rho, cfg)
        values.append(v)
        if v < -1e-9:
            nonneg += 1
        if sampler == "pure" and measure in ("q_total", "q_qc", "q_cq", "q_mp") and dims == (2, 2):
            if abs(v - ent.concurrence_mixed(rho)) > 1e-6:
                reduction += 1
        if sampler == "classical" and v > 1e-6:
            classical += 1
    vals = np.asarray(values, dtype=float)
    buf = io.StringIO()
    buf.write(f"measure   {measure}\n")
    buf.write(f"sampler   {sampler}\n")
    buf.write(f"dims      {'x'.join(map(str, dims))}\n")
    buf.write(f"count     {count}\n")
    buf.write(f"seed      {seed}\n")
    buf.write(f"min       {vals.min():.9f}\n")
    buf.write(f"mean      {vals.mean():.9f}\n")
    buf.write(f"max       {vals.max():.9f}\n")
    buf.write(f"violations nonnegativity={nonneg}")
    if sampler == "pure":
        buf.write(f" pure_reduction={reduction}")
    if sampler == "classical":
        buf.write(f" classical_zero={classical}")
    buf.write("\n")
    return buf.getvalue()


def cmd_random(args) -> int:
    if args.measure == "classify":
        print("error: random summaries need a numeric measure", file=sys.stderr)
        return EXIT_UNSUPPORTED
    try:
        text = random_summary(args.count, args.dims, args.seed, args.measure, args.sampler,
                              config_from_args(args))
    except UnsupportedDimsError as exc:
        print(f"error: unsupported dims: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    sys.stdout.write(text)
    return EXIT_OK


def cmd_fixture(args) -> int:
    if args.name == "paper-a":
        try:
            rho = make_paper_family(args.a)
        except QCorrError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INVALID_STATE
    elif args.name == "bell":
        rho = bell_state()
    elif args.name == "ghz3":
        rho = validate(np.outer(GHZ3, GHZ3.conj()), (2, 2, 2))
    else:
        rho = validate(np.eye(4) / 4, (2, 2))
    if args.output in (None, "-"):
        sys.stdout.write(state_to_json(rho))
    else:
        save_state(rho, args.output)
    return EXIT_OK


# --------------------------------------------------------------------------- #
# Parser                                                                      #
# --------------------------------------------------------------------------- #

def _add_config_flags(p):
    p.add_argument("--mode", choices=[SEQUENTIAL, JOINT], default=SEQUENTIAL,
                   help="order of the degenerate-block minimizations")
    p.add_argument("--pairs", choices=["unordered", "ordered"], default="unordered")
    p.add_argument("--f", choices=["fidelity", "entropy"], default="fidelity",
                   help="non-orthogonality functional")
    p.add_argument("--e", choices=["concurrence", "entropy"], default="concurrence",
                   help="entanglement functional")
    p.add_argument("--seed", type=int, default=OptimizerConfig.seed)
    p.add_argument("--multistart", type=int, default=OptimizerConfig.multistart)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcorr", description=__doc__)
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s 0.1.0 ({_accel.backend()} kernels)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="evaluate one measure on a state file")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--measure", "-m", type=canonical_measure, default="q_total")
    p.add_argument("--no-decomposition", dest="decomposition", action="store_false",
                   help="omit the eigendecomposition from the report")
    _add_config_flags(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("sweep", help="tabulate measures over the a-family as CSV")
    p.add_argument("--family", choices=["paper-a"], default="paper-a")
    p.add_argument("--from", dest="start", type=float, default=0.0)
    p.add_argument("--to", dest="stop", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--measures", type=lambda s: [canonical_measure(x) for x in s.split(",")],
                   default=list(SWEEP_COLUMNS))
    p.add_argument("--output", "-o", default=None)
    p.add_argument("--jobs", type=int, default=1)
    _add_config_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("random", help="summary statistics over seeded random states")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--dims", type=parse_dims, default=(2, 2))
    p.add_argument("--measure", "-m", type=canonical_measure, default="q_total")
    p.add_argument("--sampler", choices=SAMPLERS, default="mixed")
    _add_config_flags(p)
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("fixture", help="write a fixture state file")
    p.add_argument("name", choices=["paper-a", "bell", "ghz3", "maximally-mixed"])
    p.add_argument("--a", type=float, default=0.5)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_fixture)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
