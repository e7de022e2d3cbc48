"""Command-line entry point: ``rlga {optimize,evaluate,bench,field,cases}``."""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .agent import write_qtable
from .bench import bench
from .cases import CASES, SCENARIO_LABELS, get_case
from .evaluation import evaluate
from .io import ConvergenceWriter, fmt6, load_config, read_layout, write_field, write_layout, write_manifest
from .layouts import KINDS, CandidateLayout
from .optimizer import RunConfig, run
from .wake import GridSpec, velocity_field
from .wind import SCENARIOS, scenario_spread


def _resolve_config(args, overrides: dict) -> RunConfig:
    """Defaults < config file < command-line flags."""
    values = {}
    if getattr(args, "config", None):
        values.update(load_config(args.config))
    values.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**values)


def _scenario_for(case: str, rose: str | None):
    letter = get_case(case).scenario
    if letter == "C" and rose:
        return scenario_spread(rose)
    return SCENARIOS[letter]()


def _load_turbines(path, case_name: str):
    _, pos = read_layout(path)
    c = get_case(case_name)
    if len(pos):
        inside = (pos >= 0).all(axis=1) & (pos[:, 0] <= c.extent[0]) & (pos[:, 1] <= c.extent[1])
        if not inside.all():
            bad = pos[~inside][0]
            raise ValueError(f"turbine at ({bad[0]:g}, {bad[1]:g}) lies outside the {c.extent[0]:g} x {c.extent[1]:g} m farm")
    return c, pos


def cmd_optimize(args) -> int:
    config = _resolve_config(
        args,
        dict(
            case=args.case,
            layout=args.layout,
            algorithm=args.algo,
            seed=args.seed,
            generations=args.generations,
            layout_seed=args.layout_seed,
            rose=args.rose,
        ),
    )
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = out / "manifest.txt"
    if manifest.exists():
        manifest.unlink()
    with ConvergenceWriter(out / "convergence.csv", config.algorithm == "rlga") as writer:
        res = run(config, on_record=writer)
    layout = res.layout
    write_layout(out / "candidates.csv", layout.positions)
    active = np.flatnonzero(res.best_genome)
    write_layout(out / "best_layout.csv", layout.positions[active], indices=active)
    if res.qtable is not None:
        write_qtable(out / "qtable.csv", res.qtable, res.action_space)
    final = evaluate(res.best_genome, layout, res.scenario)
    write_manifest(
        manifest,
        config,
        {
            "version": __version__,
            "layout_kind": layout.kind,
            "extent_m": f"{layout.extent[0]:g}x{layout.extent[1]:g}",
            "layout_spacing": f"{layout.spacing:g}",
            "candidates": len(layout),
        },
    )
    _print_result(final)
    return 0


def _print_result(res):
    print(f"N        {res.n_turbines}")
    print(f"P_total  {res.total_power:.6g} kW")
    print(f"f_obj    {res.objective!r}")
    print(f"F        {res.fitness!r}")
    print(f"eta      {res.efficiency:.6g}")


def cmd_evaluate(args) -> int:
    case, pos = _load_turbines(args.layout_csv, args.case)
    if len(pos) == 0:
        raise ValueError("layout has no turbines; the objective is undefined at zero power")
    layout = CandidateLayout("aligned", case.extent, 0.0, pos)
    res = evaluate(np.ones(len(pos), dtype=bool), layout, _scenario_for(case.name, args.rose))
    _print_result(res)
    if args.out:
        lines = [f"{f.name} = {getattr(res, f.name)!r}" for f in dataclasses.fields(res)]
        Path(args.out).write_text("\n".join(lines) + "\n")
    return 0


def cmd_field(args) -> int:
    case, pos = _load_turbines(args.layout_csv, args.case)
    if args.resolution < 2:
        raise ValueError("resolution must be at least 2 cells per axis")
    scenario = _scenario_for(case.name, args.rose)
    direction = scenario.bins[0].direction if args.direction is None else args.direction
    speed = args.speed
    if speed is None:
        speeds = [b.speed for b in scenario.bins if b.direction == direction]
        speed = speeds[0] if speeds else scenario.bins[0].speed
    cell = case.extent[0] / args.resolution
    ny = max(2, int(round(case.extent[1] / cell)))
    grid = GridSpec((0.0, 0.0), cell, args.resolution, ny)
    write_field(args.out, velocity_field(pos, direction, speed, grid))
    print(f"wrote {args.resolution * ny} cells to {args.out} (direction {direction:g} deg, {speed:g} m/s)")
    return 0


def cmd_bench(args) -> int:
    base = _resolve_config(args, dict(case=args.case, layout=args.layout, generations=args.budget, layout_seed=args.layout_seed))
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    seeds = range(args.seed_start, args.seed_start + args.seeds)
    summary = bench(base, seeds, out_dir=out, target=args.target, jobs=args.jobs)
    write_manifest(out / "manifest.txt", base, {"version": __version__, "seeds": f"{args.seed_start}..{args.seed_start + args.seeds - 1}"})
    print(f"target fitness          {summary.target!r}")
    for algo in ("ga", "rlga"):
        print(f"{algo:5s} median gens-to-target {summary.median_gens(algo):g}")
    print(f"rlga/ga ratio           {summary.ratio():.3f}")
    return 0


def cmd_cases(args) -> int:
    print("case   farm (m)      spacing   wind")
    for c in CASES.values():
        print(f"{c.name:6s} {c.extent[0]:g}x{c.extent[1]:<8g} {c.spacing_diameters:g}D ({c.spacing:g} m)  {SCENARIO_LABELS[c.scenario]}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rlga", description="Wind-farm layout optimisation with GA and Q-learning-driven GA.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    o = sub.add_parser("optimize", help="run GA or RLGA on a case")
    o.add_argument("--config", help="key = value config file (a previous manifest works)")
    o.add_argument("--case")
    o.add_argument("--layout", choices=KINDS)
    o.add_argument("--algo", choices=("ga", "rlga"))
    o.add_argument("--seed", type=int)
    o.add_argument("--generations", type=int)
    o.add_argument("--layout-seed", type=int)
    o.add_argument("--rose", help="spread-rose CSV for C cases")
    o.add_argument("--out-dir", required=True)
    o.set_defaults(func=cmd_optimize)

    e = sub.add_parser("evaluate", help="evaluate a layout CSV")
    e.add_argument("layout_csv")
    e.add_argument("--case", required=True)
    e.add_argument("--rose")
    e.add_argument("--out", help="write the report as key = value text")
    e.set_defaults(func=cmd_evaluate)

    b = sub.add_parser("bench", help="paired-seed GA vs RLGA comparison")
    b.add_argument("--config")
    b.add_argument("--case", required=True)
    b.add_argument("--layout", choices=KINDS, default="aligned")
    b.add_argument("--seeds", type=int, default=11)
    b.add_argument("--seed-start", type=int, default=0)
    b.add_argument("--budget", type=int, default=3000, help="generations per run")
    b.add_argument("--target", type=float, help="fitness target (default: median final GA fitness)")
    b.add_argument("--layout-seed", type=int)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--out-dir", required=True)
    b.set_defaults(func=cmd_bench)

    f = sub.add_parser("field", help="velocity field of a layout as x,y,u CSV")
    f.add_argument("layout_csv")
    f.add_argument("--case", required=True)
    f.add_argument("--direction", type=float)
    f.add_argument("--speed", type=float)
    f.add_argument("--resolution", type=int, default=100)
    f.add_argument("--rose")
    f.add_argument("--out", required=True)
    f.set_defaults(func=cmd_field)

    c = sub.add_parser("cases", help="list the named cases")
    c.set_defaults(func=cmd_cases)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"rlga {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
