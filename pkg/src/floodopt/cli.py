"""``floodopt`` command line.

Exit codes: 0 success, 2 configuration or validation error, 3 runtime failure.
Primary output files depend only on (config, seed); wall-clock timings go to a
``*.meta.json`` sidecar so repeated runs produce byte-identical primaries.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .config import ConfigError, RunConfig, parse_config
from .ga import ParamsError, run_ga
from .model import CityDesign, ModelError
from .objective import ObjectiveError, breakdown
from .oracle import exact_optimum
from .report import (compare_runs, floodplain_report, render_comparison,
                     render_floodplain_report, render_trait_grids, trace_csv)
from .sa import run_sa

log = logging.getLogger("floodopt")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def dump_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _load_config(path: str | None) -> RunConfig:
    if path is None:
        return parse_config("{}")
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("", f"cannot read config {path}: {exc}") from None
    return parse_config(text)


def _load_design(path: str) -> CityDesign:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError("", f"cannot read design {path}: {exc}") from None
    return CityDesign.from_json(doc)


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    log.info("wrote %s", path)


def _sidecar(path: Path, suffix: str) -> Path:
    return path.with_name(path.stem + suffix)


def _write_run(report, config: RunConfig, out: Path):
    _write(out, dump_json(report.to_json()))
    _write(_sidecar(out, ".meta.json"), dump_json({"wall_time_s": report.wall_time,
                                                   "version": __version__}))
    if config.output.trace_csv:
        _write(_sidecar(out, ".trace.csv"), trace_csv(report))
    if config.output.render:
        _write(_sidecar(out, ".grids.txt"), render_trait_grids(report.best_design))


def cmd_oracle(args) -> int:
    config = _load_config(args.config)
    result = exact_optimum(config.grid, config.objective)
    doc = result.to_json()
    doc["breakdown"] = breakdown(result.design, config.grid, config.objective).to_json()
    out = Path(args.out)
    _write(out, dump_json(doc))
    if config.output.render:
        _write(_sidecar(out, ".grids.txt"), render_trait_grids(result.design))
    print(f"oracle total {result.total:.6g}")
    return EXIT_OK


def cmd_ga(args) -> int:
    config = _load_config(args.config)
    params = dataclasses.replace(config.ga, seed=args.seed).validate()
    report = run_ga(config.grid, config.objective, params)
    _write_run(report, config, Path(args.out))
    print(f"ga seed {args.seed}: best {report.best_objective:.6g} "
          f"after {report.evaluations} evaluations")
    return EXIT_OK


def cmd_sa(args) -> int:
    config = _load_config(args.config)
    params = dataclasses.replace(config.sa, seed=args.seed).validate()
    report = run_sa(config.grid, config.objective, params)
    _write_run(report, config, Path(args.out))
    print(f"sa seed {args.seed}: best {report.best_objective:.6g} "
          f"after {report.evaluations} evaluations")
    return EXIT_OK


def _seed_list(text: str) -> list[int]:
    try:
        seeds = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad seed list {text!r}") from None
    if not seeds or any(not 0 <= s < 2 ** 64 for s in seeds):
        raise argparse.ArgumentTypeError("seeds must be unsigned 64-bit integers")
    return seeds


def cmd_compare(args) -> int:
    config = _load_config(args.config)
    comp = compare_runs(config, args.seeds, equal_budget=args.equal_budget)
    out = Path(args.out)
    _write(out / "comparison.json", dump_json(comp.to_json()))
    _write(out / "comparison.txt", render_comparison(comp))
    _write(out / "oracle.json", dump_json(comp.oracle.to_json()))
    timings = {}
    for report in comp.ga + comp.sa:
        name = f"{report.engine}_seed{report.seed}"
        _write(out / f"{name}.json", dump_json(report.to_json()))
        if config.output.trace_csv:
            _write(out / f"{name}.trace.csv", trace_csv(report))
        timings[name] = report.wall_time
    _write(out / "meta.json", dump_json({"wall_time_s": timings, "version": __version__}))
    sys.stdout.write(render_comparison(comp))
    return EXIT_OK


def cmd_render(args) -> int:
    design = _load_design(args.design)
    traits = [args.trait] if args.trait else None
    try:
        text = render_trait_grids(design, traits)
    except ModelError as exc:
        raise ConfigError("--trait", str(exc)) from None
    sys.stdout.write(text)
    if args.floodplain:
        config = _load_config(args.config)
        sys.stdout.write("\n" + render_floodplain_report(floodplain_report(design, config.grid)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="floodopt",
                                     description="Flood-vulnerability city design optimizer.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("oracle", help="exact optimum by enumeration")
    p.add_argument("--config")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_oracle)

    for name, func in (("ga", cmd_ga), ("sa", cmd_sa)):
        p = sub.add_parser(name, help=f"run the {name.upper()} engine once")
        p.add_argument("--config")
        p.add_argument("--seed", type=int, required=True)
        p.add_argument("--out", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("compare", help="oracle plus GA and SA over several seeds")
    p.add_argument("--config")
    p.add_argument("--seeds", type=_seed_list, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--equal-budget", action="store_true",
                   help="cap SA evaluations at the GA budget")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("render", help="print a design as per-trait code grids")
    p.add_argument("--design", required=True)
    p.add_argument("--trait")
    p.add_argument("--floodplain", action="store_true",
                   help="append floodplain tallies (site grid from --config)")
    p.add_argument("--config")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, ParamsError, ModelError, ObjectiveError) as exc:
        print(f"floodopt: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001
        log.debug("runtime failure", exc_info=True)
        print(f"floodopt: runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
