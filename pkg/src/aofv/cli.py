"""Command-line front end.

Two commands: `run` integrates one problem and dumps the solution as CSV;
`study` drives the accuracy / convergence / timing protocols.  Every flag
can also be supplied through an INI config file (section [aofv]); explicit
command-line values win.  Exit codes: 0 success, 2 validation failure,
3 aborted on non-finite values.
"""

import argparse
import configparser
import sys

from .grid import build_grid
from .harness import (PROBLEMS, SimulationBlowup, convergence_study,
                      reconstruction_accuracy_study, run_simulation,
                      solution_csv, solver_config_for, timing_study)
from .reconstruct import SCHEME_IDS

_FLAG_KEYS = ("problem", "cells", "scheme", "schemes", "cfl", "mhat", "ell",
              "rexp", "char_proj", "out", "refinements", "repeats")


def _parse_bool(text):
    v = str(text).strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_cells(text):
    return [int(v) for v in str(text).split(",") if v.strip()]


def _parse_refinements(text):
    lo, _, hi = str(text).partition("..")
    return range(int(lo), int(hi) + 1)


def build_parser():
    p = argparse.ArgumentParser(
        prog="aofv",
        description="Finite-volume laboratory for adaptive-order "
                    "reconstructions")
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--config", help="INI file with key=value defaults")
        sp.add_argument("--problem", help="problem id, e.g. jiang_shu")
        sp.add_argument("--cells", help="cell count, or comma list for studies")
        sp.add_argument("--scheme", choices=SCHEME_IDS)
        sp.add_argument("--cfl", type=float)
        sp.add_argument("--mhat", type=int)
        sp.add_argument("--ell", type=int)
        sp.add_argument("--rexp", type=int)
        sp.add_argument("--char-proj", dest="char_proj")
        sp.add_argument("--out", help="output CSV path (default stdout)")

    run_p = sub.add_parser("run", help="integrate one problem")
    add_common(run_p)

    study_p = sub.add_parser("study", help="accuracy/convergence/timing")
    study_p.add_argument("kind", choices=("accuracy", "convergence", "timing"))
    add_common(study_p)
    study_p.add_argument("--refinements",
                         help="dyadic exponent range, e.g. 2..9")
    study_p.add_argument("--repeats", type=int)
    study_p.add_argument("--schemes", help="comma list for timing studies")
    return p


def effective_options(args):
    """Merge config-file values under the explicit command-line flags."""
    opts = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            text = fh.read()
        if "[" not in text.split("\n", 1)[0]:
            text = "[aofv]\n" + text
        ini = configparser.ConfigParser()
        ini.read_string(text)
        section = "aofv" if ini.has_section("aofv") else ini.sections()[0]
        for key in _FLAG_KEYS:
            if ini.has_option(section, key):
                opts[key] = ini.get(section, key)
    for key in _FLAG_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            opts[key] = val
    return opts


def _problem(opts):
    pid = opts.get("problem")
    if not pid:
        raise ValueError("--problem is required")
    if pid not in PROBLEMS:
        raise ValueError(f"unknown problem {pid!r}; "
                         f"choose from {sorted(PROBLEMS)}")
    return PROBLEMS[pid]


def _config_kwargs(opts):
    kw = {}
    if "scheme" in opts:
        kw["scheme"] = opts["scheme"]
    if "cfl" in opts:
        kw["cfl"] = float(opts["cfl"])
    for key in ("mhat", "ell", "rexp"):
        if key in opts:
            kw[key] = int(opts[key])
    if "char_proj" in opts:
        kw["char_projection"] = _parse_bool(opts["char_proj"])
    return kw


def _emit(text, opts):
    if opts.get("out"):
        with open(opts["out"], "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_run(opts):
    spec = _problem(opts)
    cells = _parse_cells(opts.get("cells", "400"))
    if len(cells) != 1:
        raise ValueError("run takes a single --cells value")
    grid = build_grid(spec.x_left, spec.x_right, cells[0])
    config = solver_config_for(spec, **_config_kwargs(opts))
    out, report = run_simulation(spec, grid, config)
    _emit(solution_csv(out), opts)
    print(f"# {spec.id}: {report.steps} steps, "
          f"{report.fallback_events} fallback cells, "
          f"wall {list(report.wall_seconds.values())[0]:.3f}s",
          file=sys.stderr)
    return 0


def cmd_study(kind, opts):
    if kind == "accuracy":
        spec = _problem(opts)
        if not spec.id.startswith("accuracy_"):
            raise ValueError("accuracy studies use problems accuracy_u0/u1/u2")
        params = (int(opts.get("mhat", 4)), int(opts.get("ell", 2)),
                  int(opts.get("rexp", 1)))
        refs = _parse_refinements(opts.get("refinements", "2..9"))
        report = reconstruction_accuracy_study(spec.id[-2:], params, refs)
        _emit(report.convergence_csv(), opts)
        return 0
    if kind == "convergence":
        spec = _problem(opts)
        cells = _parse_cells(opts.get("cells", "25,50,100,200"))
        report = convergence_study(spec, cells, _config_kwargs(opts))
        _emit(report.convergence_csv(), opts)
        return 0
    # timing
    spec = _problem(opts)
    cells = _parse_cells(opts.get("cells", "200,400,800"))
    schemes = [s.strip() for s in
               opts.get("schemes", "cwz753,wao-bgs,wao-ahz").split(",")]
    repeats = int(opts.get("repeats", 5))
    report = timing_study(spec, cells, schemes, repeats=repeats)
    _emit(report.timing_csv(), opts)
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        opts = effective_options(args)
        if args.command == "run":
            return cmd_run(opts)
        return cmd_study(args.kind, opts)
    except SimulationBlowup as exc:
        print(f"aborted: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
