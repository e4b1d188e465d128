"""
Command line interface.

    isoasym example [--name ex1|ex2a|ex2b] [--out PATH]
    isoasym frenet  (--config PATH | --name NAME) [--samples N]
    isoasym verify  (--config PATH | --name NAME) [--samples N]
    isoasym mesh    (--config PATH | --name NAME) [--fix s|t|q=VAL] [--project drop:AXIS]
                    [--samples N] [--out PATH] [--csv PATH]

Exit codes: 0 success / verification passed, 1 verification failed,
2 bad input (configuration, expression, degenerate curve).
"""

import argparse
import json
import os
import sys

import numpy as np

from . import config as cfg
from .curve import sample_interval
from .exprlang import DomainError, ExprSyntaxError
from .family import SingularPoint, check_asymptotic
from .frenet import DegenerateFrame, DegenerateTorsion, frenet_apparatus
from .viz import Projection, export_csv, export_mesh, parse_fix, slice_surface

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2

FRENET_COLUMNS = (["s", "kappa1", "kappa2", "kappa3"]
                  + [f"{v}{i}" for v in ("T", "N", "B1_", "B2_") for i in range(1, 5)])


class InputError(Exception):
    pass


def _load(args):
    if args.config and args.name:
        raise InputError("give either --config or --name, not both")
    if args.config:
        return cfg.load_config(args.config)
    if args.name:
        return cfg.config_from_dict(cfg.builtin(args.name))
    raise InputError("one of --config or --name is required")


def _fmt(x):
    x = float(x)
    # floating noise around an exact zero reads better as 0
    return "0" if abs(x) < 1e-13 else f"{x:.10g}"


def cmd_frenet(config, n_samples, out=None):
    out = out or sys.stdout
    s = sample_interval(config.curve.interval, n_samples) if n_samples > 1 else np.array(config.curve.interval[:1])
    fr = frenet_apparatus(config.curve, s, eps=config.tolerances["eps_degenerate"])
    out.write("\t".join(FRENET_COLUMNS) + "\n")
    for i in range(len(s)):
        row = [s[i], fr.kappa1[i], fr.kappa2[i], fr.kappa3[i], *fr.T[i], *fr.N[i], *fr.B1[i], *fr.B2[i]]
        out.write("\t".join(_fmt(v) for v in row) + "\n")
    return EXIT_OK


def cmd_verify(config, n_s=None, out=None):
    out = out or sys.stdout
    tol = config.tolerances
    report = check_asymptotic(config.family, n_s or config.grid["n_s"], tol["tol"], tol["tol_nondeg"],
                              tuple(config.grid["s_open"]), tol["eps_degenerate"])
    d = report.to_dict()
    if config.name:
        d = {"name": config.name, **d}
    out.write(json.dumps(d, indent=2) + "\n")
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_mesh(config, fix=None, project=None, out=None, grid=None, csv_path=None):
    fix = fix or config.mesh["fix"]
    if fix is None:
        raise InputError("no slice given: pass --fix or set mesh.fix in the config")
    fixed = parse_fix(fix)
    proj = Projection.parse(project or config.mesh["project"])
    grid = grid or config.grid["mesh"]
    mesh = slice_surface(config.family, fixed, grid, proj)
    out = out or f"{config.name or 'mesh'}.obj"
    comment = f"{config.name or 'pencil'}: slice {fix}, projection {proj}, grid {grid[0]}x{grid[1]}"
    export_mesh(mesh, out, comment)
    if csv_path:
        export_csv(mesh, csv_path)
    return EXIT_OK


def cmd_example(name=None, out=None, stream=None):
    stream = stream or sys.stdout
    if name:
        text = cfg.dump_config(cfg.builtin(name))
        if out:
            with open(out, "w") as fh:
                fh.write(text)
        else:
            stream.write(text)
        return EXIT_OK
    if out:
        os.makedirs(out, exist_ok=True)
        for key in cfg.BUILTINS:
            with open(os.path.join(out, f"{key}.json"), "w") as fh:
                fh.write(cfg.dump_config(cfg.builtin(key)))
    else:
        stream.write(json.dumps({key: cfg.builtin(key) for key in cfg.BUILTINS}, indent=2) + "\n")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="isoasym",
        description="Hypersurface pencils in R^4 with a common isoasymptotic curve.")
    sub = parser.add_subparsers(dest="command", required=True)

    def source(p):
        p.add_argument("--config", metavar="PATH", help="JSON configuration file")
        p.add_argument("--name", choices=sorted(cfg.BUILTINS), help="use a builtin example")

    p = sub.add_parser("frenet", help="tabulate the Frenet apparatus of the curve")
    source(p)
    p.add_argument("--samples", type=int, metavar="N", help="number of uniform s samples")

    p = sub.add_parser("verify", help="check the isoparametric and asymptotic conditions")
    source(p)
    p.add_argument("--samples", type=int, metavar="N", help="size of the s grid")

    p = sub.add_parser("mesh", help="export a projected 2-slice as Wavefront OBJ")
    source(p)
    p.add_argument("--fix", metavar="PARAM=VAL", help="parameter to hold fixed, e.g. q=0")
    p.add_argument("--project", metavar="drop:AXIS", help="drop-axis projection, e.g. drop:4")
    p.add_argument("--samples", type=int, metavar="N", help="grid points along each free parameter")
    p.add_argument("--out", metavar="PATH", help="OBJ output path")
    p.add_argument("--csv", metavar="PATH", help="also write a CSV vertex dump")

    p = sub.add_parser("example", help="emit builtin configurations")
    p.add_argument("--name", choices=sorted(cfg.BUILTINS), help="emit one example (default: all)")
    p.add_argument("--out", metavar="PATH", help="file for one example, directory for all")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "example":
            return cmd_example(args.name, args.out)
        if getattr(args, "samples", None) is not None and args.samples < 2:
            raise InputError("--samples must be >= 2")
        config = _load(args)
        if args.command == "frenet":
            return cmd_frenet(config, args.samples or config.grid["frenet_samples"])
        if args.command == "verify":
            return cmd_verify(config, args.samples)
        grid = (args.samples, args.samples) if args.samples else None
        return cmd_mesh(config, args.fix, args.project, args.out, grid, args.csv)
    except cfg.ConfigError as exc:
        for path, reason in exc.errors:
            print(f"config error: {path or '<root>'}: {reason}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, ExprSyntaxError, DomainError, DegenerateFrame, DegenerateTorsion,
            SingularPoint, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
