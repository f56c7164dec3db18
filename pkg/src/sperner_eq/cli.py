"""Command-line front end: ``sperner-eq {solve,sperner,equivalence,diagnose}``.

Every run writes one JSON report (to ``--out`` or stdout), including runs that
fail; the exit code carries the outcome:

    0  success
    1  solver did not converge / labeling could not be built
    2  bad input (config, parse or improper labeling)
    3  equivalence certificate failed
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from dataclasses import replace
from typing import Optional, Sequence

from .economy import load_economy
from .equivalence import certify
from .errors import (
    ConfigError,
    ImproperLabeling,
    LabelingFailed,
    NotConverged,
    NotFullyLabeled,
    SpernerEqError,
)
from .labeling import Labeling, random_proper_labeling
from .search import enumerate_fully_labeled, path_follow
from .serial import dumps
from .simplex import subdivide
from .solver import SolverConfig, slnc_diagnostic, solve

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CERT = 0, 1, 2, 3
DEFAULT_SEED = 0


class InputError(Exception):
    """Unreadable or malformed input file."""


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _error_report(command: str, exc: BaseException, **extra) -> dict:
    print(f"sperner-eq {command}: {exc}", file=sys.stderr)
    out = {"command": command, "error": {"type": type(exc).__name__, "message": str(exc)}}
    out.update(extra)
    return out


def _emit(args, report: dict) -> None:
    text = dumps(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_csv(path: str, header: Sequence[str], rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())


def _config(args) -> SolverConfig:
    cfg = SolverConfig()
    overrides = {
        "m_start": args.m_start,
        "m_max": args.m_max,
        "growth": args.growth,
        "tol": args.tol,
        "slnc_eta": getattr(args, "eta", None),
        "slnc_epsilon": getattr(args, "epsilon", None),
        "slnc_halvings": getattr(args, "halvings", None),
        "slnc_resolution": getattr(args, "sample_m", None),
        "mode": args.mode,
    }
    return replace(cfg, **{k: v for k, v in overrides.items() if v is not None})


def _labeling(args) -> Labeling:
    if args.random is not None:
        n, m = args.random
        seed = DEFAULT_SEED if args.seed is None else args.seed
        try:
            sub = subdivide(n, m)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return random_proper_labeling(sub, random.Random(seed))
    if args.input is None:
        raise ConfigError("give a labeling file or --random N M")
    return Labeling.from_json(_read_json(args.input))


# ------------------------------------------------------------------ commands


def cmd_solve(args) -> int:
    try:
        cfg = _config(args)
        econ = load_economy(_read_json(args.input))
    except (InputError, SpernerEqError, ValueError, TypeError) as exc:
        _emit(args, _error_report("solve", exc))
        return EXIT_INPUT
    try:
        report = solve(econ, cfg)
    except LabelingFailed as exc:
        _emit(args, _error_report("solve", exc))
        return EXIT_FAIL
    _emit(args, report.to_json())
    if args.csv:
        _write_csv(args.csv, ("m", "residual", "walras", "tail_diameter"), report.csv_rows())
    return EXIT_OK if report.converged else EXIT_FAIL


def cmd_sperner(args) -> int:
    try:
        lab = _labeling(args)
        result = enumerate_fully_labeled(lab) if args.strategy == "enumerate" else path_follow(lab)
    except ImproperLabeling as exc:
        _emit(args, _error_report("sperner", exc, violations=[v.to_json() for v in exc.violations]))
        return EXIT_INPUT
    except (InputError, SpernerEqError, ValueError, TypeError) as exc:
        _emit(args, _error_report("sperner", exc))
        return EXIT_INPUT
    _emit(args, result.to_json())
    return EXIT_OK if result.cells else EXIT_FAIL


def cmd_equivalence(args) -> int:
    try:
        if args.mode not in (None, "rational"):
            raise ConfigError("equivalence runs in rational mode only")
        cfg = _config(args)
        lab = _labeling(args)
        cert = certify(lab, cfg)
    except ImproperLabeling as exc:
        _emit(args, _error_report("equivalence", exc, violations=[v.to_json() for v in exc.violations]))
        return EXIT_INPUT
    except (NotConverged, NotFullyLabeled, LabelingFailed) as exc:
        _emit(args, _error_report("equivalence", exc))
        return EXIT_CERT
    except (InputError, SpernerEqError, ValueError, TypeError) as exc:
        _emit(args, _error_report("equivalence", exc))
        return EXIT_INPUT
    _emit(args, cert.to_json())
    return EXIT_OK


def cmd_diagnose(args) -> int:
    try:
        cfg = _config(args)
        econ = load_economy(_read_json(args.input))
    except (InputError, SpernerEqError, ValueError, TypeError) as exc:
        _emit(args, _error_report("diagnose", exc))
        return EXIT_INPUT
    try:
        report = slnc_diagnostic(econ, cfg)
    except SpernerEqError as exc:
        _emit(args, _error_report("diagnose", exc))
        return EXIT_FAIL
    data = report.to_json()
    _emit(args, data)
    if args.csv:
        rows = []
        for c in data["clusters"]:
            for eta, count, diam in zip(data["etas"], c["counts"], c["diameters"]):
                rows.append((json.dumps(c["cell"], sort_keys=True), eta, count, diam))
        _write_csv(args.csv, ("cell", "eta", "count", "diameter"), rows)
    return EXIT_OK


# -------------------------------------------------------------------- parser


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sperner-eq", description="Sperner labelings and exchange-economy equilibria.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        sp.add_argument("--mode", choices=("rational", "float"), default=None)
        sp.add_argument("--m-start", type=int)
        sp.add_argument("--m-max", type=int)
        sp.add_argument("--growth", type=int)
        sp.add_argument("--tol", type=float)

    def labeling_source(sp):
        sp.add_argument("input", nargs="?", help="labeling JSON file")
        sp.add_argument("--random", nargs=2, type=_positive_int, metavar=("N", "M"),
                        help="use a random proper labeling of the N-simplex at resolution M")
        sp.add_argument("--seed", type=int, help=f"seed for --random (default {DEFAULT_SEED})")

    s = sub.add_parser("solve", help="approximate an equilibrium of an economy")
    s.add_argument("input", help="economy JSON file")
    common(s)
    s.add_argument("--csv", help="also write the refinement trace as CSV")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("sperner", help="find fully labeled cells of a labeling")
    labeling_source(s)
    s.add_argument("--strategy", choices=("enumerate", "path"), default="enumerate")
    s.add_argument("--out")
    s.set_defaults(func=cmd_sperner)

    s = sub.add_parser("equivalence", help="certify a fully labeled cell through the induced economy")
    labeling_source(s)
    common(s)
    s.set_defaults(func=cmd_equivalence)

    s = sub.add_parser("diagnose", help="empirical SLNC cluster report")
    s.add_argument("input", help="economy JSON file")
    common(s)
    s.add_argument("--eta", type=float)
    s.add_argument("--epsilon", type=float)
    s.add_argument("--halvings", type=int)
    s.add_argument("--sample-m", type=int, help="sample grid resolution")
    s.add_argument("--csv", help="also write per-eta cluster rows as CSV")
    s.set_defaults(func=cmd_diagnose)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
