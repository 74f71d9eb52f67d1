"""Command-line entry point: ``gtml <command> [--key value]...``.

Output is JSON (default) or CSV on stdout or ``--out``. Rationals are written
as "p/q" strings and floats with 17 significant digits. Exit codes: 0 success,
1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import boundary, bouquet, links, markov, verify, zw
from .gtcore import EMPTY, Signature, count_paths, parse_signature, weyl_dimension


class UsageError(Exception):
    pass


# -- serialization -----------------------------------------------------------


def sig_key(sig) -> str:
    return "(" + ",".join(map(str, sig)) + ")"


def _encode(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)) and not isinstance(obj, Fraction):
        return json.dumps(str(int(obj)))
    if isinstance(obj, Fraction):
        return json.dumps(str(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return json.dumps(str(x))
        return format(x, ".17g")
    if isinstance(obj, (complex, np.complexfloating)):
        return _encode({"re": obj.real, "im": obj.imag})
    if isinstance(obj, Signature):
        return json.dumps(",".join(map(str, obj)))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = []
        for k, v in obj.items():
            key = sig_key(k) if isinstance(k, tuple) else str(k)
            items.append(json.dumps(key) + ":" + _encode(v))
        return "{" + ",".join(items) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ",".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_json(obj) -> str:
    return _encode(obj) + "\n"


def _cell(v) -> str:
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if isinstance(v, tuple):
        return ",".join(map(str, v))
    return str(v)


def to_csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(v) for v in r])
    return buf.getvalue()


# -- argument parsing --------------------------------------------------------


def parse_rational(text) -> Fraction:
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


def parse_member(text):
    """'re' or 're,im' -> rational or (re, im)."""
    parts = str(text).split(",")
    if len(parts) == 1:
        return parse_rational(parts[0])
    if len(parts) == 2:
        return (parse_rational(parts[0]), parse_rational(parts[1]))
    raise UsageError(f"expected re[,im], got {text!r}")


def parse_list(text, conv=parse_rational) -> list:
    if text is None or str(text).strip() == "":
        return []
    return [conv(x) for x in str(text).split(",")]


def parse_sig(text) -> Signature:
    try:
        return parse_signature(str(text))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def parse_diagram(text) -> bouquet.YoungDiagram:
    try:
        return bouquet.YoungDiagram(x for x in parse_list(text, int) if x != 0)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


PARAM_KEYS = ("z", "z2", "w", "w2")


def params_from(cfg: dict, required: bool = True) -> zw.ZwParams | None:
    given = [cfg.get(k) for k in PARAM_KEYS]
    if all(v is None for v in given):
        if required:
            raise UsageError("parameters --z --z2 --w --w2 are required")
        return None
    if any(v is None for v in given):
        raise UsageError("give all four of --z --z2 --w --w2")
    try:
        return zw.ZwParams.from_values(*(parse_member(v) for v in given))
    except zw.InadmissibleError as exc:
        raise UsageError(f"inadmissible parameters: {exc}") from exc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gtml", description="Exact and numeric tools for the Gelfand-Tsetlin graph, zw-measures and their dynamics.")
    sub = p.add_subparsers(dest="command")

    def cmd(name, help):
        c = sub.add_parser(name, help=help)
        c.add_argument("--config", help="JSON file with the same keys as the flags")
        c.add_argument("--out", help="write output here instead of stdout")
        c.add_argument("--format", choices=("json", "csv"))
        return c

    def zw_flags(c):
        for k in PARAM_KEYS:
            c.add_argument(f"--{k}", help="re[,im]")

    c = cmd("dim", "Weyl dimension of a signature")
    c.add_argument("--signature")

    c = cmd("paths", "number of GT schemes between two signatures")
    c.add_argument("--signature")
    c.add_argument("--from", dest="kappa", help="lower signature (default: empty)")

    c = cmd("link", "row of the stochastic link down to a lower level")
    c.add_argument("--signature")
    c.add_argument("--to-level", dest="to_level", type=int)

    c = cmd("reldim", "relative dimension Dim(kappa, nu) / Dim nu")
    c.add_argument("--signature")
    c.add_argument("--kappa")

    c = cmd("zw", "truncated zw-measure at level N")
    zw_flags(c)
    c.add_argument("--N", type=int)
    c.add_argument("--eps", type=float)
    c.add_argument("--min-mass", dest="min_mass", type=float)

    c = cmd("simulate", "trajectory of the jump process")
    zw_flags(c)
    c.add_argument("--start", help="signature at time 0")
    c.add_argument("--horizon", type=float)
    c.add_argument("--max-jumps", dest="max_jumps", type=int)
    c.add_argument("--seed", type=int)

    c = cmd("boundary", "link from a boundary point down to level N")
    for k in ("alpha-plus", "alpha-minus", "beta-plus", "beta-minus"):
        c.add_argument(f"--{k}", dest=k.replace("-", "_"), help="comma-separated rationals")
    c.add_argument("--gamma-plus", dest="gamma_plus")
    c.add_argument("--gamma-minus", dest="gamma_minus")
    c.add_argument("--N", type=int)
    c.add_argument("--eps", type=float)

    c = cmd("bouquet", "GT+ link values along a growing-level schedule")
    c.add_argument("--lam")
    c.add_argument("--mu")
    c.add_argument("--ratio")
    c.add_argument("--schedule")
    c.add_argument("--tolerance", type=float)

    c = cmd("verify", "run a verification suite")
    c.add_argument("suite", choices=sorted(verify.SUITES))
    zw_flags(c)
    c.add_argument("--max-N", dest="max_N", type=int)
    c.add_argument("--N", type=int)
    c.add_argument("--box", type=int)
    c.add_argument("--cut", type=int)
    c.add_argument("--eps", type=float)
    c.add_argument("--seed", type=int)
    c.add_argument("--jumps", type=int)
    c.add_argument("--pairs", type=int)
    c.add_argument("--tolerance", type=float)
    return p


def _merge(args: argparse.Namespace) -> dict:
    cfg: dict = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        cfg.update({k.replace("-", "_"): v for k, v in loaded.items()})
    cfg.update({k: v for k, v in vars(args).items() if v is not None})
    return cfg


def _need(cfg: dict, key: str):
    if cfg.get(key) is None:
        raise UsageError(f"--{key.replace('_', '-')} is required")
    return cfg[key]


# -- commands ----------------------------------------------------------------


def _row_output(row: dict, fmt: str, value="value") -> str:
    if fmt == "csv":
        return to_csv(["signature", value], [(tuple(k), v) for k, v in row.items()])
    return to_json({k: v for k, v in row.items()})


def cmd_dim(cfg, fmt):
    nu = parse_sig(_need(cfg, "signature"))
    return to_json({"dim": weyl_dimension(nu)}), 0


def cmd_paths(cfg, fmt):
    nu = parse_sig(_need(cfg, "signature"))
    kappa = parse_sig(cfg["kappa"]) if cfg.get("kappa") else EMPTY
    try:
        return to_json({"paths": count_paths(kappa, nu)}), 0
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_link(cfg, fmt):
    nu = parse_sig(_need(cfg, "signature"))
    K = int(_need(cfg, "to_level"))
    if not 1 <= K < len(nu):
        raise UsageError("--to-level must lie in [1, N-1]")
    return _row_output(links.link_multi(nu, K).entries, fmt), 0


def cmd_reldim(cfg, fmt):
    nu = parse_sig(_need(cfg, "signature"))
    kappa = parse_sig(_need(cfg, "kappa"))
    if len(kappa) > len(nu):
        raise UsageError("kappa must not be longer than the signature")
    return to_json({"reldim": links.relative_dimension(kappa, nu)}), 0


def cmd_zw(cfg, fmt):
    p = params_from(cfg)
    N = int(_need(cfg, "N"))
    if N < 1:
        raise UsageError("--N must be >= 1")
    m = zw.zw_measure(p, N, float(cfg.get("eps", 1e-8)))
    floor = float(cfg.get("min_mass", 1e-12))
    row = {zw.from_point_configuration(s): float(x) for s, x in zip(m.states, m.masses) if x >= floor}
    if fmt == "csv":
        return _row_output(row, fmt, "mass"), 0
    return to_json({"N": N, "box": m.box, "residual": m.residual, "min_mass": floor, "masses": row}), 0


def cmd_simulate(cfg, fmt):
    p = params_from(cfg)
    start = parse_sig(_need(cfg, "start"))
    seed = int(_need(cfg, "seed"))
    horizon = float(cfg.get("horizon", math.inf))
    max_jumps = cfg.get("max_jumps")
    if not math.isfinite(horizon) and max_jumps is None:
        raise UsageError("give --horizon or --max-jumps")
    traj = markov.simulate(p, zw.to_point_configuration(start), horizon, seed, max_jumps=max_jumps)
    if fmt == "json":
        events = [[t, ",".join(map(str, zw.from_point_configuration(s)))] for t, s in traj.events]
        return to_json({"seed": seed, "start": start, "events": events}), 0
    # CSV: time,state with states as signatures
    rows = [(0.0, tuple(start))] + [(t, tuple(zw.from_point_configuration(s))) for t, s in traj.events]
    return to_csv(["time", "state"], [(t, " ".join(map(str, s))) for t, s in rows]), 0


def cmd_boundary(cfg, fmt):
    try:
        omega = boundary.OmegaPoint(
            alpha_plus=parse_list(cfg.get("alpha_plus")),
            alpha_minus=parse_list(cfg.get("alpha_minus")),
            beta_plus=parse_list(cfg.get("beta_plus")),
            beta_minus=parse_list(cfg.get("beta_minus")),
            gamma_plus=parse_rational(cfg.get("gamma_plus", 0)),
            gamma_minus=parse_rational(cfg.get("gamma_minus", 0)),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    N = int(_need(cfg, "N"))
    row = boundary.link_infinity(omega, N, eps=float(cfg.get("eps", 1e-12)))
    if fmt == "csv":
        return _row_output(row.entries, fmt, "mass"), 0
    return to_json({"N": N, "complete": row.complete, "residual": row.residual, "row": row.entries}), 0


def cmd_bouquet(cfg, fmt):
    lam = parse_diagram(_need(cfg, "lam"))
    mu = parse_diagram(cfg.get("mu", ""))
    ratio = parse_rational(_need(cfg, "ratio"))
    schedule = parse_list(_need(cfg, "schedule"), int)
    try:
        rep = bouquet.yb_link_limit(lam, mu, ratio, schedule, tolerance=float(cfg.get("tolerance", 1e-2)))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out = {
        "levels": [list(x) for x in rep.levels],
        "values": rep.values,
        "differences": rep.differences,
        "extrapolated": rep.extrapolated,
        "pass": rep.passed,
    }
    return to_json(out), 0 if rep.passed else 1


def cmd_verify(cfg, fmt):
    opts = {k: cfg.get(k) for k in ("max_N", "box", "cut", "eps", "seed", "jumps", "pairs", "tolerance")}
    opts["params"] = params_from(cfg, required=False)
    if cfg.get("N") is not None:
        opts["levels"] = (int(cfg["N"]),)
    rep = verify.verify_suite(cfg["suite"], opts)
    print(f"{rep.suite}: {len(rep.cases)} cases, {'pass' if rep.passed else 'FAIL'} in {rep.wall_time:.2f}s", file=sys.stderr)
    if fmt == "csv":
        rows = [(c.id, c.passed, "" if c.residual is None else c.residual) for c in rep.cases]
        return to_csv(["id", "pass", "residual"], rows), 0 if rep.passed else 1
    return to_json(rep.as_dict()), 0 if rep.passed else 1


COMMANDS = {
    "dim": cmd_dim,
    "paths": cmd_paths,
    "link": cmd_link,
    "reldim": cmd_reldim,
    "zw": cmd_zw,
    "simulate": cmd_simulate,
    "boundary": cmd_boundary,
    "bouquet": cmd_bouquet,
    "verify": cmd_verify,
}


def run(argv: Sequence[str] | None = None) -> tuple[int, str]:
    """Run one command; returns (exit code, serialized output)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        raise UsageError("missing command")
    cfg = _merge(args)
    default_fmt = "csv" if args.command == "simulate" else "json"
    fmt = cfg.get("format") or default_fmt
    text, code = COMMANDS[args.command](cfg, fmt)
    if cfg.get("out"):
        with open(cfg["out"], "w", newline="") as fh:
            fh.write(text)
        return code, ""
    return code, text


def main(argv: Sequence[str] | None = None) -> int:
    try:
        code, text = run(argv)
    except UsageError as exc:
        print(f"gtml: error: {exc}", file=sys.stderr)
        build_parser().print_usage(sys.stderr)
        return 2
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
