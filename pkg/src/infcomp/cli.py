"""Command-line front end.

    infcomp certify  --family geometric --s 2 --r0 2
    infcomp eval     --family geometric --s 2 --z 1 0 --epsilon 1e-9
    infcomp series   --family geometric --s 2 --degree 12
    infcomp poincare --s 2 --z 3 0
    infcomp verify
    infcomp grid     --family geometric --s 2 --grid -1 1 -1 1 21 --format csv

Complex numbers travel as ``[re, im]`` pairs. Exit status: 0 ok, 1 invalid
input, 2 certification failure, 3 budget exceeded or overflow, 4 a
verification check failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from infcomp.composer import eval_certified, limit_series_info
from infcomp.convergence import FactorFamily, certify
from infcomp.errors import BudgetExceeded, CertificationError, EvaluationOverflow
from infcomp.poincare import PoincareSpec, poincare_eval
from infcomp import verify as verify_mod

COMMANDS = ("certify", "eval", "series", "poincare", "verify", "grid")
GRID_HEADER = ("re", "im", "f_re", "f_im", "error_bound")
EXIT_VALIDATION, EXIT_CERTIFICATION, EXIT_BUDGET, EXIT_VERIFY = 1, 2, 3, 4


@dataclass
class GridSpec:
    re_min: float
    re_max: float
    im_min: float
    im_max: float
    steps: int

    def __post_init__(self):
        if self.steps < 2:
            raise ValueError("grid needs steps >= 2")

    def points(self) -> list:
        def axis(lo, hi):
            return [lo + (hi - lo) * i / (self.steps - 1) for i in range(self.steps)]

        return [complex(x, y) for y in axis(self.im_min, self.im_max) for x in axis(self.re_min, self.re_max)]


@dataclass
class RunConfig:
    command: str
    family: Optional[FactorFamily] = None
    z: complex = 0j
    epsilon: float = 1e-9
    degree: int = 16
    grid: Optional[GridSpec] = None
    output: str = "-"
    format: str = "json"
    method: str = "compose"
    s: Optional[complex] = None
    base_radius: Optional[float] = None
    jobs: int = 1
    n_max: int = 10**6

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.format not in ("json", "csv"):
            raise ValueError("format must be json or csv")
        if self.format == "csv" and self.command not in ("grid", "verify"):
            raise ValueError(f"csv output is available for grid and verify, not {self.command}")
        if self.command in ("certify", "eval", "series") and self.family is None:
            raise ValueError(f"{self.command} needs --family")
        if self.command == "grid" and self.grid is None:
            raise ValueError("grid needs --grid RE_MIN RE_MAX IM_MIN IM_MAX STEPS")


def _pair(c: complex) -> list:
    return [c.real, c.imag]


def _finite_or_none(x: float):
    return x if math.isfinite(x) else None


def _poincare_spec(cfg: RunConfig) -> PoincareSpec:
    s = cfg.s
    if s is None and cfg.family is not None and cfg.family.kind == "geometric" and cfg.family.exponent == 2:
        s = cfg.family.s
    if s is None:
        raise ValueError("poincare needs --s (or a geometric family with r0 = 2)")
    return PoincareSpec(s, cfg.base_radius)


def _do_certify(cfg: RunConfig) -> dict:
    cert = certify(cfg.family)
    return {
        "command": "certify",
        "family": cfg.family.to_dict(),
        "alpha": cert.alpha,
        "safe_radius": _finite_or_none(cert.safe_radius),
        "cn": [cert.cn(n) for n in range(1, 21)],
        "tail_formula": cert.tail_formula,
    }


def _eval_doc(command: str, z: complex, res, epsilon: float) -> dict:
    plan = res.plan
    return {
        "command": command,
        "z": _pair(z),
        "value": _pair(res.value),
        "error_bound": res.error_bound,
        "rounding_bound": res.rounding_bound,
        "epsilon": epsilon,
        "N_used": plan.N if plan else 0,
        "m1": plan.m1 if plan else 1,
    }


def _do_eval(cfg: RunConfig) -> dict:
    res = eval_certified(cfg.family, cfg.z, cfg.epsilon, cfg.n_max)
    return _eval_doc("eval", cfg.z, res, cfg.epsilon)


def _do_poincare(cfg: RunConfig) -> dict:
    spec = _poincare_spec(cfg)
    res = poincare_eval(spec, cfg.z, cfg.epsilon, cfg.n_max)
    doc = _eval_doc("poincare", cfg.z, res, cfg.epsilon)
    doc["s"] = _pair(spec.s)
    doc["k"] = res.continuation_depth
    return doc


def _do_series(cfg: RunConfig) -> dict:
    info = limit_series_info(cfg.family, cfg.degree, cfg.epsilon, cfg.n_max)
    return {
        "command": "series",
        "family": cfg.family.to_dict(),
        "degree": cfg.degree,
        "coefficients": [_pair(complex(a)) for a in info.jet.coeffs],
        "N_used": info.N_used,
        "last_change": float(info.last_change),
        "epsilon": cfg.epsilon,
    }


def _do_verify(cfg: RunConfig) -> dict:
    checks = verify_mod.run_all()
    return {
        "command": "verify",
        "all_passed": all(c.passed for c in checks),
        "checks": [
            {
                "name": c.name,
                "passed": c.passed,
                "max_residual": c.max_residual,
                "tolerance": c.tolerance,
                "detail": c.detail,
            }
            for c in checks
        ],
    }


def _grid_cell(args):
    method, family, spec, z, epsilon, n_max = args
    try:
        if method == "poincare":
            res = poincare_eval(spec, z, epsilon, n_max)
        else:
            res = eval_certified(family, z, epsilon, n_max)
    except EvaluationOverflow:
        return [z.real, z.imag, "overflow", "overflow", "overflow"]
    except BudgetExceeded:
        return [z.real, z.imag, "budget_exceeded", "budget_exceeded", "budget_exceeded"]
    return [z.real, z.imag, res.value.real, res.value.imag, res.error_bound + res.rounding_bound]


def _do_grid(cfg: RunConfig) -> dict:
    if cfg.method == "poincare":
        spec, family = _poincare_spec(cfg), None
    else:
        if cfg.family is None:
            raise ValueError("grid with method compose needs --family")
        certify(cfg.family)
        spec, family = None, cfg.family
    tasks = [(cfg.method, family, spec, z, cfg.epsilon, cfg.n_max) for z in cfg.grid.points()]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(_grid_cell, tasks, chunksize=16))
    else:
        rows = [_grid_cell(t) for t in tasks]
    return {"command": "grid", "columns": list(GRID_HEADER), "rows": rows}


HANDLERS = {
    "certify": _do_certify,
    "eval": _do_eval,
    "series": _do_series,
    "poincare": _do_poincare,
    "verify": _do_verify,
    "grid": _do_grid,
}


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, allow_nan=False) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if doc["command"] == "grid":
        writer.writerow(GRID_HEADER)
        writer.writerows(doc["rows"])
    else:
        writer.writerow(("name", "passed", "max_residual", "tolerance", "detail"))
        for c in doc["checks"]:
            writer.writerow((c["name"], c["passed"], c["max_residual"], c["tolerance"], c["detail"]))
    return buf.getvalue()


def run(cfg: RunConfig) -> tuple:
    """Execute ``cfg``; returns ``(exit_status, document)``."""
    doc = HANDLERS[cfg.command](cfg)
    status = EXIT_VERIFY if cfg.command == "verify" and not doc["all_passed"] else 0
    return status, doc


def _load_family_json(text: str) -> FactorFamily:
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    return FactorFamily.from_dict(json.loads(text))


def family_from_args(args) -> Optional[FactorFamily]:
    if args.family_json:
        return _load_family_json(args.family_json)
    if args.family is None:
        return None
    if args.family == "geometric":
        if args.s is None:
            raise ValueError("geometric family needs --s")
        return FactorFamily.geometric(_complex_arg(args.s), args.r0)
    if args.family == "power_law":
        if args.p is None:
            raise ValueError("power_law family needs --p")
        return FactorFamily.power_law(args.p, args.r0)
    if args.factors is None:
        raise ValueError("explicit family needs --factors")
    return FactorFamily.from_dict({"kind": "explicit", "factors": json.loads(args.factors)})


def _complex_arg(vals) -> complex:
    if len(vals) == 1:
        return complex(vals[0], 0.0)
    if len(vals) == 2:
        return complex(vals[0], vals[1])
    raise ValueError("complex arguments take RE [IM]")


class _Parser(argparse.ArgumentParser):
    # argparse's default status 2 is taken by certification failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="infcomp", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--family", choices=("geometric", "power_law", "explicit"))
        p.add_argument("--family-json", help="family description as JSON, or @path to a JSON file")
        p.add_argument("--s", type=float, nargs="+", metavar="RE [IM]")
        p.add_argument("--r0", type=int, default=2, help="exponent of the nonlinear term")
        p.add_argument("--p", type=float, help="power-law decay exponent")
        p.add_argument("--factors", help="explicit factors as JSON coefficient lists")
        p.add_argument("--z", type=float, nargs=2, metavar=("RE", "IM"), default=(0.0, 0.0))
        p.add_argument("--epsilon", type=float, default=1e-9)
        p.add_argument("--degree", type=int, default=16)
        p.add_argument("--grid", type=float, nargs=5, metavar=("RE_MIN", "RE_MAX", "IM_MIN", "IM_MAX", "STEPS"))
        p.add_argument("--method", choices=("compose", "poincare"), default="compose")
        p.add_argument("--base-radius", type=float)
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--n-max", type=int, default=10**6)
        p.add_argument("--output", default="-")
        p.add_argument("--format", choices=("json", "csv"), default=None)
    return parser


def config_from_args(args) -> RunConfig:
    grid = None
    if args.grid is not None:
        steps = args.grid[4]
        if steps != int(steps):
            raise ValueError("grid steps must be an integer")
        grid = GridSpec(*args.grid[:4], int(steps))
    fmt = args.format or ("csv" if args.command == "grid" else "json")
    return RunConfig(
        command=args.command,
        family=family_from_args(args),
        z=complex(*args.z),
        epsilon=args.epsilon,
        degree=args.degree,
        grid=grid,
        output=args.output,
        format=fmt,
        method=args.method,
        s=_complex_arg(args.s) if args.s is not None else None,
        base_radius=args.base_radius,
        jobs=args.jobs,
        n_max=args.n_max,
    )


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_VALIDATION
    try:
        cfg = config_from_args(args)
        status, doc = run(cfg)
        text = render(doc, cfg.format)
    except CertificationError as e:
        print(f"infcomp: certification failed: {e}", file=sys.stderr)
        return EXIT_CERTIFICATION
    except (BudgetExceeded, EvaluationOverflow) as e:
        print(f"infcomp: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as e:
        print(f"infcomp: invalid input: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    if cfg.output == "-":
        sys.stdout.write(text)
    else:
        with open(cfg.output, "w", newline="") as fh:
            fh.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
