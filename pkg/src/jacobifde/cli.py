"""Command-line driver: ``jacobifde {solve,convergence,verify} [flags]``."""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .analysis import ConvergenceReport, convergence_study
from .errors import ConfigError
from .problem import example_1, example_2, transform
from .solver import evaluate, solve
from .verification import run_suites

__all__ = ["RunConfig", "parse_config", "run", "main", "format_report"]

COMMANDS = ("solve", "convergence", "verify")
DEFAULT_N = (16, 18, 20, 22, 24)
EXAMPLES = {1: example_1, 2: example_2}
HEADER = "N,err_weighted,rate_weighted,err_l2,rate_l2"


@dataclass(frozen=True)
class RunConfig:
    command: str
    example: Optional[int] = None
    alpha: Optional[float] = None
    r: Optional[float] = None
    n_list: tuple = DEFAULT_N
    quad_order: int = 0
    output_path: Optional[str] = None
    sample_points: tuple = field(default_factory=tuple)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _int_list(text):
    try:
        values = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    return values


def _real_list(text):
    try:
        values = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}")
    return values


def _quad_order(text):
    if text == "auto":
        return 0
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer or 'auto', got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer or 'auto', got {text!r}")
    return value


def _build_parser():
    p = _Parser(prog="jacobifde", description=__doc__, allow_abbrev=False)
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--example", type=int, choices=sorted(EXAMPLES))
    p.add_argument("--alpha", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--n", type=_int_list, dest="n_list")
    p.add_argument("--quad-order", type=_quad_order, default=0)
    p.add_argument("--points", type=_real_list)
    p.add_argument("--out")
    return p


def parse_config(argv) -> RunConfig:
    """Parse and validate command-line arguments; raises ``ConfigError``."""
    ns = _build_parser().parse_args(list(argv))
    if ns.command != "verify":
        for flag, value in (("--example", ns.example), ("--alpha", ns.alpha), ("--r", ns.r)):
            if value is None:
                raise ConfigError(f"{ns.command} requires {flag}")
        if not 1.0 < ns.alpha < 2.0:
            raise ConfigError(f"--alpha must lie in (1, 2), got {ns.alpha}")
        if not 0.0 <= ns.r <= 1.0:
            raise ConfigError(f"--r must lie in [0, 1], got {ns.r}")
    n_list = ns.n_list
    if n_list is None:
        n_list = (DEFAULT_N[-1],) if ns.command == "solve" else DEFAULT_N
    if any(n < 0 for n in n_list):
        raise ConfigError("--n values must be nonnegative")
    if ns.command == "solve" and len(n_list) != 1:
        raise ConfigError("solve takes a single --n value")
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ConfigError("--n values must be strictly increasing")
    points = ns.points or ()
    if any(not 0.0 <= x <= 1.0 for x in points):
        raise ConfigError("--points must lie in [0, 1]")
    return RunConfig(
        command=ns.command,
        example=ns.example,
        alpha=ns.alpha,
        r=ns.r,
        n_list=tuple(n_list),
        quad_order=ns.quad_order,
        output_path=ns.out,
        sample_points=tuple(points),
    )


def _num(value) -> str:
    return "" if value is None else f"{value:.10e}"


def format_report(report: ConvergenceReport) -> str:
    lines = [HEADER]
    for row in report.rows:
        lines.append(
            ",".join(
                [str(row.N), _num(row.err_weighted), _num(row.rate_weighted), _num(row.err_l2), _num(row.rate_l2)]
            )
        )
    lines.append(f"# predicted_rate={report.predicted_rate:.2f}")
    lines.append(f"# alpha={report.alpha:g}, r={report.r:g}, beta={report.beta:.10f}")
    return "\n".join(lines) + "\n"


def _format_solve(config: RunConfig) -> str:
    spec = EXAMPLES[config.example](config.alpha, config.r)
    sol = solve(transform(spec), config.n_list[0], config.quad_order)
    lines = [
        f"# alpha={config.alpha:g}, r={config.r:g}, beta={sol.beta:.10f}",
        f"beta={sol.beta:.10e}",
        f"A={sol.A:.10e}",
        f"N={sol.N}",
        f"quad_order={sol.quad_order}",
        "j,c_j",
    ]
    lines += [f"{j},{c:.10e}" for j, c in enumerate(sol.coeffs)]
    if config.sample_points:
        x = np.array(config.sample_points)
        u_n = np.atleast_1d(evaluate(sol, x))
        u = np.atleast_1d(spec.exact_solution(x))
        lines.append("x,u_N,u_exact")
        lines += [f"{xi!r},{a:.10e},{b:.10e}" for xi, a, b in zip(x.tolist(), u_n, u)]
    return "\n".join(lines) + "\n"


def _format_verify() -> tuple[str, bool]:
    results = run_suites()
    passed = sum(r.passed for r in results)
    lines = [r.line() for r in results]
    lines.append(f"{passed}/{len(results)} suites passed")
    return "\n".join(lines) + "\n", passed == len(results)


def run(config: RunConfig) -> int:
    """Execute ``config``; returns 0 on success, 1 on a failed verification."""
    ok = True
    if config.command == "convergence":
        spec = EXAMPLES[config.example](config.alpha, config.r)
        text = format_report(convergence_study(spec, config.n_list, config.quad_order))
    elif config.command == "solve":
        text = _format_solve(config)
    else:
        text, ok = _format_verify()
    if config.output_path:
        with open(config.output_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_config(argv)
    except ConfigError as exc:
        print(f"jacobifde: error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return run(config)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"jacobifde: {config.command} failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
