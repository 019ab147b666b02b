"""Error norms, empirical convergence rates and convergence studies."""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from .errors import DomainError
from .problem import ProblemSpec, transform
from .quadrature import graded_jacobi_rule
from .solver import AUTO_EXTRA, MAX_NODES, SpectralSolution, evaluate, reduced_solution, solve

__all__ = [
    "ConvergenceRow",
    "ConvergenceReport",
    "error_weighted",
    "error_weighted_direct",
    "error_l2",
    "empirical_rate",
    "predicted_rate",
    "convergence_study",
]

# Norms are sums of squares of differences of O(1) numbers, so rounding
# noise sits near 1e-12 relative; auto mode settles at this looser tolerance.
NORM_RTOL = 1e-10
# Absolute floor so that a vanishing error (pure rounding noise) also settles.
NORM_ATOL = 1e-15
# The direct form puts Gauss-Jacobi nodes of a strongly singular weight next
# to the endpoints; deeper grading would push them within rounding of 0 or 1.
DIRECT_LEVELS = 8


def _auto(norm_at: Callable[[int], float], N: int, quad_order: int) -> float:
    if quad_order not in (0, None):
        return norm_at(int(quad_order))
    q = N + AUTO_EXTRA
    prev = norm_at(q)
    while True:
        q2 = 2 * q
        if len(graded_jacobi_rule(0.0, 0.0, q2)) > MAX_NODES:
            warnings.warn("error norm quadrature did not settle", RuntimeWarning, stacklevel=3)
            return prev
        cur = norm_at(q2)
        if abs(cur - prev) <= max(NORM_RTOL * abs(cur), NORM_ATOL):
            return cur
        prev, q = cur, q2


def _reduced_error(sol: SpectralSolution, exact: Callable):
    basis = sol.solution_basis

    def g(t):
        return np.asarray(exact(t), dtype=float) / basis.weight(t) - reduced_solution(sol, t)

    return g


def error_weighted(sol: SpectralSolution, exact: Callable, quad_order: int = 0) -> float:
    """``||u - u_N||`` with weight ``(1-x)^-(alpha-beta) x^-beta``.

    The error is written as ``(1-x)^(alpha-beta) x^beta g(x)``; the norm squared
    is then the integral of ``g^2`` against ``(1-x)^(alpha-beta) x^beta``.
    """
    a, b = sol.alpha - sol.beta, sol.beta
    g = _reduced_error(sol, exact)

    def norm_at(q):
        rule = graded_jacobi_rule(a, b, q)
        return math.sqrt(rule.integrate(g(rule.nodes) ** 2))

    return _auto(norm_at, sol.N, quad_order)


def error_weighted_direct(sol: SpectralSolution, exact: Callable, quad_order: int = 0) -> float:
    """Same norm as :func:`error_weighted`, sampling the singular weight directly."""
    a, b = -(sol.alpha - sol.beta), -sol.beta
    if not (a > -1.0 and b > -1.0):
        raise DomainError("direct weighted norm needs 0 < beta < 1 and alpha - beta < 1")

    def norm_at(q):
        rule = graded_jacobi_rule(a, b, q, levels=DIRECT_LEVELS)
        t = rule.nodes
        diff = np.asarray(exact(t), dtype=float) - evaluate(sol, t)
        return math.sqrt(rule.integrate(diff**2))

    return _auto(norm_at, sol.N, quad_order)


def error_l2(sol: SpectralSolution, exact: Callable, quad_order: int = 0) -> float:
    """Plain ``L^2(0, 1)`` norm of ``u - u_N``, factored like :func:`error_weighted`."""
    a, b = 2.0 * (sol.alpha - sol.beta), 2.0 * sol.beta
    g = _reduced_error(sol, exact)

    def norm_at(q):
        rule = graded_jacobi_rule(a, b, q)
        return math.sqrt(rule.integrate(g(rule.nodes) ** 2))

    return _auto(norm_at, sol.N, quad_order)


def empirical_rate(e_prev: float, e_curr: float, N_prev: int, N_curr: int) -> float:
    """Observed order ``log(e_prev / e_curr) / log((N_curr + 1) / (N_prev + 1))``."""
    if not N_curr > N_prev:
        raise DomainError("N_curr must exceed N_prev")
    if not (e_prev > 0.0 and e_curr > 0.0):
        raise DomainError("errors must be positive")
    return math.log(e_prev / e_curr) / math.log((N_curr + 1.0) / (N_prev + 1.0))


def predicted_rate(alpha: float, beta: float) -> float:
    """Regularity-limited rate ``min(3 - beta, 3 - (alpha - beta))``.

    Valid for sources whose worst parts are ``x^(1-alpha)`` and ``(1-x)^(1-alpha)``.
    """
    return min(3.0 - beta, 3.0 - (alpha - beta))


class ConvergenceRow(NamedTuple):
    N: int
    err_weighted: float
    rate_weighted: Optional[float]
    err_l2: float
    rate_l2: Optional[float]


@dataclass(frozen=True)
class ConvergenceReport:
    alpha: float
    r: float
    beta: float
    predicted_rate: float
    rows: list = field(default_factory=list)
    name: str = ""


def convergence_study(
    spec: ProblemSpec,
    N_list: Sequence[int],
    quad_order: int = 0,
    workers: int = 1,
) -> ConvergenceReport:
    """Solve at each N and tabulate both error norms with consecutive rates.

    With ``workers > 1`` the solves run on a thread pool; rows are always
    reported in the order of ``N_list``.
    """
    if spec.exact_solution is None:
        raise DomainError("convergence study needs an exact solution")
    N_list = [int(n) for n in N_list]
    if not N_list or any(b <= a for a, b in zip(N_list, N_list[1:])) or N_list[0] < 0:
        raise DomainError("N_list must be a nonempty strictly increasing list of N >= 0")
    tp = transform(spec)
    exact = spec.exact_solution

    def one(N):
        sol = solve(tp, N, quad_order)
        return error_weighted(sol, exact, quad_order), error_l2(sol, exact, quad_order)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            errs = list(pool.map(one, N_list))
    else:
        errs = [one(N) for N in N_list]

    rows = []
    for i, (N, (ew, el)) in enumerate(zip(N_list, errs)):
        if i == 0:
            rows.append(ConvergenceRow(N, ew, None, el, None))
            continue
        Np, (ewp, elp) = N_list[i - 1], errs[i - 1]
        rows.append(
            ConvergenceRow(N, ew, empirical_rate(ewp, ew, Np, N), el, empirical_rate(elp, el, Np, N))
        )
    return ConvergenceReport(
        alpha=spec.alpha,
        r=spec.r,
        beta=tp.beta,
        predicted_rate=predicted_rate(spec.alpha, tp.beta),
        rows=rows,
        name=spec.name,
    )
