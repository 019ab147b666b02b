"""Self-check suites run by ``jacobifde verify``.

Each suite returns the largest residual it saw and whether that stayed within
its tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .problem import beta_residual, example_1, example_2, lambda_n, solve_beta, transform
from .quadrature import fractional_integral_oracle, gauss_jacobi_rule
from .solver import coefficient_residuals, solve
from .specfun import JacobiBasis, beta_fn, jacobi_eval, jacobi_norm, jacobi_table, weighted_jacobi_deriv_identity

__all__ = [
    "SuiteResult",
    "CAPTION_CASES",
    "SUITES",
    "eigen_relation_values",
    "eigen_relation_residuals",
    "run_suites",
]

# (alpha, r) pairs of the reference experiments.
CAPTION_CASES = ((1.70, 0.34), (1.40, 0.62), (1.70, 0.50), (1.40, 0.50))
TABLE_CASES = (
    (example_1, 1.70, 0.34),
    (example_1, 1.40, 0.62),
    (example_1, 1.70, 0.50),
    (example_2, 1.70, 0.34),
    (example_2, 1.40, 0.62),
    (example_2, 1.40, 0.50),
)
EIGEN_POINTS = (0.2, 0.5, 0.8)
ORTHO_PARAMS = (-0.9, -0.5, 0.0, 0.5, 1.3)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    max_residual: float
    tolerance: float
    checks: int

    @property
    def passed(self) -> bool:
        return bool(self.max_residual <= self.tolerance)

    def line(self) -> str:
        return f"{self.name}: {'PASS' if self.passed else 'FAIL'} ({self.max_residual:.3e})"


def eigen_relation_values(alpha, r, n_max=5, points=EIGEN_POINTS, order=60):
    """Operator applied to the weighted modes n = 0..n_max, next to its closed form.

    ``D(w G_n)`` comes from the weighted derivative identity and both fractional
    integrals from the Gauss-Jacobi oracle.  Returns ``(got, expected)`` with
    shape ``(n_max + 1, len(points))``.
    """
    beta = solve_beta(alpha, r)
    sigma = 2.0 - alpha
    left_e, right_e = beta - 1.0, alpha - beta - 1.0
    deriv_basis = JacobiBasis(right_e, left_e)
    rhs_basis = JacobiBasis(left_e, right_e)
    got = np.empty((n_max + 1, len(points)))
    expected = np.empty_like(got)
    for n in range(n_max + 1):
        def du(t, n=n):
            return weighted_jacobi_deriv_identity(deriv_basis, n + 1, t)

        lam = lambda_n(alpha, beta, n)
        for i, x in enumerate(points):
            expected[n, i] = lam * jacobi_eval(rhs_basis, n + 1, x)
            got[n, i] = r * fractional_integral_oracle(du, x, sigma, "left", order, left_e, right_e) + (
                1.0 - r
            ) * fractional_integral_oracle(du, x, sigma, "right", order, left_e, right_e)
    return got, expected


def eigen_relation_residuals(alpha, r, n_max=5, points=EIGEN_POINTS, order=60):
    """Eigen-relation errors, each scaled by ``|lambda_n| max_x |G_{n+1}(x)|``.

    The scaling keeps sample points on a node of ``G_{n+1}`` (where the exact
    value vanishes) from blowing up the relative error.
    """
    got, expected = eigen_relation_values(alpha, r, n_max, points, order)
    scale = np.max(np.abs(expected), axis=1, keepdims=True)
    return (np.abs(got - expected) / scale).ravel()


def _eigen_relation():
    res = np.concatenate([eigen_relation_residuals(a, r) for a, r in CAPTION_CASES])
    return SuiteResult("eigen-relation", float(res.max()), 1e-6, res.size)


def _quadrature_exactness(seed=20240611, draws=40):
    rng = np.random.default_rng(seed)
    worst, count = 0.0, 0
    for _ in range(draws):
        a, b = rng.uniform(-1.0, 2.0, size=2)
        a, b = max(a, -0.999), max(b, -0.999)
        n = int(rng.integers(1, 41))
        rule = gauss_jacobi_rule(a, b, n)
        t = rule.nodes
        for deg in {0, n, 2 * n - 1}:
            for k in {0, deg // 2, deg}:
                m = deg - k
                exact = beta_fn(b + k + 1.0, a + m + 1.0)
                got = rule.integrate(t**k * (1.0 - t) ** m)
                worst = max(worst, abs(got - exact) / exact)
                count += 1
    return SuiteResult("quadrature exactness", worst, 1e-11, count)


def _beta_residuals():
    worst, count = 0.0, 0
    for alpha in np.round(np.arange(1.1, 1.95, 0.1), 10):
        for r in np.round(np.arange(0.0, 1.05, 0.1), 10):
            beta = solve_beta(alpha, r)
            inside = alpha - 1.0 <= beta <= 1.0
            if r in (0.0, 1.0):
                res = abs(beta - (1.0 if r == 0.0 else alpha - 1.0))
            else:
                res = abs(beta_residual(alpha, r, beta))
            worst = max(worst, res if inside else np.inf)
            count += 1
        worst = max(worst, abs(solve_beta(alpha, 0.5) - alpha / 2.0))
    return SuiteResult("beta residuals", worst, 1e-13, count)


def _orthogonality(deg=12):
    worst, count = 0.0, 0
    for a in ORTHO_PARAMS:
        for b in ORTHO_PARAMS:
            basis = JacobiBasis(a, b)
            rule = gauss_jacobi_rule(a, b, deg + 2)
            table = jacobi_table(basis, deg, rule.nodes)
            gram = (table * rule.weights) @ table.T
            norms = np.array([jacobi_norm(basis, j) ** 2 for j in range(deg + 1)])
            off = gram - np.diag(np.diag(gram))
            worst = max(worst, np.max(np.abs(off)), np.max(np.abs(np.diag(gram) / norms - 1.0)))
            count += gram.size
    return SuiteResult("orthogonality", float(worst), 1e-11, count)


def _norm_ratio(j_max=50):
    worst, count = 0.0, 0
    for alpha, r in CAPTION_CASES:
        beta = solve_beta(alpha, r)
        sol_basis = JacobiBasis(alpha - beta, beta)
        rhs_basis = JacobiBasis(beta - 1.0, alpha - beta - 1.0)
        for j in range(j_max + 1):
            ratio = jacobi_norm(sol_basis, j) ** 2 / jacobi_norm(rhs_basis, j + 1) ** 2
            target = (j + 1.0) / (j + alpha)
            res = abs(ratio / target - 1.0)
            worst = max(worst, res if 0.5 <= ratio <= 1.0 else np.inf)
            count += 1
    return SuiteResult("norm ratio", worst, 1e-12, count)


def _lambda_recurrence(n_max=200):
    worst, count = 0.0, 0
    for alpha, r in CAPTION_CASES:
        beta = solve_beta(alpha, r)
        prev = lambda_n(alpha, beta, 0)
        for n in range(1, n_max + 1):
            cur = lambda_n(alpha, beta, n)
            worst = max(worst, abs(cur / (prev * (n - 1.0 + alpha) / n) - 1.0))
            prev = cur
            count += 1
    return SuiteResult("lambda recurrence", worst, 1e-13, count)


def _coefficient_residuals(N=24):
    worst, count = 0.0, 0
    for make, alpha, r in TABLE_CASES:
        sol = solve(transform(make(alpha, r)), N)
        worst = max(worst, *coefficient_residuals(sol))
        count += N + 2
    return SuiteResult("coefficient residuals", worst, 1e-12, count)


SUITES: dict[str, Callable[[], SuiteResult]] = {
    "eigen-relation": _eigen_relation,
    "quadrature exactness": _quadrature_exactness,
    "beta residuals": _beta_residuals,
    "orthogonality": _orthogonality,
    "norm ratio": _norm_ratio,
    "lambda recurrence": _lambda_recurrence,
    "coefficient residuals": _coefficient_residuals,
}


def run_suites(names=None) -> list[SuiteResult]:
    names = list(SUITES) if names is None else list(names)
    return [SUITES[name]() for name in names]
