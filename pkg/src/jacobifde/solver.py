"""Spectral solution of ``L u = f1 - A f2`` by Jacobi decomposition.

With f1 and f2 expanded in ``G_j^{(beta-1, alpha-beta-1)}`` and the solution
written as ``u = (1-x)^(alpha-beta) x^beta sum_j c_j G_j^{(alpha-beta, beta)}``,
the operator is diagonal: ``L`` maps mode j to ``-lambda_j G_{j+1}``.  Matching
coefficients gives

    f_{1,0} - A f_{2,0} = 0,     c_j = (A f_{2,j+1} - f_{1,j+1}) / lambda_j.

No linear system is assembled.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError
from .problem import TransformedProblem, lambda_n
from .quadrature import QuadratureRule, graded_jacobi_rule, inner_product
from .specfun import JacobiBasis, jacobi_norm, jacobi_table

__all__ = [
    "SpectralSolution",
    "AUTO_EXTRA",
    "MAX_NODES",
    "projection_rule",
    "project",
    "compute_A",
    "compute_A_ratio",
    "solve",
    "evaluate",
    "apply_operator",
    "coefficient_residuals",
]

AUTO_EXTRA = 40
AUTO_RTOL = 1e-12
MAX_NODES = 2**14


@dataclass(frozen=True, eq=False)
class SpectralSolution:
    """Truncated expansion ``u_N`` together with the data that produced it."""

    alpha: float
    beta: float
    N: int
    coeffs: np.ndarray
    A: float
    f1_coeffs: np.ndarray
    f2_coeffs: np.ndarray
    quad_order: int = 0

    def __post_init__(self):
        if len(self.coeffs) != self.N + 1:
            raise ValueError("coeffs must have N + 1 entries")
        if len(self.f1_coeffs) != self.N + 2 or len(self.f2_coeffs) != self.N + 2:
            raise ValueError("projections must have N + 2 entries")
        for arr in (self.coeffs, self.f1_coeffs, self.f2_coeffs):
            arr.setflags(write=False)

    @property
    def solution_basis(self) -> JacobiBasis:
        return JacobiBasis(self.alpha - self.beta, self.beta)

    @property
    def rhs_basis(self) -> JacobiBasis:
        return JacobiBasis(self.beta - 1.0, self.alpha - self.beta - 1.0)

    def lambdas(self) -> np.ndarray:
        return np.array([lambda_n(self.alpha, self.beta, j) for j in range(self.N + 1)])

    def __call__(self, x):
        return evaluate(self, x)


def projection_rule(basis: JacobiBasis, quad_order: int) -> QuadratureRule:
    """Graded rule for ``basis``'s weight with ``quad_order`` points per panel."""
    return graded_jacobi_rule(basis.a, basis.b, int(quad_order))


def project(
    g: Callable,
    basis: JacobiBasis,
    N: int,
    quad_order: int,
    rule: Optional[QuadratureRule] = None,
) -> np.ndarray:
    """Coefficients ``g_j = (g, G_j) / ||G_j||^2`` for j = 0..N."""
    if N < 0:
        raise DomainError(f"N must be nonnegative, got {N}")
    if rule is None:
        rule = projection_rule(basis, quad_order)
    t = rule.nodes
    vals = np.broadcast_to(np.asarray(g(t), dtype=float), t.shape)
    table = jacobi_table(basis, N, t)
    raw = np.array([rule.integrate(vals * table[j]) for j in range(N + 1)])
    norms_sq = np.array([jacobi_norm(basis, j) ** 2 for j in range(N + 1)])
    return raw / norms_sq


def compute_A(f1_coeffs, f2_coeffs) -> float:
    """Integration constant from the degree-0 condition ``f_{1,0} = A f_{2,0}``."""
    den = float(f2_coeffs[0])
    if not np.isfinite(den) or abs(den) < 1e-300:
        raise DomainError("degenerate f2 projection; K is not a valid diffusivity")
    return float(f1_coeffs[0]) / den


def compute_A_ratio(tp: TransformedProblem, rule: QuadratureRule) -> float:
    """Integration constant as the ratio ``(f1, 1) / (1/K, 1)`` of weighted integrals."""
    num = inner_product(rule, tp.f1, np.ones_like)
    den = inner_product(rule, tp.f2, np.ones_like)
    if abs(den) < 1e-300:
        raise DomainError("degenerate weighted integral of 1/K")
    return num / den


def _relative_change(old, new):
    scale = max(np.max(np.abs(new)), 1e-300)
    return float(np.max(np.abs(new - old)) / scale)


def _auto_projections(tp: TransformedProblem, M: int):
    basis = tp.rhs_basis
    q = M + AUTO_EXTRA
    both = np.concatenate([project(tp.f1, basis, M, q), project(tp.f2, basis, M, q)])
    while True:
        q2 = 2 * q
        if len(projection_rule(basis, q2)) > MAX_NODES:
            warnings.warn(
                f"projection quadrature did not settle to {AUTO_RTOL:g} "
                f"within {MAX_NODES} nodes; using {q} points per panel",
                RuntimeWarning,
                stacklevel=3,
            )
            return both[: M + 1], both[M + 1 :], q
        nxt = np.concatenate([project(tp.f1, basis, M, q2), project(tp.f2, basis, M, q2)])
        if _relative_change(both, nxt) < AUTO_RTOL:
            return nxt[: M + 1], nxt[M + 1 :], q2
        both, q = nxt, q2


def solve(tp: TransformedProblem, N: int, quad_order: int = 0) -> SpectralSolution:
    """Spectral solution with N + 1 modes.

    ``quad_order`` is the number of points per panel of the graded projection
    rule; 0 selects the automatic policy (start at N + 40 and double until the
    projections change by less than 1e-12 relative).
    """
    if N < 0:
        raise DomainError(f"N must be nonnegative, got {N}")
    M = N + 1
    if quad_order in (0, None):
        f1c, f2c, used = _auto_projections(tp, M)
    else:
        if quad_order < 1:
            raise DomainError(f"quad_order must be positive, got {quad_order}")
        f1c = project(tp.f1, tp.rhs_basis, M, quad_order)
        f2c = project(tp.f2, tp.rhs_basis, M, quad_order)
        used = int(quad_order)
    A = compute_A(f1c, f2c)
    lam = np.array([tp.lam(j) for j in range(N + 1)])
    coeffs = (A * f2c[1:] - f1c[1:]) / lam
    return SpectralSolution(
        alpha=tp.alpha,
        beta=tp.beta,
        N=N,
        coeffs=coeffs,
        A=A,
        f1_coeffs=np.asarray(f1c, dtype=float),
        f2_coeffs=np.asarray(f2c, dtype=float),
        quad_order=used,
    )


def _interior(x):
    x = np.asarray(x, dtype=float)
    return x, (x > 0.0) & (x < 1.0)


def evaluate(sol: SpectralSolution, x):
    """``u_N(x)``; exactly 0 at and outside the endpoints."""
    x, inside = _interior(x)
    out = np.zeros_like(x)
    xi = x[inside]
    basis = sol.solution_basis
    series = sol.coeffs @ jacobi_table(basis, sol.N, xi)
    out[inside] = basis.weight(xi) * series
    return out[()]


def reduced_solution(sol: SpectralSolution, x):
    """``u_N(x) / ((1-x)^(alpha-beta) x^beta)``, a polynomial of degree N."""
    return (sol.coeffs @ jacobi_table(sol.solution_basis, sol.N, np.asarray(x, dtype=float)))[()]


def apply_operator(sol: SpectralSolution, x):
    """Exact action of ``L`` on ``u_N``: ``-sum_j c_j lambda_j G_{j+1}(x)``."""
    x = np.asarray(x, dtype=float)
    table = jacobi_table(sol.rhs_basis, sol.N + 1, x)
    return (-(sol.coeffs * sol.lambdas()) @ table[1:])[()]


def coefficient_residuals(sol: SpectralSolution) -> tuple[float, float]:
    """Relative residuals of the mode equations and of the degree-0 condition."""
    f1c, f2c = sol.f1_coeffs, sol.f2_coeffs
    target = -(f1c[1:] - sol.A * f2c[1:])
    got = sol.coeffs * sol.lambdas()
    scale = np.maximum(np.abs(target), 1e-300)
    mode = float(np.max(np.abs(got - target) / scale))
    zero = abs(f1c[0] - sol.A * f2c[0]) / max(1.0, abs(f1c[0]))
    return mode, float(zero)
