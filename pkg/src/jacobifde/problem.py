"""Problem definition for the two-sided fractional diffusion equation

    -D[K(x) (r 0I_x^(2-alpha) + (1-r) xI_1^(2-alpha)) Du] = f,  u(0) = u(1) = 0,

its reduction to the constant-coefficient form

    L u := -(r 0I_x^(2-alpha) + (1-r) xI_1^(2-alpha)) Du = f1 - A f2,

with ``f1 = (1/K) int_0^x f`` and ``f2 = 1/K``, and the two built-in test
problems.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError
from .quadrature import integrate_to
from .specfun import JacobiBasis, beta_fn, gauss_2f1, log_gamma

__all__ = [
    "ProblemSpec",
    "TransformedProblem",
    "solve_beta",
    "beta_residual",
    "lambda_n",
    "transform",
    "example_1",
    "example_2",
]

BETA_TOL = 1e-14
K_CHECK_POINTS = 1001
# Below this n, Gamma(n + alpha) / n! is summed term by term in log space;
# the plain lgamma difference loses about n * eps to cancellation.
_LOG_RATIO_SUM_MAX = 10_000


def _balance(alpha: float, beta: float) -> float:
    sb = math.sin(math.pi * beta)
    return sb / (math.sin(math.pi * (alpha - beta)) + sb)


def beta_residual(alpha: float, r: float, beta: float) -> float:
    """Residual of the equation fixing beta from (alpha, r)."""
    return r - _balance(alpha, beta)


def _check_alpha_r(alpha, r):
    if not 1.0 < alpha < 2.0:
        raise DomainError(f"alpha must lie in (1, 2), got {alpha!r}")
    if not 0.0 <= r <= 1.0:
        raise DomainError(f"r must lie in [0, 1], got {r!r}")


def solve_beta(alpha: float, r: float) -> float:
    """Jacobi exponent beta in [alpha - 1, 1] balancing the two-sided operator.

    Solves ``r = sin(pi b) / (sin(pi (alpha - b)) + sin(pi b))`` by bisection.
    The right side falls from 1 at ``b = alpha - 1`` to 0 at ``b = 1``.
    """
    _check_alpha_r(alpha, r)
    if r == 0.0:
        return 1.0
    if r == 1.0:
        return alpha - 1.0
    lo, hi = alpha - 1.0, 1.0
    while hi - lo >= BETA_TOL:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if beta_residual(alpha, r, mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _log_gamma_ratio(n: int, alpha: float) -> float:
    """``log(Gamma(n + alpha) / n!)``."""
    if n > _LOG_RATIO_SUM_MAX:
        return log_gamma(n + alpha) - log_gamma(n + 1.0)
    shift = alpha - 1.0
    return log_gamma(alpha) + math.fsum(math.log1p(shift / k) for k in range(1, n + 1))


def lambda_n(alpha: float, beta: float, n: int) -> float:
    """Eigenvalue of the two-sided operator on the n-th weighted Jacobi mode.

    Negative for alpha in (1, 2).
    """
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    ratio = math.exp(_log_gamma_ratio(n, alpha))
    return math.sin(math.pi * alpha) / (
        math.sin(math.pi * (alpha - beta)) + math.sin(math.pi * beta)
    ) * ratio


@dataclass(frozen=True)
class ProblemSpec:
    """One instance of the fractional diffusion problem.

    ``f_left_exponent`` / ``f_right_exponent`` declare the power behavior of
    f at x = 0 and x = 1 (f ~ x^e near 0, f ~ (1-x)^e near 1).  They steer the
    quadrature when ``f_antiderivative`` is not supplied.
    """

    alpha: float
    r: float
    K: Callable
    f: Callable
    f_antiderivative: Optional[Callable] = None
    f_left_exponent: float = 0.0
    f_right_exponent: float = 0.0
    exact_solution: Optional[Callable] = None
    name: str = ""

    def __post_init__(self):
        _check_alpha_r(self.alpha, self.r)
        if not (self.f_left_exponent > -1.0 and self.f_right_exponent > -1.0):
            raise DomainError("endpoint exponents of f must exceed -1")
        grid = np.linspace(0.0, 1.0, K_CHECK_POINTS)
        k_vals = np.broadcast_to(np.asarray(self.K(grid), dtype=float), grid.shape)
        if not np.all(np.isfinite(k_vals)) or not np.all(k_vals > 0.0):
            raise DomainError("diffusivity K must be finite and positive on [0, 1]")


@dataclass(frozen=True)
class TransformedProblem:
    """Data of the constant-coefficient form; ``A`` is fixed later by the solver."""

    spec: ProblemSpec
    beta: float
    f1: Callable
    f2: Callable
    A: Optional[float] = None

    @property
    def alpha(self) -> float:
        return self.spec.alpha

    @property
    def rhs_basis(self) -> JacobiBasis:
        """Basis ``(beta - 1, alpha - beta - 1)`` in which f1 and f2 are expanded."""
        return JacobiBasis(self.beta - 1.0, self.alpha - self.beta - 1.0)

    @property
    def solution_basis(self) -> JacobiBasis:
        """Basis ``(alpha - beta, beta)`` carrying the solution expansion."""
        return JacobiBasis(self.alpha - self.beta, self.beta)

    def lam(self, n: int) -> float:
        return lambda_n(self.alpha, self.beta, n)


def _reciprocal(K):
    def f2(x):
        x = np.asarray(x, dtype=float)
        return 1.0 / np.broadcast_to(np.asarray(K(x), dtype=float), x.shape)

    return f2


def transform(spec: ProblemSpec, n: int = 40) -> TransformedProblem:
    """Build beta, f1 and f2 for ``spec``.

    Without a closed-form antiderivative, ``int_0^x f`` is computed by graded
    quadrature with ``n`` points per panel, using the declared exponents.
    """
    beta = solve_beta(spec.alpha, spec.r)
    K = spec.K
    if spec.f_antiderivative is not None:
        F = spec.f_antiderivative
    else:
        def F(x):
            return integrate_to(
                spec.f, x, spec.f_left_exponent, n, right_exponent=spec.f_right_exponent
            )

    def f1(x):
        x = np.asarray(x, dtype=float)
        return np.asarray(F(x), dtype=float) / np.asarray(K(x), dtype=float)

    return TransformedProblem(spec=spec, beta=beta, f1=f1, f2=_reciprocal(K))


def _one(x):
    return np.ones_like(np.asarray(x, dtype=float))


def example_1(alpha: float, r: float) -> ProblemSpec:
    """Constant diffusivity with source built from ``x^(1-alpha)`` and ``(1-x)^(1-alpha)``.

    The exact solution is ``x - I_x(beta, alpha - beta)``, the regularized
    incomplete Beta function written through 2F1; near x = 1 it is
    evaluated from the reflected form so the series argument stays below 1/2.
    """
    _check_alpha_r(alpha, r)
    beta = solve_beta(alpha, r)
    g2 = math.gamma(2.0 - alpha)
    g3 = math.gamma(3.0 - alpha)
    e = 1.0 - alpha

    def f(x):
        x = np.asarray(x, dtype=float)
        return (-r * x**e + (1.0 - r) * (1.0 - x) ** e) / g2

    def antiderivative(x):
        x = np.asarray(x, dtype=float)
        return (-r * x ** (2.0 - alpha) + (1.0 - r) * (1.0 - (1.0 - x) ** (2.0 - alpha))) / g3

    ab = alpha - beta
    left_norm = gauss_2f1(1.0 + beta - alpha, beta, beta + 1.0, 1.0)
    right_norm = ab * beta_fn(ab, beta)

    def exact(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        lo = (x > 0.0) & (x <= 0.5)
        hi = (x > 0.5) & (x < 1.0)
        xl = x[lo]
        out[lo] = xl - xl**beta * gauss_2f1(1.0 + beta - alpha, beta, beta + 1.0, xl) / left_norm
        y = 1.0 - x[hi]
        out[hi] = -y + y**ab * gauss_2f1(ab, 1.0 - beta, ab + 1.0, y) / right_norm
        return out[()]

    return ProblemSpec(
        alpha=alpha,
        r=r,
        K=_one,
        f=f,
        f_antiderivative=antiderivative,
        f_left_exponent=e,
        f_right_exponent=e,
        exact_solution=exact,
        name="example1",
    )


def example_2(alpha: float, r: float) -> ProblemSpec:
    """Diffusivity ``K = e^x`` with exact solution ``u = x (1 - x)``."""
    _check_alpha_r(alpha, r)
    g2 = math.gamma(2.0 - alpha)
    g3 = math.gamma(3.0 - alpha)
    g4 = math.gamma(4.0 - alpha)
    e = 1.0 - alpha

    def f(x):
        x = np.asarray(x, dtype=float)
        y = 1.0 - x
        left = x**e / g2 - x ** (2.0 - alpha) / g3 - 2.0 * x ** (3.0 - alpha) / g4
        right = y**e / g2 - 3.0 * y ** (2.0 - alpha) / g3 + 2.0 * y ** (3.0 - alpha) / g4
        return -np.exp(x) * (r * left + (1.0 - r) * right)

    # f = -e^x (phi + phi'), so int_0^x f = phi(0) - e^x phi(x).
    def phi(x):
        y = 1.0 - x
        return r * (x ** (2.0 - alpha) / g3 - 2.0 * x ** (3.0 - alpha) / g4) + (1.0 - r) * (
            -(y ** (2.0 - alpha)) / g3 + 2.0 * y ** (3.0 - alpha) / g4
        )

    phi0 = phi(0.0)

    def antiderivative(x):
        x = np.asarray(x, dtype=float)
        return phi0 - np.exp(x) * phi(x)

    def exact(x):
        x = np.asarray(x, dtype=float)
        return x * (1.0 - x)

    return ProblemSpec(
        alpha=alpha,
        r=r,
        K=np.exp,
        f=f,
        f_antiderivative=antiderivative,
        f_left_exponent=e,
        f_right_exponent=e,
        exact_solution=exact,
        name="example2",
    )
