"""Spectral Jacobi-polynomial solver for the two-sided fractional diffusion
equation ``-D[K (r 0I_x^(2-alpha) + (1-r) xI_1^(2-alpha)) Du] = f`` on (0, 1)
with homogeneous Dirichlet conditions."""

from .analysis import (
    ConvergenceReport,
    ConvergenceRow,
    convergence_study,
    empirical_rate,
    error_l2,
    error_weighted,
    error_weighted_direct,
    predicted_rate,
)
from .errors import ConfigError, ConvergenceError, DomainError, NonFiniteError
from .problem import (
    ProblemSpec,
    TransformedProblem,
    beta_residual,
    example_1,
    example_2,
    lambda_n,
    solve_beta,
    transform,
)
from .quadrature import (
    QuadratureRule,
    fractional_integral_oracle,
    gauss_jacobi_rule,
    graded_jacobi_rule,
    inner_product,
    integrate_to,
)
from .solver import SpectralSolution, apply_operator, compute_A, evaluate, project, solve
from .specfun import (
    JacobiBasis,
    beta_fn,
    gauss_2f1,
    jacobi_deriv,
    jacobi_eval,
    jacobi_norm,
    jacobi_table,
    log_gamma,
    weighted_jacobi_deriv_identity,
)

__version__ = "0.1.0"
