"""Gauss-Jacobi quadrature on (0, 1) and integration of algebraically
singular integrands.

Two rule families share the :class:`QuadratureRule` type, both approximating
``int_0^1 (1-t)^a t^b phi(t) dt`` by ``sum(w_i * phi(t_i))``:

* :func:`gauss_jacobi_rule` -- the classical n-point rule (Golub-Welsch),
  exact for polynomial ``phi`` of degree <= 2n - 1;
* :func:`graded_jacobi_rule` -- a composite rule with panels refined
  geometrically towards both endpoints, Gauss-Jacobi on the two panels that
  touch an endpoint and Gauss-Legendre elsewhere.  It converges
  exponentially for ``phi`` with mixed power-type endpoint behavior such as
  ``c0 + c1 t^0.3 + ...``, where the classical rule only converges
  algebraically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from .errors import ConvergenceError, DomainError, NonFiniteError
from .specfun import beta_fn, log_gamma

__all__ = [
    "QuadratureRule",
    "gauss_jacobi_rule",
    "graded_jacobi_rule",
    "inner_product",
    "integrate_to",
    "fractional_integral_oracle",
]

GRADING_RATIO = 0.15
GRADING_LEVELS = 14
# Grading depth for integrals running up to a singular x = 1.
_FULL_RIGHT_LEVELS = 6
# Nodes near t = 1 are stored as 1 - s; s below this keeps too few digits.
_MIN_RIGHT_DISTANCE = 1e-13


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and positive weights for the weight ``(1-t)^a t^b`` on (0, 1)."""

    a: float
    b: float
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.shape != weights.shape or nodes.ndim != 1:
            raise ValueError("nodes and weights must be 1-d arrays of equal length")
        if not (np.all(nodes > 0.0) and np.all(nodes < 1.0)):
            raise ConvergenceError("quadrature node outside the open interval (0, 1)")
        if not np.all(np.diff(nodes) > 0.0):
            raise ConvergenceError("quadrature nodes are not strictly increasing")
        if not np.all(weights > 0.0):
            raise ConvergenceError("nonpositive quadrature weight")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __len__(self):
        return len(self.nodes)

    def integrate(self, values) -> float:
        values = np.asarray(values, dtype=float)
        if not np.all(np.isfinite(values)):
            raise NonFiniteError("non-finite integrand sample at a quadrature node")
        return float(values @ self.weights)


def _jacobi_matrix(a, b, n):
    """Symmetric tridiagonal Jacobi matrix of the monic recurrence on [-1, 1]."""
    k = np.arange(n, dtype=float)
    ab = a + b
    diag = np.empty(n)
    diag[0] = (b - a) / (ab + 2.0)
    s = 2.0 * k[1:] + ab
    diag[1:] = (b * b - a * a) / (s * (s + 2.0))
    off = np.empty(max(n - 1, 0))
    if n > 1:
        off[0] = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) ** 2 * (3.0 + ab))
        j = k[2:n]
        s = 2.0 * j + ab
        off[1:] = 4.0 * j * (j + a) * (j + b) * (j + ab) / (s * s * (s + 1.0) * (s - 1.0))
    return diag, np.sqrt(off)


@lru_cache(maxsize=256)
def gauss_jacobi_rule(a: float, b: float, n: int) -> QuadratureRule:
    """n-point Gauss-Jacobi rule for ``(1-t)^a t^b`` on (0, 1), by Golub-Welsch."""
    a, b = float(a), float(b)
    if not (a > -1.0 and b > -1.0):
        raise DomainError(f"weight exponents must exceed -1, got ({a}, {b})")
    if n < 1:
        raise DomainError(f"number of nodes must be positive, got {n}")
    diag, off = _jacobi_matrix(a, b, n)
    # x = 2t - 1 maps the [-1, 1] matrix onto [0, 1].
    try:
        nodes, vecs = eigh_tridiagonal(0.5 * (1.0 + diag), 0.5 * off, lapack_driver="stev")
    except LinAlgError as exc:
        raise ConvergenceError(f"tridiagonal eigensolve failed for n={n}: {exc}") from exc
    weights = beta_fn(a + 1.0, b + 1.0) * vecs[0] ** 2
    return QuadratureRule(a, b, nodes, weights)


def _graded_half(a_near, a_far, n, levels, ratio):
    """Panels on (0, 1/2) graded towards 0, for ``s^a_near (1-s)^a_far``.

    Returns distances ``s`` from the endpoint and the matching weights.
    """
    breaks = 0.5 * ratio ** np.arange(levels, -1, -1, dtype=float)
    first = gauss_jacobi_rule(0.0, a_near, n)
    h = breaks[0]
    s = [h * first.nodes]
    w = [h ** (1.0 + a_near) * first.weights * (1.0 - h * first.nodes) ** a_far]
    leg = gauss_jacobi_rule(0.0, 0.0, n)
    lo, hi = breaks[:-1, None], breaks[1:, None]
    ps = lo + (hi - lo) * leg.nodes
    s.append(ps.ravel())
    w.append(((hi - lo) * leg.weights * ps**a_near * (1.0 - ps) ** a_far).ravel())
    return np.concatenate(s), np.concatenate(w)


@lru_cache(maxsize=256)
def graded_jacobi_rule(
    a: float, b: float, n: int, levels: int = GRADING_LEVELS, ratio: float = GRADING_RATIO
) -> QuadratureRule:
    """Composite rule for ``(1-t)^a t^b`` on (0, 1) with ``n`` points per panel.

    Each half of the interval is cut at ``0.5 * ratio**k`` (k = 0..levels),
    measured from its endpoint.  The panel touching the endpoint carries the
    singular factor in a Gauss-Jacobi weight; the others use Gauss-Legendre
    with the weight sampled.  Total size is at most ``2 * (levels + 1) * n``:
    the right half is graded less deeply if its nodes would come within
    ``1e-13`` of t = 1, where ``1 - s`` can no longer be represented accurately.
    """
    a, b = float(a), float(b)
    if not (a > -1.0 and b > -1.0):
        raise DomainError(f"weight exponents must exceed -1, got ({a}, {b})")
    if n < 1 or levels < 0 or not 0.0 < ratio < 1.0:
        raise DomainError("invalid grading parameters")
    s_left, w_left = _graded_half(b, a, n, levels, ratio)
    right_levels = levels
    closest = gauss_jacobi_rule(0.0, a, n).nodes[0]
    while right_levels > 0 and 0.5 * ratio**right_levels * closest < _MIN_RIGHT_DISTANCE:
        right_levels -= 1
    s_right, w_right = _graded_half(a, b, n, right_levels, ratio)
    nodes = np.concatenate([s_left, (1.0 - s_right)[::-1]])
    weights = np.concatenate([w_left, w_right[::-1]])
    return QuadratureRule(a, b, nodes, weights)


def inner_product(rule: QuadratureRule, g: Callable, h: Callable) -> float:
    """Weighted inner product ``(g, h)`` under the rule's weight."""
    t = rule.nodes
    return rule.integrate(np.asarray(g(t), dtype=float) * np.asarray(h(t), dtype=float))


def _sample(f, y):
    vals = np.asarray(f(y), dtype=float)
    if vals.shape != np.shape(y):
        vals = np.broadcast_to(vals, np.shape(y))
    if not np.all(np.isfinite(vals)):
        raise NonFiniteError("non-finite sample of the integrand")
    return vals


def _graded_unit(exponent, n):
    """Rule on (0, 1) for ``s^exponent * phi(s)``, graded towards s = 0 only."""
    s, w = _graded_half(exponent, 0.0, n, GRADING_LEVELS, GRADING_RATIO)
    # Scale (0, 1/2) onto (0, 1).
    return 2.0 * s, 2.0 ** (1.0 + exponent) * w


def _integrate_from_left(f, x, exponent, n):
    """``int_0^x f`` for x in a 1-d array; singularity of order ``exponent`` at 0."""
    s, w = _graded_unit(exponent, n)
    w = w * s ** (-exponent)
    y = x[:, None] * s[None, :]
    return x * (_sample(f, y) @ w)


def _integrate_from_right(f, exponent, n):
    """``int_{1/2}^1 f`` with a singularity of order ``exponent`` at 1."""
    # The innermost panel is kept wide: 1 - y loses relative accuracy when y
    # is within ~1e-13 of 1, and that error is amplified near the singularity.
    s, w = _graded_half(exponent, 0.0, n, _FULL_RIGHT_LEVELS, GRADING_RATIO)
    w = w * s ** (-exponent)
    return float(_sample(f, 1.0 - s) @ w)


def _integrate_half_to(f, x, n):
    """``int_{1/2}^x f`` for x in (1/2, 1) with f possibly singular at 1.

    Panels are graded by the distance ``1 - x`` so that samples stay left of x
    and the nearby singularity is resolved geometrically.
    """
    d = 1.0 - x
    growth = 1.0 / GRADING_RATIO
    count = int(np.ceil(np.log(0.5 / d.min()) / math.log(growth))) + 1
    dist = d[:, None] * growth ** np.arange(count + 1)[None, :]
    dist = np.minimum(dist, 0.5)
    lo, hi = dist[:, :-1, None], dist[:, 1:, None]
    leg = gauss_jacobi_rule(0.0, 0.0, n)
    y = 1.0 - (lo + (hi - lo) * leg.nodes)
    vals = _sample(f, y)
    return np.sum((hi - lo) * leg.weights * vals, axis=(1, 2))


def integrate_to(
    f: Callable,
    x,
    endpoint_exponent: float,
    n: int = 40,
    right_exponent: float | None = None,
):
    """``int_0^x f(y) dy`` for f behaving like ``y^endpoint_exponent`` at 0.

    When ``right_exponent`` is given, f may also be singular at y = 1; for
    x > 1/2 the piece beyond 1/2 is then integrated on panels graded towards
    the singularity.  ``n`` is the number of points per panel.
    """
    if not endpoint_exponent > -1.0 or (right_exponent is not None and not right_exponent > -1.0):
        raise DomainError("endpoint exponents must exceed -1")
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x_arr < 0.0) or np.any(x_arr > 1.0):
        raise DomainError("integrate_to needs x in [0, 1]")
    out = np.zeros_like(x_arr)
    if right_exponent is None:
        pos = x_arr > 0.0
        out[pos] = _integrate_from_left(f, x_arr[pos], endpoint_exponent, n)
    else:
        left = (x_arr > 0.0) & (x_arr <= 0.5)
        out[left] = _integrate_from_left(f, x_arr[left], endpoint_exponent, n)
        right = x_arr > 0.5
        if np.any(right):
            head = _integrate_from_left(f, np.array([0.5]), endpoint_exponent, n)[0]
            xr = x_arr[right]
            part = np.empty_like(xr)
            inner = xr < 1.0
            if np.any(inner):
                part[inner] = _integrate_half_to(f, xr[inner], n)
            part[~inner] = _integrate_from_right(f, right_exponent, n)
            out[right] = head + part
    return out[0] if np.ndim(x) == 0 else out


def fractional_integral_oracle(
    g: Callable,
    x: float,
    sigma: float,
    side: str = "left",
    n: int = 60,
    g_exponent_left: float = 0.0,
    g_exponent_right: float = 0.0,
) -> float:
    """Riemann-Liouville integral of order ``sigma`` of g at x by Gauss-Jacobi.

    ``side="left"`` integrates over (0, x) with kernel ``(x - s)^(sigma-1)``,
    ``side="right"`` over (x, 1) with ``(s - x)^(sigma-1)``.  The kernel
    exponent goes into the weight at s = x and g's declared endpoint exponent
    at the outer end.  Intended for verification only.
    """
    if not 0.0 < sigma < 1.0:
        raise DomainError(f"sigma must lie in (0, 1), got {sigma!r}")
    if not 0.0 < x < 1.0:
        raise DomainError(f"x must lie in (0, 1), got {x!r}")
    scale = -log_gamma(sigma)
    if side == "left":
        e = g_exponent_left
        rule = gauss_jacobi_rule(sigma - 1.0, e, n)
        s = x * rule.nodes
        vals = _sample(g, s) * s ** (-e) * x**e
        length = x
    elif side == "right":
        e = g_exponent_right
        rule = gauss_jacobi_rule(e, sigma - 1.0, n)
        s = x + (1.0 - x) * rule.nodes
        vals = _sample(g, s) * (1.0 - s) ** (-e) * (1.0 - x) ** e
        length = 1.0 - x
    else:
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")
    return math.exp(scale) * length**sigma * rule.integrate(vals)
