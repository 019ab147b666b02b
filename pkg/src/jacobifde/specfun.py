"""Special functions: log-gamma, Beta, Gauss hypergeometric 2F1 and shifted
Jacobi polynomials on [0, 1].

The shifted Jacobi polynomial ``G_n^{(a,b)}(t) = P_n^{(a,b)}(2t - 1)`` is
orthogonal on (0, 1) under the weight ``(1 - t)**a * t**b``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError

__all__ = [
    "JacobiBasis",
    "log_gamma",
    "beta_fn",
    "gauss_2f1",
    "jacobi_eval",
    "jacobi_table",
    "jacobi_norm",
    "jacobi_deriv",
    "weighted_jacobi_deriv_identity",
]

SERIES_RTOL = 1e-16
SERIES_MAX_TERMS = 1_000_000
# Above this argument the 2F1 series is replaced by the 1 - x connection formula.
_CONNECTION_THRESHOLD = 0.9


def log_gamma(z: float) -> float:
    """Natural log of the Gamma function for ``z > 0``."""
    z = float(z)
    if not z > 0.0:
        raise DomainError(f"log_gamma requires z > 0, got {z!r}")
    return math.lgamma(z)


def beta_fn(p: float, q: float) -> float:
    """Beta function ``B(p, q) = Gamma(p) Gamma(q) / Gamma(p + q)``, via log space."""
    if not (p > 0.0 and q > 0.0):
        raise DomainError(f"beta_fn requires p, q > 0, got ({p!r}, {q!r})")
    return math.exp(log_gamma(p) + log_gamma(q) - log_gamma(p + q))


def _is_nonpositive_integer(z: float) -> bool:
    return z <= 0.0 and float(z).is_integer()


def _rgamma_signed(z: float) -> tuple[float, float]:
    """Return ``(log|1/Gamma(z)|, sign)``; sign is 0 at the poles of Gamma."""
    if _is_nonpositive_integer(z):
        return -math.inf, 0.0
    if z > 0.0:
        return -math.lgamma(z), 1.0
    sign = 1.0 if math.floor(z) % 2 == 0 else -1.0
    return -math.lgamma(z), sign


def _gamma_product(num: tuple[float, ...], den: tuple[float, ...]) -> float:
    """``prod Gamma(num) / prod Gamma(den)`` with signs, evaluated in log space."""
    log_val, sign = 0.0, 1.0
    for z in num:
        lg, s = _rgamma_signed(z)
        if s == 0.0:
            raise DomainError(f"Gamma pole at {z!r} in numerator")
        log_val -= lg
        sign *= s
    for z in den:
        lg, s = _rgamma_signed(z)
        if s == 0.0:
            return 0.0
        log_val += lg
        sign *= s
    return sign * math.exp(log_val)


def _series_2f1(p: float, q: float, c: float, x: float) -> float:
    term = 1.0
    total = 1.0
    for k in range(SERIES_MAX_TERMS):
        term *= (p + k) * (q + k) * x / ((c + k) * (k + 1))
        total += term
        if abs(term) < SERIES_RTOL * abs(total) or term == 0.0:
            return total
    raise ConvergenceError(
        f"2F1({p}, {q}; {c}; {x}) series did not converge in {SERIES_MAX_TERMS} terms"
    )


def _series_2f1_array(p, q, c, x):
    term = np.ones_like(x)
    total = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)
    for k in range(SERIES_MAX_TERMS):
        term = term * ((p + k) * (q + k) / ((c + k) * (k + 1))) * x
        total = total + np.where(active, term, 0.0)
        active &= ~((np.abs(term) < SERIES_RTOL * np.abs(total)) | (term == 0.0))
        if not active.any():
            return total
    raise ConvergenceError(f"2F1({p}, {q}; {c}; x) series did not converge")


def gauss_2f1(p: float, q: float, c: float, x):
    """Gauss hypergeometric function ``2F1(p, q; c; x)`` for ``x`` in [0, 1].

    The power series is summed directly up to ``x = 0.9``.  Beyond that the
    standard ``1 - x`` connection formula is used when ``c - p - q`` is not
    close to an integer; at ``x = 1`` the Gauss summation theorem applies.
    Array ``x`` is accepted and evaluated elementwise.
    """
    if np.ndim(x) > 0:
        x = np.asarray(x, dtype=float)
        if not c > 0.0:
            raise DomainError(f"gauss_2f1 requires c > 0, got {c!r}")
        if np.any(x < 0.0) or np.any(x > 1.0):
            raise DomainError("gauss_2f1 requires x in [0, 1]")
        out = np.empty_like(x)
        near = x > _CONNECTION_THRESHOLD
        out[~near] = _series_2f1_array(float(p), float(q), float(c), x[~near])
        out[near] = [gauss_2f1(p, q, c, v) for v in x[near]]
        return out
    p, q, c, x = float(p), float(q), float(c), float(x)
    if not c > 0.0:
        raise DomainError(f"gauss_2f1 requires c > 0, got {c!r}")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"gauss_2f1 requires x in [0, 1], got {x!r}")
    if x == 0.0:
        return 1.0
    terminating = _is_nonpositive_integer(p) or _is_nonpositive_integer(q)
    s = c - p - q
    if x == 1.0:
        if terminating and s <= 0.0:
            return _series_2f1(p, q, c, x)
        if not s > 0.0:
            raise DomainError(f"2F1 at x = 1 requires c - p - q > 0, got {s!r}")
        return _gamma_product((c, s), (c - p, c - q))
    if terminating or x <= _CONNECTION_THRESHOLD or abs(s - round(s)) < 1e-3:
        return _series_2f1(p, q, c, x)
    y = 1.0 - x
    first = _gamma_product((c, s), (c - p, c - q)) * _series_2f1(p, q, 1.0 - s, y)
    second = _gamma_product((c, -s), (p, q)) * y**s * _series_2f1(c - p, c - q, 1.0 + s, y)
    return first + second


@dataclass(frozen=True)
class JacobiBasis:
    """Parameter pair of the shifted Jacobi family ``G_n^{(a,b)}``.

    ``a`` is the weight exponent at the right endpoint t = 1 and ``b`` the
    exponent at the left endpoint t = 0.
    """

    a: float
    b: float

    def __post_init__(self):
        if not (self.a > -1.0 and self.b > -1.0):
            raise DomainError(f"Jacobi parameters must exceed -1, got ({self.a}, {self.b})")

    def weight(self, t):
        t = np.asarray(t, dtype=float)
        return (1.0 - t) ** self.a * t**self.b

    def swapped(self) -> "JacobiBasis":
        return JacobiBasis(self.b, self.a)


def jacobi_table(basis: JacobiBasis, n: int, t) -> np.ndarray:
    """Values of ``G_0 .. G_n`` at ``t``; result has shape ``(n + 1,) + shape(t)``.

    Uses the three-term recurrence in the degree with ``x = 2t - 1``.
    """
    if n < 0:
        raise DomainError(f"degree must be nonnegative, got {n}")
    a, b = basis.a, basis.b
    t = np.asarray(t, dtype=float)
    x = 2.0 * t - 1.0
    out = np.empty((n + 1,) + t.shape)
    out[0] = 1.0
    if n == 0:
        return out
    out[1] = (a + b + 2.0) * t - (b + 1.0)
    ab = a + b
    for k in range(2, n + 1):
        s = 2 * k + ab
        c1 = 2.0 * k * (k + ab) * (s - 2.0)
        c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b)
        c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s
        out[k] = (c2 * out[k - 1] - c3 * out[k - 2]) / c1
    return out


def jacobi_eval(basis: JacobiBasis, n: int, t):
    """``G_n^{(a,b)}(t)``; negative degree gives zero."""
    if n < 0:
        return np.zeros_like(np.asarray(t, dtype=float))[()]
    return jacobi_table(basis, n, t)[n][()]


def jacobi_norm(basis: JacobiBasis, n: int) -> float:
    """Norm of ``G_n^{(a,b)}`` in the weighted space with weight ``(1-t)^a t^b``."""
    a, b = basis.a, basis.b
    if n == 0:
        # Gamma(a + b + 1) may be negative for n = 0; use the Beta form instead.
        return math.sqrt(beta_fn(a + 1.0, b + 1.0))
    log_sq = (
        log_gamma(n + a + 1.0)
        + log_gamma(n + b + 1.0)
        - log_gamma(n + 1.0)
        - log_gamma(n + a + b + 1.0)
        - math.log(2 * n + a + b + 1.0)
    )
    return math.exp(0.5 * log_sq)


def jacobi_deriv(basis: JacobiBasis, n: int, k: int, t):
    """k-th derivative of ``G_n^{(a,b)}`` at ``t``."""
    if k < 0:
        raise DomainError(f"derivative order must be nonnegative, got {k}")
    if k == 0:
        return jacobi_eval(basis, n, t)
    if k > n:
        return np.zeros_like(np.asarray(t, dtype=float))[()]
    a, b = basis.a, basis.b
    factor = math.exp(log_gamma(n + k + a + b + 1.0) - log_gamma(n + a + b + 1.0))
    return factor * jacobi_eval(JacobiBasis(a + k, b + k), n - k, t)


def weighted_jacobi_deriv_identity(basis: JacobiBasis, n: int, t):
    """Closed form of ``d/dt [(1-t)^(a+1) t^(b+1) G_{n-1}^{(a+1,b+1)}(t)]``.

    Equals ``-n (1-t)^a t^b G_n^{(a,b)}(t)``.
    """
    if n < 1:
        raise DomainError(f"identity needs n >= 1, got {n}")
    return -n * basis.weight(t) * jacobi_eval(basis, n, t)
