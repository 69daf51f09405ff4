"""Physicists' Hermite polynomials, normalized Hermite functions and the
identities used throughout the package.

Conventions
-----------
``H_n`` are the physicists' polynomials (``H_2(x) = 4x^2 - 2``) and

    f_n(x) = c_n H_n(x) exp(-x^2/2),   c_n^2 = 1 / (sqrt(pi) 2^n n!)

are orthonormal in L^2(R).  Normalized values are produced by the
three-term recurrence for ``f_n`` itself, so no factorial is ever formed.
"""
from __future__ import annotations

import math

import numpy as np

ORDER_CAP = 4096


class OrderCapError(ValueError):
    """Raised when a Hermite order exceeds the configured cap."""


def check_order(n: int, cap: int | None = None) -> int:
    cap = ORDER_CAP if cap is None else cap
    n = int(n)
    if n < 0:
        raise ValueError(f"Hermite order must be non-negative, got {n}")
    if n > cap:
        raise OrderCapError(f"Hermite order {n} exceeds cap {cap}")
    return n


def hermite_poly(n: int, x):
    """Evaluate ``H_n(x)`` by forward recurrence.

    ``H_{n+1} = 2x H_n - 2n H_{n-1}``.  Values overflow to ``inf`` for
    large ``n`` and ``|x|``; use :func:`hermite_functions` when a
    normalized value is what is actually needed.
    """
    n = check_order(n)
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * x
    for j in range(1, n):
        h_prev, h = h, 2.0 * x * h - 2.0 * j * h_prev
    return h if h.ndim else float(h)


def log_normalization(n: int) -> float:
    """``log c_n`` computed from ``lgamma`` (no overflow up to the cap)."""
    n = check_order(n)
    return -0.5 * (0.5 * math.log(math.pi) + n * math.log(2.0) + math.lgamma(n + 1))


def normalization(n: int) -> float:
    """Normalization constant ``c_n = (sqrt(pi) 2^n n!)^(-1/2)``.

    Underflows to zero rather than overflowing; a zero result for an order
    below the cap means the cap is set too high for double precision.
    """
    value = math.exp(log_normalization(n))
    if value == 0.0:
        raise OrderCapError(f"c_{n} underflows double precision")
    return value


def hermite_functions(nmax: int, x) -> np.ndarray:
    """All orthonormal Hermite functions ``f_0..f_nmax`` at the points ``x``.

    Returns an array of shape ``(nmax + 1,) + x.shape``.
    """
    nmax = check_order(nmax)
    x = np.asarray(x, dtype=float)
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = math.pi ** -0.25 * np.exp(-0.5 * x * x)
    if nmax >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for n in range(1, nmax):
        out[n + 1] = (math.sqrt(2.0 / (n + 1)) * x * out[n]
                      - math.sqrt(n / (n + 1)) * out[n - 1])
    return out


def hermite_fn(n: int, x):
    """Single orthonormal Hermite function ``f_n(x) = c_n H_n(x) e^{-x^2/2}``."""
    values = hermite_functions(n, x)[n]
    return values if values.ndim else float(values)


def scale_expand(n: int, gamma: float) -> dict[int, float]:
    """Expand ``H_n(gamma x)`` in the basis ``H_{n-2i}(x)``.

    The coefficient of ``H_{n-2i}`` is
    ``gamma^(n-2i) (gamma^2 - 1)^i C(n, 2i) (2i)! / i!``.
    """
    n = check_order(n)
    if gamma == 0:
        raise ValueError("gamma must be non-zero")
    g2m1 = gamma * gamma - 1.0
    out = {}
    for i in range(n // 2 + 1):
        comb = math.comb(n, 2 * i) * math.factorial(2 * i) // math.factorial(i)
        out[n - 2 * i] = gamma ** (n - 2 * i) * g2m1 ** i * comb
    return out


def derivative_coeffs(m: int) -> tuple[float, float]:
    """Coefficients of ``f_m' = A f_{m-1} + B f_{m+1}``; returns ``(A, B)``."""
    m = check_order(m)
    return math.sqrt(m / 2.0), -math.sqrt((m + 1) / 2.0)


def free_evolution_coeff(n: int, t: float, d: int = 1) -> complex:
    """Time-dependent factor multiplying a mode of order ``n`` under ``e^{it Delta}``.

    Equals ``(1 + 2it)^(-d/2) ((1 - 2it)/(1 + 2it))^(n/2)``.  The power
    ``n/2`` is taken along the continuous branch ``exp(-i n atan(2t))``
    so odd ``n`` has no jump at large ``|t|``.  In ``d`` dimensions ``n``
    is the total order ``|k|``.
    """
    if d < 1:
        raise ValueError("dimension must be positive")
    return complex((1.0 + 2j * t) ** (-d / 2.0) * np.exp(-1j * n * math.atan(2.0 * t)))


def free_evolution(alpha, x, t: float) -> np.ndarray:
    """Evaluate ``(e^{it d_x^2} f)(x)`` for ``f = sum_n alpha_n f_n`` in 1d.

    Uses ``xi = x / sqrt(1 + 4t^2)``: each mode becomes
    ``free_evolution_coeff(n, t) c_n H_n(xi) exp(-x^2 / (2(1 + 2it)))``.
    The Gaussian factor is split into the modulus ``exp(-xi^2/2)``, which
    is absorbed into ``f_n(xi)``, and the phase ``exp(i t xi^2)``.
    """
    alpha = np.asarray(alpha, dtype=complex)
    x = np.asarray(x, dtype=float)
    scale = math.sqrt(1.0 + 4.0 * t * t)
    xi = x / scale
    psi = hermite_functions(len(alpha) - 1, xi)
    coeffs = np.array([free_evolution_coeff(n, t) for n in range(len(alpha))])
    series = np.tensordot(alpha * coeffs, psi, axes=1)
    return series * np.exp(1j * t * xi * xi)
