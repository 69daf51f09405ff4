"""Gaussian-weighted integrals of Hermite products.

Every spatial integral in the package has the form

    int prod_i c_{n_i} H_{n_i}(x) exp(-a x^2) dx,

a polynomial times a Gaussian, so a Gauss-Hermite rule of the right size
integrates it exactly.  After the substitution ``x = y / sqrt(a)`` the
integrand is assembled from normalized Hermite functions:
``c_n H_n(x) = f_n(x) exp(x^2/2)``, so a product of ``r`` factors picks up
``exp((r/2 - a) x^2)`` and nothing overflows.

Integrals whose integrand is odd return exactly ``0.0`` without touching
the quadrature.  :mod:`strichartz.linearization` evaluates the same
quantities in exact rational arithmetic and serves as the oracle.
"""
from __future__ import annotations

import math
from itertools import product
from typing import Sequence

import numpy as np

from .hermite import check_order, hermite_functions
from .quadrature import rule_for_degree

HALF_PI = 0.5 * math.pi


def exponent_q(d: int) -> float:
    """Strichartz exponent ``q = 2 + 4/d`` in dimension ``d``."""
    if int(d) != d or d < 1:
        raise ValueError(f"dimension must be a positive integer, got {d}")
    return 2.0 + 4.0 / d


def time_integral(r: float) -> float:
    """``int dT/(1+4T^2) ((1-2iT)/(1+2iT))^r`` over the real line.

    Equal to ``sin(r pi) / (2 r)``, with the limit ``pi/2`` at ``r = 0``.
    Exactly zero at non-zero integers.
    """
    if abs(r) < 1e-14:
        return HALF_PI
    if float(r).is_integer():
        return 0.0
    return math.sin(r * math.pi) / (2.0 * r)


def product_integral(orders: Sequence[int], a: float) -> float:
    """``int prod_i c_{n_i} H_{n_i}(x) exp(-a x^2) dx`` by exact quadrature."""
    orders = [check_order(n) for n in orders]
    if a <= 0:
        raise ValueError("Gaussian exponent must be positive")
    degree = sum(orders)
    if degree % 2:
        return 0.0
    rule = rule_for_degree(degree)
    x = rule.nodes / math.sqrt(a)
    psi = hermite_functions(max(orders, default=0), x)
    integrand = rule.scaled_weights * np.exp((0.5 * len(orders) - a) * x * x)
    for n in orders:
        integrand = integrand * psi[n]
    return float(integrand.sum() / math.sqrt(a))


def weighted_pair_integral(m: int, n: int, q: float) -> float:
    """``G(m, n, q) = c_m c_n int exp(-q x^2/2) H_m H_n dx``."""
    return product_integral((m, n), 0.5 * q)


def pair_integral_matrix(nmax: int, q: float) -> np.ndarray:
    """Dense table ``G[m, n]`` for ``0 <= m, n <= nmax``; odd pairs exactly zero."""
    nmax = check_order(nmax)
    a = 0.5 * q
    rule = rule_for_degree(2 * nmax)
    x = rule.nodes / math.sqrt(a)
    psi = hermite_functions(nmax, x)
    w = rule.scaled_weights * np.exp((1.0 - a) * x * x) / math.sqrt(a)
    G = (psi * w) @ psi.T
    idx = np.arange(nmax + 1)
    G[(idx[:, None] + idx[None, :]) % 2 == 1] = 0.0
    return 0.5 * (G + G.T)


def lambda6(n1: int, n2: int, n3: int, n4: int, n5: int, n6: int) -> float:
    """Six-fold coefficient ``prod c_{n_i} int prod H_{n_i}(xi) exp(-3 xi^2) d xi``.

    This is the bare spatial integral; the time factor is applied by the
    functional that consumes it.
    """
    return product_integral((n1, n2, n3, n4, n5, n6), 3.0)


def hessian_integral_I1(k: int, l: int, m: int) -> float:
    """Diagonal-type Hessian integral at mode ``m``, time factor ``pi/2`` included.

    Zero unless ``k == l``; otherwise
    ``(pi/2) c_m^4 c_k^2 int H_m^4 H_k^2 exp(-3 xi^2) d xi``.
    """
    if k != l:
        return 0.0
    return HALF_PI * product_integral((m, m, m, m, k, k), 3.0)


def hessian_integral_I2(k: int, l: int, m: int) -> float:
    """Anti-diagonal Hessian integral at mode ``m``; zero unless ``k + l == 2m``."""
    if k + l != 2 * m:
        return 0.0
    return HALF_PI * product_integral((m, m, m, m, k, l), 3.0)


def hessian_integral_Iminus(k: Sequence[int], l: Sequence[int], q: float) -> float:
    """``I^-(k, l, q)`` for multi-indices ``k``, ``l`` in dimension ``d``.

    Zero unless ``|k| == |l|`` and every coordinate pair shares parity.
    Otherwise ``(pi/2) c_0^{(q-2)d} prod_j G(k_j, l_j, q)``, which is the
    stated normalization product rewritten through ``G``.
    """
    k = tuple(int(v) for v in k)
    l = tuple(int(v) for v in l)
    if len(k) != len(l):
        raise ValueError(f"dimension mismatch: {len(k)} vs {len(l)}")
    if sum(k) != sum(l) or any((a + b) % 2 for a, b in zip(k, l)):
        return 0.0
    d = len(k)
    # c_0^{(q-2)d} = pi^{-(q-2)d/4}
    prefactor = HALF_PI * math.pi ** (-(q - 2.0) * d / 4.0)
    value = prefactor
    for a, b in zip(k, l):
        value *= weighted_pair_integral(a, b, q)
    return value


def resonant_tuples(N: int):
    """All ordered 6-tuples with entries ``<= N`` and ``n1+n2+n3 == n4+n5+n6``."""
    triples = {}
    for t in product(range(N + 1), repeat=3):
        triples.setdefault(sum(t), []).append(t)
    for group in triples.values():
        for a in group:
            for b in group:
                yield a + b
