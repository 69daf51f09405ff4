"""Exact oracle for Gaussian-weighted Hermite integrals.

Products of Hermite polynomials are reduced in the Hermite basis with the
linearization formula

    H_m H_n = sum_k 2^k k! C(m,k) C(n,k) H_{m+n-2k}

using Python integers, and each surviving ``H_{2p}`` is integrated against
``exp(-a x^2)`` in closed form:

    int H_{2p}(x) exp(-a x^2) dx = sqrt(pi/a) (2p)!/p! (1/a - 1)^p.

With ``a`` rational the whole integral is ``sqrt(pi/a)`` times an exact
rational number.  Nothing here shares code with the quadrature path.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence


def _as_fraction(a) -> Fraction:
    if isinstance(a, Fraction):
        return a
    if isinstance(a, int):
        return Fraction(a)
    return Fraction(a).limit_denominator(10**6)


def linearize(orders: Sequence[int]) -> dict[int, int]:
    """Integer coefficients of ``prod H_{n_i}`` in the Hermite basis."""
    poly = {0: 1}
    for n in orders:
        nxt: dict[int, int] = {}
        for m, c in poly.items():
            for k in range(min(m, n) + 1):
                coeff = 2**k * math.factorial(k) * math.comb(m, k) * math.comb(n, k)
                deg = m + n - 2 * k
                nxt[deg] = nxt.get(deg, 0) + c * coeff
        poly = {deg: c for deg, c in nxt.items() if c}
    return poly


def _hermite_moment_ratio(j: int, a: Fraction) -> Fraction:
    """``int H_j exp(-a x^2) dx`` divided by ``sqrt(pi/a)``."""
    if j % 2:
        return Fraction(0)
    p = j // 2
    return Fraction(math.factorial(2 * p), math.factorial(p)) * (1 / a - 1) ** p


def exact_product_ratio(orders: Sequence[int], a) -> Fraction:
    """``int prod H_{n_i} exp(-a x^2) dx / sqrt(pi/a)`` as an exact rational."""
    a = _as_fraction(a)
    if sum(orders) % 2:
        return Fraction(0)
    return sum((c * _hermite_moment_ratio(j, a) for j, c in linearize(orders).items()),
               Fraction(0))


def oracle_product_integral(orders: Sequence[int], a) -> float:
    """``int prod_i c_{n_i} H_{n_i}(x) exp(-a x^2) dx`` via exact arithmetic.

    The normalization product ``prod c_{n_i}`` contributes
    ``pi^(-r/4) (2^{sum n} prod n_i!)^(-1/2)``; the rational part is squared
    and divided exactly before the single square root.
    """
    orders = list(orders)
    a = _as_fraction(a)
    R = exact_product_ratio(orders, a)
    if R == 0:
        return 0.0
    denom = 2 ** sum(orders)
    for n in orders:
        denom *= math.factorial(n)
    magnitude = math.sqrt(R * R / denom)
    const = math.sqrt(math.pi / float(a)) * math.pi ** (-len(orders) / 4.0)
    return math.copysign(magnitude * const, R)


def oracle_pair_integral(m: int, n: int, q) -> float:
    return oracle_product_integral((m, n), _as_fraction(q) / 2)


def oracle_lambda6(*orders: int) -> float:
    return oracle_product_integral(orders, 3)


def oracle_I1(k: int, l: int, m: int) -> float:
    if k != l:
        return 0.0
    return 0.5 * math.pi * oracle_product_integral((m, m, m, m, k, k), 3)


def oracle_I2(k: int, l: int, m: int) -> float:
    if k + l != 2 * m:
        return 0.0
    return 0.5 * math.pi * oracle_product_integral((m, m, m, m, k, l), 3)
