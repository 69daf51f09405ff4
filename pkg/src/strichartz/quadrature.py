"""Gauss-Hermite quadrature for the weight ``exp(-y^2)``.

Nodes come from the Golub-Welsch eigenvalue problem, polished by Newton
steps on the normalized Hermite function recurrence.  Weights are stored
in two forms: the plain weights ``w_j`` and the exponentially scaled
weights ``w_j exp(y_j^2)``.  The scaled form never underflows and is what
the integral routines use, since their integrands already carry a Gaussian.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .hermite import hermite_functions

# beyond ~700 nodes the outer f_n values underflow double precision
MAX_RULE_SIZE = 600


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Hermite rule of a given size.

    ``sum_j weights[j] g(nodes[j])`` approximates ``int exp(-y^2) g(y) dy``
    and is exact for polynomials of degree ``<= 2 * order - 1``.
    """
    nodes: np.ndarray
    weights: np.ndarray
    scaled_weights: np.ndarray
    order: int

    @property
    def exactness_degree(self) -> int:
        return 2 * self.order - 1

    def integrate(self, g) -> float:
        """Integrate ``exp(-y^2) g(y)`` for a vectorized callable ``g``."""
        return float(np.dot(self.weights, g(self.nodes)))


def _newton_polish(x: np.ndarray, size: int, iters: int = 3) -> np.ndarray:
    for _ in range(iters):
        psi = hermite_functions(size, x)
        # p_s / p_s' with p_s' = sqrt(2s) p_{s-1}; the Gaussian factor cancels
        step = psi[size] / (math.sqrt(2.0 * size) * psi[size - 1])
        x = x - step
        if np.max(np.abs(step)) < 1e-15 * max(1.0, np.max(np.abs(x))):
            break
    return x


@functools.lru_cache(maxsize=64)
def gauss_hermite_rule(size: int) -> QuadratureRule:
    """Gauss-Hermite rule with ``size`` nodes (cached)."""
    size = int(size)
    if size < 1:
        raise ValueError("rule size must be at least 1")
    if size > MAX_RULE_SIZE:
        raise QuadratureError(f"rule size {size} exceeds {MAX_RULE_SIZE}")
    if size == 1:
        nodes = np.zeros(1)
    else:
        off = np.sqrt(np.arange(1, size) / 2.0)
        nodes = eigh_tridiagonal(np.zeros(size), off, eigvals_only=True)
        nodes = _newton_polish(np.sort(nodes), size)
        # exact symmetry about the origin
        nodes = 0.5 * (nodes - nodes[::-1])
    if not np.all(np.isfinite(nodes)):
        raise QuadratureError(f"root finding failed for size {size}")
    psi_last = hermite_functions(size - 1, nodes)[size - 1]
    scaled = 1.0 / (size * psi_last * psi_last)
    scaled = 0.5 * (scaled + scaled[::-1])
    weights = scaled * np.exp(-nodes * nodes)
    for arr in (nodes, weights, scaled):
        arr.setflags(write=False)
    return QuadratureRule(nodes=nodes, weights=weights, scaled_weights=scaled, order=size)


def rule_for_degree(degree: int) -> QuadratureRule:
    """Smallest rule exact for polynomial degree ``degree``, plus one spare node."""
    return gauss_hermite_rule(max(1, degree // 2 + 2))
