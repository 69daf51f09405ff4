"""Exact check of the one-dimensional Hessian bound and the column-sum sweep.

In one dimension the Gaussian Hessian is nonpositive iff, for every
``n >= 1``,

    T_n = sum_{i <= n/2} n! / ((n - 2i)! i!^2)  <=  3^(n-1),

where ``T_n`` is the central trinomial coefficient, the coefficient of
``x^n`` in ``(1 + x + x^2)^n``.  Equality holds at ``n = 1, 2`` (the two
zero directions at the Gaussian).  Everything here is integer arithmetic.

In ``d`` dimensions the analogous sufficient condition bounds each column
sum of the unshifted Hessian matrix by the diagonal shift; those terms are
transcendental and are checked in floating point.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .integrals import exponent_q, pair_integral_matrix
from .linalg import compositions, multiindices


class InequalityViolation(AssertionError):
    pass


def hessest_lhs(n: int) -> int:
    """``sum_i n! / ((n-2i)! i!^2)`` via the term ratio, exact."""
    n = int(n)
    if n < 0:
        raise ValueError("n must be non-negative")
    term, total = 1, 1
    for i in range(n // 2):
        num = term * (n - 2 * i) * (n - 2 * i - 1)
        term, rem = divmod(num, (i + 1) ** 2)
        assert rem == 0
        total += term
    return total


def trinomial_sequence(n_max: int):
    """Yield ``(n, T_n)`` for ``0 <= n <= n_max`` by ``n T_n = (2n-1) T_{n-1} + 3(n-1) T_{n-2}``."""
    prev, cur = None, 1
    yield 0, 1
    if n_max >= 1:
        prev, cur = 1, 1
        yield 1, 1
    for n in range(2, n_max + 1):
        num = (2 * n - 1) * cur + 3 * (n - 1) * prev
        nxt, rem = divmod(num, n)
        assert rem == 0
        prev, cur = cur, nxt
        yield n, cur


@dataclass
class HessestReport:
    n_max: int
    equalities: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    key_steps: int = 0
    cross_checked: int = 0
    margins: dict = field(default_factory=dict)     # n -> 3^(n-1) - T_n

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "n_max": self.n_max,
            "passed": self.passed,
            "equalities": self.equalities,
            "violations": self.violations,
            "key_steps_checked": self.key_steps,
            "direct_sum_cross_checks": self.cross_checked,
            "margins": {str(n): str(v) for n, v in sorted(self.margins.items())},
        }


def hessest_check(n_max: int, cross_check_upto: int = 300, margins_upto: int = 200,
                  raise_on_violation: bool = True) -> HessestReport:
    """Verify ``T_n <= 3^(n-1)`` for ``1 <= n <= n_max`` in exact arithmetic.

    ``T_n`` comes from the three-term recurrence and is compared with the
    direct term sum for ``n <= cross_check_upto``.  For ``n = 3m`` with
    ``m >= 2`` the proof's key comparison
    ``2 n!/(m!)^3 <= 6 n!/((m+1)! (m-1)! m!)`` is checked after cancelling
    the common factor ``n!/m!``, with ``m!`` carried incrementally.
    """
    n_max = int(n_max)
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    rep = HessestReport(n_max=n_max)
    pow3 = 1                     # 3^(n-1)
    m_fact, m = 1, 1             # m! for the current m
    for n, T in trinomial_sequence(n_max):
        if n == 0:
            continue
        if n > 1:
            pow3 *= 3
        if n <= cross_check_upto:
            if hessest_lhs(n) != T:
                raise AssertionError(f"recurrence disagrees with direct sum at n={n}")
            rep.cross_checked += 1
        if T > pow3:
            rep.violations.append(n)
        elif T == pow3:
            rep.equalities.append(n)
        if n <= margins_upto:
            rep.margins[n] = pow3 - T
        if n % 3 == 0 and n >= 6:
            while m < n // 3:
                m += 1
                m_fact *= m
            # 2/(m!)^2 <= 6/((m+1)! (m-1)!), cross-multiplied
            lhs = 2 * (m + 1) * m_fact * (m_fact // m)
            rhs = 6 * m_fact * m_fact
            if lhs > rhs:
                rep.violations.append(n)
            rep.key_steps += 1
    if rep.violations and raise_on_violation:
        raise InequalityViolation(f"inequality fails at n = {rep.violations[:10]}")
    return rep


# --------------------------------------------------------------------------
# column sums in d dimensions

def column_sum_check(k, q: float | None = None, G: np.ndarray | None = None,
                     atol: float = 1e-10) -> tuple[float, float, bool]:
    """``(sum_{|l|=|k|, l != 0} prod_j G(k_j, l_j, q), (2/q) G(0,0,q)^d, lhs <= rhs + atol)``."""
    k = tuple(int(v) for v in k)
    d = len(k)
    if not any(k):
        raise ValueError("k must be non-zero")
    q = exponent_q(d) if q is None else float(q)
    s = sum(k)
    if G is None or len(G) <= s:
        G = pair_integral_matrix(s, q)
    lhs = 0.0
    for l in compositions(s, d, bound=s):
        # parity filter before touching G
        if any((a + b) % 2 for a, b in zip(k, l)):
            continue
        term = 1.0
        for a, b in zip(k, l):
            term *= G[a, b]
        lhs += term
    rhs = (2.0 / q) * G[0, 0] ** d
    return float(lhs), float(rhs), bool(lhs <= rhs + atol)


def column_sum_sweep(d: int, kmax: int, q: float | None = None) -> list[dict]:
    """``column_sum_check`` for every ``k`` with ``0 < |k| <= kmax``."""
    q = exponent_q(d) if q is None else float(q)
    G = pair_integral_matrix(kmax, q)
    out = []
    for k in multiindices(d, kmax, exclude_zero=True):
        if sum(k) > kmax:
            continue
        lhs, rhs, ok = column_sum_check(k, q, G)
        out.append({"k": list(k), "lhs": lhs, "rhs": rhs, "ok": ok})
    return out
