"""The harmonic-oscillator Rayleigh quotient, a closed-form test model.

With real coefficients ``alpha_m`` in the Hermite basis the quotient

    Q[alpha] = sum lambda_m alpha_m^2 / sum alpha_m^2,   lambda_m = 2m + 1,

has every Hermite function as a critical point, a gradient flow that
decreases ``Q`` toward the lowest occupied mode, and a constrained Hessian
at ``e_m`` equal to ``diag(4(k - m))``.  The Strichartz machinery is
checked against the same kind of statements, so this model doubles as a
scaffold for the flow and Hessian code.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_STEP = 1e-2


def qmho_lambdas(n: int) -> np.ndarray:
    """Oscillator eigenvalues ``2m + 1`` for ``m < n``."""
    return 2.0 * np.arange(n) + 1.0


def _as_real(alpha) -> np.ndarray:
    a = np.asarray(alpha, dtype=float)
    if a.ndim != 1:
        raise ValueError("coefficients must be a 1d sequence")
    if not np.any(a):
        raise ValueError("coefficient vector is identically zero")
    return a


def qmho_functional(alpha) -> float:
    a = _as_real(alpha)
    a2 = a * a
    return float(qmho_lambdas(len(a)) @ a2 / a2.sum())


def qmho_gradient_rhs(alpha) -> np.ndarray:
    """Right-hand side ``-2 (lambda_k - Q) alpha_k / |alpha|^2`` of the flow."""
    a = _as_real(alpha)
    P = float(a @ a)
    Q = qmho_functional(a)
    return -2.0 * (qmho_lambdas(len(a)) - Q) * a / P


def qmho_hessian_diag(m: int, k: int) -> float:
    """Constrained Hessian entry at ``e_m`` in direction ``e_k`` (``k != m``)."""
    if k == m:
        raise ValueError("the critical mode itself is not a variation direction")
    if m < 0 or k < 0:
        raise ValueError("mode indices must be non-negative")
    return 4.0 * (k - m)


def qmho_hessian_matrix(m: int, n: int) -> np.ndarray:
    """Constrained Hessian at ``e_m`` over directions ``k in [0, n) \\ {m}``.

    Off-diagonal entries vanish by orthonormality of the Hermite functions.
    """
    ks = [k for k in range(n) if k != m]
    return np.diag([qmho_hessian_diag(m, k) for k in ks])


def qmho_hessian_fd(m: int, k: int, l: int, n: int, h: float = 1e-3) -> float:
    """Finite-difference Hessian of ``Q`` on the unit sphere at ``e_m``.

    The sphere is parametrized by ``e_m sqrt(1 - |v|^2) + v`` with ``v``
    orthogonal to ``e_m``, so that the second derivatives along ``v`` are
    the constrained Hessian.
    """
    if m in (k, l):
        raise ValueError("the critical mode itself is not a variation direction")

    def q_at(s, t):
        v = np.zeros(n)
        v[k] += s
        v[l] += t
        a = v.copy()
        a[m] = np.sqrt(1.0 - v @ v)
        return qmho_functional(a)

    if k == l:
        return (q_at(h, 0) - 2 * q_at(0, 0) + q_at(-h, 0)) / (h * h)
    return (q_at(h, h) - q_at(h, -h) - q_at(-h, h) + q_at(-h, -h)) / (4 * h * h)


@dataclass
class QmhoTrajectory:
    alpha: np.ndarray                 # (steps + 1, n) coefficients
    Q: np.ndarray
    norm: np.ndarray
    step: float
    leading: int = 4

    def to_csv(self) -> str:
        k = min(self.leading, self.alpha.shape[1])
        head = ["step", "Q", "norm"] + [f"alpha_{j}" for j in range(k)]
        rows = [",".join(head)]
        for i, (a, q, nrm) in enumerate(zip(self.alpha, self.Q, self.norm)):
            rows.append(",".join([str(i), f"{q:.17g}", f"{nrm:.17g}"]
                                 + [f"{v:.17g}" for v in a[:k]]))
        return "\n".join(rows) + "\n"


class QmhoStepError(RuntimeError):
    pass


def qmho_flow(alpha0, step: float = DEFAULT_STEP, n_steps: int = 2000,
              rtol: float = 1e-14) -> QmhoTrajectory:
    """Explicit Euler for the gradient flow of ``Q``.

    Raises :class:`QmhoStepError` as soon as a step increases ``Q`` by more
    than round-off, which signals a step size beyond the stability bound.
    """
    if not step > 0:
        raise ValueError("step must be positive")
    a = _as_real(alpha0).copy()
    traj = [a.copy()]
    Qs = [qmho_functional(a)]
    for _ in range(int(n_steps)):
        a = a + step * qmho_gradient_rhs(a)
        q = qmho_functional(a)
        if q > Qs[-1] * (1 + rtol):
            raise QmhoStepError(f"Q increased from {Qs[-1]!r} to {q!r}; step {step} too large")
        traj.append(a.copy())
        Qs.append(q)
    alpha = np.array(traj)
    return QmhoTrajectory(alpha=alpha, Q=np.array(Qs),
                          norm=np.linalg.norm(alpha, axis=1), step=step)
