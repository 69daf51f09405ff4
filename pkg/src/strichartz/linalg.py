"""Multi-index bookkeeping, sparse symmetric storage and symmetric eigenvalues.

The default eigensolver reduces to tridiagonal form with Householder
reflections and then runs implicit-shift QL iterations on the tridiagonal
matrix.  A cyclic Jacobi solver is kept as an independent check for small
matrices, and LAPACK (``numpy.linalg.eigvalsh``) is available as a third
backend.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

import numpy as np

EIGEN_CAP = 4000
ZERO_TOL = 1e-8


class EigenError(RuntimeError):
    pass


# --------------------------------------------------------------------------
# multi-indices

def encode_multiindex(k: Sequence[int], N: int) -> int:
    """Flat index ``k_1 (N+1)^{d-1} + ... + k_d``."""
    i = 0
    for kj in k:
        if not 0 <= kj <= N:
            raise ValueError(f"coordinate {kj} outside [0, {N}]")
        i = i * (N + 1) + int(kj)
    return i


def decode_multiindex(i: int, d: int, N: int) -> tuple[int, ...]:
    if not 0 <= i < (N + 1) ** d:
        raise ValueError(f"flat index {i} outside [0, {(N + 1) ** d})")
    out = []
    for _ in range(d):
        i, r = divmod(i, N + 1)
        out.append(r)
    return tuple(reversed(out))


def multiindices(d: int, N: int, exclude_zero: bool = False) -> list[tuple[int, ...]]:
    """All multi-indices with coordinates in ``[0, N]``, in flat-index order."""
    out = list(product(range(N + 1), repeat=d))
    if exclude_zero:
        out = out[1:]
    return out


def compositions(total: int, d: int, bound: int | None = None) -> Iterable[tuple[int, ...]]:
    """Multi-indices ``l`` of length ``d`` with ``|l| = total`` and ``l_j <= bound``."""
    bound = total if bound is None else bound
    if d == 1:
        if total <= bound:
            yield (total,)
        return
    for first in range(min(total, bound) + 1):
        for rest in compositions(total - first, d - 1, bound):
            yield (first,) + rest


# --------------------------------------------------------------------------
# storage

@dataclass
class SparseSymMatrix:
    """Upper-triangle storage of a real symmetric matrix."""
    size: int
    entries: dict[tuple[int, int], float] = field(default_factory=dict)

    def __setitem__(self, ij, value):
        i, j = ij
        if i > j:
            i, j = j, i
        if value == 0.0:
            self.entries.pop((i, j), None)
        else:
            self.entries[(i, j)] = float(value)

    def __getitem__(self, ij) -> float:
        i, j = ij
        if i > j:
            i, j = j, i
        return self.entries.get((i, j), 0.0)

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def to_dense(self) -> np.ndarray:
        A = np.zeros((self.size, self.size))
        if self.entries:
            ij = np.array(list(self.entries.keys()))
            v = np.array(list(self.entries.values()))
            A[ij[:, 0], ij[:, 1]] = v
            A[ij[:, 1], ij[:, 0]] = v
        return A

    def trace(self) -> float:
        return sum(v for (i, j), v in self.entries.items() if i == j)


@dataclass
class Spectrum:
    eigenvalues: np.ndarray
    tolerance: float = ZERO_TOL

    def __post_init__(self):
        self.eigenvalues = np.sort(np.asarray(self.eigenvalues, dtype=float))

    def __len__(self):
        return len(self.eigenvalues)

    @property
    def counts(self) -> tuple[int, int, int]:
        """``(negative, zero, positive)`` with ``|lambda| <= tolerance`` counted as zero."""
        ev, tol = self.eigenvalues, self.tolerance
        neg = int(np.sum(ev < -tol))
        pos = int(np.sum(ev > tol))
        return neg, len(ev) - neg - pos, pos

    def gap(self) -> float:
        """Distance from the zero cluster to the nearest strictly negative eigenvalue."""
        neg = self.eigenvalues[self.eigenvalues < -self.tolerance]
        return float(-neg.max()) if len(neg) else math.inf

    def to_csv(self) -> str:
        return "eigenvalue\n" + "".join(f"{v:.17g}\n" for v in self.eigenvalues)

    def to_dict(self) -> dict:
        neg, zero, pos = self.counts
        return {
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "counts": {"negative": neg, "zero": zero, "positive": pos},
            "tolerance": self.tolerance,
        }

    def to_json(self) -> str:
        return json.dumps({"schema_version": 1, **self.to_dict()}, sort_keys=True)


# --------------------------------------------------------------------------
# eigensolvers

def householder_tridiagonalize(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reduce a symmetric matrix to tridiagonal form; returns ``(diag, offdiag)``."""
    a = np.array(A, dtype=float)
    n = len(a)
    off = np.zeros(max(n - 1, 0))
    for k in range(n - 2):
        x = a[k + 1:, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            off[k] = 0.0
            continue
        if x[0] > 0:
            alpha = -alpha
        u = x.copy()
        u[0] -= alpha
        u /= np.linalg.norm(u)
        sub = a[k + 1:, k + 1:]
        p = sub @ u
        v = 2.0 * (p - (u @ p) * u)
        sub -= np.outer(u, v) + np.outer(v, u)
        off[k] = alpha
    if n >= 2:
        off[n - 2] = a[n - 1, n - 2]
    return np.diagonal(a).copy(), off


def tridiagonal_ql(diag, off, max_iter: int = 60) -> np.ndarray:
    """Eigenvalues of a symmetric tridiagonal matrix by implicit-shift QL."""
    d = [float(v) for v in diag]
    n = len(d)
    e = [float(v) for v in off] + [0.0]
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                if abs(e[m]) <= 1e-16 * (abs(d[m]) + abs(d[m + 1])):
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_iter:
                raise EigenError("QL iteration did not converge")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            deflated = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    # underflow: split the matrix and restart this eigenvalue
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.sort(np.array(d))


def jacobi_eigenvalues(A: np.ndarray, tol: float = 1e-14, max_sweeps: int = 100) -> np.ndarray:
    """Cyclic Jacobi rotations; slow, used to validate the default solver."""
    a = np.array(A, dtype=float)
    n = len(a)
    scale = max(np.linalg.norm(a), 1e-300)
    for _ in range(max_sweeps):
        off = math.sqrt(max(np.sum(a * a) - np.sum(np.diagonal(a) ** 2), 0.0))
        if off <= tol * scale:
            return np.sort(np.diagonal(a).copy())
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
    raise EigenError("Jacobi sweeps did not converge")


def symmetric_eigenvalues(M, tolerance: float = ZERO_TOL, method: str = "householder-ql",
                          cap: int = EIGEN_CAP) -> Spectrum:
    """Eigenvalues of a dense real symmetric matrix, sorted ascending.

    ``method`` is ``"householder-ql"`` (default), ``"jacobi"`` or ``"lapack"``.
    """
    A = np.asarray(M.to_dense() if isinstance(M, SparseSymMatrix) else M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    if len(A) > cap:
        raise ValueError(f"matrix size {len(A)} exceeds eigensolver cap {cap}")
    scale = max(np.max(np.abs(A), initial=0.0), 1.0)
    if np.max(np.abs(A - A.T), initial=0.0) > 1e-12 * scale:
        raise ValueError("matrix is not symmetric")
    A = 0.5 * (A + A.T)
    if len(A) == 0:
        return Spectrum(np.zeros(0), tolerance)
    if method == "householder-ql":
        ev = tridiagonal_ql(*householder_tridiagonalize(A))
    elif method == "jacobi":
        ev = jacobi_eigenvalues(A)
    elif method == "lapack":
        ev = np.linalg.eigvalsh(A)
    else:
        raise ValueError(f"unknown method {method!r}")
    return Spectrum(ev, tolerance)


def block2x2_eigenvalues(a_i: float, a_j: float, b_i: float, b_j: float) -> tuple[float, float]:
    """Eigenvalues ``(lambda_-, lambda_+)`` of ``[[a_i, b_i], [b_j, a_j]]``."""
    tr = a_i + a_j
    disc = tr * tr - 4.0 * (a_i * a_j - b_i * b_j)
    if disc < 0.0:
        if disc < -1e-12:
            raise ValueError(f"negative discriminant {disc}: inputs not from a symmetric block")
        disc = 0.0
    root = math.sqrt(disc)
    return 0.5 * (tr - root), 0.5 * (tr + root)


def eigen_residual(M, lam: float, iters: int = 3, seed: int = 0) -> float:
    """``||M v - lam v|| / ||M||`` for ``v`` from inverse iteration at ``lam``.

    Spot check for eigenvalues returned without vectors.  The shift is
    nudged off ``lam`` so the solve stays non-singular.
    """
    A = np.asarray(M.to_dense() if isinstance(M, SparseSymMatrix) else M, dtype=float)
    n = len(A)
    scale = max(np.linalg.norm(A, 2), 1e-300)
    shifted = A - (lam + 1e-10 * scale) * np.eye(n)
    v = np.random.default_rng(seed).standard_normal(n)
    for _ in range(iters):
        v = np.linalg.solve(shifted, v)
        v /= np.linalg.norm(v)
    return float(np.linalg.norm(A @ v - lam * v) / scale)
