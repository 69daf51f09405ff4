"""Constrained Hessians of the Strichartz functional at Hermite critical points.

Mode ``m`` in one dimension
    In real coordinates orthogonal to ``e_m`` the second variation of ``S``
    couples ``k`` only with itself and with ``2m - k``:

        a_k = 18 I_1(k, k, m) - 6 I_1(m, m, m),   b_k = 12 I_2(k, 2m - k, m),

    so the matrix is a ``2m x 2m`` block of 2x2 pairs ``(k, 2m - k)`` plus a
    diagonal tail ``a_k`` for ``k > 2m``.  The imaginary directions give the
    same matrix with ``b -> -b`` and hence the same spectrum.

Gaussian in ``d`` dimensions
    With ``q = 2 + 4/d`` and ``G`` the weighted pair integrals, the matrix
    over multi-indices ``k != 0`` is

        M(k, l) = prod_j G(k_j, l_j, q)   if |k| = |l|, else 0,

    shifted by ``-(2/q) G(0, 0, q)^d`` on the diagonal.  Three scalings are
    exposed: ``"section8"`` is ``M - shift``, ``"paper-h"`` multiplies it by
    ``q^2/4`` (the full second variation of the time-integrated functional),
    and ``"iminus"`` by ``1/2`` (entries normalized like ``I^-``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .hermite import hermite_functions
from .integrals import HALF_PI, exponent_q, pair_integral_matrix, time_integral
from .linalg import (EIGEN_CAP, ZERO_TOL, SparseSymMatrix, Spectrum, block2x2_eigenvalues,
                     encode_multiindex, multiindices, symmetric_eigenvalues)
from .quadrature import rule_for_degree

DEFAULT_TAIL = 400
CONVENTIONS = {"section8": 1.0, "paper-h": None, "iminus": 0.5}


class TailNotSettled(RuntimeError):
    pass


# --------------------------------------------------------------------------
# mode m, one dimension

def _mode_integrals(m: int, K: int):
    """``I_1(k, k, m)`` for ``k <= K`` and ``I_2(k, 2m - k, m)`` for ``k <= 2m``."""
    rule = rule_for_degree(4 * m + 2 * K)
    x = rule.nodes / math.sqrt(3.0)
    w = rule.scaled_weights / math.sqrt(3.0)
    psi = hermite_functions(max(K, 2 * m), x)
    base = w * psi[m] ** 4
    I1 = HALF_PI * (psi[:K + 1] ** 2) @ base
    ks = np.arange(2 * m + 1)
    I2 = HALF_PI * (psi[ks] * psi[2 * m - ks]) @ base
    return I1, I2


@dataclass
class BlockHessian1D:
    m: int
    a: dict[int, float]
    b: dict[int, float]
    tail: np.ndarray          # a_k for k = 2m+1 .. K
    K: int

    def indices(self, upto: int | None = None) -> list[int]:
        upto = self.K if upto is None else upto
        return [k for k in range(upto + 1) if k != self.m]

    def block_matrix(self) -> np.ndarray:
        """The ``2m x 2m`` matrix over indices ``{0..2m} \\ {m}``."""
        idx = self.indices(2 * self.m)
        pos = {k: i for i, k in enumerate(idx)}
        B = np.diag([self.a[k] for k in idx])
        for k in idx:
            B[pos[k], pos[2 * self.m - k]] = self.b[k]
        return B

    def matrix(self, upto: int | None = None) -> np.ndarray:
        """Dense Hessian over ``{0..upto} \\ {m}``; partners beyond ``upto`` are dropped."""
        idx = self.indices(upto)
        pos = {k: i for i, k in enumerate(idx)}
        A = np.diag([self.a[k] for k in idx])
        for k, bk in self.b.items():
            j = 2 * self.m - k
            if k in pos and j in pos:
                A[pos[k], pos[j]] = bk
        return A

    def quadratic_form(self, v: dict[int, float], subspace: str = "real") -> float:
        """``v^T A v`` for a sparse vector given as ``{index: value}``.

        ``subspace="imag"`` uses the imaginary-direction matrix, whose
        anti-diagonal couplings carry the opposite sign.
        """
        if subspace not in ("real", "imag"):
            raise ValueError("subspace must be 'real' or 'imag'")
        if self.m in v and v[self.m] != 0.0:
            raise ValueError("the critical mode is not a variation direction")
        sign = 1.0 if subspace == "real" else -1.0
        total = 0.0
        for k, vk in v.items():
            total += self.a[k] * vk * vk
            j = 2 * self.m - k
            if k in self.b and j in v:
                total += sign * self.b[k] * vk * v[j]
        return total


def assemble_hessian_1d(m: int, K: int = DEFAULT_TAIL) -> BlockHessian1D:
    m, K = int(m), int(K)
    if m < 0:
        raise ValueError("mode must be non-negative")
    if K <= 2 * m:
        raise ValueError(f"tail cutoff {K} must exceed 2m = {2 * m}")
    I1, I2 = _mode_integrals(m, K)
    a_all = 18.0 * I1 - 6.0 * I1[m]
    a = {k: float(a_all[k]) for k in range(K + 1) if k != m}
    b = {}
    for k in range(2 * m + 1):
        if k != m:
            # symmetrize so that b_k = b_{2m-k} holds exactly
            b[k] = float(12.0 * 0.5 * (I2[k] + I2[2 * m - k]))
    return BlockHessian1D(m=m, a=a, b=b, tail=a_all[2 * m + 1:].copy(), K=K)


@dataclass
class ModeSpectrum:
    m: int
    block: np.ndarray         # 2m eigenvalues from the 2x2 pairs, ascending
    tail: np.ndarray          # diagonal tail entries (not sorted)
    full: Spectrum

    @property
    def counts(self):
        return self.full.counts

    def block_counts(self):
        return Spectrum(self.block, self.full.tolerance).counts


def spectrum_1d(m: int, K: int = DEFAULT_TAIL, tolerance: float = ZERO_TOL) -> ModeSpectrum:
    h = assemble_hessian_1d(m, K)
    block = []
    for i in range(m):
        j = 2 * m - i
        block.extend(block2x2_eigenvalues(h.a[i], h.a[j], h.b[i], h.b[j]))
    block = np.sort(np.array(block))
    full = Spectrum(np.concatenate([block, h.tail]), tolerance)
    return ModeSpectrum(m=m, block=block, tail=h.tail, full=full)


def tail_values_1d(m: int, count: int, K: int | None = None) -> np.ndarray:
    """First ``count`` diagonal entries ``a_k`` with ``k > 2m``."""
    K = 2 * m + count if K is None else K
    return assemble_hessian_1d(m, K).tail[:count]


def tail_settled(tail: np.ndarray, n_last: int = 10, tolerance: float = ZERO_TOL) -> bool:
    """Last entries negative and decreasing within each parity class.

    The entries alternate slightly between even and odd ``k``, so the
    monotonicity is checked separately on the two interleaved sequences.
    """
    last = np.asarray(tail[-n_last:])
    if len(last) < n_last or np.any(last >= -tolerance):
        return False
    ks = np.arange(len(tail))[-n_last:]
    for parity in (0, 1):
        seq = last[ks % 2 == parity]
        if np.any(np.diff(seq) > 0):
            return False
    return True


def positive_counts(m: int, K: int = DEFAULT_TAIL, tolerance: float = ZERO_TOL) -> dict:
    """Positive eigenvalue counts in the block, in the tail, and in total."""
    spec = spectrum_1d(m, K, tolerance)
    if not tail_settled(spec.tail, tolerance=tolerance):
        raise TailNotSettled(f"tail at K={K} still has positive or increasing entries")
    blk = int(np.sum(spec.block > tolerance))
    tl = int(np.sum(spec.tail > tolerance))
    return {"block": blk, "tail": tl, "total": blk + tl}


def positive_ratio(m: int, K: int = DEFAULT_TAIL, tolerance: float = ZERO_TOL) -> float:
    """Number of positive eigenvalues divided by ``2m`` (``m >= 1``)."""
    if m < 1:
        raise ValueError("the ratio is defined for m >= 1")
    return positive_counts(m, K, tolerance)["total"] / (2.0 * m)


def translation_vector(m: int) -> dict[int, float]:
    """Unit vector of ``f_m'`` in the Hermite basis."""
    v = {}
    if m >= 1:
        v[m - 1] = math.sqrt(m / (2 * m + 1))
    v[m + 1] = -math.sqrt((m + 1) / (2 * m + 1))
    return v


def phase_vector(m: int) -> dict[int, float]:
    """Unit vector of ``(4x^2 - 2(2m+1)) f_m`` in the Hermite basis.

    From ``(4x^2 - 2(2m+1)) H_m = H_{m+2} + 4m(m-1) H_{m-2}`` and the
    normalization ratios ``c_m / c_{m+2} = 2 sqrt((m+1)(m+2))``,
    ``c_m / c_{m-2} = 1 / (2 sqrt(m(m-1)))``.
    """
    v = {m + 2: 2.0 * math.sqrt((m + 1) * (m + 2))}
    if m >= 2:
        v[m - 2] = 2.0 * math.sqrt(m * (m - 1))
    norm = math.sqrt(sum(x * x for x in v.values()))
    return {k: x / norm for k, x in v.items()}


def zero_mode_check_translation(m: int, K: int | None = None) -> float:
    """``|v^T A v|`` along the translation direction at mode ``m``."""
    h = assemble_hessian_1d(m, K or 2 * m + 4)
    return abs(h.quadratic_form(translation_vector(m)))


def zero_mode_check_phase(m: int, K: int | None = None) -> float:
    """``|v^T A v|`` along ``i phi_m f_m``.

    The symmetry ``f -> exp(i s phi) f`` moves ``f_m`` in the imaginary
    direction ``i phi_m f_m``, so the form is the imaginary-direction one.
    Its real-direction counterpart is the dilation ``x f_m'``, which has
    the same components with the sign at ``m - 2`` flipped.
    """
    h = assemble_hessian_1d(m, K or 2 * m + 4)
    return abs(h.quadratic_form(phase_vector(m), subspace="imag"))


def dilation_vector(m: int) -> dict[int, float]:
    """Unit vector of ``x f_m'`` with the ``f_m`` component removed."""
    v = phase_vector(m)
    return {k: (-x if k == m - 2 else x) for k, x in v.items()}


def zero_mode_check_dilation(m: int, K: int | None = None) -> float:
    """``|v^T A v|`` along the real dilation direction at mode ``m``."""
    h = assemble_hessian_1d(m, K or 2 * m + 4)
    return abs(h.quadratic_form(dilation_vector(m)))


def constrained_hessian_matrix(m: int, N: int, subspace: str = "real") -> np.ndarray:
    """Dense constrained Hessian at ``e_m`` over ``{0..N} \\ {m}``.

    ``subspace="imag"`` returns the imaginary-direction matrix, which
    includes the phase direction ``m`` (a zero row) and flips the sign of
    the anti-diagonal couplings.
    """
    h = assemble_hessian_1d(m, max(N, 2 * m) + 1)
    A = h.matrix(N)
    if subspace == "real":
        return A
    if subspace != "imag":
        raise ValueError("subspace must be 'real' or 'imag'")
    idx = h.indices(N)
    diag = np.diag(np.diag(A))
    A = 2 * diag - A            # b -> -b
    full = np.zeros((N + 1, N + 1))
    full[np.ix_(idx, idx)] = A
    return full


def unconstrained_hessian_fd(alpha, table, h: float = 1e-4) -> np.ndarray:
    """Hessian of ``S`` in coordinates ``(p_0..p_N, q_0..q_N)``, ``alpha = p + iq``.

    Central differences at steps ``h`` and ``h/2`` combined by Richardson
    extrapolation.
    """
    from .flows import strichartz_value

    a0 = np.zeros(table.size, dtype=complex)
    a0[:len(alpha)] = alpha
    n = table.size
    dirs = np.concatenate([np.eye(n), 1j * np.eye(n)]).astype(complex)
    f0 = strichartz_value(a0, table)

    def fd(step):
        D = np.zeros((2 * n, 2 * n))
        for i in range(2 * n):
            ei = dirs[i] * step
            D[i, i] = (strichartz_value(a0 + ei, table) - 2 * f0
                       + strichartz_value(a0 - ei, table)) / step**2
            for j in range(i + 1, 2 * n):
                ej = dirs[j] * step
                D[i, j] = D[j, i] = (strichartz_value(a0 + ei + ej, table)
                                     - strichartz_value(a0 + ei - ej, table)
                                     - strichartz_value(a0 - ei + ej, table)
                                     + strichartz_value(a0 - ei - ej, table)) / (4 * step**2)
        return D

    return (4.0 * fd(h / 2) - fd(h)) / 3.0


# --------------------------------------------------------------------------
# Gaussian, d dimensions

@dataclass
class GaussianHessianDD:
    d: int
    N: int
    q: float
    indices: list
    matrix: SparseSymMatrix      # unshifted M over k != 0
    G00: float
    convention: str = "section8"

    @property
    def shift(self) -> float:
        return (2.0 / self.q) * self.G00 ** self.d

    @property
    def scale(self) -> float:
        s = CONVENTIONS[self.convention]
        return self.q * self.q / 4.0 if s is None else s

    def dense(self, shifted: bool = True) -> np.ndarray:
        M = self.matrix.to_dense()
        if shifted:
            M = self.scale * (M - self.shift * np.eye(len(M)))
        return M

    def position(self, k) -> int:
        # flat index minus one, since 0 is excluded
        return encode_multiindex(k, self.N) - 1

    def quadratic_form(self, v: dict) -> float:
        x = np.zeros(len(self.indices))
        for k, val in v.items():
            x[self.position(k)] = val
        return float(x @ self.dense() @ x)


def assemble_hessian_gaussian(d: int, N: int, convention: str = "section8",
                              cap: int = EIGEN_CAP) -> GaussianHessianDD:
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {sorted(CONVENTIONS)}")
    d, N = int(d), int(N)
    q = exponent_q(d)
    if N < 1:
        raise ValueError("truncation must be at least 1")
    size = (N + 1) ** d - 1
    if size > cap:
        raise ValueError(f"matrix size {size} exceeds cap {cap}")
    G = pair_integral_matrix(N, q)
    idx = multiindices(d, N, exclude_zero=True)
    K = np.array(idx)
    tot = K.sum(axis=1)
    S = SparseSymMatrix(size)
    for s in np.unique(tot):
        sel = np.nonzero(tot == s)[0]
        sub = K[sel]
        block = np.ones((len(sel), len(sel)))
        for j in range(d):
            block *= G[sub[:, j][:, None], sub[:, j][None, :]]
        for a_, ia in enumerate(sel):
            for b_ in range(a_, len(sel)):
                if block[a_, b_] != 0.0:
                    S[int(ia), int(sel[b_])] = block[a_, b_]
    return GaussianHessianDD(d=d, N=N, q=q, indices=idx, matrix=S, G00=float(G[0, 0]),
                             convention=convention)


@dataclass
class GaussianSpectrum:
    d: int
    N: int
    convention: str
    spectrum: Spectrum
    gap: float = field(init=False)

    def __post_init__(self):
        self.gap = self.spectrum.gap()

    @property
    def counts(self):
        return self.spectrum.counts

    def to_dict(self) -> dict:
        return {"d": self.d, "N": self.N, "convention": self.convention,
                "gap": self.gap, **self.spectrum.to_dict()}


def spectrum_gaussian(d: int, N: int, tolerance: float = ZERO_TOL, convention: str = "section8",
                      method: str = "householder-ql") -> GaussianSpectrum:
    h = assemble_hessian_gaussian(d, N, convention)
    spec = symmetric_eigenvalues(h.dense(), tolerance, method=method)
    return GaussianSpectrum(d=d, N=N, convention=convention, spectrum=spec)


def gaussian_symmetry_vectors(d: int) -> dict[str, dict]:
    """Translation directions ``e_j`` and the radial direction ``sum_j 2 e_j``."""
    out = {}
    for j in range(d):
        k = [0] * d
        k[j] = 1
        out[f"translation_{j}"] = {tuple(k): 1.0}
    rad = {}
    for j in range(d):
        k = [0] * d
        k[j] = 2
        rad[tuple(k)] = 1.0 / math.sqrt(d)
    out["phase"] = rad
    return out


def zero_mode_check_gaussian(d: int, N: int = 2, convention: str = "section8") -> dict[str, float]:
    """``|v^T H v|`` for each symmetry-predicted zero direction at the Gaussian."""
    h = assemble_hessian_gaussian(d, max(N, 2), convention)
    return {name: abs(h.quadratic_form(v)) for name, v in gaussian_symmetry_vectors(d).items()}


def first_variation_gaussian(k, q: float | None = None) -> float:
    """``|q c_0^{(q-2)d} T(|k|/2) prod_j G(k_j, 0, q)|`` with ``T`` the time integral."""
    k = tuple(int(v) for v in k)
    d = len(k)
    if not any(k):
        raise ValueError("k must be non-zero")
    q = exponent_q(d) if q is None else q
    G = pair_integral_matrix(max(k), q)
    spatial = 1.0
    for kj in k:
        spatial *= G[kj, 0]
    c0_pow = math.pi ** (-(q - 2.0) * d / 4.0)
    return abs(q * c0_pow * time_integral(sum(k) / 2.0) * spatial)
