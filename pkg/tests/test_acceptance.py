"""Acceptance criteria, each at its stated tolerance.

Run with ``pytest tests/test_acceptance.py``; the terminal summary lists
one PASS/FAIL line per criterion with the measured quantities.
"""
import time

import numpy as np
import pytest

from strichartz.flows import (direct_quadrature_oracle, gradient_residual, hamiltonian_flow,
                              qho_energy, strichartz_gradient, strichartz_numerator,
                              strichartz_value)
from strichartz.hessian import (constrained_hessian_matrix, gaussian_symmetry_vectors,
                                spectrum_1d, spectrum_gaussian, unconstrained_hessian_fd,
                                zero_mode_check_gaussian)
from strichartz.inequality import hessest_check
from strichartz.lambda_table import build_lambda_table
from strichartz.qmho import (qmho_flow, qmho_functional, qmho_hessian_diag, qmho_hessian_fd,
                             qmho_hessian_matrix)

criterion = pytest.mark.criterion


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def _fmt(x):
    return f"{x:.3g}"


@criterion(1, "mode-1 block eigenvalues {0, 1.1547}")
def test_mode_one_block(record_property):
    with Timer() as t:
        s = spectrum_1d(1)
    record_property("block", [round(float(v), 6) for v in s.block])
    record_property("runtime", f"{t.elapsed:.2f}s")
    np.testing.assert_allclose(s.block, [0.0, 1.1547], atol=1e-3)
    assert t.elapsed < 1.0


MODE2_TAIL = [0.114044, 0.0443506, -0.118796, -0.0533264, -0.174391, -0.153076, -0.209375]


@criterion(2, "mode-2 block eigenvalues and first seven tail entries")
def test_mode_two(record_property):
    with Timer() as t:
        s = spectrum_1d(2)
    err_b = np.max(np.abs(s.block - np.sort([1.06917, 0.299367, 0.0, 0.0])))
    err_t = np.max(np.abs(s.tail[:7] - MODE2_TAIL))
    record_property("block_err", _fmt(err_b))
    record_property("tail_err", _fmt(err_t))
    record_property("runtime", f"{t.elapsed:.2f}s")
    assert err_b < 1e-4 and err_t < 1e-4
    assert t.elapsed < 5.0


MODE10_BLOCK = [-0.0721553, -0.0607931, -0.0473447, -0.031091, -0.0134169, -0.0107972,
                -0.00261104, 0.0, 0.0, 0.00340212, 0.00942436, 0.01268, 0.0156644,
                0.0378192, 0.0561792, 0.0731271, 0.0838498, 0.149501, 0.330481, 0.654569]


@criterion(3, "mode-10 block eigenvalues and counts (7, 2, 11)")
def test_mode_ten(record_property):
    with Timer() as t:
        s = spectrum_1d(10, tolerance=1e-6)
    err = np.max(np.abs(s.block - np.sort(MODE10_BLOCK)))
    counts = s.block_counts()
    record_property("max_err", _fmt(err))
    record_property("counts", counts)
    record_property("runtime", f"{t.elapsed:.2f}s")
    assert err < 1e-4
    assert counts == (7, 2, 11)
    assert t.elapsed < 30.0


@criterion(4, "Gaussian d=1 (K=400), d=2 (N=10): nonpositive, symmetry zeros only")
@pytest.mark.parametrize("d, N", [(1, 400), (2, 10)])
def test_gaussian_low_dim(d, N, record_property):
    g = spectrum_gaussian(d, N, tolerance=1e-8)
    checks = zero_mode_check_gaussian(d, N)
    record_property(f"d{d}_counts", g.counts)
    record_property(f"d{d}_max_zero_check", _fmt(max(checks.values())))
    assert g.counts[2] == 0
    assert g.counts[1] == len(gaussian_symmetry_vectors(d))
    assert all(v < 1e-10 for v in checks.values())


@criterion(5, "Gaussian d=3, N=8: nonpositive, gap 0.03 +/- 0.01")
def test_gaussian_three_dim(record_property):
    with Timer() as t:
        g = spectrum_gaussian(3, 8, tolerance=1e-8, convention="section8")
    record_property("counts", g.counts)
    record_property("gap", f"{g.gap:.6f}")
    record_property("runtime", f"{t.elapsed:.1f}s")
    assert g.counts[2] == 0
    assert t.elapsed < 300.0
    gap = float(g.gap)
    assert abs(gap - 0.03) <= 0.01


@criterion(6, "T_n <= 3^(n-1) exactly for n <= 10^4, equality at {1, 2}")
def test_combinatorial_inequality(record_property):
    with Timer() as t:
        rep = hessest_check(10_000)
    record_property("equalities", rep.equalities)
    record_property("runtime", f"{t.elapsed:.2f}s")
    assert rep.passed
    assert rep.equalities == [1, 2]
    assert t.elapsed < 30.0


@criterion(7, "resonant sum equals direct space-time quadrature on modes <= 4")
def test_oracle_normalization(record_property):
    table = build_lambda_table(4)
    rng = np.random.default_rng(2024)
    cases = list(np.eye(5)) + [rng.standard_normal(5) + 1j * rng.standard_normal(5)
                                for _ in range(6)]
    worst = 0.0
    for a in cases:
        lam = strichartz_numerator(a, table)
        direct = direct_quadrature_oracle(a)
        worst = max(worst, abs(lam - direct) / abs(direct))
    record_property("max_rel_err", _fmt(worst))
    assert worst < 1e-6


@criterion(8, "gradient vs finite differences (N=6) and fixed points A e_m")
def test_gradient(record_property):
    table = build_lambda_table(6)
    rng = np.random.default_rng(8)
    h = 1e-5
    worst = 0.0
    for _ in range(50):
        a = rng.standard_normal(7) + 1j * rng.standard_normal(7)
        g = strichartz_gradient(a, table)
        fd = np.zeros(7, dtype=complex)
        for j in range(7):
            for unit in (1.0, 1j):
                e = np.zeros(7, dtype=complex)
                e[j] = unit * h
                d = (strichartz_value(a + e, table) - strichartz_value(a - e, table)) / (2 * h)
                fd[j] += d * unit
        worst = max(worst, np.max(np.abs(fd - g)) / np.max(np.abs(g)))
    table8 = build_lambda_table(8)
    res = max(gradient_residual(A * np.eye(9)[m], table8)
              for m in range(9) for A in (1.0, 3.0, 0.5j))
    record_property("fd_rel_err", _fmt(worst))
    record_property("max_mode_residual", _fmt(res))
    assert worst < 1e-5
    assert res < 1e-12


def _drifts(traj, table):
    H = np.array([strichartz_numerator(a, table) for a in traj])
    P = np.array([np.vdot(a, a).real for a in traj])
    Q = np.array([qho_energy(a) for a in traj])
    return {k: float(np.max(np.abs(v / v[0] - 1))) for k, v in (("H", H), ("P", P), ("Q", Q))}


@criterion(9, "Hamiltonian flow conserves H, P, Q; Hermite data stay single-mode")
def test_hamiltonian(record_property):
    table = build_lambda_table(6)
    rng = np.random.default_rng(9)
    a0 = rng.standard_normal(7) + 1j * rng.standard_normal(7)
    a0 /= np.linalg.norm(a0)
    rep = hamiltonian_flow(a0, table, dt=1e-4, n_steps=10_000, keep_trajectory=True)
    drift = _drifts(rep.trajectory, table)
    leak = mod = 0.0
    for m in range(7):
        e = np.zeros(7, dtype=complex)
        e[m] = 1.0
        traj = hamiltonian_flow(e, table, dt=1e-4, n_steps=10_000, keep_trajectory=True).trajectory
        leak = max(leak, float(np.max(np.abs(np.delete(traj, m, axis=1)))))
        mod = max(mod, float(np.max(np.abs(np.abs(traj[:, m]) - 1.0))))
    record_property("drift", {k: _fmt(v) for k, v in drift.items()})
    record_property("mode_leak", _fmt(leak))
    record_property("modulus_dev", _fmt(mod))
    assert all(v < 1e-8 for v in drift.values())
    assert leak < 1e-10 and mod < 1e-10


@criterion(10, "QMHO Hessian 4(k-m) exactly; flow to the ground state")
def test_qmho(record_property):
    exact = all(qmho_hessian_diag(m, k) == 4.0 * (k - m)
                for m in range(12) for k in range(12) if k != m)
    exact &= all(np.array_equal(np.diag(qmho_hessian_matrix(m, 12)),
                                [4.0 * (k - m) for k in range(12) if k != m]) for m in range(12))
    fd_err = max(abs(qmho_hessian_fd(m, k, k, 8) - 4.0 * (k - m))
                 for m in range(8) for k in range(8) if k != m)
    a0 = np.array([1.0, 0.1, 0.1])
    traj = qmho_flow(a0, n_steps=2000)
    q_err = abs(traj.Q[-1] - 1.0)
    record_property("fd_err", _fmt(fd_err))
    record_property("Q_final_err", _fmt(q_err))
    assert exact
    assert fd_err < 1e-5
    assert q_err < 1e-6 and qmho_functional(a0) > 1.0


@criterion(11, "FD unconstrained Hessian at e_m (N=8) has the constrained block structure")
@pytest.mark.parametrize("m", range(5))
def test_block_structure(m, record_property):
    table = build_lambda_table(8)
    e = np.zeros(9, dtype=complex)
    e[m] = 1.0
    D = unconstrained_hessian_fd(e, table)
    crit = [m, 9 + m]
    rest = [i for i in range(18) if i not in crit]
    C = np.zeros((18, 18))
    idx = [k for k in range(9) if k != m]
    C[np.ix_(idx, idx)] = constrained_hessian_matrix(m, 8)
    C[9:, 9:] = constrained_hessian_matrix(m, 8, "imag")
    crit_max = float(np.max(np.abs(D[crit])))
    block_err = float(np.max(np.abs(D[np.ix_(rest, rest)] - C[np.ix_(rest, rest)])))
    record_property(f"m{m}", f"crit {_fmt(crit_max)}, block {_fmt(block_err)}")
    assert crit_max < 1e-6
    assert block_err < 1e-6
