import math

import numpy as np
import pytest

from talbotgauss import periodic_schrodinger as ps
from talbotgauss.potential import PeriodicPotential

COS = PeriodicPotential.from_nonnegative({1: 1.0})  # 2 cos x
ZERO = PeriodicPotential.zero()
K = 6
i0 = K  # array index of mode 0


def test_coupling_examples():
    assert not ps.coupling_matrix(0.4, 1, 0.3, ZERO, K).any()
    A = ps.coupling_matrix(0.8, 1, 0.0, COS, K)
    assert A[i0 + 1, i0] == pytest.approx(np.exp(0.8j))
    assert A[i0, i0 + 1] == pytest.approx(np.exp(-0.8j))
    with pytest.raises(ps.TruncationError):
        ps.coupling_matrix(0.0, 1, 0.0, PeriodicPotential.from_nonnegative({3: 1}), 2)


def test_coupling_hermitian():
    V = PeriodicPotential.from_nonnegative({0: 1.0, 1: 0.3 + 0.4j, 2: -0.2j})
    for t in np.linspace(0, 3, 7):
        A = ps.coupling_matrix(t, -1, 1.3, V, K)
        assert np.abs(A - A.conj().T).max() < 1e-14


def test_b_matrix_examples():
    assert not ps.b_matrix(0.0, 1, 0.2, COS, None, K).any()
    B = ps.b_matrix(1.0, 1, 0.0, COS, None, K)
    assert B[i0 + 1, i0] == pytest.approx((np.exp(1j) - 1) / 1j)
    # theta = 2 omega + (2k - 1) vanishes at k = 0 for omega = 1/2
    t = 0.7
    B = ps.b_matrix(t, 1, 0.5, COS, None, K)
    assert B[i0, i0 - 1] == pytest.approx(t)


def test_b_matrix_is_integral_of_coupling():
    V = PeriodicPotential.from_nonnegative({1: 0.5, 2: 0.25j})
    t = 0.9
    nodes, weights = np.polynomial.legendre.leggauss(40)
    taus = t / 2 * (nodes + 1)
    integral = sum(w * ps.coupling_matrix(s, 1, 0.3, V, K) for w, s in zip(weights, taus)) * t / 2
    assert np.abs(ps.b_matrix(t, 1, 0.3, V, None, K) - integral).max() < 1e-12


def test_b_matrix_entry_bound_and_truncation():
    V = PeriodicPotential.from_nonnegative({1: 0.5, 2: 0.3})
    t = 1.7
    B = ps.b_matrix(t, 1, 0.4, V, None, K)
    ks = ps.mode_axis(K)
    for a, k in enumerate(ks):
        for b, kp in enumerate(ks):
            assert abs(B[a, b]) <= abs(V.coefficient(k - kp)) * t + 1e-15
    B1 = ps.b_matrix(t, 1, 0.4, V, 1, K)
    assert not np.diag(B1, 2).any() and np.diag(B1, 1).any()


def test_dyson_literal_examples():
    psi0 = ps.delta_modes(K)
    B = ps.b_matrix(1.0, 1, 0.0, COS, None, K)
    assert np.array_equal(ps.dyson_literal(B, 0, psi0), psi0)
    assert np.array_equal(ps.dyson_literal(ps.b_matrix(1, 1, 0, ZERO, None, K), 5, psi0), psi0)
    one = ps.dyson_literal(B, 1, psi0)
    assert one[i0] == 1
    assert one[i0 + 1] == B[i0 + 1, i0] and one[i0 - 1] == B[i0 - 1, i0]


def test_corrected_reduces_to_series_for_commuting_generator():
    # alpha = 0 and omega = 0 make A constant, so every Magnus commutator vanishes
    psi0 = ps.delta_modes(K)
    t = 0.6
    one_step = ps.dyson_corrected(t, 0, 0.0, COS, K, 1, 30, psi0)
    series = ps.truncated_exp_apply(-1j * ps.b_matrix(t, 0, 0.0, COS, None, K), 30, psi0)
    assert np.abs(one_step - series).max() < 1e-14


def test_free_engines_leave_delta():
    psi0 = ps.delta_modes(K)
    for engine_out in (ps.dyson_corrected(1.0, 1, 0.3, ZERO, K, 4, 8, psi0),
                       ps.rk4_oracle(1.0, 1, 0.3, ZERO, K, 10, psi0)):
        assert np.array_equal(engine_out, psi0)


def test_rk4_fourth_order():
    psi0 = ps.delta_modes(12)
    ref = ps.rk4_oracle(1.0, 1, 0.7, COS, 12, 2048, psi0)
    e1 = np.abs(ps.rk4_oracle(1.0, 1, 0.7, COS, 12, 32, psi0) - ref).max()
    e2 = np.abs(ps.rk4_oracle(1.0, 1, 0.7, COS, 12, 64, psi0) - ref).max()
    assert 12 < e1 / e2 < 20


def test_magnus_orders():
    psi0 = ps.delta_modes(12)
    ref = ps.rk4_oracle(1.0, 1, 0.7, COS, 12, 2048, psi0)
    err = {}
    for order in (2, 4):
        err[order] = [np.abs(ps.dyson_corrected(1.0, 1, 0.7, COS, 12, n, 12, psi0, order=order)
                             - ref).max() for n in (16, 32)]
    assert 3 < err[2][0] / err[2][1] < 5
    assert 12 < err[4][0] / err[4][1] < 20
    with pytest.raises(ValueError):
        ps.dyson_corrected(1.0, 1, 0.7, COS, 12, 4, 12, psi0, order=3)


def test_norm_conservation():
    psi = ps.rk4_oracle(1.0, -1, 0.4, COS, 16, 4096, ps.delta_modes(16))
    assert abs(np.linalg.norm(psi) - 1) < 1e-8


def test_plane_wave_free_case():
    t = np.linspace(0, 1, 5)
    x = np.linspace(-math.pi, math.pi, 9)
    for engine in ("literal", "corrected", "oracle"):
        u = ps.plane_wave_evolution(0.7, 1, t, x, ZERO, engine=engine, oracle_steps=64)
        assert np.abs(u - np.exp(0.7j * x - 0.49j * t[:, None])).max() < 1e-12
    assert ps.plane_wave_evolution(0.7, 1, 0.5, x, ZERO).shape == (9,)


def test_plane_wave_residual_alpha_minus_one():
    h = 0.005
    ts = 0.5 + h * np.arange(40)
    xs = h * np.arange(40)
    u = ps.plane_wave_evolution(-0.4, -1, ts, xs, COS)
    assert ps.pde_residual(u, ts, xs, COS, -1).max() < 1e-3
    # the same field fails the equation with the other sign of alpha
    assert ps.pde_residual(u, ts, xs, COS, 1).max() > 1e-1


def test_literal_engine_diverges():
    psi0 = ps.delta_modes(16)
    lit = ps.mode_trajectory([1.0], 0.7, 1, COS, engine="literal")[0]
    ref = ps.rk4_oracle(1.0, 1, 0.7, COS, 16, 1024, psi0)
    assert np.abs(lit - ref).max() > 0.5


def test_mode_trajectory_validation():
    with pytest.raises(ValueError):
        ps.mode_trajectory([0.5, 0.2], 0.1, 1, COS)
    with pytest.raises(ValueError):
        ps.mode_trajectory([0.5], 0.1, 2, COS)
    with pytest.raises(ValueError):
        ps.mode_trajectory([0.5], 0.1, 1, COS, engine="euler")


def test_supershift_single_term_and_free_limit():
    t = np.array([0.0, 0.2])
    x = np.linspace(-1, 1, 5)
    one = ps.supershift_superposition(1.0, 9, 1, t, x, COS)
    assert np.abs(one - ps.truncated_plane_wave(1.0, 1, t, x, COS)).max() < 1e-12
    errs = [np.abs(ps.supershift_superposition(1.5, n, 1, t, x, ZERO)
                   - np.exp(1.5j * x - 2.25j * t[:, None])).max() for n in (10, 40)]
    assert errs[1] < errs[0] / 3
