import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from talbotgauss import galilean as gl
from talbotgauss.potential import PeriodicPotential, PotentialError

T = np.linspace(0, 1, 17)
X = np.linspace(-3, 3, 13)
TT, XX = np.meshgrid(T, X, indexing="ij")


def sample_field():
    return gl.PlaneWaveField((
        (1.0, gl.PhaseAmplitude(1 + 0.5j, (0.1, -0.7, 0.2))),
        (-2.5, gl.PhaseAmplitude(-0.3j, (0.0, 1.1))),
    ))


def close(f, g, atol=1e-12):
    return np.allclose(f(TT, XX), g(TT, XX), atol=atol)


def test_shift_examples():
    f = sample_field()
    assert gl.shift_op(f, 0) is f
    single = gl.PlaneWaveField(((1.0, gl.PhaseAmplitude(1)),))
    shifted = gl.shift_op(single, 2.0)
    assert np.allclose(shifted.amplitudes(T)[0], np.exp(-2j * T))
    assert np.allclose(shifted(TT, XX), np.exp(1j * (XX - 2 * TT)))
    assert close(gl.shift_op(gl.shift_op(f, 1.3), -1.3), f)


def test_modulation_examples():
    f = sample_field()
    assert gl.modulation_op(f, 0) is f
    one = gl.PlaneWaveField(((0.0, gl.PhaseAmplitude(1)),))
    m = gl.modulation_op(one, 3.0)
    assert list(m.frequencies) == [3.0]
    assert close(gl.modulation_op(gl.modulation_op(f, 0.4), -0.4), f)
    assert close(gl.modulation_op(f, 0.4), lambda t, x: np.exp(0.4j * x) * f(t, x))


def test_shift_modulation_commutator_phase():
    f = sample_field()
    w1, w2 = 0.6, -1.7
    a = gl.shift_op(gl.modulation_op(f, w2), w1)
    b = gl.modulation_op(gl.shift_op(f, w1), w2)
    assert np.allclose(a(TT, XX), np.exp(-1j * w1 * w2 * TT) * b(TT, XX))


def test_galilean_of_constant():
    one = gl.PlaneWaveField(((0.0, gl.PhaseAmplitude(1)),))
    w = 1.4
    g = gl.galilean_transform(one, w, 1)
    assert np.allclose(g(TT, XX), np.exp(1j * w * XX - 1j * w * w * TT))
    assert gl.galilean_transform(sample_field(), 0.0, -1) is not None
    assert close(gl.galilean_transform(sample_field(), 0.0, 1), sample_field())


@pytest.mark.parametrize("alpha", [1, -1])
def test_galilean_substitution_formula(alpha):
    f = sample_field()
    w = 0.9
    g = gl.galilean_transform(f, w, alpha)
    expected = np.exp(1j * w * XX - 1j * alpha * w * w * TT) * f(TT, XX - 2 * alpha * w * TT)
    assert np.allclose(g(TT, XX), expected)


def test_literal_convention_breaks_alpha_minus_one():
    free = gl.PlaneWaveField.free([0.5, -1.0], [1, 1j], alpha=-1)
    times = 1e-3 * np.arange(64)
    good = gl.galilean_transform(free.sampled(times), 0.8, -1)
    bad = gl.galilean_transform(free.sampled(times), 0.8, -1, convention="literal")
    assert gl.free_mode_residual(good, -1, times) < 1e-6
    assert gl.free_mode_residual(bad, -1, times) > 0.1


@given(st.floats(-3, 3), st.sampled_from([1, -1]), st.integers(0, 2**31))
@settings(max_examples=40, deadline=None)
def test_round_trip(omega, alpha, seed):
    from talbotgauss.verify import random_field
    f = random_field(np.random.default_rng(seed), sampled=seed % 2 == 1)
    back = gl.galilean_transform(gl.galilean_transform(f, omega, alpha), -omega, alpha)
    assert np.allclose(back.frequencies, f.frequencies, atol=1e-12)
    assert np.allclose(back.amplitudes(T), f.amplitudes(T), atol=1e-12)


def test_rescale():
    f = sample_field()
    assert close(gl.rescale_field(f, 1.0), f)
    e = gl.PlaneWaveField(((1.0, gl.PhaseAmplitude(1)),))
    assert gl.rescale_field(e, 2 * math.pi).frequencies[0] == pytest.approx(2 * math.pi)
    assert close(gl.rescale_field(gl.rescale_field(f, 3.0), 1 / 3.0), f)
    with pytest.raises(ValueError):
        gl.rescale_field(f, 0)


def test_field_validation_and_conjugate():
    with pytest.raises(ValueError):
        gl.PlaneWaveField(((1.0, gl.PhaseAmplitude(1)), (1.0, gl.PhaseAmplitude(2))))
    f = sample_field()
    assert np.allclose(f.conjugate()(TT, XX), np.conj(f(TT, XX)))
    s = f.sampled(T)
    assert np.allclose(s.conjugate()(TT, XX), np.conj(f(TT, XX)))
    rows = f.dump_rows(T[:3])
    assert len(rows) == 6 and rows[0][:2] == (1.0, 0.0)


def test_twist_examples():
    V = PeriodicPotential.from_nonnegative({1: 1.0})
    assert gl.twist_potential(V, 0.0).harmonics(0.7) == V.harmonics
    tw = gl.twist_potential(V, 1.0, 1, 1)
    h = tw.harmonics(0.3)
    assert h[1] == pytest.approx(np.exp(0.6j)) and h[-1] == pytest.approx(np.exp(-0.6j))
    x = np.linspace(-3, 3, 7)
    assert np.allclose(tw(0.3, x), 2 * np.cos(x + 0.6))
    back = gl.twist_potential(V, 1.0, 1, -1)
    combined = {l: h[l] * back.harmonics(0.3)[l] / V.harmonics[l] for l in h}
    assert combined == pytest.approx(V.harmonics)


def test_potential_validation():
    with pytest.raises(PotentialError):
        PeriodicPotential({1: 1.0, -1: 2.0})
    with pytest.raises(PotentialError):
        PeriodicPotential.from_nonnegative({0: 1j})
    V = PeriodicPotential.from_nonnegative({0: 0.5, 2: 1 - 1j})
    assert V.bandwidth == 2 and V.l1_norm == pytest.approx(0.5 + 2 * math.sqrt(2))
    x = np.linspace(0, 6, 5)
    assert np.allclose(V(x), 0.5 + 2 * np.cos(2 * x) + 2 * np.sin(2 * x))
