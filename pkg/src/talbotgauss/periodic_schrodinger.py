"""Fourier-mode evolution of i u_t + alpha u_xx = V(x) u with 2pi-periodic V.

A plane wave exp(i omega x) evolves into

    u(t, x) = sum_k exp(-i alpha (k + omega)**2 t) psi_k(t) exp(i (k + omega) x),

where the mode vector psi (indices -K..K, stored at offset K) solves

    i psi_k' = sum_l c_l exp(2i omega l t) exp(i alpha l (2k - l) t) psi_{k-l},

i.e. Psi' = -i A(t) Psi with A Hermitian.  Note ``omega`` in the matrix
builders is the raw twist rate; the plane-wave routines pass
``alpha * omega``, which is the twisted-potential harmonic law.

Two propagators are provided: the single truncated exponential series of
the time integral B(t) of A (``dyson_literal``, taken as written, without
the -i and without time ordering), and a 4th-order Magnus product that
converges to the true flow (``dyson_corrected``).  ``rk4_oracle`` is the
reference.
"""

from __future__ import annotations

import math
from typing import Literal, Optional

import mpmath
import numpy as np

from .galilean import twist_potential
from .potential import PeriodicPotential
from .superosc import binomial_weights_mp, required_digits

Engine = Literal["literal", "corrected", "oracle"]
RESONANCE_TOL = 1e-9


class TruncationError(ValueError):
    pass


def mode_axis(K_modes: int) -> np.ndarray:
    return np.arange(-K_modes, K_modes + 1)


def delta_modes(K_modes: int) -> np.ndarray:
    """The mode vector of a single plane wave: psi_k = [k == 0]."""
    psi = np.zeros(2 * K_modes + 1, dtype=complex)
    psi[K_modes] = 1.0
    return psi


def _check_truncation(V: PeriodicPotential, K_modes: int):
    if K_modes < V.bandwidth:
        raise TruncationError(
            f"K_modes={K_modes} is smaller than the potential bandwidth {V.bandwidth}")


def _band(K_modes: int, l: int):
    # rows k whose partner k - l is inside the truncation, as array indices
    ks = mode_axis(K_modes)
    ks = ks[(ks - l >= -K_modes) & (ks - l <= K_modes)]
    return ks, ks + K_modes, ks - l + K_modes


def coupling_matrix(t: float, alpha: int, omega: float, V: PeriodicPotential,
                    K_modes: int) -> np.ndarray:
    """A(t): entry (k, k - l) = c_l exp(2i omega l t) exp(i alpha l (2k - l) t)."""
    _check_truncation(V, K_modes)
    n = 2 * K_modes + 1
    A = np.zeros((n, n), dtype=complex)
    for l, c in V.harmonics.items():
        ks, i, j = _band(K_modes, l)
        A[i, j] = c * np.exp(1j * (2 * omega * l + alpha * l * (2 * ks - l)) * t)
    return A


def b_matrix(t: float, alpha: int, omega: float, V: PeriodicPotential,
             M_trunc: Optional[int], K_modes: int) -> np.ndarray:
    """B(t) = int_0^t A(tau) dtau over the harmonics |l| <= M_trunc.

    Entry (k, k - l) = c_l (exp(i theta t) - 1)/(i theta) with
    theta = 2 omega l + alpha l (2k - l), and c_l t at resonance.
    """
    if M_trunc is not None:
        V = V.truncated(M_trunc)
    _check_truncation(V, K_modes)
    n = 2 * K_modes + 1
    B = np.zeros((n, n), dtype=complex)
    for l, c in V.harmonics.items():
        ks, i, j = _band(K_modes, l)
        theta = 2 * omega * l + alpha * l * (2 * ks - l)
        # (e^{i th t} - 1)/(i th) = t e^{i th t/2} sinc(th t / 2pi), stable near 0
        val = t * np.exp(0.5j * theta * t) * np.sinc(theta * t / (2 * math.pi))
        B[i, j] = c * np.where(np.abs(theta) < RESONANCE_TOL, t, val)
    return B


def truncated_exp_apply(X: np.ndarray, N: int, psi: np.ndarray) -> np.ndarray:
    """(Id + sum_{n=1}^N X^n / n!) psi by repeated matrix-vector products."""
    if N < 0:
        raise ValueError(f"series order must be >= 0, got {N}")
    term = np.array(psi, dtype=complex)
    out = term.copy()
    for n in range(1, N + 1):
        term = X @ term / n
        out += term
    return out


def dyson_literal(B: np.ndarray, N: int, psi0: np.ndarray) -> np.ndarray:
    """Truncated exponential of B itself applied to psi0 (no -i, no ordering)."""
    return truncated_exp_apply(B, N, psi0)


_GL_OFFSET = math.sqrt(3) / 6


def _magnus_step(t0, h, alpha, omega, V, K_modes, order):
    if order == 2:
        return -1j * h * coupling_matrix(t0 + h / 2, alpha, omega, V, K_modes)
    A1 = -1j * coupling_matrix(t0 + h * (0.5 - _GL_OFFSET), alpha, omega, V, K_modes)
    A2 = -1j * coupling_matrix(t0 + h * (0.5 + _GL_OFFSET), alpha, omega, V, K_modes)
    return h / 2 * (A1 + A2) + (math.sqrt(3) * h * h / 12) * (A2 @ A1 - A1 @ A2)


def dyson_corrected(t: float, alpha: int, omega: float, V: PeriodicPotential,
                    K_modes: int, substeps: int, N: int, psi0: np.ndarray,
                    t0: float = 0.0, order: int = 4) -> np.ndarray:
    """Time-ordered propagator from t0 to t as a product of Magnus steps.

    Each substep applies the order-N series of exp(Omega), with Omega the
    Gauss-Legendre Magnus exponent (order 4) or the midpoint rule (order 2).
    """
    if substeps < 1:
        raise ValueError(f"substeps must be >= 1, got {substeps}")
    if order not in (2, 4):
        raise ValueError(f"Magnus order must be 2 or 4, got {order}")
    _check_truncation(V, K_modes)
    h = (t - t0) / substeps
    psi = np.array(psi0, dtype=complex)
    for m in range(substeps):
        omega_m = _magnus_step(t0 + m * h, h, alpha, omega, V, K_modes, order)
        psi = truncated_exp_apply(omega_m, N, psi)
    return psi


def rk4_oracle(t: float, alpha: int, omega: float, V: PeriodicPotential,
               K_modes: int, steps: int, psi0: np.ndarray,
               t0: float = 0.0) -> np.ndarray:
    """Classical RK4 on Psi' = -i A(tau) Psi."""
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    _check_truncation(V, K_modes)
    h = (t - t0) / steps
    psi = np.array(psi0, dtype=complex)

    def rhs(tau, y):
        return -1j * (coupling_matrix(tau, alpha, omega, V, K_modes) @ y)

    for m in range(steps):
        tau = t0 + m * h
        k1 = rhs(tau, psi)
        k2 = rhs(tau + h / 2, psi + h / 2 * k1)
        k3 = rhs(tau + h / 2, psi + h / 2 * k2)
        k4 = rhs(tau + h, psi + h * k3)
        psi = psi + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return psi


def mode_trajectory(times, omega: float, alpha: int, V: PeriodicPotential,
                    K_modes: int = 16, M_trunc: Optional[int] = None, N: int = 12,
                    substeps: int = 64, engine: Engine = "corrected",
                    oracle_steps: int = 4096) -> np.ndarray:
    """psi(t) for a plane wave of frequency omega, one row per time.

    ``substeps`` and ``oracle_steps`` count steps over [0, max(times)]; the
    stepping engines march through the sorted times, so a dense time grid
    costs no more than a single run to its last point.
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(np.diff(times) < 0) or np.any(times < 0):
        raise ValueError("times must be non-negative and non-decreasing")
    if alpha not in (1, -1):
        raise ValueError(f"alpha must be +1 or -1, got {alpha}")
    if M_trunc is not None:
        V = V.truncated(M_trunc)
    rate = twist_potential(V, omega, alpha).rate / 2  # = alpha * omega
    psi = delta_modes(K_modes)
    out = np.empty((times.size, psi.size), dtype=complex)
    if engine == "literal":
        for i, t in enumerate(times):
            out[i] = dyson_literal(b_matrix(t, alpha, rate, V, None, K_modes), N, psi)
        return out
    if engine not in ("corrected", "oracle"):
        raise ValueError(f"unknown engine {engine!r}")
    span = times[-1] if times.size else 0.0
    total = substeps if engine == "corrected" else oracle_steps
    prev = 0.0
    for i, t in enumerate(times):
        if t > prev:
            n = max(1, math.ceil(total * (t - prev) / span - 1e-9))
            if engine == "corrected":
                psi = dyson_corrected(t, alpha, rate, V, K_modes, n, N, psi, t0=prev)
            else:
                psi = rk4_oracle(t, alpha, rate, V, K_modes, n, psi, t0=prev)
        out[i] = psi
        prev = t
    return out


def assemble_field(times, x, psi_rows: np.ndarray, omega: float,
                   alpha: int) -> np.ndarray:
    """u(t, x) = sum_k exp(-i alpha (k+omega)**2 t) psi_k(t) exp(i (k+omega) x)."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    x = np.asarray(x, dtype=float)
    K_modes = (psi_rows.shape[1] - 1) // 2
    lam = mode_axis(K_modes) + omega
    amps = psi_rows * np.exp(-1j * alpha * np.outer(times, lam * lam))
    return amps @ np.exp(1j * np.outer(lam, x))


def plane_wave_evolution(omega: float, alpha: int, t, x, V: PeriodicPotential,
                         K_modes: int = 16, M_trunc: Optional[int] = None,
                         N: int = 12, substeps: int = 64,
                         engine: Engine = "corrected",
                         oracle_steps: int = 4096) -> np.ndarray:
    """Field samples of the evolved plane wave exp(i omega x).

    Returns shape (len(t), len(x)), or (len(x),) for scalar t.
    """
    scalar = np.ndim(t) == 0
    rows = mode_trajectory(t, omega, alpha, V, K_modes, M_trunc, N, substeps,
                           engine, oracle_steps)
    field = assemble_field(t, x, rows, omega, alpha)
    return field[0] if scalar else field


def pde_residual(field: np.ndarray, t_axis, x_axis, V: PeriodicPotential,
                 alpha: int) -> np.ndarray:
    """|i u_t + alpha u_xx - V u| at interior points, 2nd-order central differences."""
    t_axis = np.asarray(t_axis, dtype=float)
    x_axis = np.asarray(x_axis, dtype=float)
    dt = t_axis[1] - t_axis[0]
    dx = x_axis[1] - x_axis[0]
    u = field
    u_t = (u[2:, 1:-1] - u[:-2, 1:-1]) / (2 * dt)
    u_xx = (u[1:-1, 2:] - 2 * u[1:-1, 1:-1] + u[1:-1, :-2]) / dx ** 2
    pot = V(x_axis[1:-1])[None, :]
    return np.abs(1j * u_t + alpha * u_xx - pot * u[1:-1, 1:-1])


def max_mode_deviation(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


# single-exponential truncation and its superoscillatory superposition

def truncated_plane_wave(lam: float, alpha: int, t, x, V: PeriodicPotential,
                         K_modes: int = 8, M_trunc: Optional[int] = 1, N: int = 8,
                         literal: bool = True) -> np.ndarray:
    """Field of the single order-N series exp(s B(t)) delta, s = 1 (literal) or -i.

    Shape (len(t), len(x)).  This is the fixed-(K, M, N) truncation whose
    dependence on ``lam`` is entire, so superpositions over lam supershift.
    """
    times = np.atleast_1d(np.asarray(t, dtype=float))
    s = 1.0 if literal else -1j
    psi0 = delta_modes(K_modes)
    rows = np.array([truncated_exp_apply(s * b_matrix(tt, alpha, alpha * lam, V, M_trunc,
                                                      K_modes), N, psi0)
                     for tt in times])
    return assemble_field(times, x, rows, lam, alpha)


def _modes_mp(lam, alpha, t, harmonics, K_modes, N, s):
    # order-N series of exp(s B(t)) applied to delta, in mpmath
    ks = range(-K_modes, K_modes + 1)
    entries = {}
    for l, c in harmonics.items():
        for k in ks:
            if not -K_modes <= k - l <= K_modes:
                continue
            theta = 2 * alpha * lam * l + alpha * l * (2 * k - l)
            if abs(theta) < RESONANCE_TOL:
                val = c * t
            else:
                val = c * (mpmath.expj(theta * t) - 1) / (1j * theta)
            entries[(k, l)] = s * val
    term = {k: mpmath.mpc(1 if k == 0 else 0) for k in ks}
    out = dict(term)
    for n in range(1, N + 1):
        new = {}
        for k in ks:
            acc = mpmath.mpc(0)
            for l in harmonics:
                e = entries.get((k, l))
                if e is not None:
                    acc += e * term[k - l]
            new[k] = acc / n
        term = new
        for k in ks:
            out[k] += term[k]
    return out


def supershift_superposition(omega: float, N_prime: int, alpha: int, t, x,
                             V: PeriodicPotential, K_modes: int = 8,
                             M_trunc: Optional[int] = 1, N: int = 8,
                             literal: bool = True) -> np.ndarray:
    """sum_nu C_nu(omega) u_{1 - 2 nu/N'}(t, x) over the truncated plane waves.

    The weights reach max(|omega|, 1)**N' in size and cancel, so the sum is
    formed in multiprecision; x enters through a polynomial in
    exp(-2i x/N'), evaluated by Horner's rule.
    """
    if N_prime < 1:
        raise ValueError(f"N' must be >= 1, got {N_prime}")
    times = np.atleast_1d(np.asarray(t, dtype=float))
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if M_trunc is not None:
        V = V.truncated(M_trunc)
    _check_truncation(V, K_modes)
    s = 1 if literal else -1j
    dps = required_digits(N_prime, omega, guard=25)
    out = np.empty((times.size, xs.size), dtype=complex)
    with mpmath.workdps(dps):
        weights = binomial_weights_mp(N_prime, omega)
        harmonics = {l: mpmath.mpc(c) for l, c in V.harmonics.items()}
        lams = [1 - mpmath.mpf(2 * nu) / N_prime for nu in range(N_prime + 1)]
        for i, tt in enumerate(times):
            tm = mpmath.mpf(tt)
            # coef[k][nu] = C_nu exp(-i alpha (k + lam)^2 t) psi_k(lam, t)
            coef = {k: [] for k in range(-K_modes, K_modes + 1)}
            for w, lam in zip(weights, lams):
                psi = _modes_mp(lam, alpha, tm, harmonics, K_modes, N, s)
                for k, v in psi.items():
                    coef[k].append(w * v * mpmath.expj(-alpha * (k + lam) ** 2 * tm))
            for j, xx in enumerate(xs):
                xm = mpmath.mpf(xx)
                z = mpmath.expj(-2 * xm / N_prime)
                total = mpmath.mpc(0)
                for k, cs in coef.items():
                    acc = mpmath.mpc(0)
                    for cval in reversed(cs):
                        acc = acc * z + cval
                    total += acc * mpmath.expj((k + 1) * xm)
                out[i, j] = complex(total)
    return out
