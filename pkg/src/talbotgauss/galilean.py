"""Shift, modulation and Galilean operators acting exactly on plane-wave fields.

A field is a finite sum ``sum_j a_j(t) exp(i w_j x)``.  Every operator here
either moves the frequencies or multiplies an amplitude by a linear phase
``exp(i r t)``, so all of them act term-wise without discretisation error.

Sign convention for ``alpha``: solutions of ``i u_t + alpha u_xx = V u``.
A free mode of frequency ``w`` then carries ``exp(-i alpha w**2 t)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Literal, Sequence, Union

import numpy as np

from .potential import PeriodicPotential

Convention = Literal["corrected", "literal"]


@dataclass(frozen=True)
class PhaseAmplitude:
    """a(t) = coef * exp(i * (c0 + c1 t + c2 t**2 + ...)) with real c_n."""
    coef: complex
    phase: tuple = (0.0,)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return self.coef * np.exp(1j * np.polynomial.polynomial.polyval(t, self.phase))

    def with_phase(self, rate: float) -> "PhaseAmplitude":
        """Multiply by exp(i rate t)."""
        phase = list(self.phase) + [0.0] * max(0, 2 - len(self.phase))
        phase[1] += rate
        return PhaseAmplitude(self.coef, tuple(phase))

    def conjugate(self) -> "PhaseAmplitude":
        return PhaseAmplitude(complex(self.coef).conjugate(), tuple(-c for c in self.phase))


@dataclass(frozen=True)
class SampledAmplitude:
    """Amplitude known on a time grid; linear interpolation in between."""
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if times.shape != values.shape or times.ndim != 1:
            raise ValueError("times and values must be 1-d arrays of equal length")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return (np.interp(t, self.times, self.values.real)
                + 1j * np.interp(t, self.times, self.values.imag))

    def with_phase(self, rate: float) -> "SampledAmplitude":
        return SampledAmplitude(self.times, self.values * np.exp(1j * rate * self.times))

    def conjugate(self) -> "SampledAmplitude":
        return SampledAmplitude(self.times, self.values.conj())


Amplitude = Union[PhaseAmplitude, SampledAmplitude]


@dataclass(frozen=True)
class PlaneWaveField:
    """sum_j a_j(t) exp(i w_j x) with distinct frequencies w_j."""
    terms: tuple = dc_field(default_factory=tuple)

    def __post_init__(self):
        terms = tuple((float(w), a) for w, a in self.terms)
        freqs = [w for w, _ in terms]
        if len(set(freqs)) != len(freqs):
            raise ValueError(f"repeated frequencies in {freqs}")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def free(cls, frequencies: Sequence[float], coefs: Sequence[complex],
             alpha: int = 1) -> "PlaneWaveField":
        """Solution of the free equation: a_j(t) = a_j(0) exp(-i alpha w_j**2 t)."""
        return cls(tuple((w, PhaseAmplitude(complex(c), (0.0, -alpha * w * w)))
                         for w, c in zip(frequencies, coefs)))

    @property
    def frequencies(self) -> np.ndarray:
        return np.array([w for w, _ in self.terms])

    def amplitudes(self, t) -> np.ndarray:
        """Array of shape (n_terms,) + shape(t)."""
        return np.array([a(t) for _, a in self.terms])

    def __call__(self, t, x):
        t, x = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
        out = np.zeros(t.shape, dtype=complex)
        for w, a in self.terms:
            out += a(t) * np.exp(1j * w * x)
        return out

    def conjugate(self) -> "PlaneWaveField":
        return PlaneWaveField(tuple((-w, a.conjugate()) for w, a in self.terms))

    def sampled(self, times) -> "PlaneWaveField":
        times = np.asarray(times, dtype=float)
        return PlaneWaveField(tuple((w, SampledAmplitude(times, a(times)))
                                    for w, a in self.terms))

    def dump_rows(self, times):
        """Rows (omega_j, t, re a_j(t), im a_j(t)) for the field CSV."""
        times = np.asarray(times, dtype=float)
        rows = []
        for w, a in self.terms:
            vals = a(times)
            rows.extend((w, t, v.real, v.imag) for t, v in zip(times, vals))
        return rows


def shift_op(field: PlaneWaveField, omega: float) -> PlaneWaveField:
    """u(t, x) -> u(t, x - omega t): a_j picks up exp(-i w_j omega t)."""
    if omega == 0:
        return field
    return PlaneWaveField(tuple((w, a.with_phase(-w * omega)) for w, a in field.terms))


def modulation_op(field: PlaneWaveField, omega: float) -> PlaneWaveField:
    """u -> exp(i omega x) u: every frequency moves by omega."""
    if omega == 0:
        return field
    return PlaneWaveField(tuple((w + omega, a) for w, a in field.terms))


def galilean_transform(field: PlaneWaveField, omega: float, alpha: int = 1,
                       convention: Convention = "corrected") -> PlaneWaveField:
    """Shift, modulate, shift.

    The corrected convention shifts by ``alpha * omega`` twice, which gives
    (t, x) -> exp(i omega x - i alpha omega**2 t) u(t, x - 2 alpha omega t) and
    maps free solutions to free solutions for either sign of ``alpha``.  The
    literal convention uses the alpha = 1 operator for both signs.
    """
    if alpha not in (1, -1):
        raise ValueError(f"alpha must be +1 or -1, got {alpha}")
    if convention not in ("corrected", "literal"):
        raise ValueError(f"unknown convention {convention!r}")
    v = alpha * omega if convention == "corrected" else omega
    return shift_op(modulation_op(shift_op(field, v), omega), v)


def rescale_field(field: PlaneWaveField, gamma: float) -> PlaneWaveField:
    """u(t, x) -> u(t, gamma x)."""
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    return PlaneWaveField(tuple((gamma * w, a) for w, a in field.terms))


def free_mode_residual(field: PlaneWaveField, alpha: int, times) -> float:
    """Largest |i a_j' - alpha w_j**2 a_j| by central differences on ``times``.

    Zero (up to O(dt**2)) iff every term follows the free mode law.
    """
    times = np.asarray(times, dtype=float)
    dt = np.diff(times)
    if not np.allclose(dt, dt[0]):
        raise ValueError("times must be uniformly spaced")
    worst = 0.0
    for w, a in field.terms:
        vals = a(times)
        deriv = (vals[2:] - vals[:-2]) / (2 * dt[0])
        res = 1j * deriv - alpha * w * w * vals[1:-1]
        worst = max(worst, float(np.max(np.abs(res))))
    return worst


@dataclass(frozen=True)
class TwistedPotential:
    """Harmonics c_l exp(2i l alpha omega t) (direction folded into omega)."""
    base: PeriodicPotential
    omega: float
    alpha: int = 1

    @property
    def rate(self) -> float:
        """Phase rate per harmonic index: c_l(t) = c_l exp(i l rate t)."""
        return 2 * self.alpha * self.omega

    def harmonics(self, t: float) -> dict:
        return self.base.phase_shifted(self.rate)(t)

    def __call__(self, t: float, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        for l, c in self.harmonics(t).items():
            out += c * np.exp(1j * l * x)
        return out.real


def twist_potential(V: PeriodicPotential, omega: float, alpha: int = 1,
                    direction: int = 1) -> TwistedPotential:
    """V(t, x + 2 direction alpha omega t), as a harmonic phase law.

    direction = +1 with alpha = 1 is the frame in which a plane wave of
    frequency omega evolves against V.
    """
    if alpha not in (1, -1) or direction not in (1, -1):
        raise ValueError("alpha and direction must be +1 or -1")
    return TwistedPotential(V, direction * omega, alpha)
