"""Real 2pi-periodic potentials stored by their Fourier harmonics."""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Mapping

import numpy as np


class PotentialError(ValueError):
    pass


@dataclass(frozen=True)
class PeriodicPotential:
    """V(x) = sum_l c_l exp(i l x) with c_{-l} = conj(c_l).

    ``harmonics`` holds every nonzero c_l, negative indices included.
    """
    harmonics: Mapping[int, complex]

    def __post_init__(self):
        h = {int(l): complex(c) for l, c in self.harmonics.items() if c != 0}
        for l, c in h.items():
            partner = h.get(-l, 0j)
            if abs(partner - c.conjugate()) > 1e-12 * max(1.0, abs(c)):
                raise PotentialError(
                    f"harmonics {l} and {-l} are not conjugate: {c} vs {partner}")
        object.__setattr__(self, "harmonics", dict(sorted(h.items())))

    @classmethod
    def from_nonnegative(cls, harmonics: Mapping[int, complex]) -> "PeriodicPotential":
        """Build from c_l, l >= 0; the negative harmonics follow by symmetry."""
        full = {}
        for l, c in harmonics.items():
            if l < 0:
                raise PotentialError(f"negative harmonic index {l}")
            c = complex(c)
            if l == 0:
                if abs(c.imag) > 1e-12:
                    raise PotentialError(f"c_0 must be real, got {c}")
                c = complex(c.real)
            full[l] = c
            full[-l] = c.conjugate()
        return cls(full)

    @classmethod
    def zero(cls) -> "PeriodicPotential":
        return cls({})

    @property
    def bandwidth(self) -> int:
        """Largest |l| with c_l != 0 (0 for a constant or zero potential)."""
        return max((abs(l) for l in self.harmonics), default=0)

    @property
    def l1_norm(self) -> float:
        return sum(abs(c) for c in self.harmonics.values())

    def coefficient(self, l: int) -> complex:
        return self.harmonics.get(l, 0j)

    def truncated(self, M: int) -> "PeriodicPotential":
        return PeriodicPotential({l: c for l, c in self.harmonics.items() if abs(l) <= M})

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        for l, c in self.harmonics.items():
            out += c * np.exp(1j * l * x)
        return out.real

    def nonnegative_rows(self):
        """(l, re, im) for l >= 0, the on-disk representation."""
        return [(l, c.real, c.imag) for l, c in self.harmonics.items() if l >= 0]

    def phase_shifted(self, rate: float):
        """Harmonic law t -> {l: c_l exp(i l rate t)} as a callable."""
        def at(t: float) -> dict:
            return {l: c * cmath.exp(1j * l * rate * t) for l, c in self.harmonics.items()}
        return at
