"""Generalized quadratic Gauss sums and the modular arithmetic behind them.

Throughout, ``G(a, b, c)`` denotes ``sum_{l=0}^{c-1} exp(2i*pi*(a*l**2 + b*l)/c)``
and a :class:`GaussSumSpec` ``(p, kappa, q)`` stands for ``G(-p, kappa, q)``,
the weight of the ``kappa``-th sub-comb at the rational Talbot time ``p/q``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

Method = Literal["direct", "closed_odd", "parity_even", "talbot", "superosc"]


class GaussParameterError(ValueError):
    """Invalid arguments for a Gauss sum evaluation."""


class NoInverseError(GaussParameterError):
    """Raised when an integer has no inverse modulo q."""


class UnsupportedCaseError(GaussParameterError):
    """The requested closed form does not cover these parameters."""


@dataclass(frozen=True)
class GaussSumSpec:
    p: int
    kappa: int
    q: int

    def __post_init__(self):
        if self.q < 1:
            raise GaussParameterError(f"q must be >= 1, got {self.q}")
        if not 0 <= self.kappa < self.q:
            raise GaussParameterError(
                f"kappa must lie in [0, {self.q}), got {self.kappa}")
        if self.q > 1 and math.gcd(self.p, self.q) != 1:
            raise GaussParameterError(
                f"p={self.p} and q={self.q} are not coprime")

    @classmethod
    def all_valid(cls, q_max: int, q_min: int = 1):
        """Yield every spec with ``q_min <= q <= q_max``, ``0 <= p < q``."""
        for q in range(q_min, q_max + 1):
            for p in range(q):
                if q > 1 and math.gcd(p, q) != 1:
                    continue
                for kappa in range(q):
                    yield cls(p, kappa, q)


@dataclass(frozen=True)
class GaussSumResult:
    spec: GaussSumSpec
    value: complex
    method: Method
    error_estimate: Optional[float] = None

    @property
    def modulus(self) -> float:
        return abs(self.value)

    @property
    def phase(self) -> float:
        """Argument in (-pi, pi]; 0 for a vanishing value."""
        if self.value == 0:
            return 0.0
        phase = cmath.phase(self.value)
        return math.pi if phase == -math.pi else phase

    def as_row(self) -> dict:
        return {
            "q": self.spec.q, "p": self.spec.p, "kappa": self.spec.kappa,
            "method": self.method, "re": self.value.real,
            "im": self.value.imag, "modulus": self.modulus,
            "phase": self.phase, "error_estimate": self.error_estimate,
        }


def gauss_sum(a: int, b: int, c: int) -> complex:
    """Direct c-term evaluation of G(a, b, c).

    The exponent ``a*l**2 + b*l`` is reduced modulo ``c`` in integer
    arithmetic before any trigonometry, so the accuracy does not degrade
    with ``l``.  No coprimality is required here.
    """
    if c < 1:
        raise GaussParameterError(f"modulus must be >= 1, got {c}")
    ell = np.arange(c, dtype=np.int64)
    residue = ((a % c) * (ell * ell % c) + (b % c) * ell) % c
    terms = np.exp(2j * np.pi * residue / c)
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def gauss_sums_all_b(a, c: int) -> np.ndarray:
    """G(a, b, c) for b = 0..c-1 at once, for one ``a`` or an array of them.

    Over b this is a length-c DFT of the chirp exp(2i*pi*a*l**2/c); the chirp
    exponent is reduced modulo c exactly.  Result shape is ``shape(a) + (c,)``.
    """
    if c < 1:
        raise GaussParameterError(f"modulus must be >= 1, got {c}")
    a = np.asarray(a, dtype=np.int64)
    ell = np.arange(c, dtype=np.int64)
    residue = ((a[..., None] % c) * (ell * ell % c)) % c
    chirp = np.exp(2j * np.pi * residue / c)
    return c * np.fft.ifft(chirp, axis=-1)


def gauss_sum_direct(spec: GaussSumSpec) -> complex:
    return gauss_sum(-spec.p, spec.kappa, spec.q)


def modular_inverse(p: int, q: int) -> int:
    """Return u in [0, q) with p*u = 1 (mod q), by the extended Euclid algorithm."""
    if q < 1:
        raise GaussParameterError(f"modulus must be >= 1, got {q}")
    if q == 1:
        return 0
    old_r, r = p % q, q
    old_s, s = 1, 0
    while r:
        quo = old_r // r
        old_r, r = r, old_r - quo * r
        old_s, s = s, old_s - quo * s
    if old_r != 1:
        raise NoInverseError(f"{p} has no inverse modulo {q} (gcd={old_r})")
    return old_s % q


def jacobi_symbol(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1, via quadratic reciprocity.

    Conventions: (a/1) = 1, and (a/n) = 0 whenever gcd(a, n) > 1.
    """
    if n < 1 or n % 2 == 0:
        raise GaussParameterError(f"n must be odd and positive, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def normal_gauss_closed(a: int, c: int) -> complex:
    """Gauss's closed form for the normal sum G(a, 0, c), gcd(a, c) = 1.

    Cases by c mod 4: 0 -> sqrt(c) (c/a) (1 + i**a); 1 -> sqrt(c) (a/c);
    2 -> 0; 3 -> i sqrt(c) (a/c).
    """
    if c < 1:
        raise GaussParameterError(f"c must be >= 1, got {c}")
    if math.gcd(a, c) != 1:
        raise GaussParameterError(f"a={a} and c={c} are not coprime")
    if c == 1:
        return 1 + 0j
    # G(a, 0, c) only depends on a mod c; this also makes a positive
    a %= c
    root = math.sqrt(c)
    r = c % 4
    if r == 0:
        return root * jacobi_symbol(c, a) * (1 + 1j ** (a % 4))
    if r == 1:
        return complex(root * jacobi_symbol(a, c))
    if r == 2:
        return 0j
    return 1j * root * jacobi_symbol(a, c)


def gauss_multiplicative(a: int, b: int, c: int, d: int) -> complex:
    """G(a, b, c*d) assembled as G(a*c, b, d) * G(a*d, b, c) for coprime c, d."""
    if c < 1 or d < 1:
        raise GaussParameterError("moduli must be >= 1")
    if math.gcd(c, d) != 1:
        raise GaussParameterError(f"c={c} and d={d} are not coprime")
    return gauss_sum(a * c, b, d) * gauss_sum(a * d, b, c)


def gauss_closed_odd_q(spec: GaussSumSpec) -> complex:
    """Closed form of G(-p, kappa, q) for odd q.

    Completing the square with ``u = p^{-1}`` and ``h = 4^{-1}`` modulo q
    gives ``-p*l**2 + kappa*l = -p*(l - l0)**2 + u*h*kappa**2`` with
    ``l0 = kappa*u*2^{-1}``, hence

        G(-p, kappa, q) = exp(2i*pi*u*h*kappa**2/q) * (p/q) * sqrt(q) * eps_q

    where eps_q = 1 for q = 1 (mod 4) and -i for q = 3 (mod 4).
    """
    q = spec.q
    if q % 2 == 0:
        raise UnsupportedCaseError(
            f"q={q} is even; use gauss_even_q_classify for even moduli")
    if q == 1:
        return 1 + 0j
    u = modular_inverse(spec.p, q)
    h = modular_inverse(4, q)
    shift = (u * h % q) * (spec.kappa * spec.kappa % q) % q
    eps = 1 if q % 4 == 1 else -1j
    value = (cmath.exp(2j * math.pi * shift / q)
             * jacobi_symbol(spec.p, q) * math.sqrt(q) * eps)
    return complex(value)


@dataclass(frozen=True)
class EvenClassification:
    vanishes: bool
    modulus: float
    phase: Optional[float]


def gauss_even_q_classify(spec: GaussSumSpec) -> EvenClassification:
    """Vanishing pattern of G(-p, kappa, q) for q = 2q'.

    The sum vanishes iff q' - kappa is odd; otherwise its modulus is
    sqrt(2q).  No closed form for the phase is available, so it is
    measured from the direct sum.
    """
    q = spec.q
    if q % 2:
        raise UnsupportedCaseError(
            f"q={q} is odd; use gauss_closed_odd_q for odd moduli")
    half = q // 2
    if (half - spec.kappa) % 2:
        return EvenClassification(True, 0.0, None)
    phase = GaussSumResult(spec, gauss_sum_direct(spec), "direct").phase
    return EvenClassification(False, math.sqrt(2 * q), phase)
