"""Superoscillating binomial sums and their error bounds.

Every sum here has the shape

    S_N(Z; a) = sum_nu C_nu(a) exp(i (1 - 2 nu/N) Z),
    C_nu(a)   = binom(N, nu) ((1 + a)/2)**(N - nu) ((1 - a)/2)**nu,

which tends to exp(i a Z) as N grows.  Only frequencies in [-1, 1] appear,
yet the limit oscillates at rate ``a``; for ``|a| > 1`` the weights
alternate in sign and grow like ``|a|**N``, so the sum is a massive
cancellation.  Such sums are evaluated in multiprecision with enough
digits to absorb that growth; ``|a| <= 1`` uses compensated float sums.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Literal

import mpmath
import numpy as np
from scipy.special import gammaln
from scipy.stats import binom

Sign = Literal["plus", "minus"]

# orientation of the shift approximant under which the composed Gauss-sum
# recovery converges to the direct sums (checked in the test-suite)
CALIBRATED_SIGN: Sign = "minus"


class SuperoscOverflowError(OverflowError):
    pass


def _split(a: float) -> tuple[float, float]:
    return (1 + a) / 2, (1 - a) / 2


def required_digits(N: int, a: float, imag_scale: float = 0.0,
                    guard: int = 20) -> int:
    """Decimal digits needed to sum N+1 weights C_nu(a) to ~``guard`` digits.

    ``sum |C_nu(a)| = max(|a|, 1)**N``; ``imag_scale`` accounts for
    exponentials growing like ``exp(imag_scale)``.
    """
    growth = N * math.log10(max(abs(a), 1.0)) + 2 * abs(imag_scale) / math.log(10)
    return guard + int(math.ceil(growth))


def binomial_weights(N: int, a: float) -> np.ndarray:
    """Float weights C_nu(a), nu = 0..N, built in log space.

    Raises SuperoscOverflowError if the largest weight overflows a double.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    A, B = _split(a)
    nu = np.arange(N + 1)
    if 0 <= B <= 1:
        # ordinary binomial distribution; scipy's pmf is accurate to ~1 ulp
        return binom.pmf(nu, N, B)
    log_binom = gammaln(N + 1) - gammaln(nu + 1) - gammaln(N - nu + 1)
    log_mag = log_binom + _xlog(N - nu, abs(A)) + _xlog(nu, abs(B))
    if np.nanmax(log_mag) > 709:
        raise SuperoscOverflowError(
            f"weights overflow for N={N}, a={a}: max log-weight "
            f"{np.nanmax(log_mag):.1f} at nu={int(np.nanargmax(log_mag))}")
    sign = np.where((N - nu) % 2 == 1, math.copysign(1.0, A), 1.0) \
        * np.where(nu % 2 == 1, math.copysign(1.0, B), 1.0)
    return sign * np.exp(log_mag)


def _xlog(power: np.ndarray, base: float) -> np.ndarray:
    # power * log(base) with the convention 0**0 = 1
    if base == 0.0:
        return np.where(power == 0, 0.0, -np.inf)
    return power * math.log(base)


def binomial_weights_mp(N: int, a) -> list:
    """Exact-ish multiprecision weights at the current mpmath precision."""
    a = mpmath.mpf(a)
    A, B = (1 + a) / 2, (1 - a) / 2
    return [mpmath.binomial(N, nu) * A ** (N - nu) * B ** nu
            for nu in range(N + 1)]


def weight_sum(N: int, a: float) -> float:
    """Compensated sum of the float weights (equals 1 up to round-off)."""
    return math.fsum(binomial_weights(N, a))


def binomial_exp_sum(N: int, a: float, Z: complex) -> complex:
    """Explicit (N+1)-term sum S_N(Z; a)."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    Z = complex(Z)
    if abs(a) <= 1:
        w = binomial_weights(N, a)
        freqs = 1 - 2 * np.arange(N + 1) / N
        terms = w * np.exp(1j * freqs * Z)
        return complex(math.fsum(terms.real), math.fsum(terms.imag))
    dps = required_digits(N, a, Z.imag)
    with mpmath.workdps(dps):
        weights = binomial_weights_mp(N, a)
        z = mpmath.mpc(Z)
        total = mpmath.fsum(w * mpmath.expj((1 - mpmath.mpf(2 * nu) / N) * z)
                            for nu, w in enumerate(weights))
        return complex(total)


def binomial_exp_closed(N: int, a: float, Z: complex) -> complex:
    """Binomial-theorem form (cos(Z/N) + i a sin(Z/N))**N of the same sum."""
    Z = complex(Z)
    return (cmath.cos(Z / N) + 1j * a * cmath.sin(Z / N)) ** N


def superosc_eval(z: complex, omega: float, N: int) -> complex:
    """F_N(z, omega), the superoscillating approximant of exp(i omega z)."""
    return binomial_exp_sum(N, omega, z)


def superosc_error_bound(Z: complex, omega: float, N: int) -> float:
    """(2/3) |omega**2 - 1| / N |Z|**2 exp((1 + max(|omega|, 1)) |Z|)."""
    r = abs(Z)
    return (2 / 3) * abs(omega * omega - 1) / N * r * r \
        * math.exp((1 + max(abs(omega), 1.0)) * r)


def modulation_approximant(z: complex, k: int, q: int, N: int) -> complex:
    """M_N(z, k): weights (1/2 + k/q), (1/2 - k/q), frequencies 2pi(1/2 - nu/N) q.

    Identical to F_N(pi q z, 2k/q); the limit is exp(2i pi k z).
    """
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    return binomial_exp_sum(N, 2 * k / q, math.pi * q * complex(z))


def error_bound_M(z: complex, k: int, q: int, N: int) -> float:
    """The published bound for |M_N(z, k) - exp(2i pi k z)|, as printed."""
    omega = 2 * math.pi * k / q
    return superosc_error_bound(q * abs(z), omega, N)


def error_bound_M_rescaled(z: complex, k: int, q: int, N: int) -> float:
    """Generic bound evaluated with M_N's actual parameters (omega=2k/q, Z=pi q z)."""
    return superosc_error_bound(math.pi * q * abs(z), 2 * k / q, N)


def _shift_argument(w: complex, p: int, q: int, t: float, sign: Sign) -> complex:
    # exponent -(1/2 - nu'/N') (2 pi q t / p) w rewritten as i (1 - 2nu'/N') Z
    scale = 2 * math.pi * q * t / p
    Z = 0.5j * scale * complex(w)
    if sign == "plus":
        return Z
    if sign == "minus":
        return -Z
    raise ValueError(f"sign must be 'plus' or 'minus', got {sign!r}")


def shift_approximant(w: complex, k: int, p: int, q: int, t: float,
                      N_prime: int, sign: Sign = CALIBRATED_SIGN) -> complex:
    """T_{N'}^t(w, k): weights (1/2 - kp), (1/2 + kp).

    ``sign='plus'`` keeps the exponent ``-(1/2 - nu'/N') (2 pi q t/p) w``;
    ``'minus'`` flips it (equivalently swaps the two weights).  The limit is
    ``exp(+-2 pi k q t w)`` respectively, see :func:`shift_target`.
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    return binomial_exp_sum(N_prime, -2 * k * p, _shift_argument(w, p, q, t, sign))


def shift_target(w: complex, k: int, p: int, q: int, t: float,
                 sign: Sign = CALIBRATED_SIGN) -> complex:
    """N' -> infinity limit of :func:`shift_approximant`."""
    Z = _shift_argument(w, p, q, t, sign)
    return cmath.exp(1j * (-2 * k * p) * Z)


def error_bound_T(w: complex, k: int, p: int, t: float, N_prime: int) -> float:
    """The published bound for the shift approximant, as printed."""
    return superosc_error_bound(2 * math.pi * t / p * abs(w), k * p, N_prime)


def error_bound_T_rescaled(w: complex, k: int, p: int, q: int, t: float,
                           N_prime: int) -> float:
    """Generic bound with the shift approximant's actual (omega, Z)."""
    return superosc_error_bound(math.pi * q * t / p * abs(w), 2 * k * p, N_prime)


def omega_factor(nu: int, nu_prime: int, N: int, N_prime: int, kappa: int) -> complex:
    """exp(-2i pi (1/2 - nu/N) (kappa + 1/2 - nu'/N')), a unit complex number."""
    if not (0 <= nu <= N and 0 <= nu_prime <= N_prime):
        raise ValueError("need 0 <= nu <= N and 0 <= nu' <= N'")
    x = 0.5 - nu / N
    return cmath.exp(-2j * math.pi * x * (kappa + 0.5 - nu_prime / N_prime))


@dataclass(frozen=True)
class BoundCheck:
    """One sampled comparison of a measured error with a bound."""
    z: float
    k: int
    q: int
    N: int
    error: float
    bound: float

    @property
    def violated(self) -> bool:
        return self.error > self.bound * (1 + 1e-12) + 1e-15
