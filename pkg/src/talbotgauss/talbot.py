"""Free evolution of a regularized Dirac comb and two Gauss-sum recovery routes.

The comb ``sum_k exp(i M k x)`` of period 2pi/M evolves under
``i d_t + d_xx = 0`` as ``sum_k exp(-i (M k)^2 t) exp(i M k x)``.  Smoothing
by a test function multiplies mode ``k`` by ``phi_hat(k M)``.  At the
rational times ``t = (2 pi / M^2) p/q`` the comb splits into q sub-combs
weighted by the Gauss sums G(-p, kappa, q).

Phases are always carried as fractions of a full turn and reduced modulo 1
before the exponential is taken.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath
import numpy as np
from scipy.integrate import quad

from .gauss_arith import GaussParameterError, GaussSumResult, GaussSumSpec
from .superosc import CALIBRATED_SIGN, Sign, required_digits
from .testfunctions import TestFunction

TWO_PI = 2 * math.pi
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class CombParams:
    M: float
    K: int

    def __post_init__(self):
        if not self.M > 0:
            raise ValueError(f"M must be > 0, got {self.M}")
        if self.K < 0:
            raise ValueError(f"K must be >= 0, got {self.K}")

    @property
    def period(self) -> float:
        return TWO_PI / self.M

    @property
    def talbot_time(self) -> float:
        """Revival period 2 pi / M^2."""
        return TWO_PI / self.M ** 2


@dataclass(frozen=True)
class RationalTime:
    p: int
    q: int

    def __post_init__(self):
        if self.q < 1 or math.gcd(self.p, self.q) != 1:
            raise ValueError(f"p/q = {self.p}/{self.q} is not in lowest terms")

    def value(self, M: float) -> float:
        return TWO_PI / M ** 2 * self.p / self.q


@dataclass
class CarpetRaster:
    t_axis: np.ndarray
    x_axis: np.ndarray
    intensity: np.ndarray
    field: Optional[np.ndarray] = None

    @property
    def shape(self) -> tuple[int, int]:
        return self.intensity.shape


def _frac(v):
    return v - np.floor(v)


def _mode_phases(params: CombParams, t, ks):
    # exp(-i (M k)^2 t) as turns: k^2 * (M^2 t / 2pi) mod 1
    tau = params.M ** 2 * np.asarray(t, dtype=float) / TWO_PI
    k2 = (ks.astype(float) ** 2)
    return np.exp(-2j * np.pi * _frac(np.multiply.outer(tau, k2)))


def _space_phases(params: CombParams, x, ks):
    u = _frac(params.M * np.asarray(x, dtype=float) / TWO_PI)
    return np.exp(2j * np.pi * _frac(np.multiply.outer(ks.astype(float), u)))


def comb_field(params: CombParams, t: float, x, phi: TestFunction):
    """Regularized comb sum_{|k|<=K} exp(-i(Mk)^2 t) exp(iMkx) phi_hat(kM).

    ``x`` may be a scalar or an array; the result has the same shape.
    """
    ks = np.arange(-params.K, params.K + 1)
    coeff = _mode_phases(params, t, ks) * phi.transform(ks * params.M)
    out = coeff @ _space_phases(params, np.ravel(x), ks)
    return complex(out[0]) if np.ndim(x) == 0 else out.reshape(np.shape(x))


def comb_field_grid(params: CombParams, t_axis, x_axis, phi: TestFunction,
                    threads: int = 1) -> np.ndarray:
    """Complex field on the tensor grid t_axis x x_axis (rows are times)."""
    ks = np.arange(-params.K, params.K + 1)
    t_axis = np.asarray(t_axis, dtype=float)
    hat = phi.transform(ks * params.M)
    space = _space_phases(params, x_axis, ks)

    def rows(chunk):
        return (_mode_phases(params, chunk, ks) * hat) @ space

    if threads <= 1 or len(t_axis) < 2 * threads:
        return rows(t_axis)
    chunks = np.array_split(t_axis, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return np.vstack(list(pool.map(rows, chunks)))


def carpet_raster(params: CombParams, t_range, x_range, rows: int, cols: int,
                  phi: TestFunction, threads: int = 1) -> CarpetRaster:
    """Intensity |field|^2 sampled on a uniform rows x cols grid."""
    if rows < 2 or cols < 2:
        raise ValueError("rows and cols must be >= 2")
    t_axis = np.linspace(t_range[0], t_range[1], rows)
    x_axis = np.linspace(x_range[0], x_range[1], cols)
    field = comb_field_grid(params, t_axis, x_axis, phi, threads=threads)
    return CarpetRaster(t_axis, x_axis, np.abs(field) ** 2, field)


def comb_tail_bound(K: int, phi: TestFunction) -> float:
    """Uniform bound 2 ||phi''||_1 / K on the modes |k| > K."""
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    return 2 * phi.second_derivative_l1 / K


def rational_times_in_range(M: float, t_min: float, t_max: float,
                            q_max: int = 6) -> list[tuple[int, int, float]]:
    """Rational Talbot times (2 pi/M^2) r, denominator of r at most q_max.

    Returns ``(numerator, denominator, t)`` sorted by t; r may exceed 1
    since the pattern repeats with period 2 pi / M^2.
    """
    unit = TWO_PI / M ** 2
    lo, hi = t_min / unit, t_max / unit
    found = set()
    for q in range(1, q_max + 1):
        for n in range(math.ceil(lo * q - 1e-9), math.floor(hi * q + 1e-9) + 1):
            found.add(Fraction(n, q))
    return [(r.numerator, r.denominator, float(r) * unit) for r in sorted(found)]


def subcomb_cell_intensity(raster_row, x_axis, M: float, q: int) -> np.ndarray:
    """Integrated intensity in the q cells centred on the sub-comb sites.

    Cell ``kappa`` collects the x with ``(M x / 2pi - kappa/q)`` within
    ``1/(2q)`` of an integer, i.e. one 1/q-fraction of every period.
    """
    x_axis = np.asarray(x_axis, dtype=float)
    cell = np.floor(_frac(M * x_axis / TWO_PI + 0.5 / q) * q).astype(int) % q
    dx = np.gradient(x_axis) if len(x_axis) > 1 else np.ones(1)
    return np.bincount(cell, weights=np.asarray(raster_row) * dx, minlength=q)


def _check_spec(spec: GaussSumSpec, K: int):
    if K < spec.q:
        raise GaussParameterError(f"K={K} must be >= q={spec.q}")


def talbot_pairing_terms(spec: GaussSumSpec, phi: TestFunction, K: int) -> np.ndarray:
    """Terms exp(-2i pi k^2 p/q) exp(2i pi k kappa/q) phi_hat(-2 pi k/q), |k| <= K."""
    q = spec.q
    ks = np.arange(-K, K + 1, dtype=np.int64)
    kr = ks % q
    turns = ((-spec.p % q) * (kr * kr % q) + spec.kappa * kr) % q
    return np.exp(2j * np.pi * turns / q) * phi.transform(-TWO_PI * ks / q)


def talbot_tail_bound(q: int, phi: TestFunction, K: int) -> float:
    """Bound on the modes |k| > K: |phi_hat(xi)| <= ||phi''||_1 / xi^2."""
    return 2 * phi.second_derivative_l1 * (q / TWO_PI) ** 2 / K


def gauss_via_talbot(spec: GaussSumSpec, phi: TestFunction, K: int) -> GaussSumResult:
    """Recover G(-p, kappa, q) by pairing the evolved comb with phi(q x - kappa).

    With M = 2pi and t = p/(2 pi q) the pairing reduces to the spectral sum of
    :func:`talbot_pairing_terms`; the error estimate is the rigorous tail
    bound plus a round-off allowance.
    """
    _check_spec(spec, K)
    terms = talbot_pairing_terms(spec, phi, K)
    value = complex(math.fsum(terms.real), math.fsum(terms.imag))
    roundoff = 8 * _EPS * (np.abs(terms).sum() + spec.q)
    estimate = talbot_tail_bound(spec.q, phi, K) + roundoff
    return GaussSumResult(spec, value, "talbot", estimate)


def talbot_pairing_quadrature(spec: GaussSumSpec, phi: TestFunction, K: int) -> complex:
    """q * int field_K(t_{p/q}, y) phi(q y - kappa) dy by adaptive quadrature.

    ``field_K`` is the unregularized comb truncated to |k| <= K with M = 2pi.
    Independent of the spectral reduction; used to validate it.
    """
    q, p, kappa = spec.q, spec.p, spec.kappa
    ks = np.arange(-K, K + 1)
    coeff = np.exp(-2j * np.pi * _frac(ks.astype(float) ** 2 * p / q))

    def field(y):
        return coeff @ np.exp(2j * np.pi * ks * y)

    lo, hi = (kappa - phi.width) / q, (kappa + phi.width) / q
    opts = dict(limit=800, epsabs=1e-13, epsrel=1e-12)
    re = quad(lambda y: (field(y) * phi(q * y - kappa)).real, lo, hi, **opts)[0]
    im = quad(lambda y: (field(y) * phi(q * y - kappa)).imag, lo, hi, **opts)[0]
    return q * complex(re, im)


def _shift_sum_closed(x, a_shift, N_prime: int, orientation: int):
    # sum_nu' C_nu'(a') exp(-2i pi s x (1/2 - nu'/N')) collapsed by the
    # binomial theorem; Z = -pi s x in the S_N(Z; a) notation
    Z = -mpmath.pi * orientation * x
    return (mpmath.cos(Z / N_prime) + 1j * a_shift * mpmath.sin(Z / N_prime)) ** N_prime


def _orientation(sign: Sign) -> int:
    if sign not in ("plus", "minus"):
        raise ValueError(f"sign must be 'plus' or 'minus', got {sign!r}")
    return 1 if sign == "plus" else -1


def _weights_mp(N: int, A, B) -> list:
    # C_nu = binom(N, nu) A^(N-nu) B^nu by the ratio recurrence
    if A == 0:
        return [mpmath.mpf(0)] * N + [B ** N]
    out = [A ** N]
    ratio = B / A
    for nu in range(N):
        out.append(out[-1] * ratio * (N - nu) / (nu + 1))
    return out


def gauss_via_superosc(spec: GaussSumSpec, phi: TestFunction, K: int, N: int,
                       N_prime: int, sign: Sign = CALIBRATED_SIGN) -> GaussSumResult:
    """Recover G(-p, kappa, q) from phi_hat on [-pi, pi] only.

    Evaluates the triple sum over k in [-K, K], nu in [0, N], nu' in [0, N']
    of binomial weights (1/2 + k/q, 1/2 - k/q) and (1/2 - kp, 1/2 + kp),
    the unit factor omega_{nu,nu'}(kappa) and phi_hat(2 pi (1/2 - nu/N)).
    The nu' sum is collapsed exactly by the binomial theorem; the nu sum,
    a cancellation of size max(2|k|/q, 1)^N, runs in multiprecision.

    ``error_estimate`` is the distance to the N, N' -> infinity limit (the
    K-truncated Talbot pairing) plus that pairing's tail bound.
    """
    if min(N, N_prime) < 1 or K < 0:
        raise GaussParameterError("need K >= 0 and N, N' >= 1")
    s = _orientation(sign)
    q, p, kappa = spec.q, spec.p, spec.kappa
    a_max = max(2 * abs(k) / q for k in range(-K, K + 1)) if K else 0.0
    dps = required_digits(N, a_max, guard=30) + int(math.pi * 2 * K * abs(p) / math.log(10)) + 5
    with mpmath.workdps(dps):
        pi = mpmath.pi
        xs = [mpmath.mpf(1) / 2 - mpmath.mpf(nu) / N for nu in range(N + 1)]
        base = [mpmath.expj(-2 * pi * kappa * x) * phi.transform_mp(2 * pi * x) for x in xs]
        # the shift factor (cos(Z/N') + i a' sin(Z/N'))^N' with Z = -pi s x
        trig = [(mpmath.cos(pi * x / N_prime), -s * mpmath.sin(pi * x / N_prime)) for x in xs]
        total = mpmath.mpc(0)
        for k in range(-K, K + 1):
            a = mpmath.mpf(2 * k) / q
            weights = _weights_mp(N, (1 + a) / 2, (1 - a) / 2)
            a_shift = -2 * k * p
            terms = [w * b * mpmath.mpc(c, a_shift * sn) ** N_prime
                     for w, b, (c, sn) in zip(weights, base, trig) if w]
            total += mpmath.fsum(terms)
        value = complex(total)
    limit = talbot_limit(spec, phi, K, sign)
    estimate = abs(value - limit) + (talbot_tail_bound(q, phi, K) if K else float("inf"))
    return GaussSumResult(spec, value, "superosc", estimate)


def _weight(N, nu, A, B):
    if (A == 0 and nu < N) or (B == 0 and nu > 0):
        return mpmath.mpf(0)
    return mpmath.binomial(N, nu) * A ** (N - nu) * B ** nu


def talbot_limit(spec: GaussSumSpec, phi: TestFunction, K: int,
                 sign: Sign = CALIBRATED_SIGN) -> complex:
    """N, N' -> infinity limit of :func:`gauss_via_superosc` at fixed K.

    Calibrated orientation: sum_k exp(-2i pi k kappa/q - 2i pi k^2 p/q)
    phi_hat(2 pi k/q).  The printed orientation gives the same sum with
    exp(+2i pi k^2 p/q).
    """
    s = _orientation(sign)
    q = spec.q
    ks = np.arange(-K, K + 1, dtype=np.int64)
    kr = ks % q
    turns = ((s * spec.p % q) * (kr * kr % q) - spec.kappa * kr) % q
    terms = np.exp(2j * np.pi * turns / q) * phi.transform(TWO_PI * ks / q)
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def gauss_via_superosc_bruteforce(spec: GaussSumSpec, phi: TestFunction, K: int,
                                  N: int, N_prime: int,
                                  sign: Sign = CALIBRATED_SIGN, dps: int = 60) -> complex:
    """Literal triple loop of the superoscillatory recovery sum (small N, N' only)."""
    s = _orientation(sign)
    q, p, kappa = spec.q, spec.p, spec.kappa
    with mpmath.workdps(dps):
        pi = mpmath.pi
        total = []
        for k in range(-K, K + 1):
            A, B = mpmath.mpf(1) / 2 + mpmath.mpf(k) / q, mpmath.mpf(1) / 2 - mpmath.mpf(k) / q
            As, Bs = mpmath.mpf(1) / 2 - k * p, mpmath.mpf(1) / 2 + k * p
            for nu in range(N + 1):
                x = mpmath.mpf(1) / 2 - mpmath.mpf(nu) / N
                hat = phi.transform_mp(2 * pi * x)
                for nup in range(N_prime + 1):
                    y = mpmath.mpf(1) / 2 - mpmath.mpf(nup) / N_prime
                    omega = mpmath.expj(-2 * pi * x * (kappa + s * y))
                    total.append(_weight(N, nu, A, B) * _weight(N_prime, nup, As, Bs)
                                 * omega * hat)
        return complex(mpmath.fsum(total))
