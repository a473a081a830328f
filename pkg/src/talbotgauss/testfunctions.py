"""Compactly supported C^2 profiles with closed-form Fourier transforms.

The transform convention is ``phi_hat(xi) = int phi(x) exp(-i xi x) dx``.
Both builtins are even, so their transforms are real.  A ``width`` w <= 1
rescales a profile to ``phi(x / w)`` (support [-w, w], value 1 at 0), which
keeps every hypothesis used by the Gauss-sum recovery routes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import mpmath
import numpy as np

PI = math.pi


@dataclass(frozen=True)
class TestFunction:
    name: str
    width: float
    _eval: Callable[[np.ndarray], np.ndarray]
    _transform: Callable[[np.ndarray], np.ndarray]
    _transform_mp: Callable
    _second: Callable[[np.ndarray], np.ndarray]
    _second_l1: float

    __test__ = False  # not a pytest class

    def __call__(self, x):
        x = np.asarray(x, dtype=float) / self.width
        return self._eval(x)

    def transform(self, xi):
        xi = np.asarray(xi, dtype=float)
        return self.width * self._transform(self.width * xi)

    def transform_mp(self, xi):
        """Transform at an mpmath number, at the current working precision."""
        w = mpmath.mpf(self.width)
        return w * self._transform_mp(w * xi)

    def second_derivative(self, x):
        x = np.asarray(x, dtype=float) / self.width
        return self._second(x) / self.width ** 2

    @property
    def second_derivative_l1(self) -> float:
        """||phi''||_1."""
        return self._second_l1 / self.width


# cos^4(pi x / 2) = 3/8 + cos(pi x)/2 + cos(2 pi x)/8 on [-1, 1]

def _cos4(x):
    return np.where(np.abs(x) < 1, np.cos(PI * x / 2) ** 4, 0.0)


def _cos4_second(x):
    return np.where(np.abs(x) < 1,
                    -(PI ** 2 / 2) * (np.cos(PI * x) + np.cos(2 * PI * x)), 0.0)


_COS4_AMPS = {0: 3 / 8, 1: 1 / 4, -1: 1 / 4, 2: 1 / 16, -2: 1 / 16}


def _cos4_hat(xi):
    xi = np.asarray(xi, dtype=float)
    # rational form 3 pi^4 sin(xi) / (xi (xi^2 - pi^2)(xi^2 - 4 pi^2)),
    # switching to the sinc expansion near its removable singularities
    near = np.zeros(xi.shape, dtype=bool)
    for m in range(-2, 3):
        near |= np.abs(xi - m * PI) < 1e-4
    out = np.empty(xi.shape)
    far = ~near
    x = xi[far]
    out[far] = 3 * PI ** 4 * np.sin(x) / (x * (x * x - PI ** 2) * (x * x - 4 * PI ** 2))
    x = xi[near]
    out[near] = sum(a * 2 * np.sinc((x - m * PI) / PI) for m, a in _COS4_AMPS.items())
    return out


def _cos4_hat_mp(xi):
    pi = mpmath.pi
    for m in range(-2, 3):
        if abs(xi - m * pi) < mpmath.mpf("1e-6"):
            return mpmath.fsum(a * 2 * mpmath.sincpi((xi - mm * pi) / pi)
                               for mm, a in _COS4_AMPS.items())
    return 3 * pi ** 4 * mpmath.sin(xi) / (xi * (xi ** 2 - pi ** 2) * (xi ** 2 - 4 * pi ** 2))


# cubic B-spline on [-2, 2], squeezed onto [-1, 1] and scaled to 1 at 0

def _bspline(u):
    u = np.abs(u)
    return np.where(u < 1, 2 / 3 - u ** 2 + u ** 3 / 2,
                    np.where(u < 2, (2 - u) ** 3 / 6, 0.0))


def _bspline3(x):
    return 1.5 * _bspline(2 * np.asarray(x, dtype=float))


def _bspline3_second(x):
    u = np.abs(2 * np.asarray(x, dtype=float))
    b2 = np.where(u < 1, -2 + 3 * u, np.where(u < 2, 2 - u, 0.0))
    return 6.0 * b2


def _bspline3_hat(xi):
    # 0.75 * sinc(xi/4)^4 with sinc(s) = sin(s)/s
    return 0.75 * np.sinc(np.asarray(xi, dtype=float) / (4 * PI)) ** 4


def _bspline3_hat_mp(xi):
    return mpmath.mpf("0.75") * mpmath.sincpi(xi / (4 * mpmath.pi)) ** 4


_BUILTINS = {
    # name: (eval, transform, transform_mp, second derivative, ||phi''||_1)
    "cos4": (_cos4, _cos4_hat, _cos4_hat_mp, _cos4_second, 3 * math.sqrt(3) * PI / 2),
    "bspline3": (_bspline3, _bspline3_hat, _bspline3_hat_mp, _bspline3_second, 8.0),
}

BUILTIN_NAMES = tuple(_BUILTINS)


def builtin_test_function(name: str, width: float = 1.0) -> TestFunction:
    """Return the builtin profile ``name`` ('cos4' or 'bspline3')."""
    try:
        ev, tr, tr_mp, sec, l1 = _BUILTINS[name]
    except KeyError:
        raise ValueError(
            f"unknown test function {name!r}; choose from {BUILTIN_NAMES}") from None
    if not 0 < width <= 1:
        raise ValueError(f"width must lie in (0, 1], got {width}")
    return TestFunction(name, float(width), ev, tr, tr_mp, sec, l1)
