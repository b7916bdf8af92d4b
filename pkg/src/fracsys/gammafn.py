"""Gamma-function kernels backing every Mittag-Leffler series term.

Lanczos approximation (g = 607/128, 15 coefficients) with reflection on the
left half-plane.  The reciprocal form is the workhorse: it is finite
everywhere, vanishing at the poles of the gamma function, which lets series
with terms 1/Gamma(beta*n + nu) be summed without special-casing.
"""

from __future__ import annotations

import cmath
import math

_LANCZOS_G = 607.0 / 128.0

_LANCZOS_C = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)

_SQRT_TWO_PI = 2.5066282746310005024
_LOG_SQRT_TWO_PI = 0.91893853320467274178


def _lanczos_sum(z):
    # valid for Re(z) >= 0 after the caller shifted z -> z (with Gamma(z) = ...)
    acc = _LANCZOS_C[0]
    for i in range(1, len(_LANCZOS_C)):
        acc += _LANCZOS_C[i] / (z + i)
    return acc


class GammaPoleError(ArithmeticError):
    def __init__(self, z):
        super().__init__(f"gamma pole at {z}")


def gamma(z: complex | float) -> complex | float:
    """Gamma(z) for real or complex z (real nonpositive integers raise)."""
    if isinstance(z, complex):
        return _gamma_complex(z)
    if z == math.floor(z) and z <= 0.0:
        raise GammaPoleError(z)
    if z > 171.6:
        return math.inf
    return _gamma_complex(complex(z)).real


def _gamma_complex(z: complex) -> complex:
    if z.real < 0.5:
        # reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return math.pi / (cmath.sin(math.pi * z) * _gamma_complex(1.0 - z))
    zz = z - 1.0
    t = zz + _LANCZOS_G + 0.5
    if t.real > 140.0:
        # split the power so intermediates stay below the overflow threshold
        p = t ** (0.5 * (zz + 0.5))
        return _SQRT_TWO_PI * p * (cmath.exp(-t) * p) * _lanczos_sum(zz)
    return _SQRT_TWO_PI * t ** (zz + 0.5) * cmath.exp(-t) * _lanczos_sum(zz)


def lgamma(x: float) -> float:
    """log Gamma(x) for x > 0, overflow-free (Lanczos in log form)."""
    if x <= 0.0:
        raise ValueError("lgamma requires x > 0")
    if x < 0.5:
        # log Gamma(x) = log(pi / sin(pi x)) - log Gamma(1 - x)
        return math.log(math.pi / math.sin(math.pi * x)) - lgamma(1.0 - x)
    zz = x - 1.0
    t = zz + _LANCZOS_G + 0.5
    return _LOG_SQRT_TWO_PI + (zz + 0.5) * math.log(t) - t + math.log(_lanczos_sum(zz))


def rgamma(x: float) -> float:
    """1 / Gamma(x) for real x; zero at the poles, overflow-free everywhere."""
    if x > 0.5:
        if x > 141.0:
            # Gamma(x) may overflow; 1/Gamma does not
            return math.exp(-lgamma(x))
        return 1.0 / gamma(x)
    # 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi, entire in x
    if x == math.floor(x):
        return 0.0  # pole of Gamma
    s = math.sin(math.pi * x)
    if s == 0.0:
        return 0.0
    y = 1.0 - x
    if y > 141.0:
        # sign(s) * exp(log|s| + lgamma(y) - log pi); may overflow -> inf
        mag = math.log(abs(s)) + lgamma(y) - math.log(math.pi)
        if mag > 700.0:
            return math.copysign(math.inf, s)
        return math.copysign(math.exp(mag), s)
    return s * gamma(y) / math.pi
