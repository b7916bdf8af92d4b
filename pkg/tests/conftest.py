"""Shared high-precision reference evaluators (test oracles).

The series oracles sum the defining power series in mpmath with working
precision scaled to the worst intermediate term, ~ exp(|z|^(1/beta)); the
gamma arguments are built from exact mpf values, since float rounding of
beta*n alone is enough to destroy the cancellation for large arguments.
"""

import math

import mpmath as mp
import numpy as np
import pytest


def ml_reference(beta: float, nu: float, z: complex) -> complex:
    """Arbitrary-precision direct series for E_{beta,nu}(z)."""
    need = 60 + int(0.55 * abs(complex(z)) ** (1.0 / beta))
    if need > 3000:
        raise ValueError("reference series infeasible for this argument")
    with mp.workdps(need):
        b = mp.mpf(repr(beta))
        v = mp.mpf(repr(nu))
        zz = mp.mpc(z)
        s = mp.mpc(0)
        t = mp.mpc(1)
        mx = mp.mpf(0)
        for n in range(200000):
            term = t / mp.gamma(b * n + v)
            s += term
            a = abs(term)
            if a > mx:
                mx = a
            t *= zz
            if n > 50 and a < mx * mp.mpf(10) ** (-mp.mp.dps + 8) and b * n > abs(zz) ** (1 / b):
                break
        return complex(s)


def ml_deriv_reference(beta: float, nu: float, z: complex, k: int) -> complex:
    """Arbitrary-precision termwise-differentiated series."""
    need = 70 + int(0.55 * abs(complex(z)) ** (1.0 / beta))
    if need > 3000:
        raise ValueError("reference series infeasible for this argument")
    with mp.workdps(need):
        b = mp.mpf(repr(beta))
        v = mp.mpf(repr(nu))
        zz = mp.mpc(z)
        s = mp.mpc(0)
        mx = mp.mpf(0)
        for n in range(k, 200000):
            term = mp.ff(n, k) * zz ** (n - k) / mp.gamma(b * n + v)
            s += term
            a = abs(term)
            if a > mx:
                mx = a
            if n > k + 50 and a < mx * mp.mpf(10) ** (-mp.mp.dps + 8) and b * n > abs(zz) ** (1 / b):
                break
        return complex(s)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def assert_close(got, want, tol, label=""):
    got = complex(got) if np.isscalar(got) else np.asarray(got)
    err = np.max(np.abs(np.asarray(got) - np.asarray(want)))
    assert err <= tol, f"{label}: deviation {err:.3e} > {tol:.1e}"
