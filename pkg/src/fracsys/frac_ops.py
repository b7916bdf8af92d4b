"""Fractional integrals, Caputo/Riemann-Liouville derivatives, Volterra
convolution, and a numerical Laplace transform on uniformly sampled functions.

All quadratures are product rules: the integrand data is interpolated
piecewise-linearly and integrated exactly against the singular kernel, which
preserves the O(h^2) rate at the t = 0 singularity.  Cells touching an
integrable endpoint singularity t^{p} (p in (-1, 0)) are integrated
analytically against a matched power law instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve
from scipy.special import betainc
from scipy.integrate import quad

from .errors import (
    IncompatibleGridsError,
    InaccurateTransformError,
    InvalidArgumentError,
    InvalidOrderError,
    SeriesDivergenceError,
)
from .gammafn import gamma, rgamma


@dataclass(frozen=True)
class SampledFunction:
    """Complex samples on a uniform grid t_0 = 0 < t_1 < ... < t_N.

    ``values`` has shape (N+1,) or (N+1, m) for vector-valued data.
    """

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if grid.ndim != 1 or grid.size < 2:
            raise InvalidArgumentError("grid must be 1-D with at least two points")
        if grid[0] != 0.0:
            raise InvalidArgumentError("grid must start at t = 0")
        steps = np.diff(grid)
        h = steps[0]
        if h <= 0 or np.any(np.abs(steps - h) > 1e-12 * h):
            raise InvalidArgumentError("grid must be uniform and increasing")
        if values.shape[0] != grid.size:
            raise InvalidArgumentError("values length must match grid")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @property
    def h(self) -> float:
        return float(self.grid[1] - self.grid[0])

    def map(self, fn) -> "SampledFunction":
        return SampledFunction(self.grid, fn(self.values))


def make_grid(t_max: float, steps: int) -> np.ndarray:
    """Uniform grid 0..t_max with the given number of steps."""
    if steps < 2 or t_max <= 0:
        raise InvalidArgumentError("need steps >= 2 and t_max > 0")
    return np.linspace(0.0, float(t_max), steps + 1)


def _check_same_grid(f: SampledFunction, g: SampledFunction):
    if f.grid.shape != g.grid.shape or not np.allclose(
        f.grid, g.grid, rtol=0, atol=1e-12 * max(f.grid[-1], 1.0)
    ):
        raise IncompatibleGridsError("sampled functions live on different grids")


# --------------------------------------------------------------------------
# fractional integral (product trapezoid)
# --------------------------------------------------------------------------


def _pl_moment_weights(alpha: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-cell weights a_r, b_r (r = 1..n) of the piecewise-linear product rule.

    Cell [t_{i}, t_{i+1}] contributes h^alpha (a_r f_i + b_r f_{i+1}) / Gamma(alpha)
    to (J^alpha f)(t_n), where r = n - i and

        a_r = I1(r) - (r-1) I0(r),   b_r = r I0(r) - I1(r),
        I0(r) = (r^a - (r-1)^a)/a,   I1(r) = (r^{a+1} - (r-1)^{a+1})/(a+1).
    """
    r = np.arange(1, n + 1, dtype=float)
    i0 = (r**alpha - (r - 1.0) ** alpha) / alpha
    i1 = (r ** (alpha + 1.0) - (r - 1.0) ** (alpha + 1.0)) / (alpha + 1.0)
    a = i1 - (r - 1.0) * i0
    b = r * i0 - i1
    return a, b


def frac_integral(
    f: SampledFunction, alpha: float, origin_power: float | None = None
) -> SampledFunction:
    """Riemann-Liouville integral (J^alpha f)(t) = Int_0^t (t-s)^{a-1} f(s) ds / Gamma(a).

    ``origin_power`` p declares power-law behaviour f(t) ~ c t^p near 0 with
    p in (-1, 0).  The matched power is integrated in closed form,
    J^alpha (c t^p) = c Gamma(p+1)/Gamma(p+1+alpha) t^{p+alpha}, and only the
    milder remainder goes through the product rule; the sample f(0) is ignored.
    """
    if alpha <= 0:
        raise InvalidOrderError(f"integration order must be positive, got {alpha}")
    if origin_power is not None:
        p = origin_power
        if not -1.0 < p < 0.0:
            raise InvalidOrderError("origin_power must lie in (-1, 0)")
        c = f.values[1] * f.h ** (-p)
        rem = f.values.copy()
        rem[0] = 0.0
        tp = f.grid[1:] ** p
        if rem.ndim == 2:
            rem[1:] -= np.outer(tp, np.atleast_1d(c))
        else:
            rem[1:] -= c * tp
        rest = frac_integral(SampledFunction(f.grid, rem), alpha)
        factor = gamma(p + 1.0) / gamma(p + 1.0 + alpha)
        tpa = np.zeros(n_grid := f.grid.size)
        tpa[1:] = f.grid[1:] ** (p + alpha)
        if p + alpha == 0.0:
            tpa[0] = 1.0
        if rem.ndim == 2:
            exact = factor * np.outer(tpa, np.atleast_1d(c))
        else:
            exact = factor * c * tpa
        return SampledFunction(f.grid, exact + rest.values)

    vals = f.values
    vec = vals.ndim == 2
    n_pts = vals.shape[0]
    n_max = n_pts - 1
    h = f.h
    a_w, b_w = _pl_moment_weights(alpha, n_max)

    # out[n] = sum_{i=0}^{n-1} (a_{n-i} f_i + b_{n-i} f_{i+1})
    def volterra(x):
        lead = fftconvolve(a_w, x[:-1])[:n_max]
        lag = fftconvolve(b_w, x[1:])[:n_max]
        return lead + lag

    if vec:
        core = np.stack([volterra(vals[:, j]) for j in range(vals.shape[1])], axis=1)
    else:
        core = volterra(vals)
    out = np.zeros_like(vals)
    out[1:] = core * (h**alpha)
    out /= gamma(alpha)
    return SampledFunction(f.grid, out)


def _beta(a: float, b: float) -> float:
    return math.exp(_lg(a) + _lg(b) - _lg(a + b))


def _lg(x: float) -> float:
    from .gammafn import lgamma

    return lgamma(x)


# --------------------------------------------------------------------------
# Caputo derivative (L1 scheme)
# --------------------------------------------------------------------------


def caputo_deriv(f: SampledFunction, beta: float) -> SampledFunction:
    """L1 discretization of the Caputo derivative, order O(h^{2-beta})."""
    if not 0.0 < beta < 1.0:
        raise InvalidOrderError(f"Caputo order must lie in (0, 1), got {beta}")
    h = f.h
    n_max = f.grid.size - 1
    r = np.arange(0, n_max, dtype=float)
    w = (r + 1.0) ** (1.0 - beta) - r ** (1.0 - beta)
    d = np.diff(f.values, axis=0)
    if d.ndim == 2:
        core = np.stack(
            [fftconvolve(w, d[:, j])[:n_max] for j in range(d.shape[1])], axis=1
        )
    else:
        core = fftconvolve(w, d)[:n_max]
    out = np.zeros_like(f.values)
    out[1:] = core * (h ** (-beta)) / gamma(2.0 - beta)
    return SampledFunction(f.grid, out)


# --------------------------------------------------------------------------
# Riemann-Liouville derivative
# --------------------------------------------------------------------------


def rl_deriv(f: SampledFunction, beta: float) -> SampledFunction:
    """d/dt of the (1-beta)-order integral, centered differencing inside,
    one-sided second-order stencils at the endpoints."""
    if not 0.0 < beta < 1.0:
        raise InvalidOrderError(f"RL order must lie in (0, 1), got {beta}")
    j = frac_integral(f, 1.0 - beta)
    v = j.values
    h = f.h
    out = np.empty_like(v)
    out[1:-1] = (v[2:] - v[:-2]) / (2.0 * h)
    out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
    out[-1] = (3.0 * v[-1] - 4.0 * v[-2] + v[-3]) / (2.0 * h)
    return SampledFunction(f.grid, out)


# --------------------------------------------------------------------------
# Volterra convolution (piecewise-linear product rule, singular-aware)
# --------------------------------------------------------------------------


def convolve(
    f: SampledFunction,
    g: SampledFunction,
    f_origin_power: float | None = None,
    g_origin_power: float | None = None,
) -> SampledFunction:
    """(f * g)(t) = Int_0^t f(s) g(t-s) ds on the common grid.

    ``f_origin_power`` / ``g_origin_power`` declare power-law behaviour
    c t^p (p in (-1, 0)) of the respective factor at t = 0.  The matching
    power law is split off and convolved exactly through the identity
    c t^p * g = c Gamma(p+1) (J^{p+1} g); only the milder remainder goes
    through the piecewise-linear product rule.  Samples at index 0 of a
    declared-singular factor are ignored.
    """
    _check_same_grid(f, g)
    h = f.h
    if f_origin_power is not None:
        p = f_origin_power
        if not -1.0 < p < 0.0:
            raise InvalidOrderError("f_origin_power must lie in (-1, 0)")
        c = f.values[1] * h ** (-p)
        exact = frac_integral(g, p + 1.0, origin_power=g_origin_power).values * (
            c * gamma(p + 1.0)
        )
        rem_vals = f.values.copy()
        rem_vals[0] = 0.0
        rem_vals[1:] = rem_vals[1:] - c * f.grid[1:] ** p
        remainder = SampledFunction(f.grid, rem_vals)
        rest = convolve(remainder, g, None, g_origin_power)
        return SampledFunction(f.grid, exact + rest.values)
    if g_origin_power is not None:
        return convolve(g, f, f_origin_power=g_origin_power)

    fv = f.values
    gv = g.values
    n_pts = f.grid.size
    fp = np.concatenate([fv, [0.0]])
    gp = np.concatenate([gv, [0.0]])
    big = fftconvolve(fp, gp)  # big[r] = sum f_j g_{r-j}
    n = np.arange(0, n_pts)
    s1 = big[n] - fv[n] * gv[0]
    s2 = np.concatenate([[0.0], big[: n_pts - 1]])
    s3 = big[n + 1] - fp[0] * gp[n + 1] - fp[n + 1] * gp[0]
    s4 = big[n] - fv[0] * gv[n]
    out = (h / 6.0) * (2.0 * s1 + s2 + s3 + 2.0 * s4)
    out[0] = 0.0
    return SampledFunction(f.grid, out)


# --------------------------------------------------------------------------
# Neumann-series resolvent (I - mu J^beta)^{-1}
# --------------------------------------------------------------------------


def neumann_resolvent(
    g: SampledFunction, beta: float, mu: complex, tol: float = 1e-10, max_terms: int = 400
) -> SampledFunction:
    """Apply (I - mu J^beta)^{-1} as the truncated Neumann series.

    Divergence guard: term sup-norms must be monotone decreasing after the
    first 10 terms.
    """
    acc = g.values.copy()
    term = g
    prev_norm = math.inf
    for n in range(1, max_terms + 1):
        term = frac_integral(term, beta).map(lambda v: mu * v)
        norm = float(np.max(np.abs(term.values)))
        if norm < tol * max(1.0, float(np.max(np.abs(acc)))):
            acc = acc + term.values
            return SampledFunction(g.grid, acc)
        if n > 10 and norm >= prev_norm:
            raise SeriesDivergenceError(
                f"Neumann series for (I - {mu} J^{beta})^-1 stopped decreasing at term {n}"
            )
        acc = acc + term.values
        prev_norm = norm
    raise SeriesDivergenceError("Neumann series did not converge within the term cap")


# --------------------------------------------------------------------------
# numerical Laplace transform (test oracle)
# --------------------------------------------------------------------------


def laplace_numeric(
    f, s: complex, t_cut: float, tol: float = 1e-8
) -> complex:
    """Adaptive quadrature of Int_0^{t_cut} e^{-s t} f(t) dt with a tail bound.

    ``f`` is a callable of t > 0 (an integrable singularity at 0 is fine).
    Raises when the estimated tail exceeds ``tol``.
    """
    s = complex(s)
    if s.real <= 0:
        raise InvalidArgumentError("Re(s) must be positive")

    def integ(t, part):
        val = np.exp(-s * t) * f(t)
        return val.real if part == 0 else val.imag

    re, _ = quad(integ, 0.0, t_cut, args=(0,), limit=400, epsabs=1e-13, epsrel=1e-11)
    im, _ = quad(integ, 0.0, t_cut, args=(1,), limit=400, epsabs=1e-13, epsrel=1e-11)
    tail = 10.0 * abs(f(t_cut)) * math.exp(-s.real * t_cut) / s.real
    if tail > tol * max(1.0, abs(complex(re, im))):
        raise InaccurateTransformError(
            f"tail estimate {tail:.2e} above tolerance at s={s}, t_cut={t_cut}"
        )
    return complex(re, im)


def power_kernel(grid: np.ndarray, power: float, scale: complex = 1.0) -> SampledFunction:
    """Sampled c t^{power}; the sample at t=0 is 0 as a placeholder when power < 0."""
    vals = np.zeros(grid.size, dtype=complex)
    vals[1:] = scale * grid[1:] ** power
    if power > 0:
        vals[0] = 0.0
    elif power == 0:
        vals[0] = scale
    return SampledFunction(grid, vals)
