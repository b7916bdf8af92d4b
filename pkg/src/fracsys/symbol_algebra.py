"""Exact algebra over sparse polynomials in s with real exponents.

Builds the characteristic function det(I s^B - F), the Cramer cofactor
numerators, and the term lists of the general multi-order series solution.
The expansion of 1/det as a resolvent-kernel series is carried out
mechanically by sparse multiplication; closed forms are never needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InternalConsistencyError,
    InvalidArgumentError,
    TruncationLimitError,
)

#: exponents closer than this merge into one monomial
EXP_MERGE_TOL = 1e-12
#: coefficients below this magnitude are dropped outright
COEFF_DROP = 1e-300
#: hard cap on stored monomials across an expansion
TERM_CAP = 1_000_000


class FrExpPoly:
    """Sparse sum  sum_g  c_g s^g  with real exponents g.

    Exponents are canonicalized on construction: values within EXP_MERGE_TOL
    are combined and zero coefficients dropped.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[float, complex] | None = None):
        merged: dict[float, complex] = {}
        if terms:
            for g in sorted(terms):
                c = terms[g]
                if merged:
                    last = next(reversed(merged))
                    if abs(g - last) <= EXP_MERGE_TOL:
                        merged[last] += c
                        continue
                merged[float(g)] = complex(c)
        self.terms = {g: c for g, c in merged.items() if abs(c) > COEFF_DROP}

    @classmethod
    def monomial(cls, exponent: float, coeff: complex = 1.0) -> "FrExpPoly":
        return cls({float(exponent): complex(coeff)})

    @classmethod
    def constant(cls, coeff: complex) -> "FrExpPoly":
        return cls({0.0: complex(coeff)})

    def __len__(self):
        return len(self.terms)

    def __add__(self, other: "FrExpPoly") -> "FrExpPoly":
        out = dict(self.terms)
        for g, c in other.terms.items():
            out[g] = out.get(g, 0.0) + c
        return FrExpPoly(out)

    def __sub__(self, other: "FrExpPoly") -> "FrExpPoly":
        return self + (-other)

    def __neg__(self) -> "FrExpPoly":
        return FrExpPoly({g: -c for g, c in self.terms.items()})

    def __mul__(self, other: "FrExpPoly") -> "FrExpPoly":
        out: dict[float, complex] = {}
        for g1, c1 in self.terms.items():
            for g2, c2 in other.terms.items():
                g = g1 + g2
                out[g] = out.get(g, 0.0) + c1 * c2
                if len(out) > TERM_CAP:
                    raise TruncationLimitError(
                        f"sparse expansion exceeded {TERM_CAP} stored terms"
                    )
        return FrExpPoly(out)

    def scale(self, factor: complex) -> "FrExpPoly":
        return FrExpPoly({g: c * factor for g, c in self.terms.items()})

    def shift(self, delta: float) -> "FrExpPoly":
        """Multiply by s^delta."""
        return FrExpPoly({g + delta: c for g, c in self.terms.items()})

    def coeff(self, exponent: float, tol: float = EXP_MERGE_TOL) -> complex:
        for g, c in self.terms.items():
            if abs(g - exponent) <= tol:
                return c
        return 0.0

    def without(self, exponent: float, tol: float = EXP_MERGE_TOL) -> "FrExpPoly":
        return FrExpPoly({g: c for g, c in self.terms.items() if abs(g - exponent) > tol})

    def max_exponent(self) -> float:
        return max(self.terms) if self.terms else -math.inf

    def __call__(self, s: complex) -> complex:
        s = complex(s)
        return sum(c * s**g for g, c in self.terms.items())

    def __repr__(self):
        body = " + ".join(f"({c:.6g}) s^{g:.6g}" for g, c in sorted(self.terms.items()))
        return f"FrExpPoly[{body or '0'}]"


def frexp_det(entries: list[list[FrExpPoly]]) -> FrExpPoly:
    """Determinant of a small matrix of FrExpPoly by cofactor expansion."""
    m = len(entries)
    if m == 1:
        return entries[0][0]
    acc = FrExpPoly()
    for j in range(m):
        minor = [row[:j] + row[j + 1 :] for row in entries[1:]]
        sub = frexp_det(minor)
        term = entries[0][j] * sub
        if j % 2:
            term = -term
        acc = acc + term
    return acc


def _system_matrix(orders, f: np.ndarray) -> list[list[FrExpPoly]]:
    m = f.shape[0]
    rows = []
    for i in range(m):
        row = []
        for j in range(m):
            p = FrExpPoly.constant(-f[i, j])
            if i == j:
                p = p + FrExpPoly.monomial(orders[i])
            row.append(p)
        rows.append(row)
    return rows


def char_function(orders, f: np.ndarray) -> FrExpPoly:
    """det(I s^B - F) as a sparse exponent polynomial.

    Top term s^{sum(B)} with coefficient 1; constant term (-1)^m det(F).
    """
    f = np.asarray(f, dtype=complex)
    m = f.shape[0]
    orders = [float(b) for b in orders]
    if f.shape != (m, m) or len(orders) != m:
        raise InvalidArgumentError("orders and matrix dimensions disagree")
    return frexp_det(_system_matrix(orders, f))


def cofactor_numerators(orders, f: np.ndarray, mode: str) -> list[list[FrExpPoly]]:
    """Numerators p_{jl}(s): coefficient of phi_l in the Cramer determinant for
    component j, with the right-hand side I s^{B-1} Phi (caputo) or Phi (rl)."""
    if mode not in ("caputo", "rl"):
        raise InvalidArgumentError("mode must be 'caputo' or 'rl'")
    f = np.asarray(f, dtype=complex)
    m = f.shape[0]
    orders = [float(b) for b in orders]
    base = _system_matrix(orders, f)
    out: list[list[FrExpPoly]] = [[None] * m for _ in range(m)]
    for j in range(m):
        for l in range(m):
            col = [
                FrExpPoly.monomial(orders[l] - 1.0) if mode == "caputo" else FrExpPoly.constant(1.0)
                if i == l
                else FrExpPoly()
                for i in range(m)
            ]
            mat = [
                [col[i] if jj == j else base[i][jj] for jj in range(m)]
                for i in range(m)
            ]
            out[j][l] = frexp_det(mat)
    return out


@dataclass(frozen=True)
class MLKernelTerm:
    """One term  Q * t^{k b1 + n0 - 1} E^(k)_{b1, n0}(mu t^{b1}) / k!  of a
    solution-symbol series, stored via its nonnegative integral order nu."""

    coeff: complex
    nu: float
    k: int
    beta1: float
    mu: complex


@dataclass
class SeriesTermList:
    """Per-entry term lists of the solution-symbol series, grouped by k.

    ``entries[j][l][k]`` is a pair of arrays (coeffs, nus).  ``perm`` is the
    component permutation that moved the smallest order first; evaluation
    undoes it.
    """

    m: int
    mode: str
    beta1: float
    beta_star: float
    mu: complex
    perm: tuple[int, ...]
    entries: list  # [j][l] -> list over k of (coeff array, nu array)
    orders: tuple[float, ...] = field(default_factory=tuple)

    def term_count(self) -> int:
        return sum(
            len(c)
            for row in self.entries
            for cell in row
            for (c, _) in cell
        )

    def iter_terms(self, j: int, l: int):
        for k, (coeffs, nus) in enumerate(self.entries[j][l]):
            for q, nu in zip(coeffs, nus):
                yield MLKernelTerm(q, float(nu), k, self.beta1, self.mu)

    def laplace_value(self, j: int, l: int, s: complex, kmax: int | None = None) -> complex:
        """Transform-domain value of the (j, l) series entry at s (permuted
        indexing is internal; j, l refer to original components)."""
        jj = self.perm.index(j) if False else self._inv(j)
        ll = self._inv(l)
        base = s**self.beta1 - self.mu
        acc = 0j
        shift = self.beta1 - 1.0 if self.mode == "caputo" else 0.0
        for k, (coeffs, nus) in enumerate(self.entries[jj][ll]):
            if kmax is not None and k > kmax:
                break
            pole = base ** (k + 1)
            for q, nu in zip(coeffs, nus):
                acc += q * s ** (shift - nu) / pole
        return acc

    def _inv(self, idx: int) -> int:
        return self.perm.index(idx)


def series_terms(orders, f: np.ndarray, mode: str, kmax: int) -> SeriesTermList:
    """Expand the solution-symbol entries into ML kernel terms up to level kmax.

    The minimum order is moved first internally.  For each level k the product
    p_{jl}(s) (-R(s))^k is expanded monomial by monomial; a monomial
    Q s^gamma becomes the term with integral order
    nu = (k+1) b* + b1 - 1 - gamma (caputo) or (k+1) b* - gamma (rl),
    derivative order k, base order b1 and argument scale mu = -g.
    """
    if mode not in ("caputo", "rl"):
        raise InvalidArgumentError("mode must be 'caputo' or 'rl'")
    f = np.asarray(f, dtype=complex)
    m = f.shape[0]
    orders = [float(b) for b in orders]
    order_idx = int(np.argmin(orders))
    perm = tuple([order_idx] + [i for i in range(m) if i != order_idx])
    po = [orders[p] for p in perm]
    pf = f[np.ix_(perm, perm)]

    beta1 = po[0]
    beta_star = sum(po) - beta1
    psi = char_function(po, pf)
    g_coeff = psi.coeff(beta_star) if m > 1 else 0.0
    mu = -g_coeff
    # R = psi - s^{|B|} - g s^{b*}
    rem = psi.without(sum(po)).without(beta_star) if m > 1 else psi.without(sum(po)).without(0.0)
    if m == 1:
        # psi = s^{b1} - f11: the expansion terminates at k = 0
        rem = FrExpPoly()
        mu = complex(pf[0, 0])

    numerators = cofactor_numerators(po, pf, mode)
    neg_rem = -rem
    entries = [[[] for _ in range(m)] for _ in range(m)]
    power = FrExpPoly.constant(1.0)
    total_terms = 0
    for k in range(kmax + 1):
        if k > 0:
            power = power * neg_rem
            if len(power) == 0:
                break
        for j in range(m):
            for l in range(m):
                prod = numerators[j][l] * power
                coeffs = []
                nus = []
                for gamma, q in prod.terms.items():
                    if mode == "caputo":
                        nu = (k + 1) * beta_star + beta1 - 1.0 - gamma
                    else:
                        nu = (k + 1) * beta_star - gamma
                    if nu < -1e-9:
                        raise InternalConsistencyError(
                            f"negative integral order nu={nu} at entry ({j},{l}), k={k}"
                        )
                    coeffs.append(q)
                    nus.append(max(nu, 0.0))
                total_terms += len(coeffs)
                if total_terms > TERM_CAP:
                    raise TruncationLimitError(
                        f"series expansion exceeded {TERM_CAP} stored terms at k={k}"
                    )
                entries[j][l].append(
                    (np.asarray(coeffs, dtype=complex), np.asarray(nus, dtype=float))
                )
    return SeriesTermList(
        m=m,
        mode=mode,
        beta1=beta1,
        beta_star=beta_star,
        mu=complex(mu),
        perm=perm,
        entries=entries,
        orders=tuple(orders),
    )
