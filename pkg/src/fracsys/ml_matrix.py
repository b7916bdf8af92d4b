"""Jordan-form decomposition and matrix-valued Mittag-Leffler functions.

A numeric Jordan form is only attempted where it is trustworthy: simple
spectra go through the eigendecomposition, a defective 2x2 cluster through an
explicit generalized-eigenvector chain; anything else is refused so callers
can fall back to the Laplace-inversion or Adams oracles, which need no Jordan
form at all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    IllConditionedDecompositionError,
    InvalidArgumentError,
    SeriesDivergenceError,
)
from .gammafn import rgamma
from .ml_scalar import MLParams, ml_deriv

#: transform condition number above which sol_equal-style formulas lose all digits
COND_CAP = 1.0e8


@dataclass(frozen=True)
class JordanForm:
    """Transform matrix M and Jordan blocks [(eigenvalue, size), ...] with
    M (Lambda + N) M^{-1} equal to the decomposed matrix."""

    transform: np.ndarray
    blocks: tuple[tuple[complex, int], ...]

    def __post_init__(self):
        m = sum(size for _, size in self.blocks)
        t = np.asarray(self.transform, dtype=complex)
        if t.shape != (m, m):
            raise InvalidArgumentError("transform shape inconsistent with block sizes")
        object.__setattr__(self, "transform", t)
        object.__setattr__(self, "blocks", tuple((complex(l), int(s)) for l, s in self.blocks))

    @property
    def size(self) -> int:
        return self.transform.shape[0]

    def jordan_matrix(self) -> np.ndarray:
        m = self.size
        j = np.zeros((m, m), dtype=complex)
        pos = 0
        for lam, sz in self.blocks:
            for i in range(sz):
                j[pos + i, pos + i] = lam
                if i + 1 < sz:
                    j[pos + i, pos + i + 1] = 1.0
            pos += sz
        return j

    def matrix(self) -> np.ndarray:
        minv = np.linalg.inv(self.transform)
        return self.transform @ self.jordan_matrix() @ minv


def jordan_decompose(
    matrix: np.ndarray, cluster_tol: float | None = None, cond_cap: float = COND_CAP
) -> JordanForm:
    """Decompose a finite square matrix into Jordan form.

    Eigenvalues closer than ``cluster_tol`` (default 1e-6 * norm) form one
    block group.  Raises IllConditionedDecompositionError when no reliable
    decomposition exists; solve through the Laplace/Adams oracles then.
    """
    z = np.asarray(matrix, dtype=complex)
    if z.ndim != 2 or z.shape[0] != z.shape[1] or z.shape[0] < 1:
        raise InvalidArgumentError("matrix must be square and nonempty")
    if not np.all(np.isfinite(z.view(float))):
        raise InvalidArgumentError("matrix entries must be finite")
    m = z.shape[0]
    norm = float(np.linalg.norm(z, 2)) if m > 1 else float(abs(z[0, 0]))
    if cluster_tol is None:
        cluster_tol = 1e-6 * max(norm, 1e-300)

    if m == 1:
        return JordanForm(np.eye(1, dtype=complex), ((complex(z[0, 0]), 1),))

    w, v = np.linalg.eig(z)
    cond = np.linalg.cond(v)
    if cond <= cond_cap:
        recon = v @ np.diag(w) @ np.linalg.inv(v)
        if np.linalg.norm(recon - z, 2) <= 1e-8 * max(norm, 1e-300):
            return JordanForm(v, tuple((complex(l), 1) for l in w))

    # defective path: currently a single 2x2 cluster via a generalized chain
    if m == 2 and abs(w[0] - w[1]) <= max(cluster_tol, 1e-8 * max(norm, 1.0)):
        lam = 0.5 * (w[0] + w[1])
        nil = z - lam * np.eye(2)
        if np.linalg.norm(nil, 2) <= cluster_tol:
            return JordanForm(np.eye(2, dtype=complex), ((complex(lam), 1), (complex(lam), 1)))
        # pick the seed column with the largest image
        images = [nil @ e for e in np.eye(2, dtype=complex)]
        idx = int(np.argmax([np.linalg.norm(im) for im in images]))
        v2 = np.eye(2, dtype=complex)[idx]
        v1 = images[idx]
        if np.linalg.norm(nil @ v1) > cluster_tol * max(np.linalg.norm(v1), 1e-300):
            raise IllConditionedDecompositionError(
                "2x2 cluster is not defective to tolerance; use the talbot/adams oracles"
            )
        t = np.column_stack([v1, v2])
        if np.linalg.cond(t) > cond_cap:
            raise IllConditionedDecompositionError(
                "generalized-eigenvector chain too ill-conditioned; use the talbot/adams oracles"
            )
        return JordanForm(t, ((complex(lam), 2),))

    raise IllConditionedDecompositionError(
        f"eigenvector matrix condition {cond:.2e} exceeds cap {cond_cap:.1e} and no "
        "supported defective structure was detected; solve via the talbot or adams oracles"
    )


def matrix_ml(beta: float, nu: float, t: float, jf: JordanForm) -> np.ndarray:
    """M E_{beta,nu}(t^beta (Lambda + N)) M^{-1} with block entries
    (i, i+r) = t^{r beta} E^{(r)}_{beta,nu}(lambda t^beta) / r!."""
    if beta <= 0 or nu <= 0:
        raise InvalidArgumentError("beta and nu must be positive")
    if t < 0:
        raise InvalidArgumentError("t must be nonnegative")
    params = MLParams(beta, nu)
    m = jf.size
    core = np.zeros((m, m), dtype=complex)
    pos = 0
    for lam, sz in jf.blocks:
        arg = lam * t**beta
        for r in range(sz):
            if t == 0.0 and r > 0:
                val = 0.0
            else:
                val = (t ** (r * beta)) * ml_deriv(params, arg, r) / math.factorial(r)
            for i in range(sz - r):
                core[pos + i, pos + i + r] = val
        pos += sz
    minv = np.linalg.inv(jf.transform)
    return jf.transform @ core @ minv


@dataclass(frozen=True)
class VectorIndex:
    """Length-m list of positive reals indexing a vector-order ML function."""

    entries: tuple[float, ...]

    def __post_init__(self):
        e = tuple(float(x) for x in self.entries)
        if len(e) == 0 or any(x <= 0 or not math.isfinite(x) for x in e):
            raise InvalidArgumentError("all entries must be positive finite reals")
        object.__setattr__(self, "entries", e)

    def __len__(self):
        return len(self.entries)


def vector_indexed_ml(
    b: VectorIndex, v: VectorIndex, z: np.ndarray, tol: float = 1e-12, term_cap: int = 1000
) -> np.ndarray:
    """sum_n diag(1/Gamma(n b_j + v_j)) Z^n, truncated when three consecutive
    term norms fall below tol times the accumulated norm."""
    z = np.asarray(z, dtype=complex)
    m = z.shape[0]
    if z.shape != (m, m) or len(b) != m or len(v) != m:
        raise InvalidArgumentError("B, V and Z must share the dimension m")
    bb = np.array(b.entries)
    vv = np.array(v.entries)
    acc = np.diag([rgamma(x) for x in vv]).astype(complex)
    power = np.eye(m, dtype=complex)
    small = 0
    for n in range(1, term_cap + 1):
        power = power @ z
        pnorm = np.linalg.norm(power, 2)
        if not np.isfinite(pnorm) or pnorm > 1e280:
            raise SeriesDivergenceError(
                f"matrix powers overflow at n={n}; spectral radius too large"
            )
        weights = np.array([rgamma(bb[j] * n + vv[j]) for j in range(m)])
        term = weights[:, None] * power
        acc += term
        tnorm = np.linalg.norm(term, 2)
        if tnorm <= tol * max(np.linalg.norm(acc, 2), 1e-300):
            small += 1
            if small >= 3:
                return acc
        else:
            small = 0
    raise SeriesDivergenceError(
        f"vector-indexed ML series did not converge within {term_cap} terms"
    )
