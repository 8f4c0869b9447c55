"""Truncated Fock-space linear algebra.

Operators are plain complex ``ndarray`` objects of shape ``(dim, dim)`` in
the number basis ``|e_0>, ..., |e_{dim-1}>``. Units: hbar = 1.
"""
from dataclasses import dataclass
import warnings

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln

from . import kernels

TOL_HERM = 1e-10
TOL_PSD = 1e-10
TOL_TRACE = 1e-10


@dataclass(frozen=True)
class TruncatedFockSpace:
    """Span of the first ``dim`` number states.

    ``safe`` is the size of the top-left block on which infinite-dimensional
    identities are asserted (default ``dim // 2``).
    """

    dim: int = 64
    safe_margin: int | None = None

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 2:
            raise ValueError(f"dim must be an integer >= 2, got {self.dim!r}")

    @property
    def safe(self) -> int:
        margin = self.dim // 2 if self.safe_margin is None else self.safe_margin
        return max(self.dim - margin, 1)

    def block(self, op, size=None):
        n = self.safe if size is None else size
        return np.asarray(op)[:n, :n]

    def basis(self, n) -> np.ndarray:
        e = np.zeros(self.dim, dtype=complex)
        e[n] = 1.0
        return e


def _space(space) -> TruncatedFockSpace:
    return space if isinstance(space, TruncatedFockSpace) else TruncatedFockSpace(int(space))


def annihilation(space) -> np.ndarray:
    dim = _space(space).dim
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


def creation(space) -> np.ndarray:
    return annihilation(space).conj().T


def number(space) -> np.ndarray:
    return np.diag(np.arange(_space(space).dim, dtype=float)).astype(complex)


def quadrature_pair(space):
    """``Q = (a + a^dag)/sqrt 2`` and ``P = (a - a^dag)/(i sqrt 2)``."""
    a = annihilation(space)
    ad = a.conj().T
    return (a + ad) / np.sqrt(2), (a - ad) / (1j * np.sqrt(2))


def parity(space) -> np.ndarray:
    dim = _space(space).dim
    return np.diag((-1.0) ** np.arange(dim)).astype(complex)


def squared_quadratures(space):
    """``Q^2``, ``P^2`` without the truncation-edge defect of ``Q @ Q``."""
    sp = _space(space)
    q, p = quadrature_pair(sp.dim + 1)
    return (q @ q)[: sp.dim, : sp.dim], (p @ p)[: sp.dim, : sp.dim]


def displacement(space, z, method="closed_form") -> np.ndarray:
    """Matrix of ``D(z) = exp(z a^dag - conj(z) a)`` in the truncated basis.

    ``closed_form`` gives the exact infinite-dimensional matrix elements
    (unitary only up to truncation); ``exponential`` exponentiates the
    truncated generator (exactly unitary, wrong near the edge).
    """
    z = complex(z)
    if not np.isfinite(z):
        raise ValueError(f"displacement parameter must be finite, got {z!r}")
    sp = _space(space)
    if method == "closed_form":
        return kernels.displacement_matrix(z, sp.dim)
    if method == "exponential":
        a = annihilation(sp)
        return expm(z * a.conj().T - np.conj(z) * a)
    raise ValueError(f"unknown displacement method {method!r}")


def coherent_state(space, z) -> np.ndarray:
    """Coefficients ``e^{-|z|^2/2} z^n / sqrt(n!)`` for ``n < dim``.

    Not renormalized; the truncation loss shows up as ``1 - ||v||^2``.
    """
    sp = _space(space)
    z = complex(z)
    if abs(z) ** 2 > sp.dim / 4:
        warnings.warn(
            f"|z|^2 = {abs(z) ** 2:.3g} is not small against dim = {sp.dim}; "
            "coherent state is visibly truncated",
            stacklevel=2,
        )
    n = np.arange(sp.dim)
    if z == 0:
        out = np.zeros(sp.dim, dtype=complex)
        out[0] = 1.0
        return out
    logmag = -0.5 * abs(z) ** 2 + n * np.log(abs(z)) - 0.5 * gammaln(n + 1)
    return np.exp(logmag + 1j * n * np.angle(z))


def poisson_weights(J, dim) -> np.ndarray:
    """``p_n(J) = e^{-J} J^n / n!`` for ``n < dim``."""
    n = np.arange(dim)
    if J == 0:
        return (n == 0).astype(float)
    return np.exp(-J + n * np.log(J) - gammaln(n + 1))


def projector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def hermiticity_defect(op) -> float:
    op = np.asarray(op)
    return float(np.max(np.abs(op - op.conj().T)))


def is_hermitian(op, tol=TOL_HERM) -> bool:
    return hermiticity_defect(op) <= tol


def min_eigenvalue(op) -> float:
    op = np.asarray(op)
    return float(np.linalg.eigvalsh(0.5 * (op + op.conj().T))[0])


def check_density(rho, tol_herm=TOL_HERM, tol_psd=TOL_PSD, tol_trace=TOL_TRACE):
    """Return a dict of the three density-operator checks and their values."""
    rho = np.asarray(rho)
    herm = hermiticity_defect(rho)
    lam = min_eigenvalue(rho)
    tr = complex(np.trace(rho))
    return {
        "hermitian": herm <= tol_herm,
        "positive": lam >= -tol_psd,
        "unit_trace": abs(tr - 1) <= tol_trace,
        "hermiticity_defect": herm,
        "min_eigenvalue": lam,
        "trace": tr,
    }


def is_density(rho, **tols) -> bool:
    c = check_density(rho, **tols)
    return c["hermitian"] and c["positive"] and c["unit_trace"]


def max_norm(op) -> float:
    return float(np.max(np.abs(op))) if np.size(op) else 0.0
