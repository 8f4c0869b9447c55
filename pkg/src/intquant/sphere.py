"""Phase space of a particle on the unit sphere and its complexification.

A point ``(x, p)`` with ``|x| = 1`` and ``x . p = 0`` maps to
``a = cosh(J) x + i sinh(J)/J p`` on the complex sphere ``a . a = 1``
(bilinear product), where ``J = |x ^ p| = |p|``.
"""
from dataclasses import dataclass
import json

import numpy as np
from scipy.special import roots_legendre

from .affine import HalfLineGrid
from .errors import GridMismatchError

TOL_INPUT = 1e-8
SERIES_CUTOFF = 1e-6


def _sinhc(J):
    if J < SERIES_CUTOFF:
        return 1.0 + J * J / 6.0
    return np.sinh(J) / J


@dataclass(frozen=True)
class SpherePhasePoint:
    x: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float).reshape(3)
        p = np.asarray(self.p, dtype=float).reshape(3)
        if abs(np.linalg.norm(x) - 1.0) > TOL_INPUT:
            raise ValueError(f"|x| must be 1, got {np.linalg.norm(x)!r}")
        if abs(np.dot(x, p)) > TOL_INPUT:
            raise ValueError(f"x . p must vanish, got {np.dot(x, p)!r}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "p", p)

    @property
    def J(self) -> float:
        return float(np.linalg.norm(np.cross(self.x, self.p)))

    @classmethod
    def random(cls, rng, j_max=3.0) -> "SpherePhasePoint":
        x = rng.normal(size=3)
        x /= np.linalg.norm(x)
        p = rng.normal(size=3)
        p -= np.dot(p, x) * x
        p *= rng.uniform(0, j_max) / np.linalg.norm(p)
        return cls(x, p)


@dataclass(frozen=True)
class ComplexSpherePoint:
    a: np.ndarray

    @property
    def square(self) -> complex:
        """Bilinear ``a . a``."""
        return complex(np.sum(self.a * self.a))

    def to_dict(self) -> dict:
        return {"re": self.a.real.tolist(), "im": self.a.imag.tolist()}


def complexify(point: SpherePhasePoint) -> ComplexSpherePoint:
    J = point.J
    return ComplexSpherePoint(np.cosh(J) * point.x + 1j * _sinhc(J) * point.p)


def reconstruct(a: ComplexSpherePoint) -> SpherePhasePoint:
    """Inverse of :func:`complexify`: ``|Im a| = sinh J`` fixes ``J``, then ``x`` and ``p``."""
    re, im = np.real(a.a), np.imag(a.a)
    # sinh J from the imaginary part is better conditioned near J = 0
    sh = np.linalg.norm(im)
    J = float(np.arcsinh(sh))
    return SpherePhasePoint(re / np.sqrt(1.0 + sh * sh), im / _sinhc(J))


def complex_angle(a: ComplexSpherePoint, yhat, check_unit=True) -> complex:
    """``cos Omega = a . yhat``; ``check_unit=False`` admits raw vectors."""
    y = np.asarray(yhat, dtype=float).reshape(3)
    if check_unit and abs(np.linalg.norm(y) - 1.0) > TOL_INPUT:
        raise ValueError(f"yhat must be a unit vector, got norm {np.linalg.norm(y)!r}")
    return complex(np.dot(a.a, y))


@dataclass(frozen=True)
class SphereMesh:
    """Gauss-Legendre in ``cos theta`` times uniform azimuth; weights sum to ``4 pi``."""

    n_theta: int = 24
    n_phi: int = 48

    @property
    def directions(self) -> np.ndarray:
        u, _ = roots_legendre(self.n_theta)
        phi = 2 * np.pi * np.arange(self.n_phi) / self.n_phi
        s = np.sqrt(1 - u ** 2)
        return np.stack([
            (s[:, None] * np.cos(phi)[None, :]).ravel(),
            (s[:, None] * np.sin(phi)[None, :]).ravel(),
            np.repeat(u, self.n_phi),
        ], axis=1)

    @property
    def weights(self) -> np.ndarray:
        _, w = roots_legendre(self.n_theta)
        return np.repeat(w, self.n_phi) * (2 * np.pi / self.n_phi)


@dataclass(frozen=True)
class SeparableState:
    """Samples ``Psi[i, j] = r_i psi(r_i) Y(yhat_j)``, normed with ``dr dOmega``."""

    grid: HalfLineGrid
    mesh: SphereMesh
    values: np.ndarray

    @property
    def norm(self) -> float:
        w = self.grid.weights[:, None] * self.mesh.weights[None, :]
        return float(np.sqrt(np.sum(w * np.abs(self.values) ** 2)))


def _sample(fn_or_values, points, expected):
    if callable(fn_or_values):
        out = np.asarray(fn_or_values(points), dtype=complex)
    else:
        out = np.asarray(fn_or_values, dtype=complex)
    if out.shape != (expected,):
        raise GridMismatchError(f"expected {expected} samples, got shape {out.shape}")
    return out


def assemble_separable_state(radial, angular, grid: HalfLineGrid,
                             mesh: SphereMesh = SphereMesh()) -> SeparableState:
    """Product state from a radial ``psi(r)`` and an angular ``Y(yhat)``.

    Either factor may be a callable or samples on the matching grid. The
    stored radial factor is ``r psi(r)``, so
    ``norm = ||r psi||_{dr} * ||Y||_{dOmega}``.
    """
    r = grid.x
    rad = r * _sample(radial, r, r.size)
    ang = _sample(angular, mesh.directions, mesh.weights.size)
    return SeparableState(grid, mesh, np.outer(rad, ang))


def export_points_json(points, path):
    """Write ``[{x, p, J, a: {re, im}, a_dot_a: [re, im]}, ...]``."""
    rows = []
    for pt in points:
        a = complexify(pt)
        sq = a.square
        rows.append({"x": pt.x.tolist(), "p": pt.p.tolist(), "J": pt.J,
                     "a": a.to_dict(), "a_dot_a": [sq.real, sq.imag]})
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(rows, fh, indent=2)
