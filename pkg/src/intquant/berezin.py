"""Lower symbols, the Berezin transform and a classical-limit distance.

Families of density operators are displaced copies ``rho(z) = D(z) rho0 D(z)^dag``.
For Cahill-Glauber members (``s <= -1``) the overlap ``tr(rho_a(z) rho_b(z'))``
is the normalized Gaussian ``exp(-|z - z'|^2 / v) / v`` with
``v = -(s_a + s_b) / 2``; that closed form drives the transform, while
:func:`overlap_kernel` also computes it from the matrices.
"""
import csv
from dataclasses import dataclass, field

import numpy as np

from . import fock
from .errors import GridMismatchError
from .quadrature import REFERENCE, PhaseSpaceQuadrature
from .weyl import WHQuantizer, cg_M_analytic, evaluate_on_nodes, quantize


@dataclass(frozen=True)
class RhoFamily:
    """Displaced family generated by the density operator ``rho0``.

    ``s`` labels Cahill-Glauber members; it is ``None`` for arbitrary seeds.
    """

    rho0: np.ndarray = field(repr=False)
    s: float | None = None

    @classmethod
    def cahill_glauber(cls, s, space=64) -> "RhoFamily":
        s = float(s)
        if s > -1:
            raise ValueError(f"only s <= -1 gives a density operator, got {s}")
        return cls(cg_M_analytic(s, space), s)

    @classmethod
    def coherent(cls, space=64) -> "RhoFamily":
        return cls.cahill_glauber(-1.0, space)

    @classmethod
    def from_quantizer(cls, q: WHQuantizer) -> "RhoFamily":
        s = q.weight.s if q.weight.kind == "cahill_glauber" and q.m_source == "analytic" else None
        if s is not None and np.real(s) > -1:
            raise ValueError("quantizer seed is not a density operator")
        return cls(np.asarray(q.M), None if s is None else float(np.real(s)))

    @property
    def dim(self) -> int:
        return self.rho0.shape[0]

    def at(self, z) -> np.ndarray:
        d = fock.displacement(self.dim, z)
        return d @ self.rho0 @ d.conj().T


def kernel_variance(rho_a: RhoFamily, rho_b: RhoFamily) -> float | None:
    """Variance ``v`` of the Gaussian overlap, or ``None`` outside the CG family."""
    if rho_a.s is None or rho_b.s is None:
        return None
    return -(rho_a.s + rho_b.s) / 2


def overlap_kernel(rho_a: RhoFamily, rho_b: RhoFamily, z, zp, method="matrix") -> float:
    """``tr(rho_a(z) rho_b(z'))``.

    ``matrix`` uses covariance, ``tr(rho_a D(u) rho_b D(u)^dag)`` with
    ``u = z' - z``, on the truncated matrices; ``closed_form`` uses the
    Gaussian and needs two Cahill-Glauber families.
    """
    u = complex(zp) - complex(z)
    if method == "closed_form":
        v = kernel_variance(rho_a, rho_b)
        if v is None:
            raise ValueError("closed-form overlap needs Cahill-Glauber families")
        return float(np.exp(-abs(u) ** 2 / v) / v)
    if method != "matrix":
        raise ValueError(f"unknown method {method!r}")
    if rho_a.dim != rho_b.dim:
        raise GridMismatchError("families live on different truncations")
    moved = rho_b.at(u)
    return float(np.real(np.sum(rho_a.rho0.T * moved)))


def lower_symbol(A, rho_family: RhoFamily, z) -> complex:
    """``tr(rho(z) A)``."""
    rho = rho_family.at(z)
    return complex(np.sum(rho.T * np.asarray(A)))


@dataclass(frozen=True)
class Window:
    """Rectangle in ``(Re z, Im z)`` with an optional disk mask ``|z| <= radius``."""

    re_min: float = -2.0
    re_max: float = 2.0
    im_min: float = -2.0
    im_max: float = 2.0
    radius: float | None = None

    @classmethod
    def disk(cls, radius) -> "Window":
        return cls(-radius, radius, -radius, radius, radius)

    def contains(self, z) -> np.ndarray:
        z = np.asarray(z)
        ok = (z.real >= self.re_min) & (z.real <= self.re_max)
        ok &= (z.imag >= self.im_min) & (z.imag <= self.im_max)
        if self.radius is not None:
            ok &= np.abs(z) <= self.radius * (1 + 1e-12)
        return ok

    def grid(self, n_re=21, n_im=21):
        re = np.linspace(self.re_min, self.re_max, n_re)
        im = np.linspace(self.im_min, self.im_max, n_im)
        return re, im


@dataclass(frozen=True)
class SymbolField:
    """Samples of a phase-space function on a rectangular grid (rows: ``Im z``)."""

    re: np.ndarray
    im: np.ndarray
    values: np.ndarray
    window: Window

    @property
    def points(self) -> np.ndarray:
        return self.re[None, :] + 1j * self.im[:, None]

    @property
    def mask(self) -> np.ndarray:
        return self.window.contains(self.points)

    def same_grid(self, other: "SymbolField") -> bool:
        return (self.re.shape == other.re.shape and self.im.shape == other.im.shape
                and np.array_equal(self.re, other.re) and np.array_equal(self.im, other.im))

    def to_csv(self, path):
        z = self.points
        keep = self.mask
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["re_z", "im_z", "value_re", "value_im"])
            for zz, v in zip(z[keep], self.values[keep]):
                w.writerow([repr(zz.real), repr(zz.imag), repr(v.real), repr(v.imag)])


def sample(f, window: Window, grid=(21, 21)) -> SymbolField:
    re, im = window.grid(*grid)
    z = re[None, :] + 1j * im[:, None]
    vals = np.asarray(evaluate_on_nodes(f, z), dtype=complex)
    return SymbolField(re, im, vals.copy(), window)


def berezin_transform(f, quantizer: WHQuantizer, rho_family: RhoFamily | None = None,
                      window: Window = Window.disk(2.0), grid=(21, 21), scale=1.0,
                      quad: PhaseSpaceQuadrature | None = None) -> SymbolField:
    """``f_check(z) = int f(z') tr(rho~(z) rho(z')) d^2z'/pi`` on a grid.

    ``rho`` is the quantizer's family and ``rho~`` defaults to it. For
    Cahill-Glauber pairs the kernel is a Gaussian of variance ``scale * v``
    and the integral is taken in coordinates centred on each grid point;
    ``scale`` is the width parameter that sends the kernel to a delta as it
    goes to zero. Other families use the matrix kernel at the quantizer's
    nodes and require ``scale = 1``.
    """
    rho = RhoFamily.from_quantizer(quantizer)
    rho_t = rho if rho_family is None else rho_family
    re, im = window.grid(*grid)
    pts = re[None, :] + 1j * im[:, None]
    v = kernel_variance(rho_t, rho)
    out = np.zeros(pts.shape, dtype=complex)
    if v is not None:
        q = REFERENCE if quad is None else quad
        width = np.sqrt(scale * v)
        gauss = q.weights * np.exp(-q.action)
        for idx in np.ndindex(pts.shape):
            vals = evaluate_on_nodes(f, pts[idx] + width * q.nodes)
            out[idx] = np.dot(gauss, vals)
    else:
        if scale != 1.0:
            raise ValueError("width rescaling needs Cahill-Glauber families")
        q = quantizer.quad if quad is None else quad
        a = quantize(quantizer, f, q)
        for idx in np.ndindex(pts.shape):
            out[idx] = lower_symbol(a, rho_t, pts[idx])
    return SymbolField(re, im, out, window)


def classical_distance(f, f_check: SymbolField, norm="sup") -> float:
    """Distance between ``f`` and its transform over the window.

    ``f`` may be a callable or a :class:`SymbolField` on the same grid.
    ``L2`` is the grid approximation of ``(int |f - f_check|^2 dA)^{1/2}``.
    """
    if isinstance(f, SymbolField):
        if not f.same_grid(f_check):
            raise GridMismatchError("fields are sampled on different grids")
        ref = f.values
    else:
        ref = evaluate_on_nodes(f, f_check.points)
    diff = np.abs(ref - f_check.values)[f_check.mask]
    if diff.size == 0:
        return 0.0
    if norm == "sup":
        return float(diff.max())
    if norm == "L2":
        dre = f_check.re[1] - f_check.re[0] if f_check.re.size > 1 else 1.0
        dim_ = f_check.im[1] - f_check.im[0] if f_check.im.size > 1 else 1.0
        return float(np.sqrt(np.sum(diff ** 2) * dre * dim_))
    raise ValueError(f"unknown norm {norm!r}")
