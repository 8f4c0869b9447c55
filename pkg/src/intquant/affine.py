"""Affine-group (wavelet) integral quantization on the half-line.

The group ``(q, p)``, ``q > 0``, acts on ``L^2((0, inf), dx)`` by
``U(q,p) psi(x) = e^{ipx} psi(x/q) / sqrt(q)``. Coherent states
``|q,p> = U(q,p) psi`` resolve the identity with measure
``dq dp / (2 pi c_{-1})``. Operators are represented weakly, through
matrix elements against sampled test functions.
"""
from dataclasses import dataclass, field
import csv
import json
import warnings

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import gammaln, lambertw

from .errors import DivergentMomentError, GridMismatchError

KINETIC_THRESHOLD = 0.75


@dataclass(frozen=True)
class HalfLineGrid:
    """Nodes on ``[x_min, x_max]`` from a smooth map of a uniform variable ``t``.

    ``log-linear`` solves ``t = ln x + x / crossover``: geometric spacing
    below ``crossover``, near-uniform above, so oscillatory integrands stay
    resolved at large ``x``. ``geometric`` is ``t = ln x``; ``uniform`` is
    ``t = x``. Weights are the trapezoid rule in ``t`` times ``dx/dt``,
    spectrally accurate for integrands that vanish at both ends.
    """

    n: int = 4096
    x_max: float = 80.0
    x_min: float = 1e-6
    spacing: str = "log-linear"
    crossover: float = 1.0
    x: np.ndarray = field(init=False, repr=False, compare=False)
    weights: np.ndarray = field(init=False, repr=False, compare=False)
    jacobian: np.ndarray = field(init=False, repr=False, compare=False)
    dt: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 0 < self.x_min < self.x_max or self.n < 8:
            raise ValueError("need 0 < x_min < x_max and at least 8 nodes")
        c = self.crossover
        if self.spacing == "log-linear":
            to_t = lambda x: np.log(x) + x / c  # noqa: E731
            t = np.linspace(to_t(self.x_min), to_t(self.x_max), self.n)
            x = c * np.real(lambertw(np.exp(t - np.log(c))))
            x[0], x[-1] = self.x_min, self.x_max
            jac = x * c / (x + c)
        elif self.spacing == "geometric":
            t = np.linspace(np.log(self.x_min), np.log(self.x_max), self.n)
            x = np.exp(t)
            jac = x.copy()
        elif self.spacing == "uniform":
            t = np.linspace(self.x_min, self.x_max, self.n)
            x = t.copy()
            jac = np.ones_like(x)
        else:
            raise ValueError(f"unknown spacing {self.spacing!r}")
        dt = t[1] - t[0]
        w = jac * dt
        w[0] *= 0.5
        w[-1] *= 0.5
        for name, val in (("x", x), ("weights", w), ("jacobian", jac), ("dt", dt)):
            object.__setattr__(self, name, val)

    def integrate(self, values):
        return np.tensordot(np.asarray(values), self.weights, axes=(-1, 0))

    def inner(self, f, g) -> complex:
        return complex(self.integrate(np.conj(f) * g))

    def norm(self, f) -> float:
        return float(np.sqrt(self.integrate(np.abs(f) ** 2)))

    def derivative(self, f, order=1):
        """Central differences in ``t`` (one-sided at the edges), chained to ``x``."""
        out = np.asarray(f)
        for _ in range(order):
            out = np.gradient(out, self.dt, edge_order=2) / self.jacobian
        return out

    def gaussian_defect(self) -> float:
        """``|int x^2 e^{-x^2} dx - sqrt(pi)/4|`` on the grid."""
        return float(abs(self.integrate(self.x ** 2 * np.exp(-self.x ** 2)) - np.sqrt(np.pi) / 4))

    def dilated(self, d) -> "HalfLineGrid":
        """Same construction stretched by ``d`` (more nodes when ``d > 1``)."""
        n = int(np.ceil(self.n * max(1.0, d) / 512)) * 512
        return HalfLineGrid(n, self.x_max * d, self.x_min, self.spacing, self.crossover * d)

    def same_as(self, other) -> bool:
        return self is other or (
            self.n == other.n and self.x_min == other.x_min and self.x_max == other.x_max
            and self.spacing == other.spacing and self.crossover == other.crossover
        )


REFERENCE_GRID = HalfLineGrid()
# long enough to hold a PowerExp(2, 1) state dilated by q = 40
WIDE_GRID = HalfLineGrid(n=8192, x_max=2500.0, crossover=10.0)


def power_exp_scale(alpha, lam) -> float:
    """Mean position of PowerExp(alpha, lam) relative to PowerExp(2, 1)."""
    return (2 * alpha + 1) / (5 * lam)


def power_exp_moment(alpha, lam, gamma) -> float:
    """``lam^{gamma+2} Gamma(2 alpha - 1 - gamma) / Gamma(2 alpha + 1)``."""
    if not 2 * alpha - 1 - gamma > 0:
        raise DivergentMomentError(
            f"c_{gamma} diverges for alpha = {alpha}: need 2*alpha - 1 - gamma > 0"
        )
    return float(np.exp((gamma + 2) * np.log(lam) + gammaln(2 * alpha - 1 - gamma)
                        - gammaln(2 * alpha + 1)))


@dataclass(frozen=True)
class FiducialVector:
    """Fiducial wavelet ``psi`` sampled on a grid.

    ``power_exp`` gives ``C x^alpha e^{-lam x/2}`` with unit norm and
    closed-form derivative; ``sampled`` wraps arbitrary real samples and
    evaluates off-grid by cubic spline.
    """

    grid: HalfLineGrid
    values: np.ndarray = field(repr=False)
    alpha: float | None = None
    lam: float | None = None
    _spline: object = field(default=None, repr=False, compare=False)

    @classmethod
    def power_exp(cls, alpha, lam, grid=REFERENCE_GRID) -> "FiducialVector":
        if not alpha > 1.5:
            raise ValueError(f"need alpha > 3/2 for c_1, c_0, c_-1 and K to exist, got {alpha}")
        if not lam > 0:
            raise ValueError(f"need lam > 0, got {lam}")
        psi = cls(grid, np.empty(0), float(alpha), float(lam))
        object.__setattr__(psi, "values", psi(grid.x))
        return psi

    @classmethod
    def sampled(cls, values, grid=REFERENCE_GRID) -> "FiducialVector":
        values = np.asarray(values, dtype=float)
        if values.shape != grid.x.shape:
            raise GridMismatchError("samples do not match the grid")
        spline = CubicSpline(np.log(grid.x), values, extrapolate=False)
        return cls(grid, values, _spline=spline)

    @property
    def is_power_exp(self) -> bool:
        return self.alpha is not None

    def _log_c(self):
        a, lam = self.alpha, self.lam
        return 0.5 * ((2 * a + 1) * np.log(lam) - gammaln(2 * a + 1))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.is_power_exp:
            out = np.zeros_like(x)
            pos = x > 0
            xp = x[pos]
            out[pos] = np.exp(self._log_c() + self.alpha * np.log(xp) - 0.5 * self.lam * xp)
            return out
        with np.errstate(divide="ignore"):
            out = self._spline(np.log(np.where(x > 0, x, np.nan)))
        return np.nan_to_num(out, nan=0.0)

    def derivative(self, x=None):
        if x is None:
            if not self.is_power_exp:
                return self.grid.derivative(self.values)
            x = self.grid.x
        x = np.asarray(x, dtype=float)
        if not self.is_power_exp:
            return CubicSpline(self.grid.x, self.grid.derivative(self.values))(x)
        return self(x) * (self.alpha / x - 0.5 * self.lam)

    @property
    def norm(self) -> float:
        return self.grid.norm(self.values)

    def c_gamma(self, gamma) -> float:
        return c_gamma(self, gamma)

    @property
    def c_minus1(self) -> float:
        return c_gamma(self, -1)

    def moment_table(self, gammas=(-2, -1, 0, 1)) -> dict:
        return {g: c_gamma(self, g) for g in gammas}


def c_gamma(psi: FiducialVector, gamma) -> float:
    """``int |psi(x)|^2 x^{-(2 + gamma)} dx`` by grid quadrature."""
    if psi.is_power_exp and not 2 * psi.alpha - 1 - gamma > 0:
        raise DivergentMomentError(
            f"c_{gamma} diverges for alpha = {psi.alpha}: need 2*alpha - 1 - gamma > 0"
        )
    x = psi.grid.x
    return float(psi.grid.integrate(np.abs(psi.values) ** 2 * x ** (-(2.0 + gamma))))


def kinetic_K(psi: FiducialVector):
    """``K = int psi'(u)^2 u du / c_{-1}`` and whether ``K >= 3/4``."""
    d = psi.derivative()
    k = float(psi.grid.integrate(np.abs(d) ** 2 * psi.grid.x)) / psi.c_minus1
    return k, k >= KINETIC_THRESHOLD


def group_product(g1, g2):
    """``(q, p)(q0, p0) = (q q0, p0 / q + p)``."""
    (q, p), (q0, p0) = g1, g2
    return q * q0, p0 / q + p


def group_inverse(g):
    q, p = g
    return 1.0 / q, -p * q


def apply_U(q, p, func, x):
    """``(U(q,p) func)(x)`` for a callable ``func``."""
    if not q > 0:
        raise ValueError(f"dilation must be positive, got q = {q}")
    x = np.asarray(x, dtype=float)
    return np.exp(1j * p * x) * func(x / q) / np.sqrt(q)


def pull_back(grid: HalfLineGrid, q0, p0, phi) -> np.ndarray:
    """Samples of ``U(q0,p0)^dag phi = sqrt(q0) e^{-i p0 q0 x} phi(q0 x)``.

    ``phi`` is interpolated by cubic spline in ``ln x`` and taken as zero
    beyond the grid.
    """
    if not q0 > 0:
        raise ValueError(f"dilation must be positive, got q0 = {q0}")
    phi = np.asarray(phi, dtype=complex)
    if phi.shape != grid.x.shape:
        raise GridMismatchError("function is not sampled on the grid")
    t = np.log(grid.x)
    y = np.log(q0 * grid.x)
    inside = y <= t[-1]
    vals = np.zeros(grid.x.shape, dtype=complex)
    for part, unit in ((phi.real, 1.0), (phi.imag, 1j)):
        vals[inside] += unit * CubicSpline(t, part)(y[inside])
    return np.sqrt(q0) * np.exp(-1j * p0 * q0 * grid.x) * vals


def affine_cs(q, p, psi: FiducialVector, grid: HalfLineGrid | None = None) -> np.ndarray:
    """Samples of ``|q,p> = U(q,p) psi`` on the grid.

    Warns when a noticeable part of the dilated state lies beyond ``x_max``.
    """
    grid = psi.grid if grid is None else grid
    v = apply_U(q, p, psi, grid.x)
    loss = 1.0 - grid.norm(v) ** 2
    if loss > 1e-6:
        warnings.warn(f"affine coherent state at q = {q} loses {loss:.2e} of its norm "
                      "outside the grid", stacklevel=2)
    return v


@dataclass(frozen=True)
class AffineWindow:
    """Truncated half-plane: ``q`` log-spaced, ``p`` uniform, trapezoid weights."""

    q_min: float = 0.05
    q_max: float = 40.0
    n_q: int = 96
    p_max: float = 60.0
    n_p: int = 512
    q: np.ndarray = field(init=False, repr=False, compare=False)
    p: np.ndarray = field(init=False, repr=False, compare=False)
    wq: np.ndarray = field(init=False, repr=False, compare=False)
    wp: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        u = np.linspace(np.log(self.q_min), np.log(self.q_max), self.n_q)
        q = np.exp(u)
        wq = q * (u[1] - u[0])
        wq[[0, -1]] *= 0.5
        p = np.linspace(-self.p_max, self.p_max, self.n_p)
        wp = np.full(self.n_p, p[1] - p[0])
        wp[[0, -1]] *= 0.5
        for name, val in (("q", q), ("p", p), ("wq", wq), ("wp", wp)):
            object.__setattr__(self, name, val)

    def dilated(self, d) -> "AffineWindow":
        """Window matching fiducial and states all dilated by ``x -> d x``.

        ``q`` is a relative dilation and stays put; ``p`` scales by ``1/d``.
        """
        return AffineWindow(self.q_min, self.q_max, self.n_q, self.p_max / d, self.n_p)


REFERENCE_WINDOW = AffineWindow()
# q^beta and p^2 symbols weight the slowly decaying large-q tail and the
# fine p structure there; operator identities need this wider, denser window
OPERATOR_WINDOW = AffineWindow(q_min=0.02, q_max=1e4, n_q=240, p_max=100.0, n_p=2048)


def reference_setup(d=1.0):
    """Reference grid, wide grid, reference window and operator window, dilated by ``d``."""
    if d == 1.0:
        return REFERENCE_GRID, WIDE_GRID, REFERENCE_WINDOW, OPERATOR_WINDOW
    return (REFERENCE_GRID.dilated(d), WIDE_GRID.dilated(d),
            REFERENCE_WINDOW.dilated(d), OPERATOR_WINDOW.dilated(d))


def probe_states(psi: "FiducialVector", d=1.0) -> list:
    """Five unit-norm probe states on the fiducial grid, all vanishing at least like ``x^2`` at 0.

    The first is ``psi``; the others are fixed shapes dilated by ``d``.
    """
    g = psi.grid
    x = g.x / d
    raw = [
        psi.values.astype(complex),
        x ** 2 * np.exp(-x),
        x ** 3 * np.exp(-x ** 2 / 4) * (1 + 0.5j * x),
        x ** 2.5 * np.exp(-0.7 * x) * np.cos(x),
        x ** 2 * np.exp(-(x - 3) ** 2),
    ]
    return [np.asarray(v, dtype=complex) / g.norm(v) for v in raw]


class AffineQuantizer:
    """Coherent-state overlaps over a half-plane window and the weak quantization.

    ``overlaps(phi)[i, j] = <q_i, p_j | phi>``, computed per ``q`` row as a
    discrete Fourier sum over the grid.
    """

    def __init__(self, psi: FiducialVector, window: AffineWindow = REFERENCE_WINDOW):
        self.psi = psi
        self.grid = psi.grid
        self.window = window
        self.c_minus1 = psi.c_minus1
        x = self.grid.x
        # dilated fiducial: rows q_i, already carrying grid weights and 1/sqrt(q)
        self._dil = (psi(x[None, :] / window.q[:, None]) / np.sqrt(window.q)[:, None]
                     * self.grid.weights[None, :])
        self._phase = np.exp(-1j * np.outer(x, window.p))
        self._cache = {}

    def overlaps(self, phi) -> np.ndarray:
        phi = np.asarray(phi, dtype=complex)
        if phi.shape != self.grid.x.shape:
            raise GridMismatchError("test function is not sampled on the fiducial grid")
        key = hash(phi.tobytes())
        hit = self._cache.get(key)
        if hit is None:
            hit = (np.conj(self._dil) * phi[None, :]) @ self._phase
            self._cache[key] = hit
        return hit

    def measure(self) -> np.ndarray:
        """Window weights of ``dq dp / (2 pi c_{-1})`` as an ``(n_q, n_p)`` array."""
        w = self.window
        return np.outer(w.wq, w.wp) / (2 * np.pi * self.c_minus1)

    def symbol_on_window(self, f) -> np.ndarray:
        w = self.window
        vals = np.asarray(f(w.q[:, None], w.p[None, :]), dtype=complex)
        vals = np.broadcast_to(vals, (w.n_q, w.n_p))
        if not np.all(np.isfinite(vals)):
            raise ValueError("symbol is not finite on the window")
        return vals

    def matrix_element(self, f, phi1, phi2) -> complex:
        """``<phi1| A_f |phi2> = sum w f(q,p) <phi1|q,p><q,p|phi2> / (2 pi c_{-1})``."""
        o1 = self.overlaps(phi1)
        o2 = self.overlaps(phi2)
        return complex(np.sum(self.measure() * self.symbol_on_window(f) * np.conj(o1) * o2))

    def resolution_defect(self, phis) -> float:
        worst = 0.0
        for phi in phis:
            mass = np.sum(self.measure() * np.abs(self.overlaps(phi)) ** 2)
            worst = max(worst, abs(mass - self.grid.norm(phi) ** 2))
        return float(worst)

    def density(self, phi) -> np.ndarray:
        """``rho_phi(q,p) = |<q,p|phi>|^2 / (2 pi c_{-1})`` on the window nodes."""
        return np.abs(self.overlaps(phi)) ** 2 / (2 * np.pi * self.c_minus1)


def cs_overlap(q, p, phi, psi: FiducialVector) -> complex:
    """``<q,p|phi>`` for a single point by direct grid quadrature."""
    phi = np.asarray(phi)
    if phi.shape != psi.grid.x.shape:
        raise GridMismatchError("test function is not sampled on the fiducial grid")
    return psi.grid.inner(apply_U(q, p, psi, psi.grid.x), phi)


def resolution_defect_affine(psi: FiducialVector, phis, window: AffineWindow = REFERENCE_WINDOW) -> float:
    return AffineQuantizer(psi, window).resolution_defect(phis)


def quantize_affine_matrix_element(f, phi1, phi2, psi: FiducialVector,
                                   window: AffineWindow = REFERENCE_WINDOW) -> complex:
    return AffineQuantizer(psi, window).matrix_element(f, phi1, phi2)


@dataclass(frozen=True)
class PhaseSpaceDensity:
    q: np.ndarray
    p: np.ndarray
    rho: np.ndarray
    weights: np.ndarray = field(repr=False)

    @property
    def mass(self) -> float:
        return float(np.sum(self.weights * self.rho))

    def peak(self):
        i, j = np.unravel_index(np.argmax(self.rho), self.rho.shape)
        return float(self.q[i]), float(self.p[j])

    def to_csv(self, path, stride=(1, 1)):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["q", "p", "rho"])
            for i in range(0, self.q.size, stride[0]):
                for j in range(0, self.p.size, stride[1]):
                    w.writerow([repr(float(self.q[i])), repr(float(self.p[j])),
                                repr(float(self.rho[i, j]))])


def phase_space_density(phi, psi: FiducialVector, window: AffineWindow = REFERENCE_WINDOW,
                        quantizer: AffineQuantizer | None = None) -> PhaseSpaceDensity:
    aq = AffineQuantizer(psi, window) if quantizer is None else quantizer
    w = aq.window
    return PhaseSpaceDensity(w.q.copy(), w.p.copy(), aq.density(phi), np.outer(w.wq, w.wp))


def multiplication_element(grid: HalfLineGrid, phi1, phi2, power) -> complex:
    """``<phi1| x^power |phi2>``."""
    return grid.inner(phi1, grid.x ** power * np.asarray(phi2))


def momentum_element(grid: HalfLineGrid, phi1, phi2) -> complex:
    """``<phi1| -i d/dx |phi2>``."""
    return grid.inner(phi1, -1j * grid.derivative(phi2))


def kinetic_element(grid: HalfLineGrid, phi1, phi2) -> complex:
    """``<phi1| -d^2/dx^2 |phi2>`` with a second-order stencil."""
    return grid.inner(phi1, -grid.derivative(phi2, order=2))


def fit_inverse_square(aq: AffineQuantizer, pairs) -> float:
    """Least-squares coefficient of ``x^{-2}`` in ``A_{p^2} - P^2`` over test pairs."""
    g = aq.grid
    resid, basis = [], []
    for phi1, phi2 in pairs:
        resid.append(aq.matrix_element(lambda q, p: p ** 2, phi1, phi2)
                     - kinetic_element(g, phi1, phi2))
        basis.append(multiplication_element(g, phi1, phi2, -2))
    resid = np.asarray(resid)
    basis = np.asarray(basis)
    return float(np.real(np.vdot(basis, resid) / np.vdot(basis, basis)))


def moment_report(psi: FiducialVector, gammas=(-2, -1, 0, 1)) -> dict:
    k, ok = kinetic_K(psi)
    table = {str(g): psi.c_gamma(g) for g in gammas}
    out = {"c_gamma": table, "K": k, "K_ge_3_4": bool(ok)}
    if psi.is_power_exp:
        out["alpha"], out["lambda"] = psi.alpha, psi.lam
    return out


def write_moment_json(psi: FiducialVector, path, gammas=(-2, -1, 0, 1)):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(moment_report(psi, gammas), fh, indent=2)
