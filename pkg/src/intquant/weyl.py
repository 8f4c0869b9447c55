"""Weyl-Heisenberg covariant integral quantization on a truncated Fock space.

A weight ``w(z)`` with ``w(0) = 1`` fixes the seed operator
``M = int D(z) w(z) d^2z/pi``; its displaced copies ``M(z) = D(z) M D(z)^dag``
resolve the identity and quantize ``f`` as ``A_f = int f(z) M(z) d^2z/pi``.
Every integral is a node sum over a :class:`PhaseSpaceQuadrature`.
"""
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import gammaln

from . import fock, kernels
from .errors import IntegrabilityError, NodeEvaluationError
from .fock import TruncatedFockSpace, _space
from .quadrature import ANGLE_REFERENCE, REFERENCE, PhaseSpaceQuadrature

FD_STEP = 1e-4


@dataclass(frozen=True)
class WeightFunction:
    """Quantization weight.

    Use :meth:`cahill_glauber` or :meth:`custom`. ``decay`` is the Gaussian
    rate ``a`` in ``|w(z)| ~ e^{-a|z|^2}`` times a polynomial, when known;
    it lets :func:`build_M` match its radial rule to the integrand.
    """

    kind: str
    s: complex = 0.0
    fn: Callable | None = field(default=None, repr=False, compare=False)
    real_even: bool = False
    reflection_real: bool = False
    decay: float | None = None
    name: str = ""

    def __post_init__(self):
        if self.kind == "cahill_glauber":
            if not np.real(self.s) < 1:
                raise ValueError(f"Cahill-Glauber weight needs Re s < 1, got s = {self.s}")
        elif self.kind != "custom" or self.fn is None:
            raise ValueError("custom weights need an evaluator")
        w0 = complex(self(np.array([0j]))[0])
        if abs(w0 - 1) > 1e-12:
            raise ValueError(f"weight must equal 1 at the origin, got {w0}")

    @classmethod
    def cahill_glauber(cls, s) -> "WeightFunction":
        s = complex(s)
        real = s.imag == 0
        return cls(
            kind="cahill_glauber",
            s=s.real if real else s,
            real_even=real,
            reflection_real=real,
            decay=-s.real / 2,
            name=f"cahill_glauber(s={s.real if real else s})",
        )

    @classmethod
    def custom(cls, fn, *, real_even=False, reflection_real=False, decay=None, name="custom"):
        return cls(kind="custom", fn=fn, real_even=real_even,
                   reflection_real=reflection_real, decay=decay, name=name)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self.kind == "cahill_glauber":
            return np.exp(self.s * np.abs(z) ** 2 / 2)
        return np.broadcast_to(np.asarray(self.fn(z), dtype=complex), z.shape)

    def mixed_derivative_at_zero(self) -> complex:
        """``d_z d_zbar w`` at the origin (a quarter of the Laplacian)."""
        if self.kind == "cahill_glauber":
            return self.s / 2
        h = FD_STEP
        pts = np.array([h, -h, 1j * h, -1j * h, 0.0])
        v = self(pts)
        return complex((v[0] + v[1] + v[2] + v[3] - 4 * v[4]) / (4 * h * h))


def _real_if_close(x, tol=1e-12):
    x = complex(x)
    return x.real if abs(x.imag) <= tol else x


def cg_M_analytic(s, space=64) -> np.ndarray:
    """Diagonal seed ``2/(1-s) ((s+1)/(s-1))^n`` of the Cahill-Glauber weight.

    ``s = -1`` gives the vacuum projector and ``s = 0`` gives twice the parity.
    """
    s = complex(s)
    if s == 1:
        raise ValueError("s = 1 (normal ordering) has no bounded seed operator")
    if not s.real < 1:
        raise ValueError(f"need Re s < 1, got s = {s}")
    n = np.arange(_space(space).dim)
    ratio = (s + 1) / (s - 1)
    diag = 2 / (1 - s) * ratio ** n
    return np.diag(diag.astype(complex))


def build_M(weight: WeightFunction, quad: PhaseSpaceQuadrature | None = None, space=64,
            match_decay=True) -> np.ndarray:
    """Seed operator by quadrature: ``M = sum_k w_k w(z_k) D(z_k)``.

    With ``match_decay`` and a known ``weight.decay``, the Laguerre radial
    rule is rescaled to ``decay + 1/2``, the Gaussian rate of
    ``w(z) <e_m|D(z)|e_n>``; the integrand is then polynomial against the
    rule's weight.
    """
    if weight.kind == "cahill_glauber" and not np.real(weight.s) < 0:
        raise IntegrabilityError(
            f"Cahill-Glauber weight with Re s = {np.real(weight.s)} >= 0 is not integrable "
            "against D(z); use cg_M_analytic"
        )
    quad = REFERENCE if quad is None else quad
    if match_decay and weight.decay is not None and quad.radial == "laguerre":
        quad = quad.with_(scale=weight.decay + 0.5)
    sp = _space(space)
    c = quad.weights * weight(quad.nodes)
    return kernels.weighted_displacement_sum(quad.nodes, c, sp.dim)


@dataclass(frozen=True)
class WHQuantizer:
    """Truncated space, weight, quadrature and the cached seed operator ``M``.

    ``m_source='analytic'`` (default) uses the closed form for
    Cahill-Glauber weights; custom weights always go through quadrature.
    """

    space: TruncatedFockSpace
    weight: WeightFunction
    quad: PhaseSpaceQuadrature = REFERENCE
    m_source: str = "analytic"
    M: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.space, TruncatedFockSpace):
            object.__setattr__(self, "space", TruncatedFockSpace(int(self.space)))
        if self.weight.kind == "cahill_glauber" and self.m_source == "analytic":
            m = cg_M_analytic(self.weight.s, self.space)
        elif self.m_source in ("analytic", "quadrature"):
            m = build_M(self.weight, self.quad, self.space)
        else:
            raise ValueError(f"unknown m_source {self.m_source!r}")
        m.setflags(write=False)
        object.__setattr__(self, "M", m)

    @classmethod
    def cahill_glauber(cls, s, dim=64, quad=REFERENCE, m_source="analytic"):
        return cls(TruncatedFockSpace(dim), WeightFunction.cahill_glauber(s), quad, m_source)

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def is_parity_seed(self) -> bool:
        """Seed is ``2P`` (Wigner-Weyl); displaced copies are ``2 D(2z) P``."""
        return (self.weight.kind == "cahill_glauber" and self.weight.s == 0
                and self.m_source == "analytic")

    @property
    def is_diagonal(self) -> bool:
        return bool(np.all(self.M == np.diag(np.diag(self.M))))

    def displaced_M(self, z) -> np.ndarray:
        if self.is_parity_seed:
            return 2 * fock.displacement(self.space, 2 * complex(z)) @ fock.parity(self.space)
        d = fock.displacement(self.space, z)
        return d @ self.M @ d.conj().T

    def quantize(self, f, quad=None) -> np.ndarray:
        return quantize(self, f, quad)

    def with_M(self, m) -> "WHQuantizer":
        """Copy with an explicit seed operator (e.g. a thermal state)."""
        q = WHQuantizer(self.space, self.weight, self.quad, self.m_source)
        m = np.array(m, dtype=complex)
        m.setflags(write=False)
        object.__setattr__(q, "M", m)
        object.__setattr__(q, "m_source", "explicit")
        return q


def displaced_M(quantizer: WHQuantizer, z) -> np.ndarray:
    return quantizer.displaced_M(z)


def evaluate_on_nodes(f, z) -> np.ndarray:
    """``f`` on an array of nodes, broadcast and checked for finiteness."""
    vals = np.broadcast_to(np.asarray(f(z), dtype=complex), np.shape(z))
    bad = ~np.isfinite(vals)
    if bad.any():
        k = int(np.flatnonzero(bad)[0])
        raise NodeEvaluationError(
            f"function is not finite at {int(bad.sum())} node(s), first at z = {z.flat[k]}"
        )
    return vals


def quantize(quantizer: WHQuantizer, f, quad=None) -> np.ndarray:
    """``A_f = sum_k w_k f(z_k) M(z_k)``; ``f`` takes an array of complex ``z``."""
    quad = quantizer.quad if quad is None else quad
    vals = evaluate_on_nodes(f, quad.nodes)
    c = quad.weights * vals
    if quantizer.is_parity_seed:
        # D(z) P D(z)^dag = D(2z) P holds exactly, so the non-decaying
        # parity seed is never truncated
        s = kernels.weighted_displacement_sum(2 * quad.nodes, 2 * c, quantizer.dim)
        return s @ fock.parity(quantizer.space)
    return kernels.weighted_conjugation_sum(quad.nodes, c, quantizer.M)


def resolution_defect(quantizer: WHQuantizer, quad=None) -> float:
    """Safe-block max-norm of ``sum_k w_k M(z_k) - I``."""
    a = quantize(quantizer, lambda z: 1.0, quad)
    n = quantizer.space.safe
    return fock.max_norm(a[:n, :n] - np.eye(n))


def covariance_defect(quantizer: WHQuantizer, f, z0, quad=None) -> float:
    """Safe-block max-norm of ``A_{f(. - z0)} - D(z0) A_f D(z0)^dag``."""
    z0 = complex(z0)
    if z0 == 0:
        return 0.0
    shifted = quantize(quantizer, lambda z: f(z - z0), quad)
    d = fock.displacement(quantizer.space, z0)
    moved = d @ quantize(quantizer, f, quad) @ d.conj().T
    return fock.max_norm(quantizer.space.block(shifted - moved))


def ho_shifts(weight: WeightFunction):
    """Ground energy ``E0`` of ``A_{|z|^2}`` and potential minimum ``Em``.

    ``E0 = 1/2 - d_z d_zbar w(0)``, ``Em = -d_z d_zbar w(0)``; the difference
    is exactly 1/2 by construction.
    """
    d = weight.mixed_derivative_at_zero()
    em = _real_if_close(-d)
    return em + 0.5, em


def angle_function(gamma, start=0.0):
    """Sawtooth angle with values in ``[0, 2pi)`` and its jump at ``start``."""
    return np.mod(np.asarray(gamma) - start, 2 * np.pi)


def action_angle(fn):
    """Adapt ``fn(J, gamma)`` to a function of complex ``z``.

    ``gamma`` is taken in ``[0, 2pi)``.
    """
    def f(z):
        return fn(np.abs(z) ** 2, np.mod(np.angle(z), 2 * np.pi))
    return f


def angle_operator_analytic(space=64) -> np.ndarray:
    """Coherent-state quantized angle: ``pi`` on the diagonal and
    ``i Gamma((n+n')/2 + 1) / (sqrt(n! n'!) (n' - n))`` off it."""
    dim = _space(space).dim
    n = np.arange(dim)
    nn, mm = np.meshgrid(n, n, indexing="ij")
    logmag = gammaln((nn + mm) / 2 + 1) - 0.5 * (gammaln(nn + 1) + gammaln(mm + 1))
    diff = (mm - nn).astype(float)
    np.fill_diagonal(diff, 1.0)
    out = 1j * np.exp(logmag) / diff
    np.fill_diagonal(out, np.pi)
    return out


def angle_operator_numeric(space=64, quad: PhaseSpaceQuadrature = ANGLE_REFERENCE) -> np.ndarray:
    """Quadrature of ``int dJ dgamma/2pi gamma |J,gamma><J,gamma|``.

    The sawtooth jumps at ``quad.offset``; pair it with an angular rule that
    starts there (``angular='legendre'``) for spectral accuracy.
    """
    q = WHQuantizer.cahill_glauber(-1, _space(space).dim, quad)
    return quantize(q, lambda z: angle_function(np.angle(z), quad.offset))


def angular_rotation(space, theta, nu_phase=0.0) -> np.ndarray:
    n = np.arange(_space(space).dim)
    return np.diag(np.exp(1j * (n + nu_phase) * theta))


def angular_covariance_defect(quantizer: WHQuantizer, theta, nu_phase=0.0, fn=None,
                              quad: PhaseSpaceQuadrature = ANGLE_REFERENCE) -> float:
    """Safe-block norm of ``U(theta) A_f U(-theta) - A_{f(J, gamma - theta)}``.

    ``fn(J, gamma)`` is 2pi-periodic in gamma; default is the sawtooth angle,
    whose jump the quadrature offset follows. Requires a diagonal seed.
    """
    if not quantizer.is_diagonal:
        raise ValueError("angular covariance holds only for a diagonal seed operator")
    if theta == 0:
        return 0.0
    if fn is None:
        fn = lambda J, g: angle_function(g)  # noqa: E731
    base = quad.with_(offset=0.0)
    moved = quad.with_(offset=float(theta))
    a = quantize(quantizer, lambda z: fn(np.abs(z) ** 2, angle_function(np.angle(z))), base)
    a_shift = quantize(
        quantizer, lambda z: fn(np.abs(z) ** 2, angle_function(np.angle(z), theta)), moved
    )
    u = angular_rotation(quantizer.space, theta, nu_phase)
    return fock.max_norm(quantizer.space.block(u @ a @ u.conj().T - a_shift))


def thermal_s(omega, T) -> float:
    """``s = -coth(omega / 2T)`` (hbar = k_B = 1); ``T = 0`` gives -1."""
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega}")
    if not T >= 0:
        raise ValueError(f"temperature must be non-negative, got {T}")
    if T == 0:
        return -1.0
    return -1.0 / np.tanh(omega / (2 * T))


def boltzmann_rho(omega, T, space=64) -> np.ndarray:
    """Gibbs state ``(1 - e^{-omega/T}) sum_n e^{-n omega/T} |e_n><e_n|``."""
    thermal_s(omega, T)
    dim = _space(space).dim
    diag = np.zeros(dim)
    if T == 0:
        diag[0] = 1.0
    else:
        beta = omega / T
        diag = -np.expm1(-beta) * np.exp(-beta * np.arange(dim))
    return np.diag(diag).astype(complex)


def boltzmann_tail(omega, T, space=64) -> float:
    """Trace missing from the truncated Gibbs state: ``e^{-dim omega/T}``."""
    if T == 0:
        return 0.0
    return float(np.exp(-_space(space).dim * omega / T))


def bose_occupation(omega, T) -> float:
    return 0.0 if T == 0 else float(1.0 / np.expm1(omega / T))


def trace_duality_defect(space, f, quad: PhaseSpaceQuadrature = REFERENCE, s=0.0) -> float:
    """``|tr(A_f^dag A_f) - sum_k w_k |f(z_k)|^2|`` with the analytic seed.

    The identity holds for unimodular weights (``s = 0``); other ``s`` give
    a finite discrepancy. The seed is never built by quadrature here, since
    ``w = 1`` is not integrable against ``D(z)``.
    """
    sp = _space(space)
    q = WHQuantizer(sp, WeightFunction.cahill_glauber(s), quad)
    a = quantize(q, f)
    vals = evaluate_on_nodes(f, quad.nodes)
    lhs = np.trace(a.conj().T @ a)
    rhs = np.sum(quad.weights * np.abs(vals) ** 2)
    return float(abs(lhs - rhs))


def parity_law_defect(quantizer: WHQuantizer, f, quad=None) -> float:
    """Safe-block norm of ``A_{f(-z)} - P A_f P``; vanishes for even weights."""
    p = fock.parity(quantizer.space)
    a = quantize(quantizer, f, quad)
    a_ref = quantize(quantizer, lambda z: f(-z), quad)
    return fock.max_norm(quantizer.space.block(a_ref - p @ a @ p))


def reflection_law_defect(quantizer: WHQuantizer, f, quad=None) -> float:
    """Safe-block norm of ``A_{conj f} - A_f^dag``; vanishes when ``conj w(-z) = w(z)``."""
    a = quantize(quantizer, f, quad)
    a_conj = quantize(quantizer, lambda z: np.conj(f(z)), quad)
    return fock.max_norm(quantizer.space.block(a_conj - a.conj().T))


def measured_ground_shift(quantizer: WHQuantizer, quad=None) -> float:
    """``<e_0|A_{|z|^2}|e_0>`` by quadrature, to compare with ``ho_shifts``."""
    a = quantize(quantizer, lambda z: np.abs(z) ** 2, quad)
    return float(np.real(a[0, 0]))
