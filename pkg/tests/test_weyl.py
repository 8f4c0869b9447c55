import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose
from scipy.integrate import quad as integrate
from scipy.special import eval_laguerre

from intquant import fock, weyl
from intquant.errors import IntegrabilityError, NodeEvaluationError
from intquant.quadrature import ANGLE_REFERENCE, REFERENCE

DIM = 32
SAFE = 16


def blk(a):
    return a[:SAFE, :SAFE]


def radial_weight():
    return weyl.WeightFunction.custom(
        lambda z: np.exp(-np.abs(z) ** 2) * (1 + 0.5 * np.abs(z) ** 2),
        real_even=True, reflection_real=True, decay=1.0)


def test_weight_validation():
    with pytest.raises(ValueError):
        weyl.WeightFunction.cahill_glauber(1.0)
    with pytest.raises(ValueError):
        weyl.WeightFunction.custom(lambda z: 2 + 0 * z)
    w = weyl.WeightFunction.cahill_glauber(-2)
    assert w.decay == 1.0 and w.real_even and w.reflection_real


def test_mixed_derivative():
    assert weyl.WeightFunction.cahill_glauber(-3).mixed_derivative_at_zero() == pytest.approx(-1.5)
    # e^{-J}(1 + J/2): d_z d_zbar at 0 is -1 + 1/2
    assert radial_weight().mixed_derivative_at_zero() == pytest.approx(-0.5, abs=1e-6)


def test_cg_analytic_special_members():
    assert_allclose(weyl.cg_M_analytic(-1, 6), fock.projector(fock.TruncatedFockSpace(6).basis(0)))
    assert_allclose(weyl.cg_M_analytic(0, 6), 2 * fock.parity(6))
    with pytest.raises(ValueError):
        weyl.cg_M_analytic(1, 6)


@pytest.mark.parametrize("s", [-1.0, -1.5, -2.0, -5.0])
def test_cg_density_for_s_le_minus_one(s):
    assert fock.is_density(weyl.cg_M_analytic(s, 80))


def test_cg_not_positive_between():
    assert fock.min_eigenvalue(weyl.cg_M_analytic(-0.5, 10)) < -0.1


@pytest.mark.parametrize("s", [-1, -2, -3])
def test_build_M_matches_closed_form(s):
    m = weyl.build_M(weyl.WeightFunction.cahill_glauber(s), REFERENCE, DIM)
    assert np.max(np.abs(blk(m - weyl.cg_M_analytic(s, DIM)))) < 1e-6


def test_build_M_rejects_nonintegrable():
    with pytest.raises(IntegrabilityError):
        weyl.build_M(weyl.WeightFunction.cahill_glauber(0.0))


def test_build_M_radial_weight_against_1d_oracle():
    w = radial_weight()
    m = weyl.build_M(w, REFERENCE, DIM)
    assert np.max(np.abs(m - np.diag(np.diag(m)))) < 1e-12
    for n in (0, 1, 5, 12):
        # <e_n|M|e_n> = int_0^inf w(J) e^{-J/2} L_n(J) dJ
        ref, _ = integrate(lambda J: np.exp(-1.5 * J) * (1 + 0.5 * J) * eval_laguerre(n, J),
                           0, np.inf, limit=200)
        assert m[n, n].real == pytest.approx(ref, abs=1e-10)


@pytest.mark.parametrize("s", [-1, -2])
def test_resolution_of_identity(s):
    assert weyl.resolution_defect(weyl.WHQuantizer.cahill_glauber(s, DIM)) < 1e-6


@pytest.mark.parametrize("s", [-1.0, -2.0, 0.0])
def test_cg_operator_table(s):
    q = weyl.WHQuantizer.cahill_glauber(s, DIM)
    qo, po = fock.quadrature_pair(DIM)
    q2, p2 = fock.squared_quadratures(DIM)
    eye = np.eye(DIM)
    assert_allclose(blk(q.quantize(lambda z: np.sqrt(2) * z.real)), blk(qo), atol=1e-6)
    assert_allclose(blk(q.quantize(lambda z: np.sqrt(2) * z.imag)), blk(po), atol=1e-6)
    assert_allclose(blk(q.quantize(lambda z: 2 * z.real ** 2)), blk(q2 - s / 2 * eye), atol=1e-6)
    assert_allclose(blk(q.quantize(lambda z: 2 * z.imag ** 2)), blk(p2 - s / 2 * eye), atol=1e-6)
    assert_allclose(blk(q.quantize(lambda z: np.abs(z) ** 2)),
                    blk(fock.number(DIM) + (1 - s) / 2 * eye), atol=1e-6)


def test_quadrature_seed_matches_analytic_quantizer():
    a = weyl.WHQuantizer.cahill_glauber(-2, DIM)
    b = weyl.WHQuantizer.cahill_glauber(-2, DIM, m_source="quadrature")
    f = lambda z: np.cos(z.real) * np.exp(-np.abs(z - 0.3) ** 2)  # noqa: E731
    assert_allclose(blk(a.quantize(f)), blk(b.quantize(f)), atol=1e-10)


def test_parity_seed_displaced():
    q = weyl.WHQuantizer.cahill_glauber(0.0, DIM)
    assert q.is_parity_seed
    z = 0.4 - 0.2j
    d = fock.displacement(64, z)
    full = (d @ (2 * fock.parity(64)) @ d.conj().T)[:SAFE, :SAFE]
    assert_allclose(blk(q.displaced_M(z)), full, atol=1e-12)


def test_node_evaluation_error():
    q = weyl.WHQuantizer.cahill_glauber(-1, 8)
    with pytest.raises(NodeEvaluationError):
        q.quantize(lambda z: np.where(np.abs(z) > 3, np.inf, 1.0))


@settings(max_examples=10)
@given(st.floats(-1, 1), st.floats(-1, 1))
def test_translation_covariance(x, y):
    # displaced safe-block rows must stay clear of the truncation edge
    q = weyl.WHQuantizer(fock.TruncatedFockSpace(48, safe_margin=32),
                         weyl.WeightFunction.cahill_glauber(-1))
    f = lambda z: z ** 2 * np.conj(z) + 0.3 * z  # noqa: E731
    assert weyl.covariance_defect(q, f, complex(x, y)) < 1e-6


def test_half_quantum_cahill_glauber():
    for s in (-1, -2, 0.5):
        e0, em = weyl.ho_shifts(weyl.WeightFunction.cahill_glauber(s))
        assert e0 - em == 0.5
        assert e0 == pytest.approx((1 - s) / 2)


def test_half_quantum_measured_custom():
    w = radial_weight()
    e0, _ = weyl.ho_shifts(w)
    q = weyl.WHQuantizer(DIM, w, m_source="quadrature")
    assert weyl.measured_ground_shift(q) == pytest.approx(e0, abs=1e-4)


def test_symmetry_laws_hold_and_fail():
    f = lambda z: z ** 2 * np.conj(z) + 0.3 * z  # noqa: E731
    good = weyl.WHQuantizer(DIM, radial_weight(), m_source="quadrature")
    assert weyl.parity_law_defect(good, f) < 1e-6
    assert weyl.reflection_law_defect(good, f) < 1e-6
    odd = weyl.WeightFunction.custom(lambda z: np.exp(-np.abs(z) ** 2 / 2) * (1 + 0.3 * z.real),
                                     decay=0.5)
    bad = weyl.WHQuantizer(DIM, odd, m_source="quadrature")
    assert weyl.parity_law_defect(bad, f) > 1e-3
    assert weyl.reflection_law_defect(bad, f) > 1e-3


def test_angle_operator_analytic_structure():
    a = weyl.angle_operator_analytic(DIM)
    assert fock.hermiticity_defect(a) < 1e-12
    assert np.trace(a).real / DIM == pytest.approx(np.pi)
    assert a[0, 1] == pytest.approx(1j * np.sqrt(np.pi) / 2 / 1)


def test_angle_operator_numeric_matches():
    a = weyl.angle_operator_numeric(16, ANGLE_REFERENCE.with_(n_angular=128))
    assert np.max(np.abs((a - weyl.angle_operator_analytic(16))[:8, :8])) < 1e-4


def test_angle_spectrum_range():
    eig = np.linalg.eigvalsh(weyl.angle_operator_analytic(64))
    assert eig[0] > -0.15 and eig[-1] < 2 * np.pi + 0.15


@pytest.mark.parametrize("nu", [0.0, 0.37])
def test_angular_covariance(nu):
    q = weyl.WHQuantizer.cahill_glauber(-1, 16, ANGLE_REFERENCE.with_(n_angular=128))
    assert weyl.angular_covariance_defect(q, np.pi / 3, nu, quad=q.quad) < 1e-8


def test_thermal_map():
    assert weyl.thermal_s(1.0, 0.0) == -1.0
    assert weyl.thermal_s(1.0, 1e6) < -1e5
    with pytest.raises(ValueError):
        weyl.thermal_s(0.0, 1.0)
    with pytest.raises(ValueError):
        weyl.thermal_s(1.0, -1.0)


@pytest.mark.parametrize("omega,T", [(0.5, 0.3), (1.0, 1.0), (2.0, 5.0), (3.0, 0.0)])
def test_boltzmann_equals_cg(omega, T):
    s = weyl.thermal_s(omega, T)
    assert_allclose(weyl.boltzmann_rho(omega, T, 40), weyl.cg_M_analytic(s, 40), atol=1e-12)
    assert -(s + 1) / 2 == pytest.approx(weyl.bose_occupation(omega, T), abs=1e-12)


def test_boltzmann_mean_occupation_with_tail():
    omega, T, dim = 1.0, 2.0, 40
    rho = weyl.boltzmann_rho(omega, T, dim)
    mean = np.dot(np.arange(dim), np.real(np.diag(rho)))
    tail = weyl.boltzmann_tail(omega, T, dim)
    assert abs(mean - weyl.bose_occupation(omega, T)) < 10 * dim * tail


def test_trace_duality_parity_seed():
    f = lambda z: np.exp(-np.abs(z - 0.5) ** 2)  # noqa: E731
    assert weyl.trace_duality_defect(48, f) < 1e-8
    assert weyl.trace_duality_defect(48, f, s=-1.0) > 1e-2


def test_with_M_marks_explicit():
    q = weyl.WHQuantizer.cahill_glauber(-1, 8).with_M(weyl.boltzmann_rho(1.0, 1.0, 8))
    assert q.m_source == "explicit" and not q.is_parity_seed
    assert not q.M.flags.writeable


def test_angular_covariance_needs_diagonal_seed():
    w = weyl.WeightFunction.custom(lambda z: np.exp(-np.abs(z) ** 2) * (1 + 0.2 * z.real ** 2),
                                   decay=1.0)
    q = weyl.WHQuantizer(12, w, m_source="quadrature")
    with pytest.raises(ValueError):
        weyl.angular_covariance_defect(q, 0.5)
