"""Acceptance suite: one test and one summary line per criterion."""
import time

import numpy as np

from intquant import affine, berezin, fock, invariants, sphere, weyl
from intquant.quadrature import ANGLE_REFERENCE, PhaseSpaceQuadrature

DIM = 32
QUAD = PhaseSpaceQuadrature(80, 64)


def safe_norm(a, dim=DIM):
    n = fock.TruncatedFockSpace(dim).safe
    return fock.max_norm(np.asarray(a)[:n, :n])


def test_01_cahill_glauber_oracle(acceptance):
    worst = max(safe_norm(weyl.build_M(weyl.WeightFunction.cahill_glauber(s), QUAD, DIM)
                          - weyl.cg_M_analytic(s, DIM)) for s in (-1, -2, -3))
    assert acceptance(1, "quadrature M vs closed-form diagonal", f"{worst:.2e}", 1e-6,
                      worst < 1e-6)


def test_02_povm_positivity_boundary(acceptance):
    pos = min(fock.min_eigenvalue(weyl.cg_M_analytic(s, DIM)) for s in (-1, -1.5, -2, -4))
    neg = max(fock.min_eigenvalue(weyl.cg_M_analytic(s, DIM)) for s in (-0.5, -0.25))
    ok = pos >= -1e-10 and neg < -1e-3
    assert acceptance(2, "min eig (s<=-1) / max of min eig (s>-1)", f"{pos:.2e} / {neg:.3f}",
                      "-1e-10 / -1e-3", ok)


def test_03_resolution_of_identity(acceptance):
    worst = max(weyl.resolution_defect(weyl.WHQuantizer.cahill_glauber(s, DIM, QUAD))
                for s in (-1, -2))
    assert acceptance(3, "Weyl-Heisenberg resolution defect", f"{worst:.2e}", 1e-6, worst < 1e-6)


def test_04_canonical_pair(acceptance):
    weights = invariants.symmetric_weights()
    assert len(weights) == 5 and all(w.real_even for w in weights)
    q_op, p_op = fock.quadrature_pair(DIM)
    worst = 0.0
    for w in weights:
        q = weyl.WHQuantizer(DIM, w, QUAD, "analytic" if w.kind == "cahill_glauber" else "quadrature")
        worst = max(worst, safe_norm(q.quantize(lambda z: np.sqrt(2) * z.real) - q_op),
                    safe_norm(q.quantize(lambda z: np.sqrt(2) * z.imag) - p_op))
    assert acceptance(4, "A_q - Q, A_p - P over 5 weights", f"{worst:.2e}", 1e-6, worst < 1e-6)


def test_05_cg_operator_table(acceptance):
    q2, p2 = fock.squared_quadratures(DIM)
    num = fock.number(DIM)
    eye = np.eye(DIM)
    worst = 0.0
    for s in (-1, -2):
        q = weyl.WHQuantizer.cahill_glauber(s, DIM, QUAD)
        worst = max(worst,
                    safe_norm(q.quantize(lambda z: 2 * z.real ** 2) - (q2 - s / 2 * eye)),
                    safe_norm(q.quantize(lambda z: 2 * z.imag ** 2) - (p2 - s / 2 * eye)),
                    safe_norm(q.quantize(lambda z: np.abs(z) ** 2) - (num + (1 - s) / 2 * eye)))
    assert acceptance(5, "q^2, p^2, |z|^2 table", f"{worst:.2e}", 1e-6, worst < 1e-6)


def test_06_half_quantum(acceptance):
    exact, worst = True, 0.0
    for w in invariants.symmetric_weights():
        e0, em = weyl.ho_shifts(w)
        exact &= (e0 - em) == 0.5
        q = weyl.WHQuantizer(DIM, w, QUAD, "analytic" if w.kind == "cahill_glauber" else "quadrature")
        worst = max(worst, abs(weyl.measured_ground_shift(q) - e0))
    assert acceptance(6, "E0 - Em exact; measured ground shift error", f"{exact}; {worst:.2e}",
                      1e-4, exact and worst < 1e-4)


def test_07_angle_operator(acceptance):
    t0 = time.perf_counter()
    a = weyl.angle_operator_analytic(DIM)
    defect = safe_norm(weyl.angle_operator_numeric(DIM, ANGLE_REFERENCE) - a)
    herm = fock.hermiticity_defect(a)
    eig = np.linalg.eigvalsh(weyl.angle_operator_analytic(64))
    in_range = eig[0] >= -0.15 and eig[-1] <= 2 * np.pi + 0.15
    elapsed = time.perf_counter() - t0
    ok = defect < 1e-4 and herm < 1e-12 and in_range and elapsed < 300
    assert acceptance(7, "defect / hermiticity / dim-64 spectrum / seconds",
                      f"{defect:.2e} / {herm:.1e} / [{eig[0]:.3f}, {eig[-1]:.3f}] / {elapsed:.1f}",
                      "1e-4 / 1e-12 / [-0.15, 2pi+0.15] / 300", ok)


def test_08_thermal_povm(acceptance):
    pairs = [(o, t) for o in (0.5, 1.0, 2.0, 4.0, 7.0) for t in (0.3, 1.5)]
    assert len(pairs) == 10
    worst = max(fock.max_norm(weyl.boltzmann_rho(o, t, DIM)
                              - weyl.cg_M_analytic(weyl.thermal_s(o, t), DIM)) for o, t in pairs)
    ground = fock.projector(fock.TruncatedFockSpace(DIM).basis(0))
    zero_ok = np.array_equal(weyl.boltzmann_rho(1.0, 0.0, DIM), ground)
    near_zero = fock.max_norm(weyl.boltzmann_rho(1.0, 1e-3, DIM) - ground)
    ok = worst < 1e-12 and zero_ok and near_zero < 1e-12
    assert acceptance(8, "rho_T vs M_s(T); T->0 projector", f"{worst:.2e}; {zero_ok}",
                      1e-12, ok)


def test_09_berezin_consistency(acceptance):
    q = weyl.WHQuantizer.cahill_glauber(-1, DIM, QUAD)
    fam = berezin.RhoFamily.from_quantizer(q)
    worst = 0.0
    for f in (lambda z: np.ones_like(z), lambda z: np.sqrt(2) * z.real,
              lambda z: np.sqrt(2) * z.imag, lambda z: np.abs(z) ** 2):
        a = q.quantize(f)
        field = berezin.berezin_transform(f, q, window=berezin.Window.disk(2.0), grid=(11, 11))
        lower = np.array([berezin.lower_symbol(a, fam, z) for z in field.points[field.mask]])
        worst = max(worst, float(np.max(np.abs(lower - field.values[field.mask]))))
    field = berezin.berezin_transform(lambda z: np.abs(z) ** 2, q, grid=(11, 11))
    offset = float(np.max(np.abs(field.values[field.mask] - np.abs(field.points[field.mask]) ** 2
                                 - 1)))
    ok = worst < 1e-6 and offset < 1e-5
    assert acceptance(9, "lower symbol vs transform; |z|^2 offset - 1",
                      f"{worst:.2e}; {offset:.2e}", "1e-6; 1e-5", ok)


def test_10_affine_moments(acceptance):
    worst = 0.0
    for alpha, lam in ((2.0, 1.0), (3.0, 0.5)):
        grid = affine.reference_setup(affine.power_exp_scale(alpha, lam))[0]
        psi = affine.FiducialVector.power_exp(alpha, lam, grid)
        worst = max(worst, *(abs(psi.c_gamma(g) - affine.power_exp_moment(alpha, lam, g))
                             for g in (-2, -1, 0, 1)))
    assert acceptance(10, "c_gamma quadrature vs closed form, both fiducials", f"{worst:.2e}",
                      1e-8, worst < 1e-8)


def test_11_affine_operator_identities(acceptance):
    t0 = time.perf_counter()
    psi = affine.FiducialVector.power_exp(2.0, 1.0)
    probes = affine.probe_states(psi)
    pairs = [(probes[i], probes[j]) for i in range(5) for j in range(i, 5)][:5]
    aq = affine.AffineQuantizer(psi, affine.OPERATOR_WINDOW)
    g = psi.grid
    c = psi.c_minus1
    beta_err = max(abs(aq.matrix_element(lambda q, p, b=b: q ** b + 0 * p, u, v)
                       - psi.c_gamma(b - 1) / c * affine.multiplication_element(g, u, v, b))
                   for b in (1.0, 2.0) for u, v in pairs)
    p_err = max(abs(aq.matrix_element(lambda q, p: p + 0 * q, u, v)
                    - affine.momentum_element(g, u, v)) for u, v in pairs)
    k = affine.kinetic_K(psi)[0]
    k_rel = abs(affine.fit_inverse_square(aq, pairs) / k - 1)
    elapsed = time.perf_counter() - t0
    ok = beta_err < 1e-3 and p_err < 1e-3 and k_rel < 0.02 and elapsed < 600
    assert acceptance(11, "q^beta / p / K relative / seconds",
                      f"{beta_err:.2e} / {p_err:.2e} / {k_rel:.2e} / {elapsed:.1f}",
                      "1e-3 / 1e-3 / 0.02 / 600", ok)


def test_12_affine_resolution(acceptance):
    psi = affine.FiducialVector.power_exp(2.0, 1.0)
    d = affine.resolution_defect_affine(psi, affine.probe_states(psi)[:3], affine.REFERENCE_WINDOW)
    assert acceptance(12, "weak resolution defect, reference window", f"{d:.2e}", 1e-3, d < 1e-3)


def test_13_sphere_complexification(acceptance):
    rng = np.random.default_rng(2024)
    worst = max(abs(sphere.complexify(sphere.SpherePhasePoint.random(rng)).square - 1)
                for _ in range(1000))
    real_ok = True
    for _ in range(20):
        x = rng.normal(size=3)
        x /= np.linalg.norm(x)
        real_ok &= np.array_equal(sphere.complexify(sphere.SpherePhasePoint(x, np.zeros(3))).a,
                                  x.astype(complex))
    ok = worst < 1e-10 and real_ok
    assert acceptance(13, "max |a.a - 1|; p = 0 gives a = x", f"{worst:.2e}; {real_ok}",
                      1e-10, ok)


def test_14_symmetry_laws(acceptance):
    f = lambda z: z ** 2 * np.conj(z) + 0.3 * z  # noqa: E731
    sym = 0.0
    for w in invariants.symmetric_weights():
        q = weyl.WHQuantizer(DIM, w, QUAD, "analytic" if w.kind == "cahill_glauber" else "quadrature")
        sym = max(sym, weyl.parity_law_defect(q, f), weyl.reflection_law_defect(q, f))
    odd = weyl.WHQuantizer(DIM, invariants.asymmetric_weight(), QUAD, "quadrature")
    even_only = weyl.WHQuantizer(DIM, invariants.even_nonreflection_weight(), QUAD, "quadrature")
    parity_violation = weyl.parity_law_defect(odd, f)
    reflection_violation = weyl.reflection_law_defect(even_only, f)
    ok = sym < 1e-6 and parity_violation > 1e-3 and reflection_violation > 1e-3
    assert acceptance(14, "symmetric defect / parity control / reflection control",
                      f"{sym:.2e} / {parity_violation:.3f} / {reflection_violation:.3f}",
                      "1e-6 / >1e-3 / >1e-3", ok)
