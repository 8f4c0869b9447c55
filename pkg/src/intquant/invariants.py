"""Executable invariant suite behind ``intquant verify``.

Each check returns a measured value and a bound. Upper-bound checks pass
when ``value <= bound``; negative controls (``lower=True``) pass when
``value > bound``. Fock-space checks are skipped, not failed, when the safe
block is too small to carry them.
"""
from dataclasses import asdict, dataclass
import time

import numpy as np

from . import affine, berezin, fock, sphere, weyl
from .quadrature import ANGLE_REFERENCE, REFERENCE

MIN_SAFE = 2


@dataclass
class CheckResult:
    name: str
    status: str
    value: float | None
    bound: float | None
    seconds: float
    detail: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def _custom_weights():
    """Real-even, reflection-real Gaussian-times-polynomial weights."""
    W = weyl.WeightFunction.custom
    return [
        W(lambda z: np.exp(-np.abs(z) ** 2) * (1 + 0.5 * np.abs(z) ** 2),
          real_even=True, reflection_real=True, decay=1.0, name="gauss1_poly_J"),
        W(lambda z: np.exp(-np.abs(z) ** 2 / 2) * (1 + 0.2 * np.real(z ** 2 + np.conj(z) ** 2)),
          real_even=True, reflection_real=True, decay=0.5, name="gauss_half_quad"),
        W(lambda z: np.exp(-1.5 * np.abs(z) ** 2) * (1 + np.abs(z) ** 4),
          real_even=True, reflection_real=True, decay=1.5, name="gauss_3half_J2"),
    ]


def asymmetric_weight():
    """Neither even nor reflection-real: the negative control."""
    return weyl.WeightFunction.custom(
        lambda z: np.exp(-np.abs(z) ** 2 / 2) * (1 + 0.3 * np.real(z)), decay=0.5,
        name="odd_tilt",
    )


def even_nonreflection_weight():
    """Even, but ``conj w(-z) != w(z)``."""
    return weyl.WeightFunction.custom(
        lambda z: np.exp(-np.abs(z) ** 2 / 2) * (1 + 0.3j * np.real(z ** 2 + np.conj(z) ** 2)),
        real_even=True, decay=0.5, name="even_imag_quad",
    )


def symmetric_weights():
    return [weyl.WeightFunction.cahill_glauber(-1), weyl.WeightFunction.cahill_glauber(-2),
            *_custom_weights()]


def _quantizer(dim, w):
    src = "analytic" if w.kind == "cahill_glauber" else "quadrature"
    return weyl.WHQuantizer(dim, w, REFERENCE, src)


def _test_symbol(z):
    return z ** 2 * np.conj(z) + 0.3 * z


def _wh_checks(dim):
    sp = fock.TruncatedFockSpace(dim)
    n = sp.safe
    q_op, p_op = fock.quadrature_pair(sp)
    q2, p2 = fock.squared_quadratures(sp)
    num = fock.number(sp)
    eye = np.eye(dim)

    def blk(a):
        return fock.max_norm(a[:n, :n])

    def cg_oracle():
        return max(blk(weyl.build_M(weyl.WeightFunction.cahill_glauber(s), REFERENCE, sp)
                       - weyl.cg_M_analytic(s, sp)) for s in (-1, -2, -3))

    def resolution():
        return max(weyl.resolution_defect(weyl.WHQuantizer.cahill_glauber(s, dim))
                   for s in (-1, -2))

    def canonical_pair():
        worst = 0.0
        for w in symmetric_weights():
            q = _quantizer(dim, w)
            worst = max(worst, blk(q.quantize(lambda z: np.sqrt(2) * z.real) - q_op),
                        blk(q.quantize(lambda z: np.sqrt(2) * z.imag) - p_op))
        return worst

    def cg_table():
        worst = 0.0
        for s in (-1, -2):
            q = weyl.WHQuantizer.cahill_glauber(s, dim)
            worst = max(
                worst,
                blk(q.quantize(lambda z: 2 * z.real ** 2) - (q2 - s / 2 * eye)),
                blk(q.quantize(lambda z: 2 * z.imag ** 2) - (p2 - s / 2 * eye)),
                blk(q.quantize(lambda z: np.abs(z) ** 2) - (num + (1 - s) / 2 * eye)),
            )
        return worst

    def half_quantum():
        worst = 0.0
        for w in symmetric_weights():
            e0, em = weyl.ho_shifts(w)
            if abs((e0 - em) - 0.5) > 1e-15:
                return np.inf
            worst = max(worst, abs(weyl.measured_ground_shift(_quantizer(dim, w)) - e0))
        return worst

    def covariance():
        q = weyl.WHQuantizer.cahill_glauber(-1, dim)
        return weyl.covariance_defect(q, _test_symbol, 0.3 + 0.2j)

    def symmetric_laws():
        worst = 0.0
        for w in symmetric_weights():
            q = _quantizer(dim, w)
            worst = max(worst, weyl.parity_law_defect(q, _test_symbol),
                        weyl.reflection_law_defect(q, _test_symbol))
        return worst

    def parity_control():
        return weyl.parity_law_defect(_quantizer(dim, asymmetric_weight()), _test_symbol)

    def reflection_control():
        return weyl.reflection_law_defect(_quantizer(dim, even_nonreflection_weight()),
                                          _test_symbol)

    def even_weight_keeps_parity():
        return weyl.parity_law_defect(_quantizer(dim, even_nonreflection_weight()), _test_symbol)

    def trace_duality():
        return weyl.trace_duality_defect(sp, lambda z: np.exp(-np.abs(z - 0.5) ** 2))

    def angle_hermitian():
        return fock.hermiticity_defect(weyl.angle_operator_analytic(sp))

    def angle_trace():
        return abs(np.trace(weyl.angle_operator_analytic(sp)).real / dim - np.pi)

    def angle_numeric():
        return blk(weyl.angle_operator_numeric(sp, ANGLE_REFERENCE)
                   - weyl.angle_operator_analytic(sp))

    def angular_covariance():
        q = weyl.WHQuantizer.cahill_glauber(-1, dim, ANGLE_REFERENCE)
        return weyl.angular_covariance_defect(q, np.pi / 3)

    def thermal():
        worst = 0.0
        for omega, T in _thermal_pairs():
            worst = max(worst, fock.max_norm(weyl.boltzmann_rho(omega, T, sp)
                                             - weyl.cg_M_analytic(weyl.thermal_s(omega, T), sp)))
        return worst

    def berezin_consistency():
        q = weyl.WHQuantizer.cahill_glauber(-1, dim)
        fam = berezin.RhoFamily.from_quantizer(q)
        win = berezin.Window.disk(2.0)
        worst = 0.0
        for f in (lambda z: np.ones_like(z), lambda z: np.sqrt(2) * z.real,
                  lambda z: np.sqrt(2) * z.imag, lambda z: np.abs(z) ** 2):
            a = q.quantize(f)
            field = berezin.berezin_transform(f, q, window=win, grid=(9, 9))
            pts = field.points[field.mask]
            lower = np.array([berezin.lower_symbol(a, fam, z) for z in pts])
            worst = max(worst, float(np.max(np.abs(lower - field.values[field.mask]))))
        return worst

    def blur_offset():
        q = weyl.WHQuantizer.cahill_glauber(-1, dim)
        field = berezin.berezin_transform(lambda z: np.abs(z) ** 2, q,
                                          window=berezin.Window.disk(2.0), grid=(9, 9))
        pts = field.points[field.mask]
        return float(np.max(np.abs(field.values[field.mask] - np.abs(pts) ** 2 - 1)))

    return [
        ("wh.cg_oracle", cg_oracle, 1e-6),
        ("wh.resolution", resolution, 1e-6),
        ("wh.canonical_pair", canonical_pair, 1e-6),
        ("wh.cg_operator_table", cg_table, 1e-6),
        ("wh.half_quantum", half_quantum, 1e-4),
        ("wh.covariance", covariance, 1e-6),
        ("wh.symmetry_laws", symmetric_laws, 1e-6),
        ("wh.parity_negative_control", parity_control, 1e-3, True),
        ("wh.reflection_negative_control", reflection_control, 1e-3, True),
        ("wh.even_weight_parity", even_weight_keeps_parity, 1e-6),
        ("wh.trace_duality", trace_duality, 1e-8),
        ("wh.angle_hermitian", angle_hermitian, 1e-12),
        ("wh.angle_trace", angle_trace, 1e-12),
        ("wh.angle_numeric", angle_numeric, 1e-4),
        ("wh.angular_covariance", angular_covariance, 1e-6),
        ("wh.thermal", thermal, 1e-12),
        ("berezin.consistency", berezin_consistency, 1e-6),
        ("berezin.blur_offset", blur_offset, 1e-5),
    ]


def _thermal_pairs():
    omegas = (0.5, 1.0, 2.0, 3.0, 5.0)
    temps = (0.0, 0.7)
    return [(o, t) for o in omegas for t in temps]


def _affine_checks(alpha, lam, seed):
    d = affine.power_exp_scale(alpha, lam)
    grid, wide_grid, ref_win, op_win = affine.reference_setup(d)
    psi = affine.FiducialVector.power_exp(alpha, lam, grid)
    probes = affine.probe_states(psi, d)
    pairs = [(probes[i], probes[j]) for i in range(5) for j in range(i, 5)][:5]
    rng = np.random.default_rng(seed)
    holder = {}

    def op_quantizer():
        if "aq" not in holder:
            holder["aq"] = affine.AffineQuantizer(psi, op_win)
        return holder["aq"]

    def moments():
        return max(abs(psi.c_gamma(g) - affine.power_exp_moment(alpha, lam, g))
                   / affine.power_exp_moment(alpha, lam, g) for g in (-2, -1, 0, 1))

    def unitarity():
        w = ref_win
        wide = affine.FiducialVector.power_exp(alpha, lam, wide_grid)
        qs = np.exp(rng.uniform(np.log(w.q_min), np.log(w.q_max), 50))
        ps = rng.uniform(-w.p_max, w.p_max, 50)
        return max(abs(wide_grid.norm(affine.affine_cs(q, p, wide)) - 1)
                   for q, p in zip(qs, ps))

    def resolution():
        return affine.resolution_defect_affine(psi, probes[:3], ref_win)

    def moment_ratio():
        aq = op_quantizer()
        c = psi.c_minus1
        worst = 0.0
        for beta in (0.5, 1.0, 2.0):
            ratio = psi.c_gamma(beta - 1) / c
            for u, v in pairs:
                got = aq.matrix_element(lambda q, p, b=beta: q ** b + 0 * p, u, v)
                want = ratio * affine.multiplication_element(grid, u, v, beta)
                worst = max(worst, abs(got - want))
        return worst

    def momentum():
        aq = op_quantizer()
        return max(abs(aq.matrix_element(lambda q, p: p + 0 * q, u, v)
                       - affine.momentum_element(grid, u, v)) for u, v in pairs)

    def kinetic():
        k, _ = affine.kinetic_K(psi)
        return abs(affine.fit_inverse_square(op_quantizer(), pairs) / k - 1)

    def covariance():
        aq = affine.AffineQuantizer(psi, ref_win)
        q0, p0 = 1.3, 0.4 / d
        moved = [affine.pull_back(grid, q0, p0, u) for u in probes[1:4]]
        worst = 0.0
        for i in range(3):
            for j in range(3):
                lhs = aq.matrix_element(lambda q, p: q + 0 * p, moved[i], moved[j])
                rhs = aq.matrix_element(lambda q, p: q / q0 + 0 * p, probes[1 + i], probes[1 + j])
                worst = max(worst, abs(lhs - rhs))
        return worst

    return [
        ("affine.moments", moments, 1e-8),
        ("affine.unitarity", unitarity, 1e-8),
        ("affine.resolution", resolution, 1e-3),
        ("affine.moment_ratio", moment_ratio, 1e-3),
        ("affine.momentum", momentum, 1e-3),
        ("affine.kinetic_fit", kinetic, 0.02),
        ("affine.covariance", covariance, 1e-3),
    ]


def _sphere_checks(seed):
    rng = np.random.default_rng(seed)
    pts = [sphere.SpherePhasePoint.random(rng) for _ in range(1000)]

    def square():
        return max(abs(sphere.complexify(p).square - 1) for p in pts)

    def roundtrip():
        worst = 0.0
        for p in pts[:200]:
            r = sphere.reconstruct(sphere.complexify(p))
            worst = max(worst, np.abs(r.x - p.x).max(), np.abs(r.p - p.p).max())
        return worst

    def bilinear():
        worst = 0.0
        for p in pts[:50]:
            a = sphere.complexify(p)
            y1, y2 = rng.normal(size=3), rng.normal(size=3)
            al, be = rng.normal(size=2)
            lhs = sphere.complex_angle(a, al * y1 + be * y2, check_unit=False)
            rhs = (al * sphere.complex_angle(a, y1, check_unit=False)
                   + be * sphere.complex_angle(a, y2, check_unit=False))
            worst = max(worst, abs(lhs - rhs))
        return worst

    return [
        ("sphere.square", square, 1e-10),
        ("sphere.roundtrip", roundtrip, 1e-10),
        ("sphere.bilinear", bilinear, 1e-12),
    ]


def run_suite(dim=32, alpha=2.0, lam=1.0, seed=0, groups=("wh", "affine", "sphere")):
    """Run every check and return a list of :class:`CheckResult`."""
    sp = fock.TruncatedFockSpace(dim)
    checks = []
    if "wh" in groups:
        checks += [(c, sp.safe < MIN_SAFE) for c in _wh_checks(dim)]
    if "affine" in groups:
        checks += [(c, False) for c in _affine_checks(alpha, lam, seed)]
    if "sphere" in groups:
        checks += [(c, False) for c in _sphere_checks(seed)]
    out = []
    for entry, skip in checks:
        name, fn, bound = entry[:3]
        lower = len(entry) > 3 and entry[3]
        if skip:
            out.append(CheckResult(name, "skip", None, bound, 0.0,
                                   f"safe block {sp.safe} < {MIN_SAFE}"))
            continue
        t0 = time.perf_counter()
        try:
            value = float(fn())
        except Exception as exc:  # report, never abort the suite
            out.append(CheckResult(name, "fail", None, bound, time.perf_counter() - t0,
                                   f"{type(exc).__name__}: {exc}"))
            continue
        ok = value > bound if lower else value <= bound
        out.append(CheckResult(name, "pass" if ok else "fail", value, bound,
                               time.perf_counter() - t0, "lower bound" if lower else ""))
    return out


def summary(results) -> dict:
    counts = {k: sum(r.status == k for r in results) for k in ("pass", "fail", "skip")}
    return {"counts": counts, "ok": counts["fail"] == 0,
            "checks": [r.to_dict() for r in results]}
