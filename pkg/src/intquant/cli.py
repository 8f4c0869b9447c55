"""Command-line driver: ``intquant <command> [options]``.

Commands write CSV/JSON files plus a ``manifest_<command>.json`` into
``--outdir``. Exit status is 0 on success, 1 when a verification fails and
2 on a configuration error.
"""
import argparse
from dataclasses import asdict, dataclass, field, fields
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import affine, fock, invariants, sphere, weyl
from .errors import ConfigError, DivergentMomentError, IntegrabilityError
from .export import MatrixRecord, write_csv, write_json, write_manifest
from .quadrature import ANGLE_REFERENCE, PhaseSpaceQuadrature

log = logging.getLogger("intquant")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
COMMANDS = ("cg-table", "angle", "affine", "thermal", "sphere", "verify")


@dataclass
class RunConfig:
    command: str = "verify"
    dim: int = 32
    n_radial: int = 80
    n_angular: int = 64
    s: list = field(default_factory=lambda: [-1.0, -2.0, -3.0, -0.5, 0.0])
    omega: float = 1.0
    temp: list = field(default_factory=lambda: [0.0, 0.25, 0.5, 1.0, 2.0])
    alpha: float = 2.0
    lam: float = 1.0
    n_points: int = 20
    outdir: str = "intquant_out"
    seed: int = 0

    def validate(self):
        """Raise :class:`ConfigError` with the first offending field."""
        if self.command not in COMMANDS:
            raise ConfigError(f"command must be one of {COMMANDS}, got {self.command!r}")
        for name in ("dim", "n_radial", "n_angular", "n_points", "seed"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise ConfigError(f"{name} must be an integer, got {v!r}")
        if self.dim < 2:
            raise ConfigError(f"dim must be >= 2, got {self.dim}")
        if self.n_radial < 1 or self.n_angular < 1 or self.n_points < 1:
            raise ConfigError("quadrature orders and n_points must be positive")
        if not isinstance(self.s, list) or not self.s:
            raise ConfigError("s must be a non-empty list of numbers")
        for s in self.s:
            if not _finite(s) or not s < 1:
                raise ConfigError(f"every s must be a finite number < 1, got {s!r}")
        if not _finite(self.omega) or not self.omega > 0:
            raise ConfigError(f"omega must be a positive number, got {self.omega!r}")
        if not isinstance(self.temp, list) or not self.temp:
            raise ConfigError("temp must be a non-empty list of numbers")
        for t in self.temp:
            if not _finite(t) or t < 0:
                raise ConfigError(f"every temperature must be a finite number >= 0, got {t!r}")
        if not _finite(self.alpha) or not self.alpha > 1.5:
            raise ConfigError(f"alpha must exceed 3/2 so that c_1 and K exist, got {self.alpha!r}")
        if not _finite(self.lam) or not self.lam > 0:
            raise ConfigError(f"lambda must be positive, got {self.lam!r}")
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")
        return self

    @property
    def quadrature(self) -> PhaseSpaceQuadrature:
        return PhaseSpaceQuadrature(self.n_radial, self.n_angular)

    @classmethod
    def from_mapping(cls, d) -> "RunConfig":
        if not isinstance(d, dict):
            raise ConfigError("config file must hold a JSON object")
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        cfg = cls(**d)
        if isinstance(cfg.s, (int, float)):
            cfg.s = [cfg.s]
        if isinstance(cfg.temp, (int, float)):
            cfg.temp = [cfg.temp]
        return cfg


def _finite(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def _float_list(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="intquant", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", type=Path, help="JSON file with RunConfig fields")
    p.add_argument("--dim", type=int)
    p.add_argument("--n-radial", dest="n_radial", type=int)
    p.add_argument("--n-angular", dest="n_angular", type=int)
    p.add_argument("--s", type=_float_list, help="comma-separated Cahill-Glauber parameters")
    p.add_argument("--omega", type=float)
    p.add_argument("--temp", type=_float_list, help="comma-separated temperatures")
    p.add_argument("--alpha", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--n-points", dest="n_points", type=int)
    p.add_argument("--outdir")
    p.add_argument("--seed", type=int)
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def load_config(args) -> RunConfig:
    base = {}
    if args.config is not None:
        try:
            with open(args.config, encoding="utf-8") as fh:
                base = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    try:
        cfg = RunConfig.from_mapping(base)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    cfg.command = args.command
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None and f.name != "command":
            setattr(cfg, f.name, v)
    return cfg.validate()


def cmd_cg_table(cfg: RunConfig, out: Path):
    sp = fock.TruncatedFockSpace(cfg.dim)
    quad = cfg.quadrature
    diag_rows, summary_rows = [], []
    for s in cfg.s:
        analytic = weyl.cg_M_analytic(s, sp)
        try:
            built = np.real(np.diag(weyl.build_M(weyl.WeightFunction.cahill_glauber(s), quad, sp)))
        except IntegrabilityError:
            built = None
        a = np.real(np.diag(analytic))
        for n in range(cfg.dim):
            diag_rows.append([s, n, a[n], "N/A" if built is None else built[n]])
        lam_min = fock.min_eigenvalue(analytic)
        summary_rows.append([s, float(np.real(np.trace(analytic))), lam_min,
                             lam_min >= -fock.TOL_PSD,
                             "N/A" if built is None else float(np.max(np.abs(built - a)[:sp.safe]))])
    files = [out / "cg_diagonal.csv", out / "cg_summary.csv"]
    write_csv(files[0], ["s", "n", "analytic", "quadrature"], diag_rows)
    write_csv(files[1], ["s", "trace", "min_eigenvalue", "psd", "safe_block_defect"], summary_rows)
    return files, {"psd": fock.TOL_PSD}, True


def cmd_angle(cfg: RunConfig, out: Path):
    sp = fock.TruncatedFockSpace(cfg.dim)
    a = weyl.angle_operator_analytic(sp)
    a_num = weyl.angle_operator_numeric(sp, ANGLE_REFERENCE)
    n = sp.safe
    defect = fock.max_norm(a_num[:n, :n] - a[:n, :n])
    eig = np.linalg.eigvalsh(a)
    meta = {"dim": cfg.dim, "quadrature": {"n_radial": ANGLE_REFERENCE.n_radial,
                                           "n_angular": ANGLE_REFERENCE.n_angular,
                                           "radial": ANGLE_REFERENCE.radial,
                                           "angular": ANGLE_REFERENCE.angular}}
    files = [out / "angle_operator.json", out / "angle_eigenvalues.csv", out / "angle_defect.csv"]
    MatrixRecord("angle_operator", a, meta).write(files[0])
    write_csv(files[1], ["k", "eigenvalue"], list(enumerate(eig)))
    herm = fock.hermiticity_defect(a)
    write_csv(files[2], ["dim", "trace_over_dim", "hermiticity_defect", "safe_block_defect",
                         "eig_min", "eig_max"],
              [[cfg.dim, float(np.trace(a).real) / cfg.dim, herm, defect, eig[0], eig[-1]]])
    return files, {"defect": 1e-4, "hermitian": 1e-12}, defect < 1e-4 and herm < 1e-12


def cmd_thermal(cfg: RunConfig, out: Path):
    sp = fock.TruncatedFockSpace(cfg.dim)
    curve, diag_rows = [], []
    ok = True
    for T in cfg.temp:
        s = weyl.thermal_s(cfg.omega, T)
        rho = weyl.boltzmann_rho(cfg.omega, T, sp)
        eq = fock.max_norm(rho - weyl.cg_M_analytic(s, sp))
        d = np.real(np.diag(rho))
        mean_n = float(np.dot(np.arange(cfg.dim), d))
        bose = weyl.bose_occupation(cfg.omega, T)
        tail = weyl.boltzmann_tail(cfg.omega, T, sp)
        ok &= eq < 1e-12
        curve.append([cfg.omega, T, s, -(s + 1) / 2 + 0.0, bose, mean_n, tail, eq])
        diag_rows += [[T, n, d[n]] for n in range(cfg.dim)]
    files = [out / "thermal_curve.csv", out / "thermal_diagonal.csv"]
    write_csv(files[0], ["omega", "T", "s", "nbar_from_s", "bose", "mean_n_truncated",
                         "trace_tail", "equality_defect"], curve)
    write_csv(files[1], ["T", "n", "rho_nn"], diag_rows)
    return files, {"equality": 1e-12}, bool(ok)


def cmd_affine(cfg: RunConfig, out: Path):
    d = affine.power_exp_scale(cfg.alpha, cfg.lam)
    grid, _, ref_win, _ = affine.reference_setup(d)
    try:
        psi = affine.FiducialVector.power_exp(cfg.alpha, cfg.lam, grid)
        report = affine.moment_report(psi)
    except DivergentMomentError as exc:
        raise ConfigError(str(exc)) from exc
    results = invariants.run_suite(alpha=cfg.alpha, lam=cfg.lam, seed=cfg.seed,
                                   groups=("affine",))
    dens = affine.phase_space_density(psi.values, psi, ref_win)
    report["defects"] = {r.name: {"status": r.status, "value": r.value, "bound": r.bound}
                         for r in results}
    report["density_mass"] = dens.mass
    report["density_peak"] = dens.peak()
    files = [out / "affine_moments.json", out / "affine_density.csv"]
    write_json(report, files[0])
    dens.to_csv(files[1])
    ok = all(r.status != "fail" for r in results) and abs(dens.mass - 1) < 1e-3
    return files, {r.name: r.bound for r in results}, ok


def cmd_sphere(cfg: RunConfig, out: Path):
    rng = np.random.default_rng(cfg.seed)
    pts = [sphere.SpherePhasePoint.random(rng) for _ in range(cfg.n_points)]
    files = [out / "sphere_points.json"]
    sphere.export_points_json(pts, files[0])
    worst = max(abs(sphere.complexify(p).square - 1) for p in pts)
    return files, {"a_dot_a": 1e-10}, worst < 1e-10


def cmd_verify(cfg: RunConfig, out: Path):
    results = invariants.run_suite(dim=cfg.dim, alpha=cfg.alpha, lam=cfg.lam, seed=cfg.seed)
    for r in results:
        shown = "-" if r.value is None else f"{r.value:.3e}"
        print(f"{r.status.upper():4s}  {r.name:34s} {shown:>10s}  (bound {r.bound:.0e}) {r.detail}")
    body = invariants.summary(results)
    for c in body["checks"]:
        c.pop("seconds")  # keep the report deterministic
    files = [out / "verify_report.json"]
    write_json(body, files[0])
    return files, {r.name: r.bound for r in results}, body["ok"]


HANDLERS = {
    "cg-table": cmd_cg_table, "angle": cmd_angle, "affine": cmd_affine,
    "thermal": cmd_thermal, "sphere": cmd_sphere, "verify": cmd_verify,
}


def run(cfg: RunConfig) -> int:
    out = Path(cfg.outdir)
    out.mkdir(parents=True, exist_ok=True)
    files, tolerances, ok = HANDLERS[cfg.command](cfg, out)
    write_manifest(out, cfg.command.replace("-", "_"), asdict(cfg), files, tolerances,
                   {"passed": bool(ok)})
    log.info("%s: wrote %d files to %s", cfg.command, len(files) + 1, out)
    return EXIT_OK if ok else EXIT_FAIL


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args)
        return run(cfg)
    except ConfigError as exc:
        print(f"intquant: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
