"""Command-line front end: verification suites, stability scans and collapse reports.

Every subcommand writes a deterministic report (JSON with sorted keys, or
CSV with '.' decimals) to ``--out`` or stdout.  Exit status is 0 when all
checks pass, 1 when a check fails and 2 on a usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .charts import Family, ManifoldSpec, sample_points
from .complexgeom import (chern_ricci_and_scalar, gauduchon_check, lee_closedness_residual,
                          lee_form_not_parallel, lee_form_with_partials, volume)
from .convergence import (c0_values, collapse_start, curve_length, integrate_collapse_curve)
from .errors import GeometryError
from .metrics import hermitian_metric
from .stability import (FiberInclusion, first_sign_change, harmonicity_residual,
                        instability_integrand, stability_spectrum, witness_integrand_closed_form)
from .tensor import (complex_curvature, complex_curvature_closed_form, fiber_identity_residuals,
                     surface_identity_residuals, symmetry_residual, riemann)

SCHEMA_VERSION = 1
CSV_HEADER = ["epsilon", "x1", "x3", "mode_m", "mode_k", "min_eig", "overall_min", "stable"]
INJECTED_ERROR = 1e-3


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    epsilons: tuple[float, ...]
    n: int
    x1: float
    x3: float
    ray: tuple[int, float, float] | None
    grid_steps: int | None
    fourier_cap: int
    fd_step: float
    tol: float | None
    samples: int
    seed: int
    out: str | None
    fmt: str
    inject_error: bool
    r0: float


def parse_epsilon(text: str) -> tuple[float, ...]:
    """A single value, a comma list ``0,0.5,1`` or a range ``start:stop:count``."""
    try:
        if ":" in text:
            a, b, k = text.split(":")
            k = int(k)
            if k < 1:
                raise ConfigError("epsilon grid needs at least one point")
            vals = np.linspace(float(a), float(b), k)
        else:
            vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"cannot parse epsilon {text!r}") from exc
    if len(vals) == 0:
        raise ConfigError("epsilon grid is empty")
    for v in vals:
        if not (0.0 <= v <= 1.0):
            raise ConfigError(f"epsilon must lie in [0, 1], got {v}")
    return tuple(float(v) for v in vals)


def parse_ray(text: str, n: int) -> tuple[int, float, float]:
    """``AXIS:START:STOP`` with AXIS one of x1, x3 (n = 2) or a real base index."""
    try:
        axis, a, b = text.split(":")
        axis = axis.strip()
        if axis.startswith("x"):
            axis = axis[1:]
        ax = int(axis)
        start, stop = float(a), float(b)
    except ValueError as exc:
        raise ConfigError(f"cannot parse ray {text!r}; expected AXIS:START:STOP") from exc
    if ax in (0, n) or not 0 < ax < 2 * n:
        raise ConfigError(f"ray axis x{ax} is not a base direction")
    if stop < start:
        raise ConfigError("ray stop must not be below start")
    return ax, start, stop


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lckhopf", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=["verify", "stability-scan", "spectrum", "collapse", "volume", "higher-dim"])
    p.add_argument("--epsilon", default=None, help="value, comma list or start:stop:count")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--x1", type=float, default=0.0)
    p.add_argument("--x3", type=float, default=0.0)
    p.add_argument("--ray", default=None, help="AXIS:START:STOP, e.g. x3:0:2.5")
    p.add_argument("--grid-steps", type=int, default=None)
    p.add_argument("--fourier-cap", type=int, default=8)
    p.add_argument("--fd-step", type=float, default=1e-5)
    p.add_argument("--tol", type=float, default=None, help="override every tolerance")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--r0", type=float, default=1.0, help="initial |w_2| for the collapse curve")
    p.add_argument("--out", default=None)
    p.add_argument("--format", dest="fmt", choices=["json", "csv"], default=None)
    p.add_argument("--inject-error", action="store_true", help=argparse.SUPPRESS)
    return p


_DEFAULT_EPS = {"verify": "0.5", "stability-scan": "1", "spectrum": "0.5",
                "collapse": "1,0.5,0.25", "volume": "0,0.5,1", "higher-dim": "0.5"}


def make_config(ns: argparse.Namespace) -> RunConfig:
    eps = parse_epsilon(ns.epsilon if ns.epsilon is not None else _DEFAULT_EPS[ns.command])
    n = ns.n if ns.n is not None else (3 if ns.command == "higher-dim" else 2)
    if n < 2:
        raise ConfigError("n must be at least 2")
    if ns.samples < 1:
        raise ConfigError("samples must be positive")
    if ns.fourier_cap < 0:
        raise ConfigError("fourier cap must be nonnegative")
    if not 1e-7 <= ns.fd_step <= 1e-2:
        raise ConfigError("fd step must lie in [1e-7, 1e-2]")
    if ns.tol is not None and not ns.tol > 0:
        raise ConfigError("tolerance must be positive")
    if ns.grid_steps is not None and ns.grid_steps < 1:
        raise ConfigError("grid is empty")
    if not ns.r0 > 0:
        raise ConfigError("r0 must be positive")
    ray = None
    if ns.command == "stability-scan":
        ray = parse_ray(ns.ray if ns.ray is not None else "x3:0:2.5", n)
    fmt = ns.fmt or ("csv" if ns.command == "stability-scan" else "json")
    if fmt == "csv" and ns.command not in ("stability-scan", "spectrum"):
        raise ConfigError(f"{ns.command} reports JSON only")
    return RunConfig(ns.command, eps, n, ns.x1, ns.x3, ray, ns.grid_steps, ns.fourier_cap,
                     ns.fd_step, ns.tol, ns.samples, ns.seed, ns.out, fmt, ns.inject_error, ns.r0)


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def _clean(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, (np.floating,)):
        return _clean(float(v))
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    return v


def _record(identity, anchor, value, tol, comparison="<"):
    value = float(value)
    ok = value < tol if comparison == "<" else value > tol
    return {"identity_id": identity, "anchor": anchor, "max_residual": value,
            "tolerance": tol, "comparison": comparison, "pass": bool(ok)}


def _tol(cfg: RunConfig, default: float) -> float:
    return cfg.tol if cfg.tol is not None else default


def _spec(family: Family, n: int, eps: float, cfg: RunConfig) -> ManifoldSpec:
    return ManifoldSpec(family, n, eps, INJECTED_ERROR if cfg.inject_error else 0.0)


def _surface_records(cfg: RunConfig, eps: float) -> list[dict]:
    spec = _spec(Family.HOPF_SURFACE, 2, eps, cfg)
    pts = sample_points(_rng(cfg.seed), spec, cfg.samples)
    c = 1.0 + eps * eps
    chern = det = gaud = lee = dlee = ident = sym = cc_err = cc_neg = 0.0
    for p in pts:
        _, scal = chern_ricci_and_scalar(p, spec)
        chern = max(chern, abs(scal - 2.0))
        A = 1.0 + float(np.sum(p.base.real ** 2 + p.base.imag ** 2))
        expect = c * np.pi ** 2 / A ** 2
        det = max(det, abs(hermitian_metric(p, spec).detC - expect) / expect)
        gaud = max(gaud, gauduchon_check(p, spec))
        lee = max(lee, lee_form_with_partials(p, spec)[2])
        dlee = max(dlee, lee_closedness_residual(p, spec))
        ident = max(ident, max(surface_identity_residuals(p, spec).values()))
        sym = max(sym, symmetry_residual(riemann(p, spec)))
        k = complex_curvature(p, spec)
        cc_err = max(cc_err, abs(k - complex_curvature_closed_form(p, spec)))
        cc_neg = max(cc_neg, -k)
    fibers = [FiberInclusion(p.base, spec) for p in pts[: min(len(pts), 50)]]
    harm = max(harmonicity_residual(f) for f in fibers)
    c0 = float(np.max(np.abs(c0_values(pts, eps) - eps ** 4)))
    return [
        _record("chern_scalar", "Chern scalar curvature equals 2", chern, _tol(cfg, 1e-9)),
        _record("determinant", "det G = (1 + eps^2) pi^2 / A^2", det, _tol(cfg, 1e-10)),
        _record("gauduchon", "ddbar omega = 0", gaud, _tol(cfg, 1e-10)),
        _record("lee_equation", "d omega = -2 theta ^ omega", lee, _tol(cfg, 1e-10)),
        _record("lee_closed", "d theta = 0 (locally conformally Kaehler)", dlee, _tol(cfg, 1e-10)),
        _record("lee_not_parallel", "sup |nabla theta| is positive", lee_form_not_parallel(spec),
                1e-3, comparison=">"),
        _record("curvature_identities", "Riemann components on S^3 x S^1", ident, _tol(cfg, 1e-9)),
        _record("riemann_symmetries", "algebraic symmetries and first Bianchi", sym, _tol(cfg, 1e-9)),
        _record("complex_curvature", "R(X, Y, conj X, conj Y) closed form", cc_err, _tol(cfg, 1e-9)),
        _record("complex_curvature_sign", "R(X, Y, conj X, conj Y) >= 0", cc_neg, _tol(cfg, 1e-12)),
        _record("fiber_harmonic", "fiber inclusions are harmonic", harm, _tol(cfg, 1e-12)),
        _record("c0_distance", "|g_eps - g_0|^2 = eps^4", c0, _tol(cfg, 1e-12)),
    ]


def _higher_dim_records(cfg: RunConfig, eps: float) -> list[dict]:
    n = cfg.n
    spec = _spec(Family.HOPF_GENERAL, n, eps, cfg)
    pts = sample_points(_rng(cfg.seed), spec, cfg.samples)
    c = 1.0 + eps * eps
    det = fib = sym = chern = 0.0
    for p in pts:
        A = 1.0 + float(np.sum(np.abs(p.base) ** 2))
        expect = c * np.pi ** 2 / A ** n
        det = max(det, abs(hermitian_metric(p, spec).detC - expect) / expect)
        fib = max(fib, max(fiber_identity_residuals(p, spec).values()))
        sym = max(sym, symmetry_residual(riemann(p, spec)))
        chern = max(chern, abs(chern_ricci_and_scalar(p, spec)[1] - n * (n - 1)))
    fibers = [FiberInclusion(p.base, spec) for p in pts[: min(len(pts), 50)]]
    harm = max(harmonicity_residual(f) for f in fibers)
    special = stability_spectrum(FiberInclusion(np.zeros(n - 1, dtype=complex), spec), cfg.fourier_cap)
    return [
        _record("determinant", f"det G = (1 + eps^2) pi^2 / A^{n}", det, _tol(cfg, 1e-10)),
        _record("fiber_identities", "fiber-direction Christoffel and curvature identities", fib, _tol(cfg, 1e-9)),
        _record("riemann_symmetries", "algebraic symmetries and first Bianchi", sym, _tol(cfg, 1e-9)),
        _record("chern_scalar", f"Chern scalar curvature equals n (n - 1) = {n * (n - 1)}", chern, _tol(cfg, 1e-9)),
        _record("fiber_harmonic", "fiber inclusions are harmonic", harm, _tol(cfg, 1e-12)),
        _record("special_torus_stable", "index form >= 0 at the fiber over w' = 0",
                max(0.0, -special.overall_min), _tol(cfg, 1e-10)),
    ]


def run_verify(cfg: RunConfig) -> tuple[dict, bool]:
    runs = []
    for eps in cfg.epsilons:
        records = _higher_dim_records(cfg, eps) if cfg.command == "higher-dim" else _surface_records(cfg, eps)
        runs.append({"epsilon": eps, "records": records})
    ok = all(r["pass"] for run in runs for r in run["records"])
    report = {"schema_version": SCHEMA_VERSION, "command": cfg.command, "n": cfg.n,
              "samples": cfg.samples, "seed": cfg.seed, "runs": runs, "pass": ok}
    return report, ok


def _scan_points(cfg: RunConfig) -> list[float]:
    ax, start, stop = cfg.ray
    steps = cfg.grid_steps if cfg.grid_steps is not None else 26
    return [float(v) for v in np.linspace(start, stop, steps)]


def _fiber_at(cfg: RunConfig, spec: ManifoldSpec, axis: int | None, r: float) -> tuple[FiberInclusion, float, float]:
    n = spec.n
    x = np.zeros(2 * n)
    if axis is None:
        x[1], x[n + 1] = cfg.x1, cfg.x3
    else:
        x[axis] = r
    return FiberInclusion(x[1:n] + 1j * x[n + 1:], spec), float(x[1]), float(x[n + 1])


def run_stability_scan(cfg: RunConfig) -> tuple[dict, list[list], bool]:
    axis = cfg.ray[0]
    rows, brackets = [], []
    for eps in cfg.epsilons:
        spec = ManifoldSpec(Family.HOPF_SURFACE if cfg.n == 2 else Family.HOPF_GENERAL, cfg.n, eps)
        radii = _scan_points(cfg)
        overall, witness = [], []
        for r in radii:
            f, x1, x3 = _fiber_at(cfg, spec, axis, r)
            rep = stability_spectrum(f, cfg.fourier_cap, verify=False)
            for (m, k), v in rep.min_eigenvalue_per_mode.items():
                rows.append([eps, x1, x3, m, k, v, rep.overall_min, int(rep.stable)])
            # the constant modes sit at exactly zero, so bracket on the tolerance-aware flag
            overall.append(0.0 if rep.stable else -1.0)
            try:
                witness.append(instability_integrand(f))
            except GeometryError:
                witness.append(float("nan"))
        brackets.append({"epsilon": eps, "spectral_sign_change": first_sign_change(radii, overall),
                         "witness_sign_change": first_sign_change(radii, witness)})
    rows.sort(key=lambda r: tuple(r))
    summary = {"schema_version": SCHEMA_VERSION, "command": cfg.command, "ray": list(cfg.ray),
               "fourier_cap": cfg.fourier_cap, "brackets": brackets}
    return summary, rows, True


def run_spectrum(cfg: RunConfig) -> tuple[dict, list[list], bool]:
    rows, runs = [], []
    for eps in cfg.epsilons:
        spec = ManifoldSpec(Family.HOPF_SURFACE if cfg.n == 2 else Family.HOPF_GENERAL, cfg.n, eps)
        f, x1, x3 = _fiber_at(cfg, spec, None, 0.0)
        rep = stability_spectrum(f, cfg.fourier_cap, verify=True)
        for (m, k), v in rep.min_eigenvalue_per_mode.items():
            rows.append([eps, x1, x3, m, k, v, rep.overall_min, int(rep.stable)])
        A = 1.0 + x1 * x1 + x3 * x3
        runs.append({"epsilon": eps, "x1": x1, "x3": x3, "overall_min": rep.overall_min,
                     "stable": rep.stable, "witness_energy": rep.witness_energy,
                     "witness_integrand_closed_form": witness_integrand_closed_form(A, eps),
                     "modes": [{"m": m, "k": k, "min_eig": v}
                               for (m, k), v in sorted(rep.min_eigenvalue_per_mode.items())]})
    rows.sort(key=lambda r: tuple(r))
    return {"schema_version": SCHEMA_VERSION, "command": cfg.command, "fourier_cap": cfg.fourier_cap,
            "runs": runs}, rows, True


def run_collapse(cfg: RunConfig) -> tuple[dict, bool]:
    tol = _tol(cfg, 1e-6)
    steps = cfg.grid_steps if cfg.grid_steps is not None else 4000
    start = collapse_start([0.0, cfg.x1, cfg.r0, cfg.x3, 0.0, 0.0])
    traj = integrate_collapse_curve(start, steps=steps)
    err = traj.closed_form_error()
    pts = sample_points(_rng(cfg.seed), ManifoldSpec(Family.HOPF_SURFACE, 2, 0.0), cfg.samples)
    runs, ratios = [], []
    c0_ok = True
    for eps in cfg.epsilons:
        length = curve_length(traj, ManifoldSpec(Family.CALABI_ECKMANN, 2, eps))
        c0 = c0_values(pts, eps)
        c0_dev = float(np.max(np.abs(c0 - eps ** 4)))
        c0_ok &= c0_dev < 1e-12
        if eps > 0:
            ratios.append(length / eps)
        runs.append({"epsilon": eps, "length": length, "c0": float(np.mean(c0)), "c0_deviation": c0_dev,
                     "gh_bound": length + math.sqrt(float(np.max(c0)))})
    C = max(ratios) if ratios else 0.0
    spread = (max(ratios) - min(ratios)) / max(ratios) if ratios else 0.0
    ok = err < tol and c0_ok and spread < 0.10
    report = {"schema_version": SCHEMA_VERSION, "command": cfg.command,
              "trajectory": {"r0": start.polar[0], "theta0": start.polar[1], "a1": start.a1,
                             "ab": list(start.ab), "steps": steps, "end_radius": traj.end_radius()},
              "closed_form_max_error": err, "tolerance": tol, "measured_C": C,
              "C_relative_spread": spread, "runs": runs, "pass": bool(ok)}
    return report, bool(ok)


def run_volume(cfg: RunConfig) -> tuple[dict, bool]:
    tol = _tol(cfg, 0.01)
    res = cfg.grid_steps if cfg.grid_steps is not None else 1000
    records = []
    for eps in cfg.epsilons:
        v = volume(ManifoldSpec(Family.HOPF_SURFACE, 2, eps), resolution=res, angular=max(8, res // 10))
        expect = (1.0 + eps * eps) * np.pi ** 3
        rec = _record("volume", "volume = (1 + eps^2) pi^3", abs(v - expect) / expect, tol)
        rec.update({"epsilon": eps, "value": v, "expected": expect})
        records.append(rec)
    ok = all(r["pass"] for r in records)
    return {"schema_version": SCHEMA_VERSION, "command": cfg.command, "resolution": res,
            "records": records, "pass": ok}, ok


def _dump_json(obj) -> str:
    return json.dumps(_clean(obj), sort_keys=True, indent=2) + "\n"


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return repr(float(v))


def _dump_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _emit(text: str, out: str | None):
    if out is None:
        try:
            sys.stdout.write(text)
            sys.stdout.flush()
        except BrokenPipeError:
            sys.stdout = None
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def run(cfg: RunConfig) -> int:
    if cfg.command in ("verify", "higher-dim"):
        report, ok = run_verify(cfg)
        text = _dump_json(report)
    elif cfg.command in ("stability-scan", "spectrum"):
        fn = run_stability_scan if cfg.command == "stability-scan" else run_spectrum
        summary, rows, ok = fn(cfg)
        if cfg.fmt == "csv":
            text = _dump_csv(rows)
            sys.stderr.write(_dump_json(summary))
        else:
            summary["rows"] = [dict(zip(CSV_HEADER, r)) for r in rows]
            text = _dump_json(summary)
    elif cfg.command == "collapse":
        report, ok = run_collapse(cfg)
        text = _dump_json(report)
    else:
        report, ok = run_volume(cfg)
        text = _dump_json(report)
    _emit(text, cfg.out)
    return 0 if ok else 1


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = make_config(ns)
        return run(cfg)
    except (ConfigError, GeometryError, ValueError) as exc:
        sys.stderr.write(f"lckhopf: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
