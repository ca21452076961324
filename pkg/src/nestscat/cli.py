"""Command line front end.

Four subcommands:

* ``spectrum`` -- capacitance asymptotics and exact determinant roots,
  CSV + JSON summary (timings, speedup).
* ``sweep``    -- total L2 norm and monopole coefficient over an incident
  frequency grid, CSV with resonance marker rows.
* ``field``    -- total field on a plane grid or axis line, CSV + per-shell
  statistics CSV.
* ``compare``  -- three-way root agreement (wave expansion / DtN /
  asymptotic) as JSON.

Each report also renders a PNG next to its primary output unless
``--no-plot`` is given.  Exit codes: 0 success, 1 numerical failure,
2 usage or configuration errors.  All outputs are deterministic for a
given configuration except the timing fields in the JSON summaries.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .capacitance import asymptotic_frequencies, solve_capacitance
from .config import ConfigError, RunConfig
from .dtn import ExcludedWavenumberError, dtn_logdet
from .model import MaterialParams, NestedGeometry
from .numerics import RootFindError, SingularMatrixError
from .scattering import eval_field, field_l2_norm, solve_scattering
from .swe import locate_characteristic_roots, swe_logdet

__all__ = ["build_parser", "main"]

_FIELD_NMAX_DEFAULT = 4
_SHELL_SAMPLES = 64


def _fmt(x: float) -> str:
    """Full-precision float formatting for CSV fields."""
    return f"{x:.17g}"


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _write_json(path: Path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _sibling(out: Path, tag: str, suffix: str) -> Path:
    return out.with_name(out.stem + tag + suffix)


def _emit_config(cfg: RunConfig, out: Path) -> None:
    _write_json(_sibling(out, "_config", ".json"), cfg.to_dict())


# ----------------------------------------------------------------------
# spectrum


def cmd_spectrum(cfg: RunConfig, out: Path) -> int:
    t0 = time.perf_counter()
    cs = solve_capacitance(cfg.geometry)
    omega_plus, _ = asymptotic_frequencies(cs, cfg.materials, cfg.geometry)
    seconds_asymptotic = time.perf_counter() - t0

    seeds = np.asarray(cfg.seeds, dtype=complex) if cfg.seeds else omega_plus

    def logdet(w):
        return swe_logdet(w, cfg.materials, cfg.geometry)

    t1 = time.perf_counter()
    results = locate_characteristic_roots(logdet, seeds, strict=False)
    seconds_exact = time.perf_counter() - t1

    order = np.argsort(seeds.real, kind="stable")
    rows = []
    failed = []
    for rank, i in enumerate(order):
        seed = seeds[i]
        res = results[i]
        if res is None:
            failed.append(rank)
            rows.append([rank, _fmt(seed.real), _fmt(seed.imag),
                         "nan", "nan", "nan", 0])
        else:
            rows.append([
                rank,
                _fmt(seed.real), _fmt(seed.imag),
                _fmt(res.root.real), _fmt(res.root.imag),
                _fmt(abs(res.root - seed)),
                res.iterations,
            ])
    _write_csv(out, ["mode", "re_asym", "im_asym", "re_exact", "im_exact",
                     "abs_diff", "muller_iters"], rows)
    summary = {
        "command": "spectrum",
        "n_layers": cfg.geometry.n_layers,
        "delta": cfg.materials.delta,
        "n_modes": int(len(seeds)),
        "failed_modes": failed,
        "seconds_exact": seconds_exact,
        "seconds_asymptotic": seconds_asymptotic,
        "speedup": (seconds_exact / seconds_asymptotic
                    if seconds_asymptotic > 0 else math.inf),
    }
    _write_json(_sibling(out, "_summary", ".json"), summary)
    _emit_config(cfg, out)
    if cfg.plot:
        from .figures import render_spectrum

        roots = np.array([r.root for r in results if r is not None])
        render_spectrum(seeds[order], roots, _sibling(out, "", ".png"))
    if failed:
        print(f"spectrum: {len(failed)} mode(s) did not converge: {failed}",
              file=sys.stderr)
        return 1
    return 0


# ----------------------------------------------------------------------
# sweep


def _sweep_point(payload):
    """Worker for one sweep frequency (top level for pickling)."""
    (omega, radii, rho_r, kappa_r, rho, kappa, n_max, direction) = payload
    geometry = NestedGeometry(radii)
    materials = MaterialParams(rho_r, kappa_r, rho, kappa)
    sol = solve_scattering(omega, direction, n_max, materials, geometry)
    return field_l2_norm(sol), abs(sol.coefficients[0, 0])


def _run_sweep_points(cfg: RunConfig, omegas, n_max: int):
    m = cfg.materials
    payloads = [
        (float(w), cfg.geometry.radii, m.rho_r, m.kappa_r, m.rho, m.kappa,
         n_max, cfg.direction)
        for w in omegas
    ]
    workers = cfg.threads if cfg.threads is not None else (os.cpu_count() or 1)
    if workers <= 1 or len(payloads) < 4:
        return [_sweep_point(p) for p in payloads]
    chunk = max(1, len(payloads) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_point, payloads, chunksize=chunk))


def cmd_sweep(cfg: RunConfig, out: Path) -> int:
    cs = solve_capacitance(cfg.geometry)
    omega_plus, _ = asymptotic_frequencies(cs, cfg.materials, cfg.geometry)
    markers = np.sort(omega_plus.real)
    lo = cfg.omega_min if cfg.omega_min is not None else 0.5 * markers[0]
    hi = cfg.omega_max if cfg.omega_max is not None else 1.5 * markers[-1]
    if not 0 < lo < hi:
        raise ConfigError("sweep range must satisfy 0 < omega_min < omega_max")
    n_max = cfg.n_max if cfg.n_max is not None else 0
    omegas = np.linspace(lo, hi, cfg.steps)

    t0 = time.perf_counter()
    grid_vals = _run_sweep_points(cfg, omegas, n_max)
    marker_vals = _run_sweep_points(cfg, markers, n_max)
    seconds = time.perf_counter() - t0

    rows = [["grid", _fmt(w), _fmt(l2), _fmt(mono)]
            for w, (l2, mono) in zip(omegas, grid_vals)]
    rows += [["resonance", _fmt(w), _fmt(l2), _fmt(mono)]
             for w, (l2, mono) in zip(markers, marker_vals)]
    _write_csv(out, ["kind", "omega_in", "l2_norm", "monopole_coeff_abs"], rows)

    norms = np.array([v[0] for v in grid_vals])
    peak_idx = [i for i in range(1, len(norms) - 1)
                if norms[i] > norms[i - 1] and norms[i] > norms[i + 1]]
    summary = {
        "command": "sweep",
        "n_layers": cfg.geometry.n_layers,
        "delta": cfg.materials.delta,
        "n_max": n_max,
        "omega_min": float(lo),
        "omega_max": float(hi),
        "steps": int(cfg.steps),
        "resonance_markers": [float(w) for w in markers],
        "peaks": [float(omegas[i]) for i in peak_idx],
        "seconds_total": seconds,
    }
    _write_json(_sibling(out, "_summary", ".json"), summary)
    _emit_config(cfg, out)
    if cfg.plot:
        from .figures import render_sweep

        render_sweep(omegas, norms, markers, _sibling(out, "", ".png"))
    return 0


# ----------------------------------------------------------------------
# field


def cmd_field(cfg: RunConfig, out: Path) -> int:
    cs = solve_capacitance(cfg.geometry)
    omega_plus, _ = asymptotic_frequencies(cs, cfg.materials, cfg.geometry)
    omega = (cfg.field_omega if cfg.field_omega is not None
             else float(omega_plus[cfg.field_mode_index].real))
    n_max = cfg.n_max if cfg.n_max is not None else _FIELD_NMAX_DEFAULT
    sol = solve_scattering(omega, cfg.direction, n_max, cfg.materials,
                           cfg.geometry)

    r0 = cfg.geometry.outer_radius
    extent = cfg.field_extent * r0
    npts = cfg.field_points
    d = np.asarray(cfg.direction)
    if cfg.field_mode == "plane":
        # Plane spanned by the incidence direction and a perpendicular.
        perp = _perpendicular(d)
        ticks = np.linspace(-extent, extent, npts)
        points = np.array([t1 * d + t2 * perp for t2 in ticks for t1 in ticks])
        u = eval_field(sol, points)
        rows = [[_fmt(p[0]), _fmt(p[1]), _fmt(p[2]), _fmt(v.real), _fmt(v.imag)]
                for p, v in zip(points, u)]
    else:
        ticks = np.linspace(-extent, extent, npts)
        points = np.array([t * d for t in ticks])
        u = eval_field(sol, points)
        rows = [[_fmt(p[0]), _fmt(p[1]), _fmt(p[2]), _fmt(v.real), _fmt(v.imag)]
                for p, v in zip(points, u)]
    _write_csv(out, ["x1", "x2", "x3", "re_u", "im_u"], rows)

    shell_rows, shell_stats = _shell_statistics(sol)
    _write_csv(_sibling(out, "_shells", ".csv"),
               ["shell", "mean_re_u", "std_re_u", "mean_abs_u", "std_abs_u",
                "cov_abs_u"], shell_rows)

    signs = [1 if s["mean_re"] >= 0 else -1 for s in shell_stats]
    sign_changes = sum(1 for a, b in zip(signs, signs[1:]) if a != b)
    summary = {
        "command": "field",
        "omega_in": float(omega),
        "n_max": n_max,
        "mode": cfg.field_mode,
        "extent": float(extent),
        "points": int(npts),
        "shell_sign_pattern": signs,
        "sign_changes": sign_changes,
    }
    _write_json(_sibling(out, "_summary", ".json"), summary)
    _emit_config(cfg, out)
    if cfg.plot:
        from .figures import render_field_line, render_field_plane

        if cfg.field_mode == "plane":
            re_u = np.real(u).reshape(npts, npts)
            render_field_plane(ticks, ticks, re_u, cfg.geometry.radii,
                               _sibling(out, "", ".png"))
        else:
            render_field_line(ticks, np.real(u), cfg.geometry.radii,
                              _sibling(out, "", ".png"))
    return 0


def _perpendicular(d: np.ndarray) -> np.ndarray:
    trial = np.array([0.0, 1.0, 0.0]) if abs(d[0]) >= abs(d[1]) \
        else np.array([1.0, 0.0, 0.0])
    perp = trial - (trial @ d) * d
    return perp / np.linalg.norm(perp)


def _shell_statistics(sol):
    """Radial-sample statistics of u per shell (64 points along +d)."""
    g = sol.geometry
    rows = []
    stats = []
    for j in range(g.n_layers):
        rr = np.linspace(g.r_minus[j], g.r_plus[j], _SHELL_SAMPLES)
        pts = rr[:, None] * sol.direction[None, :]
        u = eval_field(sol, pts)
        mean_re = float(np.mean(u.real))
        std_re = float(np.std(u.real))
        mean_abs = float(np.mean(np.abs(u)))
        std_abs = float(np.std(np.abs(u)))
        cov = std_abs / mean_abs if mean_abs > 0 else math.inf
        rows.append([j, _fmt(mean_re), _fmt(std_re), _fmt(mean_abs),
                     _fmt(std_abs), _fmt(cov)])
        stats.append({"mean_re": mean_re, "std_re": std_re,
                      "mean_abs": mean_abs, "std_abs": std_abs, "cov": cov})
    return rows, stats


# ----------------------------------------------------------------------
# compare


def cmd_compare(cfg: RunConfig, out: Path) -> int:
    cs = solve_capacitance(cfg.geometry)
    omega_plus, _ = asymptotic_frequencies(cs, cfg.materials, cfg.geometry)
    seeds = np.asarray(cfg.seeds, dtype=complex) if cfg.seeds else omega_plus

    def ld_swe(w):
        return swe_logdet(w, cfg.materials, cfg.geometry)

    def ld_dtn(w):
        return dtn_logdet(w, cfg.materials, cfg.geometry)

    swe_res = locate_characteristic_roots(ld_swe, seeds)
    dtn_res = locate_characteristic_roots(ld_dtn, seeds)

    modes = []
    flagged = 0
    for i, seed in enumerate(seeds):
        sw = swe_res[i].root
        dt = dtn_res[i].root
        d_sd = abs(sw - dt)
        flag = d_sd > cfg.tol_exact
        flagged += flag
        modes.append({
            "mode": i,
            "asymptotic": [seed.real, seed.imag],
            "swe": [sw.real, sw.imag],
            "dtn": [dt.real, dt.imag],
            "d_swe_dtn": d_sd,
            "d_swe_asym": abs(sw - seed),
            "d_dtn_asym": abs(dt - seed),
            "exceeds_tol_exact": bool(flag),
        })
    report = {
        "command": "compare",
        "n_layers": cfg.geometry.n_layers,
        "delta": cfg.materials.delta,
        "tol_exact": cfg.tol_exact,
        "max_d_swe_dtn": max(m["d_swe_dtn"] for m in modes),
        "n_flagged": int(flagged),
        "modes": modes,
    }
    _write_json(out, report)
    _emit_config(cfg, out)
    if cfg.plot:
        from .figures import render_compare

        render_compare(seeds, [r.root for r in swe_res],
                       [r.root for r in dtn_res], _sibling(out, "", ".png"))
    if flagged:
        print(f"compare: {flagged} mode(s) exceed tol_exact "
              f"{cfg.tol_exact:g}", file=sys.stderr)
    return 0


# ----------------------------------------------------------------------
# parser / entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nestscat",
        description="Subwavelength resonances and scattering of nested "
                    "high-contrast spherical resonators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    defaults = {
        "spectrum": "spectrum.csv",
        "sweep": "sweep.csv",
        "field": "field.csv",
        "compare": "compare.json",
    }
    helps = {
        "spectrum": "resonances: capacitance asymptotics vs exact roots",
        "sweep": "L2 norm over an incident frequency grid",
        "field": "total field on a plane grid or axis line",
        "compare": "three-way root agreement as JSON",
    }
    for name in ("spectrum", "sweep", "field", "compare"):
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--config", type=Path, default=None,
                       help="JSON config file")
        p.add_argument("--geometry-equidistant", type=int, metavar="N",
                       default=None, help="use the N-layer equidistant geometry")
        p.add_argument("--delta", type=float, default=None,
                       help="density contrast (unit-speed materials)")
        p.add_argument("--nmax", type=int, default=None,
                       help="truncation order of the harmonic expansion")
        p.add_argument("--out", type=Path, default=Path(defaults[name]),
                       help=f"primary output path (default {defaults[name]})")
        p.add_argument("--threads", type=int, default=None,
                       help="worker processes for sweeps (default: all cores)")
        p.add_argument("--no-plot", action="store_true",
                       help="skip the PNG figure")
        if name == "sweep":
            p.add_argument("--omega-min", type=float, default=None)
            p.add_argument("--omega-max", type=float, default=None)
            p.add_argument("--steps", type=int, default=None)
    return parser


def _resolve_config(args) -> RunConfig:
    raw: dict = {}
    if args.config is not None:
        try:
            raw = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config root must be a JSON object")
    if args.geometry_equidistant is not None:
        raw["geometry"] = {"equidistant": args.geometry_equidistant}
    if args.delta is not None:
        raw["materials"] = {"delta": args.delta}
    if args.nmax is not None:
        raw["n_max"] = args.nmax
    if args.threads is not None:
        raw["threads"] = args.threads
    if args.no_plot:
        raw["plot"] = False
    sweep = dict(raw.get("sweep") or {})
    for key in ("omega_min", "omega_max", "steps"):
        val = getattr(args, key, None)
        if val is not None:
            sweep[key] = val
    if sweep:
        raw["sweep"] = sweep
    return RunConfig.from_dict(raw)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve_config(args)
    except ConfigError as exc:
        print(f"nestscat: config error: {exc}", file=sys.stderr)
        return 2
    dispatch = {
        "spectrum": cmd_spectrum,
        "sweep": cmd_sweep,
        "field": cmd_field,
        "compare": cmd_compare,
    }
    try:
        return dispatch[args.command](cfg, args.out)
    except ConfigError as exc:
        print(f"nestscat: config error: {exc}", file=sys.stderr)
        return 2
    except (RootFindError, SingularMatrixError, ExcludedWavenumberError) as exc:
        print(f"nestscat: numerical failure: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"nestscat: i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
