"""Command-line interface.

Subcommands: npoint, scan, boundary, nahm, rep, verify.  Every run prints
a JSON report to stdout; CSV outputs go to files.  Exit codes: 0 success,
1 verification failure, 2 invalid input, 3 non-convergence or documented
degeneracy.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import backend
from . import nahm as nahm_mod
from . import rep as rep_mod
from .boundary import (
    curvature_fd,
    estimate_charge,
    fit_spectral_poly,
    lambda_fd,
    spectral_scan,
)
from .config import RunConfig, format_complex, load_config, parse_complex
from .errors import (
    MonoholoError,
    NearSingular,
    NonConvergence,
    UsageError,
)
from .field import abelian_field, hedgehog_field
from .geom import BoundaryPoint, disk_grid, make_geodesic
from .npoint import PointTuple, n_point
from .report import Report, Stopwatch, write_csv
from .scatter import decaying_solution, solve_pairing, trajectory_rows
from .verify import run_suite

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_NONCONVERGENCE = 3


def _parse_points(text: str):
    pts = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if tok.lower() == "inf":
            pts.append(BoundaryPoint.infinity())
        else:
            pts.append(BoundaryPoint(parse_complex(tok)))
    if not pts:
        raise UsageError("no points given")
    return pts


def _point_str(p: BoundaryPoint) -> str:
    return "inf" if p.is_infinity else format_complex(p.value)


def _build_field(rc: RunConfig):
    if rc.field == "abelian":
        return abelian_field(rc.mass)
    if rc.field == "hedgehog":
        return hedgehog_field(rc.mass)
    # boundary model from the discrete system at half-integer mass
    sol = nahm_mod.solve_nahm(rc.charge, rc.mass, seed=rc.seed)
    if sol.degenerate:
        raise NonConvergence("degenerate monad at this mass; no boundary model")
    return rep_mod.q_from_monad(sol.monad())


def _common_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", help="config file (key = value); MONO_CONFIG honored")
    p.add_argument("--field", choices=("abelian", "hedgehog", "from-nahm"))
    p.add_argument("--mass", type=float)
    p.add_argument("--charge", type=int)
    p.add_argument("--T", type=float, dest="T")
    p.add_argument("--ode-rtol", type=float, dest="ode_rtol")
    p.add_argument("--ode-atol", type=float, dest="ode_atol")
    p.add_argument("--fd-step", type=float, dest="fd_step")
    p.add_argument("--grid", type=int, dest="grid_n")
    p.add_argument("--threshold", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)


def _config_from_args(args) -> RunConfig:
    keys = (
        "field", "mass", "charge", "T", "ode_rtol", "ode_atol",
        "fd_step", "grid_n", "threshold", "seed", "workers",
    )
    overrides = {k: getattr(args, k, None) for k in keys}
    return load_config(getattr(args, "config", None), overrides)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="monoholo",
        description="Boundary n-point functions of hyperbolic monopoles",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("npoint", help="n-point value for an ordered tuple")
    _common_flags(p)
    p.add_argument("--points", required=True, help="comma list, e.g. 0,1+1i,inf")
    p.add_argument("--csv", help="append the value to a CSV file")
    p.add_argument("--export-profiles", help="write radial profiles (rho,h,a)")
    p.add_argument("--dump-trajectory", help="directory for per-geodesic decay CSVs")
    p.add_argument("--dump-convergence", help="CSV of value vs truncation T")

    p = sub.add_parser("scan", help="spectral locus scan")
    _common_flags(p)
    p.add_argument("--radius", type=float, default=2.0)
    p.add_argument("--out", required=True, help="locus CSV path")
    p.add_argument("--dump-grid", help="CSV of all grid evaluations")
    p.add_argument("--fit-out", help="JSON path for the fitted polynomial")

    p = sub.add_parser("boundary", help="connection and curvature maps")
    _common_flags(p)
    p.add_argument("--w", required=True, help="gauge point w")
    p.add_argument("--radius", type=float, default=1.2)
    p.add_argument("--out", required=True, help="map CSV path")

    p = sub.add_parser("nahm", help="solve the discrete system")
    _common_flags(p)
    p.add_argument("--out", help="JSON path for the solution data")

    p = sub.add_parser("rep", help="monad sphere diagnostics")
    _common_flags(p)
    p.add_argument("--out", help="JSON path for the sphere")

    p = sub.add_parser("verify", help="invariant and acceptance suites")
    _common_flags(p)
    p.add_argument(
        "suite",
        nargs="?",
        default="all",
        choices=("all", "scatter", "npoint", "boundary", "nahm", "rep"),
    )
    return ap


def cmd_npoint(args) -> int:
    rc = _config_from_args(args)
    watch = Stopwatch()
    field = _build_field(rc)
    watch.lap("build_field")
    pts = _parse_points(args.points)
    cfg = rc.solver_config()
    tup = PointTuple(tuple(pts)) if len(pts) >= 2 else None
    if tup is None:
        val_value, val_err, reduced = 1.0 + 0j, 0.0, True
    else:
        val = n_point(field, tup, cfg)
        val_value, val_err, reduced = val.value, val.err, val.reduced
    watch.lap("npoint")

    if args.export_profiles:
        if not hasattr(field, "export_profiles"):
            raise UsageError("only the charge-1 built-in field has radial profiles")
        field.export_profiles(args.export_profiles)
    if args.dump_trajectory:
        if hasattr(field, "eval_unit"):
            raise UsageError("trajectory dumps need a bulk field, not a boundary model")
        os.makedirs(args.dump_trajectory, exist_ok=True)
        for i in range(len(pts)):
            a, b = pts[i], pts[(i + 1) % len(pts)]
            if a.isclose(b, 1e-3):
                continue
            g = make_geodesic(a, b, cfg.initial_T(field.mass))
            sol = decaying_solution(field, g, +1, cfg)
            write_csv(
                os.path.join(args.dump_trajectory, f"geodesic_{i}.csv"),
                ["t", "re_s1", "im_s1", "re_s2", "im_s2", "norm"],
                trajectory_rows(sol),
            )
    if args.dump_convergence:
        if hasattr(field, "eval_unit"):
            raise UsageError("convergence dumps need a bulk field")
        rows = []
        base_T = cfg.initial_T(field.mass)
        for scale in (0.5, 0.625, 0.78, 1.0, 1.25, 1.5625):
            c2 = rc.solver_config()
            c2.T = base_T * scale
            c2.refine = False
            pd = solve_pairing(field, pts[0], pts[1], c2)
            rows.append((base_T * scale, pd.value.real, pd.value.imag, pd.err))
        write_csv(args.dump_convergence, ["T", "re", "im", "err"], rows)

    rep = Report(
        command="npoint",
        params={**rc.params_dict(), "points": [_point_str(p) for p in pts]},
    )
    rep.add_result(
        points=[_point_str(p) for p in pts],
        value=val_value,
        err=val_err,
        reduced=reduced,
    )
    rep.diagnostics = {
        "backend": backend.ACTIVE,
        "timings": watch.laps,
    }
    if args.csv:
        header = [f"z{i + 1}" for i in range(len(pts))] + ["re", "im", "err"]
        row = [_point_str(p) for p in pts] + [val_value.real, val_value.imag, val_err]
        write_csv(args.csv, header, [row])
    print(rep.to_json())
    return EXIT_OK


def cmd_scan(args) -> int:
    rc = _config_from_args(args)
    watch = Stopwatch()
    field = _build_field(rc)
    cfg = rc.solver_config()
    grid = disk_grid(rc.grid_n, args.radius)
    scan = spectral_scan(field, grid, grid, threshold=rc.threshold, cfg=cfg)
    watch.lap("scan")
    write_csv(
        args.out,
        ["re_w", "im_w", "re_z", "im_z", "value"],
        [(h.w.real, h.w.imag, h.z.real, h.z.imag, h.value) for h in scan.locus],
    )
    if args.dump_grid:
        write_csv(
            args.dump_grid,
            ["re_w", "im_w", "re_z", "im_z", "value"],
            [(w.real, w.imag, z.real, z.imag, v) for (w, z, v) in scan.grid],
        )
    rep = Report(command="scan", params={**rc.params_dict(), "radius": args.radius})
    rep.add_result(n_locus=len(scan.locus), charge_estimate=estimate_charge(scan))
    if args.fit_out:
        k = rc.charge if rc.charge >= 1 else max(estimate_charge(scan), 1)
        fit = fit_spectral_poly(scan.locus, k)
        with open(args.fit_out, "w", encoding="utf-8") as fh:
            import json

            fh.write(json.dumps({
                "k": fit.k,
                "coeffs": {
                    "re": fit.coeffs.real.tolist(),
                    "im": fit.coeffs.imag.tolist(),
                },
                "fit_residual": fit.fit_residual,
            }, sort_keys=True))
        rep.add_result(fit_residual=fit.fit_residual, fit_k=fit.k)
    rep.diagnostics = {"backend": backend.ACTIVE, "timings": watch.laps}
    print(rep.to_json())
    return EXIT_OK


def cmd_boundary(args) -> int:
    rc = _config_from_args(args)
    watch = Stopwatch()
    field = _build_field(rc)
    cfg = rc.solver_config()
    w = (
        BoundaryPoint.infinity()
        if args.w.strip().lower() == "inf"
        else BoundaryPoint(parse_complex(args.w))
    )
    n = rc.grid_n
    rows = []
    skipped = 0
    for z in disk_grid(n, args.radius):
        try:
            lam = lambda_fd(field, w, z, h=rc.fd_step, cfg=cfg)
            curv = curvature_fd(field, z, w, h=max(5 * rc.fd_step, 5e-3), cfg=cfg)
        except NearSingular:
            skipped += 1
            continue
        rows.append((z.real, z.imag, lam.real, lam.imag, curv))
    write_csv(args.out, ["re_z", "im_z", "re_lambda", "im_lambda", "F"], rows)
    watch.lap("maps")
    rep = Report(
        command="boundary",
        params={**rc.params_dict(), "w": args.w, "radius": args.radius},
    )
    rep.add_result(n_points=len(rows), skipped_near_singular=skipped)
    rep.diagnostics = {"backend": backend.ACTIVE, "timings": watch.laps}
    print(rep.to_json())
    return EXIT_OK


def cmd_nahm(args) -> int:
    rc = _config_from_args(args)
    watch = Stopwatch()
    k = rc.charge if rc.charge >= 1 else 1
    sol = nahm_mod.solve_nahm(k, rc.mass, seed=rc.seed)
    watch.lap("solve")
    rep = Report(command="nahm", params=rc.params_dict())
    rep.add_result(
        residual=nahm_mod.nahm_residual(sol),
        degenerate=sol.degenerate,
        v_norm=float(np.linalg.norm(sol.v)),
    )
    rep.diagnostics = {"timings": watch.laps}
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(sol.to_json())
    print(rep.to_json())
    return EXIT_NONCONVERGENCE if sol.degenerate else EXIT_OK


def cmd_rep(args) -> int:
    rc = _config_from_args(args)
    watch = Stopwatch()
    k = rc.charge if rc.charge >= 1 else 1
    sol = nahm_mod.solve_nahm(k, rc.mass, seed=rc.seed)
    rep = Report(command="rep", params=rc.params_dict())
    if sol.degenerate:
        rep.add_result(degenerate=True)
        print(rep.to_json())
        return EXIT_NONCONVERGENCE
    try:
        q = rep_mod.q_from_monad(sol.monad())
    except MonoholoError as exc:
        rep.add_result(degenerate=True, detail=str(exc))
        print(rep.to_json())
        return EXIT_NONCONVERGENCE
    deg = rep_mod.degree(q)
    roots = rep_mod.pairing_root_count(q)
    integral = rep_mod.curvature_integral(q)
    rng = np.random.default_rng(rc.seed)
    base = [complex(rng.normal(), rng.normal()) for _ in range(k + 1)]
    tensor = rep_mod.four_point_tensor(q, base)
    worst = 0.0
    for _ in range(20):
        wz = rng.normal(size=4)
        wv, zv = complex(wz[0], wz[1]), complex(wz[2], wz[3])
        direct = rep_mod.trace_npoint(q, [wv, zv])
        recon = rep_mod.four_point_reconstruct(q, base, wv, zv, tensor=tensor)
        worst = max(worst, abs(direct - recon))
    rep.add_result(
        degree=deg,
        root_count=roots,
        curvature_integral=integral,
        four_point_error=worst,
        tensor_cond=tensor.cond,
        tensor_rank=tensor.rank,
    )
    if k == 2:
        try:
            sub = rep_mod.subalgebra_structure(q, 0.31 + 0.17j)
            rep.add_result(
                subalgebra_closure=sub.closure_residual, subalgebra_tau=sub.tau
            )
        except MonoholoError as exc:
            rep.add_result(subalgebra_error=str(exc))
    watch.lap("rep")
    rep.diagnostics = {"timings": watch.laps}
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(rep_mod.holo_sphere_to_json(q))
    print(rep.to_json())
    return EXIT_OK


def cmd_verify(args) -> int:
    rc = _config_from_args(args)
    watch = Stopwatch()
    results, code = run_suite(args.suite, rc)
    watch.lap("suite")
    rep = Report(command=f"verify {args.suite}", params=rc.params_dict())
    for r in results:
        rep.add_result(
            name=r.name,
            passed=r.passed,
            measured=r.measured,
            tolerance=r.tolerance,
            seconds=round(r.seconds, 3),
        )
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] {r.name}: {r.measured} (tolerance {r.tolerance})",
              file=sys.stderr)
    rep.diagnostics = {
        "backend": backend.ACTIVE,
        "n_failed": sum(not r.passed for r in results),
        "timings": watch.laps,
    }
    print(rep.to_json())
    return code


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    handlers = {
        "npoint": cmd_npoint,
        "scan": cmd_scan,
        "boundary": cmd_boundary,
        "nahm": cmd_nahm,
        "rep": cmd_rep,
        "verify": cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonConvergence as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except MonoholoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAIL
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
