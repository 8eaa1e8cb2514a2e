"""Command-line front end.

    arslie <classify|geodesic|front|abnormal|lift|verify> --config <path> [--out <dir>] [--svg]

Commands read the problem from the config file, run, and write delimited
output (plus figures with ``--svg``) into the output directory. Exit codes:
0 success, 2 validation failure, 3 numeric failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import config as cfgmod
from .ars import classify_locus
from .desing import LiftedState, lift, lifted_integrate, project
from .errors import NumericError, ValidationError
from .extremals import ExtremalState, abnormal_description, integrate, wavefront
from .output import (
    write_abnormal_csv,
    write_front_csv,
    write_trajectory_csv,
)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arslie",
        description="Almost-Riemannian structures on Lie groups: classification, geodesics, fronts, abnormals, lifts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, needs_config in [
        ("classify", True),
        ("geodesic", True),
        ("front", True),
        ("abnormal", True),
        ("lift", True),
        ("verify", False),
    ]:
        p = sub.add_parser(name)
        p.add_argument("--config", required=needs_config, help="problem definition file")
        p.add_argument("--out", default=".", help="output directory (default: current)")
        p.add_argument("--svg", action="store_true", help="also render figures")
    return parser


def _plot_axes(cfg: cfgmod.ProblemConfig, coord_names) -> tuple[int, int]:
    sec = cfg.section("plot")
    names = sec.get("axes", "").split()
    if not names:
        return 0, 1
    if len(names) != 2:
        raise ValidationError("[plot] axes must name exactly two coordinates")
    try:
        return coord_names.index(names[0]), coord_names.index(names[1])
    except ValueError as exc:
        raise ValidationError(f"unknown plot axis in {names}; chart has {coord_names}") from exc


def _outpath(out_dir: str, name: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    return os.path.join(out_dir, name)


def cmd_classify(cfg: cfgmod.ProblemConfig, out_dir: str, svg: bool) -> int:
    ars = cfgmod.build_problem(cfg)
    report = classify_locus(ars)
    labels = ars.chart.algebra().basis_labels

    print(f"group: {cfg.group} (dim {ars.dim})")
    print(f"distribution rows: {ars.delta.tolist()}")
    print(f"omega: {ars.omega.tolist()}  (normalized against {labels[int(np.argmax(ars.y_n))]})")
    print(f"pulled-back form omega o D: {report.d_star_omega.tolist()}")
    print(
        "distribution subalgebra: %s | ideal: %s | algebra solvable: %s (nilpotent: %s)"
        % (report.delta_subalgebra, report.delta_ideal, report.solvable, report.nilpotent)
    )
    print(f"locus tangent space at identity: basis rows {report.z_tangent.basis.tolist()}")
    print("verdicts:")
    for v in report.verdicts:
        print(f"  [{v.rule}] applies: {'yes' if v.applies else 'no'} - {v.conclusion}")

    machine = {
        "group": cfg.group,
        "dim": ars.dim,
        "delta": ars.delta.tolist(),
        "omega": ars.omega.tolist(),
        "d_star_omega": report.d_star_omega.tolist(),
        "delta_subalgebra": report.delta_subalgebra,
        "delta_ideal": report.delta_ideal,
        "solvable": report.solvable,
        "nilpotent": report.nilpotent,
        "kernel_subalgebra": report.kernel_subalgebra,
        "hz_on_kernel": report.hz_on_kernel,
        "numeric_zx_consistent": report.numeric_zx_consistent,
        "z_tangent_basis": report.z_tangent.basis.tolist(),
        "verdicts": [
            {"rule": v.rule, "applies": v.applies, "conclusion": v.conclusion}
            for v in report.verdicts
        ],
    }
    print("machine-readable:")
    print(json.dumps(machine, indent=2, sort_keys=True))
    return 0


def cmd_geodesic(cfg: cfgmod.ProblemConfig, out_dir: str, svg: bool) -> int:
    ars = cfgmod.build_problem(cfg)
    sec = cfg.section("geodesic")
    chart = ars.chart
    point = cfgmod.get_vector(sec, "point", chart.coord_dim)
    covector = cfgmod.get_vector(sec, "covector", chart.coord_dim)
    t_final = cfgmod.get_float(sec, "t", 1.0)
    step = cfgmod.get_float(sec, "step", 1e-3)
    drift = cfgmod.get_float(sec, "drift_bound", 1e-8)
    traj = integrate(ars, ExtremalState(point, covector), t_final, step=step, drift_bound=drift)
    path = _outpath(out_dir, "geodesic.csv")
    write_trajectory_csv(path, traj, chart.coord_names, chart.covector_names)
    print(f"wrote {path} ({len(traj)} samples, max energy drift {traj.max_drift:.3e})")
    if svg:
        from . import figures

        i, j = _plot_axes(cfg, chart.coord_names)
        fig_path = _outpath(out_dir, "geodesic.svg")
        figures.save_curve(
            fig_path,
            traj.points[:, i],
            traj.points[:, j],
            chart.coord_names[i],
            chart.coord_names[j],
            "geodesic",
        )
        print(f"wrote {fig_path}")
    return 0


def cmd_front(cfg: cfgmod.ProblemConfig, out_dir: str, svg: bool) -> int:
    ars = cfgmod.build_problem(cfg)
    sec = cfg.section("front")
    chart = ars.chart
    point = cfgmod.get_vector(sec, "point", chart.coord_dim)
    t_final = cfgmod.get_float(sec, "t", 1.0)
    count = cfgmod.get_int(sec, "count", 16)
    step = cfgmod.get_float(sec, "step", 1e-3)
    front = wavefront(ars, point, t_final, count, step=step)
    path = _outpath(out_dir, "front.csv")
    failed = write_front_csv(path, front, chart.coord_names)
    print(f"wrote {path} ({len(front.rays) - failed} rays)")
    if failed:
        print(f"warning: {failed} rays failed and were omitted", file=sys.stderr)
    if svg:
        from . import figures

        i, j = _plot_axes(cfg, chart.coord_names)
        fig_path = _outpath(out_dir, "front.svg")
        endpoints = front.endpoints()
        figures.save_points(
            fig_path,
            endpoints[:, [i, j]] if len(endpoints) else endpoints,
            chart.coord_names[i],
            chart.coord_names[j],
            f"front at T={t_final:g}",
        )
        print(f"wrote {fig_path}")
    return 0


def cmd_abnormal(cfg: cfgmod.ProblemConfig, out_dir: str, svg: bool) -> int:
    ars = cfgmod.build_problem(cfg)
    sec = cfg.section("abnormal")
    chart = ars.chart
    point = cfgmod.get_vector(sec, "point", chart.coord_dim)
    t_final = cfgmod.get_float(sec, "t", 1.0)
    step = cfgmod.get_float(sec, "step", 1e-2)
    p0 = cfgmod.get_float(sec, "p0", 1.0)
    desc = abnormal_description(ars, point)
    print(desc.statement)
    print(f"abnormal algebra basis rows: {desc.algebra.basis.tolist()}")

    ts = np.arange(0.0, t_final + 0.5 * step, step)
    if desc.algebra.dim == 0:
        points = np.tile(point, (len(ts), 1))
        factors = np.full(len(ts), p0)
    else:
        if "direction" in sec:
            coeffs = cfgmod.get_vector(sec, "direction", desc.algebra.dim)
        else:
            coeffs = np.zeros(desc.algebra.dim)
            coeffs[0] = 1.0
        velocity = coeffs @ desc.algebra.basis
        print(f"velocity (algebra coordinates): {velocity.tolist()}")
        print(f"covector growth coefficient c: {desc.coefficient(velocity)!r}")
        points = desc.curve(velocity, ts)
        factors = desc.covector_factor(velocity, ts, p0)
    path = _outpath(out_dir, "abnormal.csv")
    write_abnormal_csv(path, ts, points, factors, chart.coord_names)
    print(f"wrote {path} ({len(ts)} samples)")
    if svg:
        from . import figures

        i, j = _plot_axes(cfg, chart.coord_names)
        fig_path = _outpath(out_dir, "abnormal.svg")
        figures.save_curve(
            fig_path, points[:, i], points[:, j], chart.coord_names[i], chart.coord_names[j], "abnormal curve"
        )
        print(f"wrote {fig_path}")
    return 0


def cmd_lift(cfg: cfgmod.ProblemConfig, out_dir: str, svg: bool) -> int:
    ars = cfgmod.build_problem(cfg)
    sec = cfg.section("lift")
    chart = ars.chart
    point = cfgmod.get_vector(sec, "point", chart.coord_dim)
    covector = cfgmod.get_vector(sec, "covector", chart.coord_dim)
    tau0 = cfgmod.get_float(sec, "tau", 0.0)
    s0 = cfgmod.get_float(sec, "s", 0.0)
    t_final = cfgmod.get_float(sec, "t", 1.0)
    step = cfgmod.get_float(sec, "step", 1e-3)
    drift = cfgmod.get_float(sec, "drift_bound", 1e-8)

    lifted = lift(ars)
    state0 = LiftedState(
        np.concatenate([point, [tau0]]), np.concatenate([covector, [s0]])
    )
    traj = lifted_integrate(lifted, state0, t_final, step=step, drift_bound=drift)
    _, report = project(lifted, traj)
    print(
        "projection check: tau increment %.12g, control quadrature %.12g "
        "(residual %.3e), max speed mismatch %.3e"
        % (report.tau_delta, report.v_integral, report.quadrature_residual, report.max_speed_mismatch)
    )
    path = _outpath(out_dir, "lift.csv")
    write_trajectory_csv(path, traj, lifted.coord_names, lifted.covector_names)
    print(f"wrote {path} ({len(traj)} samples, max energy drift {traj.max_drift:.3e})")
    if svg:
        from . import figures

        i, j = _plot_axes(cfg, chart.coord_names)
        fig_path = _outpath(out_dir, "lift.svg")
        figures.save_curve(
            fig_path, traj.points[:, i], traj.points[:, j],
            chart.coord_names[i], chart.coord_names[j], "lifted geodesic (base projection)",
        )
        print(f"wrote {fig_path}")
    return 0


def cmd_verify() -> int:
    from .verify import run_all

    return 0 if run_all() else 1


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify()
        cfg = cfgmod.load_problem(args.config)
        handler = {
            "classify": cmd_classify,
            "geodesic": cmd_geodesic,
            "front": cmd_front,
            "abnormal": cmd_abnormal,
            "lift": cmd_lift,
        }[args.command]
        return handler(cfg, args.out, args.svg)
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
