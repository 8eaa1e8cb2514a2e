"""Delimited output with a fixed byte format.

Every number is written with 17 significant digits and lines end with a bare
newline, so identical inputs produce identical files.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .extremals import FrontResult, GeodesicTrajectory


def fmt(value: float) -> str:
    return format(float(value), ".17g")


def write_csv(path: str, header: list[str], rows: Iterable[Iterable[float]]) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def trajectory_header(coord_names, covector_names, n_controls: int) -> list[str]:
    return (
        ["t"]
        + list(coord_names)
        + list(covector_names)
        + ["v"]
        + [f"u{j}" for j in range(1, n_controls)]
        + ["H"]
    )


def write_trajectory_csv(
    path: str,
    traj: GeodesicTrajectory,
    coord_names,
    covector_names,
) -> None:
    header = trajectory_header(coord_names, covector_names, traj.controls.shape[1])
    rows = np.column_stack(
        [traj.ts, traj.points, traj.costates, traj.controls, traj.hamiltonians]
    )
    write_csv(path, header, rows)


def write_front_csv(path: str, front: FrontResult, coord_names) -> int:
    """Write one row per successful ray; returns the number of failed rays."""
    header = ["ray_index"] + list(front.param_names) + list(coord_names)
    rows = [
        [float(ray.index), *ray.params, *ray.endpoint]
        for ray in front.rays
        if ray.endpoint is not None
    ]
    write_csv(path, header, rows)
    return sum(1 for ray in front.rays if ray.endpoint is None)


def write_abnormal_csv(path: str, ts, points, factors, coord_names) -> None:
    header = ["t"] + list(coord_names) + ["p"]
    rows = np.column_stack([np.asarray(ts), np.asarray(points), np.asarray(factors)])
    write_csv(path, header, rows)
