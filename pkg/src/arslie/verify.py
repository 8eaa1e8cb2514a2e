"""Self-contained oracle suite behind ``arslie verify``.

Re-runs the cross-checks that pin the library's behaviour: closed-form
first returns against direct integration, the singular-locus formulas on
every built-in configuration, the classification table, abnormal structure,
conservation of energy and of the structurally constant costate components,
the power-series and translation identities of the frame-read field, the
lift bookkeeping, and the pendulum reduction. Prints one line per check.
"""

from __future__ import annotations

import math

import numpy as np

from . import fixtures
from .ars import abnormal_algebra, classify_locus
from .desing import LiftedState, lift, lifted_integrate, project
from .extremals import (
    ExtremalState,
    abnormal_description,
    aff2_first_return,
    aff2_first_return_numeric,
    heisenberg_pendulum,
    integrate,
)
from .group_models import cocycle_check, f_series


def _check_first_returns() -> tuple[bool, str]:
    ars = fixtures.aff2_ars()
    worst = 0.0
    for eps, q in [(1, 1.0), (1, 0.5), (1, 2.0), (-1, 2.0)]:
        ret = aff2_first_return(eps, q)
        num = aff2_first_return_numeric(ars, eps, q)
        if num is None:
            return False, f"no numeric return found for eps={eps}, q={q}"
        worst = max(worst, abs(num.t_star - ret.t_star), abs(num.delta_y - ret.delta_y))
    for eps, q in [(-1, 0.5), (-1, 1.0)]:
        if aff2_first_return(eps, q) is not None:
            return False, f"unexpected closed-form return for eps={eps}, q={q}"
        if aff2_first_return_numeric(ars, eps, q, t_max=6.0) is not None:
            return False, f"unexpected numeric return for eps={eps}, q={q}"
    return worst <= 1e-5, f"worst closed-form vs numeric gap {worst:.2e}"


def _check_locus_formulas() -> tuple[bool, str]:
    worst_on = 0.0
    worst_off = math.inf

    def norm_psi(ars, g):
        return abs(ars.psi(g)) / (1.0 + np.linalg.norm(ars.grad_psi(g)))

    gr = fixtures.grushin_plane()
    for y in np.linspace(-1, 1, 9):
        worst_on = max(worst_on, norm_psi(gr, np.array([0.0, y])))
        worst_off = min(worst_off, norm_psi(gr, np.array([0.5, y])))

    af = fixtures.aff2_ars(1.0, 1.0)
    for y in np.linspace(-0.5, 0.5, 9):
        worst_on = max(worst_on, norm_psi(af, np.array([1.0 - y, y])))
        worst_off = min(worst_off, norm_psi(af, np.array([1.5 - y, y])))

    hq = fixtures.heisenberg_ars(
        [[1.0, 2.0, 0.0], [3.0, 4.0, 0.0], [5.0, 6.0, 5.0]]
    )
    for x in np.linspace(-1, 1, 5):
        for y in np.linspace(-1, 1, 5):
            z = -(5 * x + 6 * y - 1.5 * x * x + y * y - 4 * x * y) / 5.0
            worst_on = max(worst_on, norm_psi(hq, np.array([x, y, z])))
            worst_off = min(worst_off, norm_psi(hq, np.array([x, y, z + 0.5])))

    ht = fixtures.heisenberg_tangential_ars()
    for x in np.linspace(-1, 1, 5):
        for y in np.linspace(-1, 1, 5):
            worst_on = max(worst_on, norm_psi(ht, np.array([x, y, x * x + x * y])))
            worst_off = min(worst_off, norm_psi(ht, np.array([x, y, x * x + x * y + 0.5])))

    sl = fixtures.sl2_lower_ars()
    for a in (1.0, -1.0):
        for b in np.linspace(-1, 1, 5):
            for c in np.linspace(-1, 1, 5):
                g = np.array([a, b, c, (1.0 + b * c) / a])
                worst_on = max(worst_on, norm_psi(sl, g))
    for b in np.linspace(-1, 1, 5):
        g = np.array([1.5, b, 0.0, 1.0 / 1.5])
        worst_off = min(worst_off, norm_psi(sl, g))

    ok = worst_on <= 1e-9 and worst_off >= 1e-3
    return ok, f"on-locus max {worst_on:.2e}, off-locus min {worst_off:.2e}"


def _check_classification() -> tuple[bool, str]:
    # fixture -> (delta subalgebra, delta ideal, solvable, submanifold,
    #             ideal-subgroup, solvable-subgroup, local-subgroup, numeric)
    table = [
        (fixtures.grushin_plane(), (True, True, True, True, True, True, True, "consistent")),
        (fixtures.aff2_ars(1.0, 1.0), (True, False, True, True, False, True, True, "consistent")),
        (fixtures.heisenberg_ideal_ars(), (True, True, True, True, True, True, True, "consistent")),
        (fixtures.heisenberg_quadric_ars(0, 0, 1), (False, False, True, False, False, False, False, "inconsistent")),
        (fixtures.heisenberg_quadric_ars(1, 1, 0), (False, False, True, False, False, False, True, "inconsistent")),
        (fixtures.heisenberg_degenerate_ars(1, -1), (False, False, True, False, False, False, False, "consistent")),
        (fixtures.heisenberg_degenerate_ars(1, 1), (False, False, True, False, False, False, False, "inconsistent")),
        (fixtures.heisenberg_tangential_ars(), (False, False, True, False, False, False, False, "inconsistent")),
        (fixtures.sl2_lower_ars(), (True, False, False, True, False, False, False, "unsampled")),
        (fixtures.sl2_upper_ars(), (False, False, False, False, False, False, True, "unsampled")),
    ]
    for i, (ars, expect) in enumerate(table):
        rep = classify_locus(ars)
        got = (
            rep.delta_subalgebra,
            rep.delta_ideal,
            rep.solvable,
            rep.verdict("submanifold").applies,
            rep.verdict("ideal-subgroup").applies,
            rep.verdict("solvable-subgroup").applies,
            rep.verdict("local-subgroup").applies,
            rep.numeric_zx_consistent,
        )
        if got != expect:
            return False, f"row {i}: got {got}, expected {expect}"
    return True, f"{len(table)} fixtures match the expected verdict table"


def _check_abnormals() -> tuple[bool, str]:
    heis = fixtures.heisenberg_ideal_ars()
    a = abnormal_algebra(heis)
    if a.dim != 1 or not a.contains(np.array([0.0, 0.0, 1.0])):
        return False, f"abnormal algebra should be the center, got basis {a.basis}"
    desc = abnormal_description(heis, np.array([0.0, 2.0, 0.0]))
    ts = np.linspace(0.0, 3.0, 31)
    curve = desc.curve(a.basis[0], ts)
    if not np.allclose(curve[:, 0], 0.0) or not np.allclose(curve[:, 1], 2.0):
        return False, "abnormal curve should be a vertical line {x=0, y=2}"
    worst = max(abs(heis.psi(g)) for g in curve)
    aff = fixtures.aff2_ars()
    if abnormal_algebra(aff).dim != 0:
        return False, "affine-group abnormal algebra should be trivial"
    return worst <= 1e-9, f"curve stays singular (max |psi| {worst:.2e}); fixed points on the affine group"


def _check_conservation() -> tuple[bool, str]:
    worst_h = 0.0
    worst_c = 0.0
    aff = fixtures.aff2_ars()
    traj = integrate(aff, ExtremalState(np.array([1.0, 0.0]), np.array([1.0, 1.0])), 2.0)
    worst_h = max(worst_h, traj.max_drift)
    worst_c = max(worst_c, float(np.max(np.abs(traj.costates[:, 1] - 1.0))))
    heis = fixtures.heisenberg_ideal_ars()
    traj = integrate(heis, ExtremalState(np.zeros(3), np.array([1.0, 0.8, 0.5])), 2.0)
    worst_h = max(worst_h, traj.max_drift)
    worst_c = max(worst_c, float(np.max(np.abs(traj.costates[:, 1] - 0.8))))
    worst_c = max(worst_c, float(np.max(np.abs(traj.costates[:, 2] - 0.5))))
    ok = worst_h <= 1e-8 and worst_c <= 1e-12
    return ok, f"energy drift {worst_h:.2e}, conserved-component drift {worst_c:.2e}"


def _check_field_identities() -> tuple[bool, str]:
    rng = np.random.default_rng(7)
    worst_series = 0.0
    worst_cocycle = 0.0
    heis = fixtures.heisenberg_ideal_ars()
    aff = fixtures.aff2_ars()
    for ars, k_max, tol in [(heis, 3, 1e-14), (aff, 20, 1e-10)]:
        alg = ars.chart.algebra()
        for _ in range(10):
            y = rng.uniform(-1, 1, ars.dim)
            t = rng.uniform(-1, 1)
            direct = ars.field.f_map(ars.chart.exp_map(t * y))
            series = f_series(alg, ars.field.derivation, y, t, k_max)
            worst_series = max(worst_series, float(np.max(np.abs(direct - series))) / tol)
        for _ in range(10):
            g = ars.chart.sample_point(rng)
            gp = ars.chart.sample_point(rng)
            rep = cocycle_check(ars.field, g, gp, rng.uniform(-1, 1, ars.dim), rng.uniform(-1, 1))
            worst_cocycle = max(worst_cocycle, rep.exp_shift_residual, rep.product_residual)
    ok = worst_series <= 1.0 and worst_cocycle <= 1e-9
    return ok, f"series gap {worst_series:.2f}x tolerance, cocycle residual {worst_cocycle:.2e}"


def _check_lift() -> tuple[bool, str]:
    heis = fixtures.heisenberg_ideal_ars()
    lifted = lift(heis)
    c = lifted.algebra.structure
    engel = (
        np.allclose(c[0, 3], [0, 1, 0, 0])
        and np.allclose(c[0, 1], [0, 0, 1, 0])
        and np.allclose(c[1, 3], 0)
        and np.allclose(c[2, 3], 0)
        and np.allclose(c[1, 2], 0)
    )
    if not engel:
        return False, "lifted bracket table is not the expected filiform one"
    state = LiftedState(np.zeros(4), np.array([1.0, 0.8, 0.5, 0.0]))
    ltraj = lifted_integrate(lifted, state, 2.0)
    btraj = integrate(heis, ExtremalState(np.zeros(3), np.array([1.0, 0.8, 0.5])), 2.0)
    proj, report = project(lifted, ltraj)
    gap = float(np.max(np.abs(proj.points - btraj.points)))
    ok = gap <= 1e-9 and report.quadrature_residual <= 1e-8
    return ok, f"s=0 projection gap {gap:.2e}, tau quadrature residual {report.quadrature_residual:.2e}"


def _check_pendulum() -> tuple[bool, str]:
    heis = fixtures.heisenberg_ideal_ars()
    state = ExtremalState(np.zeros(3), np.array([1.0, 0.8, 0.5]))
    rep = heisenberg_pendulum(heis, state, 2.0)
    ok = rep.max_alpha_dev <= 1e-7 and rep.residual <= 1e-6
    return ok, f"reduced vs full gap {rep.max_alpha_dev:.2e}, pendulum residual {rep.residual:.2e}"


CHECKS = [
    ("first returns (closed form vs integration)", _check_first_returns),
    ("singular-locus formulas", _check_locus_formulas),
    ("classification verdict table", _check_classification),
    ("abnormal structure", _check_abnormals),
    ("energy and costate conservation", _check_conservation),
    ("field series and translation identities", _check_field_identities),
    ("desingularization lift", _check_lift),
    ("pendulum reduction", _check_pendulum),
]


def run_all(out=print) -> bool:
    all_ok = True
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failure, not an abort
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        all_ok = all_ok and ok
        out(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    out("verify: all checks passed" if all_ok else "verify: FAILURES present")
    return all_ok
