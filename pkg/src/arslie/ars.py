"""Simple almost-Riemannian structures: construction, singular locus, abnormal algebra.

A structure bundles a group chart, a linear field (via its derivation), and a
codimension-one left-invariant distribution declared orthonormal together
with the field. The locus where the frame drops rank is the zero set of

    psi(g) = < omega, F(g) >,

with omega the annihilator one-form of the distribution and F the field read
in the left-invariant frame. ``classify_locus`` evaluates the sufficient /
necessary criteria that decide whether that zero set is a submanifold, a
subgroup, or only locally a subgroup, and returns the certificates it used.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from . import linalg
from .errors import InvariantViolation, ValidationError
from .group_models import GroupChart, LinearField
from .lie_core import (
    Subspace,
    condition_hz,
    derived_subalgebra,
    normalizer,
    preimage,
    solvability,
    subspace_classify,
)

__all__ = [
    "SimpleArs",
    "build_ars",
    "psi",
    "grad_psi",
    "LocusReport",
    "Verdict",
    "classify_locus",
    "abnormal_algebra",
    "sample_locus",
]

#: |psi| / (1 + |grad psi|) below which a point counts as singular.
LOCUS_TOL = 1e-9


@dataclass(frozen=True)
class SimpleArs:
    """An almost-Riemannian structure given by one linear field and n-1 invariant ones."""

    chart: GroupChart
    field: LinearField
    delta: np.ndarray  # (n-1, n) rows: invariant frame directions in the algebra
    omega: np.ndarray  # annihilator of the distribution, normalized against y_n
    y_n: np.ndarray  # completion vector with <omega, y_n> = 1

    @property
    def dim(self) -> int:
        return self.chart.dim

    @property
    def delta_subspace(self) -> Subspace:
        return Subspace.from_spanning(self.delta, self.dim)

    def psi(self, g: np.ndarray) -> float:
        """Frame-degeneracy function; its zero set is the singular locus."""
        g = self.chart.validate_point(g)
        return float(self.omega @ self.field.f_map(g))

    def grad_psi(self, g: np.ndarray) -> np.ndarray:
        """Differential of psi pulled back to the algebra by left translation."""
        g = self.chart.validate_point(g)
        return self.field.frame_differential(g).T @ self.omega

    def in_locus(self, g: np.ndarray, tol: float = LOCUS_TOL) -> bool:
        """Singularity test with gradient normalization.

        psi can have critical points on its own zero set, so the raw value is
        scaled by 1 + |grad psi| before comparison.
        """
        scale = 1.0 + float(np.linalg.norm(self.grad_psi(g)))
        return abs(self.psi(g)) / scale <= tol

    def frame_rows(self, g: np.ndarray) -> np.ndarray:
        """Chart values of the frame (field first, then the invariant directions)."""
        lg = self.chart.left_jacobian(g)
        rows = [self.field.chart_value(g)]
        rows.extend(lg @ y for y in self.delta)
        return np.array(rows)


def psi(ars: SimpleArs, g: np.ndarray) -> float:
    return ars.psi(g)


def grad_psi(ars: SimpleArs, g: np.ndarray) -> np.ndarray:
    return ars.grad_psi(g)


def _not_everywhere_singular(ars: SimpleArs) -> bool:
    """Sample psi at a fixed spread of points; reject a frame that never has full rank."""
    chart = ars.chart
    probes = []
    for i in range(chart.dim):
        e = np.zeros(chart.dim)
        e[i] = 1.0
        probes.extend(chart.exp_map(t * e) for t in (0.37, 0.73, 1.13))
    for i, j in itertools.combinations(range(chart.dim), 2):
        ei = np.zeros(chart.dim)
        ej = np.zeros(chart.dim)
        ei[i] = 0.61
        ej[j] = 0.47
        probes.append(chart.multiply(chart.exp_map(ei), chart.exp_map(ej)))
    return any(abs(ars.psi(g)) > linalg.TOL for g in probes)


def build_ars(chart: GroupChart, derivation: np.ndarray, delta_basis) -> SimpleArs:
    """Validate and assemble a simple almost-Riemannian structure.

    Checks, in order: the derivation (Leibniz), independence of the
    distribution directions, the one-step rank condition
    span(delta, [delta, delta], D delta) = algebra, and that the frame is not
    singular everywhere.
    """
    n = chart.dim
    field = chart.linear_field(derivation)
    d = field.derivation
    if np.max(np.abs(d)) <= linalg.TOL:
        raise ValidationError("zero derivation: the linear field vanishes identically")

    delta = np.asarray(delta_basis, dtype=float).reshape(-1, n)
    if delta.shape[0] != n - 1:
        raise ValidationError(f"need {n - 1} distribution directions, got {delta.shape[0]}")
    if linalg.rank(delta) != n - 1:
        raise ValidationError("distribution directions are linearly dependent")

    alg = chart.algebra()
    brackets = [alg.bracket(delta[i], delta[j]) for i in range(n - 1) for j in range(i + 1, n - 1)]
    d_delta = [d @ y for y in delta]
    generated = np.vstack([delta] + [np.array(brackets).reshape(-1, n)] + [np.array(d_delta)])
    got = linalg.rank(generated)
    if got != n:
        raise ValidationError(
            "rank condition fails: span(delta + [delta,delta] + D delta) "
            f"has dimension {got} < {n}"
        )

    omega = linalg.null_space(delta)[0]
    row_sp = linalg.row_space(delta)
    y_n_index = None
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        if not linalg.in_row_space(row_sp, e):
            y_n_index = i
            break
    assert y_n_index is not None
    y_n = np.zeros(n)
    y_n[y_n_index] = 1.0
    omega = omega / float(omega @ y_n)

    ars = SimpleArs(chart=chart, field=field, delta=delta, omega=omega, y_n=y_n)
    if not _not_everywhere_singular(ars):
        raise ValidationError("frame is singular at every sampled point (degenerate structure)")
    return ars


@dataclass(frozen=True)
class Verdict:
    rule: str
    applies: bool
    conclusion: str


@dataclass(frozen=True)
class LocusReport:
    delta_subalgebra: bool
    delta_ideal: bool
    solvable: bool
    nilpotent: bool
    d_star_omega: np.ndarray
    z_tangent: Subspace
    kernel_subalgebra: bool
    hz_on_kernel: bool
    numeric_zx_consistent: str  # "consistent" | "inconsistent" | "unsampled"
    flow_fixed_algebra: Subspace
    verdicts: tuple[Verdict, ...] = dataclass_field(default=())

    def verdict(self, rule: str) -> Verdict:
        for v in self.verdicts:
            if v.rule == rule:
                return v
        raise KeyError(rule)


def _span_text(sub: Subspace, labels) -> str:
    if sub.dim == 0:
        return "{0}"
    rows = []
    for b in sub.basis:
        terms = [
            (f"{c:+g}*{labels[i]}" if abs(c - 1.0) > 1e-14 else f"+{labels[i]}")
            for i, c in enumerate(b)
            if abs(c) > 1e-14
        ]
        rows.append("".join(terms).lstrip("+"))
    return "span{" + ", ".join(rows) + "}"


def _numeric_fixed_point_consistency(ars: SimpleArs, box, resolution: int) -> str:
    chart = ars.chart
    if box is None:
        box = chart.default_box()
    if box is None:
        return "unsampled"
    locus_points = sample_locus(ars, box, resolution)
    axes = [np.linspace(lo, hi, resolution) for lo, hi in box]
    field_zeros = []
    for combo in itertools.product(*axes):
        g = np.array(combo)
        if np.linalg.norm(ars.field.chart_value(g)) <= 1e-9:
            field_zeros.append(g)
    if len(locus_points) == 0 and not field_zeros:
        return "unsampled"
    for g in locus_points:
        if np.linalg.norm(ars.field.chart_value(g)) > 1e-6:
            return "inconsistent"
    for g in field_zeros:
        if not ars.in_locus(g):
            return "inconsistent"
    return "consistent"


def classify_locus(ars: SimpleArs, box=None, resolution: int = 21) -> LocusReport:
    """Evaluate the locus criteria and return one verdict per rule.

    Rules, in order: ``submanifold`` (distribution closed under the bracket),
    ``ideal-subgroup`` (distribution is an ideal / the annihilator form is
    closed), ``solvable-subgroup``, ``fixed-point-set`` (sampled comparison of
    the locus with the zeros of the field; evidence, never proof), and
    ``local-subgroup`` (iterated-bracket annihilation on the kernel of the
    pulled-back form: necessary for a subgroup, sufficient near the identity).
    """
    alg = ars.chart.algebra()
    labels = alg.basis_labels
    n = ars.dim
    d = ars.field.derivation
    delta_sub = ars.delta_subspace

    kind = subspace_classify(alg, delta_sub)
    solv = solvability(alg)

    derived_in_delta = delta_sub.contains_subspace(derived_subalgebra(alg))
    if derived_in_delta != kind.is_ideal:
        raise InvariantViolation(
            "ideal test and derived-subalgebra inclusion disagree for a "
            "codimension-one distribution"
        )

    d_star_omega = d.T @ ars.omega
    z_tangent = preimage(d, delta_sub)
    kernel_kind = subspace_classify(alg, z_tangent)
    hz = False
    if kernel_kind.is_subalgebra:
        hz = condition_hz(alg, z_tangent, d, ars.omega)

    numeric = _numeric_fixed_point_consistency(ars, box, resolution)
    fixed_algebra = Subspace(linalg.row_space(linalg.null_space(d)), n)

    verdicts = []

    if kind.is_subalgebra:
        text = (
            "singular locus is an analytic embedded codimension-one submanifold; "
            f"tangent space at the identity is {_span_text(z_tangent, labels)}"
        )
    else:
        text = "no conclusion: the distribution is not a subalgebra"
    verdicts.append(Verdict("submanifold", kind.is_subalgebra, text))

    if kind.is_ideal:
        text = (
            "distribution is an ideal (equivalently the annihilator form is closed); "
            "the locus is a Lie subgroup with algebra "
            f"{_span_text(z_tangent, labels)}"
        )
    else:
        text = "no conclusion: the distribution is not an ideal"
    verdicts.append(Verdict("ideal-subgroup", kind.is_ideal, text))

    solvable_applies = solv.solvable and kind.is_subalgebra
    if solvable_applies:
        text = (
            "solvable algebra with a subalgebra distribution: the locus is a "
            f"codimension-one subgroup with algebra {_span_text(z_tangent, labels)}"
        )
    elif not solv.solvable:
        text = "no conclusion: the algebra is not solvable"
    else:
        text = "no conclusion: the distribution is not a subalgebra"
    verdicts.append(Verdict("solvable-subgroup", solvable_applies, text))

    if numeric == "consistent":
        text = (
            "sampled locus points coincide with sampled zeros of the field; "
            "consistent with the locus being the closed subgroup of flow fixed "
            f"points, whose algebra is ker D = {_span_text(fixed_algebra, labels)} "
            "(sampled evidence, not a proof)"
        )
    elif numeric == "inconsistent":
        text = "sampled locus points include non-stationary points of the field"
    else:
        text = "no sample available on this chart"
    verdicts.append(Verdict("fixed-point-set", numeric == "consistent", text))

    subgroup_claimed = kind.is_ideal or solvable_applies
    local_applies = bool(np.max(np.abs(d_star_omega)) > linalg.TOL) and kernel_kind.is_subalgebra and hz
    if local_applies:
        text = (
            "kernel of the pulled-back form is a subalgebra whose iterated "
            "brackets against its image are annihilated: near the identity the "
            "locus equals the subgroup generated by "
            f"{_span_text(z_tangent, labels)}"
        )
    elif kernel_kind.is_subalgebra and not hz:
        text = (
            "necessary condition fails (iterated brackets escape the "
            "annihilator): the locus is not a subgroup, not even locally "
            "around the identity"
        )
    elif not kernel_kind.is_subalgebra:
        text = (
            "tangent space of the locus at the identity is not a subalgebra, "
            "so the locus cannot be a codimension-one subgroup"
        )
    else:
        text = "pulled-back form vanishes; no local conclusion"
    verdicts.append(Verdict("local-subgroup", local_applies, text))

    if subgroup_claimed and kernel_kind.is_subalgebra and not hz:
        raise InvariantViolation(
            "locus declared a subgroup but the necessary annihilation "
            "condition fails on its algebra"
        )

    return LocusReport(
        delta_subalgebra=kind.is_subalgebra,
        delta_ideal=kind.is_ideal,
        solvable=solv.solvable,
        nilpotent=solv.nilpotent,
        d_star_omega=d_star_omega,
        z_tangent=z_tangent,
        kernel_subalgebra=kernel_kind.is_subalgebra,
        hz_on_kernel=hz,
        numeric_zx_consistent=numeric,
        flow_fixed_algebra=fixed_algebra,
        verdicts=tuple(verdicts),
    )


def abnormal_algebra(ars: SimpleArs) -> Subspace:
    """Intersection delta & normalizer(delta) & D^{-1}(delta).

    Velocity directions of abnormal curves. Verified on the way out: closed
    under the bracket, contained in each factor, of dimension at most n-2
    (exactly n-2 when the distribution is a subalgebra).
    """
    alg = ars.chart.algebra()
    delta_sub = ars.delta_subspace
    norm = normalizer(alg, delta_sub)
    pre = preimage(ars.field.derivation, delta_sub)
    a = delta_sub.intersect(norm).intersect(pre)

    for factor in (delta_sub, norm, pre):
        if not factor.contains_subspace(a):
            raise InvariantViolation("abnormal algebra escapes one of its defining factors")
    for i in range(a.dim):
        for j in range(i + 1, a.dim):
            if not a.contains(alg.bracket(a.basis[i], a.basis[j])):
                raise InvariantViolation("abnormal algebra is not closed under the bracket")
    if a.dim > ars.dim - 2:
        raise InvariantViolation(f"abnormal algebra has dimension {a.dim} > n-2")
    if subspace_classify(alg, delta_sub).is_subalgebra and a.dim != ars.dim - 2:
        raise InvariantViolation(
            "distribution is a subalgebra but the abnormal algebra has "
            f"dimension {a.dim} != n-2"
        )
    return a


def _bisect_zero(f, lo: float, hi: float, flo: float, fhi: float, tol: float = LOCUS_TOL):
    """Sign-change bisection; returns the abscissa once |f| <= tol there."""
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if abs(fm) <= tol or (hi - lo) <= 1e-15 * max(1.0, abs(mid)):
            return mid
        if (flo < 0.0) != (fm < 0.0):
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def sample_locus(ars: SimpleArs, box, resolution: int = 21) -> np.ndarray:
    """Deterministic zero-set extraction on a grid.

    Scans every grid line parallel to a coordinate axis, collects nodes where
    |psi| <= 1e-9 and bisects sign changes between adjacent nodes. Points are
    deduplicated and returned sorted lexicographically; an empty result is
    valid. Only charts whose domain contains coordinate boxes are supported.
    """
    chart = ars.chart
    if chart.default_box() is None:
        raise ValidationError("this chart has no axis-aligned sampling domain")
    if len(box) != chart.coord_dim:
        raise ValidationError(f"box must give one range per coordinate ({chart.coord_dim})")
    if resolution < 2:
        raise ValidationError("resolution must be at least 2")
    axes = [np.linspace(lo, hi, resolution) for lo, hi in box]

    found: set[tuple[float, ...]] = set()

    def record(point: np.ndarray):
        found.add(tuple(float(np.round(c, 12)) for c in point))

    nd = chart.coord_dim
    for axis in range(nd):
        other = [axes[i] for i in range(nd) if i != axis]
        for combo in itertools.product(*other):
            base = np.zeros(nd)
            it = iter(combo)
            for i in range(nd):
                if i != axis:
                    base[i] = next(it)

            def psi_at(s: float) -> float:
                g = base.copy()
                g[axis] = s
                return ars.psi(g)

            values = [psi_at(s) for s in axes[axis]]
            for i, s in enumerate(axes[axis]):
                if abs(values[i]) <= LOCUS_TOL:
                    g = base.copy()
                    g[axis] = s
                    record(g)
            for i in range(len(values) - 1):
                a, b = values[i], values[i + 1]
                if abs(a) <= LOCUS_TOL or abs(b) <= LOCUS_TOL:
                    continue
                if (a < 0.0) != (b < 0.0):
                    s = _bisect_zero(psi_at, float(axes[axis][i]), float(axes[axis][i + 1]), a, b)
                    g = base.copy()
                    g[axis] = s
                    record(g)

    return np.array(sorted(found)) if found else np.zeros((0, nd))
