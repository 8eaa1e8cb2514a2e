"""Coordinate charts for the supported groups and their distinguished vector fields.

Each chart exposes the group law, exponential, the left-translation
differential ``left_jacobian`` (algebra coordinates -> chart tangent
coordinates), the adjoint action, and a factory producing the chart's
``LinearField`` from a derivation matrix.

The central object attached to a linear field is the map ``f_map`` sending a
group point g to the algebra element obtained by reading the field at g in
the left-invariant frame. All singular-locus and geodesic computations are
built on it.

Charts:

* ``EuclideanChart(n)`` -- the abelian group R^n.
* ``Aff2Chart`` -- the identity component of the 2D affine group, points
  (x, y) with x > 0 standing for the matrix ((x, y), (0, 1)).
* ``HeisenbergChart`` -- upper unitriangular 3x3 matrices, points (x, y, z).
* ``Sl2Chart`` -- 2x2 matrices of determinant one stored entrywise
  (a, b, c, d); the determinant is renormalized after integrator steps.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod

import numpy as np

from . import linalg
from .errors import NumericError, ValidationError
from .lie_core import (
    DerivationReport,
    LieAlgebraModel,
    check_derivation,
    solve_inner_generator,
)

__all__ = [
    "GroupChart",
    "EuclideanChart",
    "Aff2Chart",
    "HeisenbergChart",
    "Sl2Chart",
    "LinearField",
    "f_map",
    "linear_field_at",
    "f_series",
    "cocycle_check",
    "flow",
]


class GroupChart(ABC):
    """Interface of a concrete coordinate chart on a Lie group."""

    dim: int
    coord_dim: int
    coord_names: tuple[str, ...]
    covector_names: tuple[str, ...]

    @abstractmethod
    def algebra(self) -> LieAlgebraModel: ...

    @abstractmethod
    def identity(self) -> np.ndarray: ...

    @abstractmethod
    def multiply(self, g: np.ndarray, h: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def inverse(self, g: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def exp_map(self, y: np.ndarray) -> np.ndarray: ...

    def log_map(self, g: np.ndarray) -> np.ndarray:
        raise NotImplementedError(f"{type(self).__name__} has no global logarithm")

    @property
    def has_log(self) -> bool:
        return type(self).log_map is not GroupChart.log_map

    @abstractmethod
    def left_jacobian(self, g: np.ndarray) -> np.ndarray:
        """Matrix sending algebra coordinates to chart tangent coordinates at g."""

    @abstractmethod
    def left_jacobian_inv(self, g: np.ndarray) -> np.ndarray:
        """Left inverse of ``left_jacobian``: chart tangent -> algebra coordinates."""

    @abstractmethod
    def left_jacobian_grad(self) -> np.ndarray:
        """Constant tensor T[i, j, k] = d left_jacobian[i, j] / d g_k.

        Exact for all built-in charts because their ``left_jacobian`` entries
        are affine in the chart coordinates.
        """

    @abstractmethod
    def adjoint(self, g: np.ndarray) -> np.ndarray: ...

    def validate_point(self, g: np.ndarray) -> np.ndarray:
        g = np.asarray(g, dtype=float)
        if g.shape != (self.coord_dim,):
            raise ValidationError(
                f"point must have {self.coord_dim} coordinates, got shape {g.shape}"
            )
        return g

    def normalize_point(self, g: np.ndarray) -> np.ndarray:
        """Project accumulated integrator drift back onto the chart constraints."""
        return g

    def guard_point(self, g: np.ndarray, t: float | None = None) -> None:
        """Raise NumericError when an integrated point left the chart domain."""

    def default_box(self) -> list[tuple[float, float]] | None:
        """Axis-aligned sampling box inside the chart domain, if one exists."""
        return None

    @abstractmethod
    def linear_field(self, derivation: np.ndarray) -> "LinearField": ...

    def sample_point(self, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
        """A generic valid point, as the product of two exponentials."""
        a = self.exp_map(scale * rng.standard_normal(self.dim))
        b = self.exp_map(scale * rng.standard_normal(self.dim))
        return self.multiply(a, b)

    def _validated_derivation(self, derivation: np.ndarray) -> np.ndarray:
        d = np.asarray(derivation, dtype=float)
        report: DerivationReport = check_derivation(self.algebra(), d)
        if not report.passed:
            raise ValidationError(
                "matrix is not a derivation of the algebra "
                f"(Leibniz residual {report.max_residual:.3e} on basis pair {report.worst_pair})"
            )
        return d


class LinearField:
    """A vector field whose flow acts by group automorphisms, given by its derivation.

    Subclasses supply the closed-form chart evaluation; everything else
    (frame reading, flow, Jacobians) is shared.
    """

    def __init__(self, chart: GroupChart, derivation: np.ndarray):
        self.chart = chart
        self.derivation = np.array(derivation, dtype=float)
        self._inner_generator = solve_inner_generator(chart.algebra(), self.derivation)

    @property
    def inner_generator(self) -> np.ndarray | None:
        """x with derivation = -ad(x), when the derivation is inner."""
        return self._inner_generator

    def f_map(self, g: np.ndarray) -> np.ndarray:
        """Field at g read in the left-invariant frame (an algebra element)."""
        raise NotImplementedError

    def chart_value(self, g: np.ndarray) -> np.ndarray:
        """Field at g in chart tangent coordinates."""
        return self.chart.left_jacobian(g) @ self.f_map(g)

    def chart_jacobian(self, g: np.ndarray) -> np.ndarray:
        """Derivative of ``chart_value`` with respect to the chart coordinates."""
        raise NotImplementedError

    def frame_differential(self, g: np.ndarray) -> np.ndarray:
        """The derivative of f_map at g, pulled back to the algebra.

        Returns the matrix D + ad(F(g)); pairing a covector against it gives
        the differential of frame-read quantities along left-translated
        directions.
        """
        alg = self.chart.algebra()
        return self.derivation + alg.ad(self.f_map(g))

    def flow(self, g: np.ndarray, t: float, method: str = "auto") -> np.ndarray:
        """Flow the field for time t starting at g.

        ``auto`` uses the conjugation formula for inner derivations, else the
        exponential-coordinates formula on charts with a global logarithm,
        else a fixed-step RK4 fallback.
        """
        chart = self.chart
        g = chart.validate_point(g)
        if method not in ("auto", "closed", "rk4"):
            raise ValidationError(f"unknown flow method {method!r}")
        if method != "rk4":
            if self._inner_generator is not None:
                ex = chart.exp_map(t * self._inner_generator)
                ex_inv = chart.exp_map(-t * self._inner_generator)
                return chart.multiply(chart.multiply(ex_inv, g), ex)
            if chart.has_log:
                return chart.exp_map(linalg.expm(t * self.derivation) @ chart.log_map(g))
            if method == "closed":
                raise ValidationError("no closed-form flow available for this field")
        steps = max(1, int(math.ceil(abs(t) / 1e-3)))
        h = t / steps
        cur = g
        for _ in range(steps):
            k1 = self.chart_value(cur)
            k2 = self.chart_value(chart.normalize_point(cur + 0.5 * h * k1))
            k3 = self.chart_value(chart.normalize_point(cur + 0.5 * h * k2))
            k4 = self.chart_value(chart.normalize_point(cur + h * k3))
            cur = chart.normalize_point(cur + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4))
            chart.guard_point(cur)
        return cur


def f_map(field: LinearField, g: np.ndarray) -> np.ndarray:
    return field.f_map(field.chart.validate_point(g))


def linear_field_at(field: LinearField, g: np.ndarray) -> np.ndarray:
    return field.chart_value(field.chart.validate_point(g))


def flow(field: LinearField, g: np.ndarray, t: float, method: str = "auto") -> np.ndarray:
    return field.flow(g, t, method)


def f_series(
    alg: LieAlgebraModel,
    d: np.ndarray,
    y: np.ndarray,
    t: float,
    k_max: int,
) -> np.ndarray:
    """Partial sum of the frame-read field along exp(t y).

    Sums (-1)^(k-1) t^k / k! ad(y)^(k-1) d y for k = 1..k_max; the series
    terminates for nilpotent algebras once the iterated bracket dies.
    """
    if k_max < 1:
        raise ValidationError("k_max must be at least 1")
    y = np.asarray(y, dtype=float)
    word = np.asarray(d, dtype=float) @ y
    ad_y = alg.ad(y)
    acc = np.zeros(alg.dim)
    coeff = 1.0
    for k in range(1, k_max + 1):
        coeff *= t / k
        acc = acc + ((-1.0) ** (k - 1)) * coeff * word
        word = ad_y @ word
    return acc


class CocycleReport:
    """Residuals of the two translation identities satisfied by f_map."""

    def __init__(self, exp_shift_residual: float, product_residual: float, tol: float = 1e-9):
        self.exp_shift_residual = exp_shift_residual
        self.product_residual = product_residual
        self.passed = max(exp_shift_residual, product_residual) <= tol

    def __repr__(self):
        return (
            f"CocycleReport(exp_shift={self.exp_shift_residual:.3e}, "
            f"product={self.product_residual:.3e}, passed={self.passed})"
        )


def cocycle_check(
    field: LinearField,
    g: np.ndarray,
    g_prime: np.ndarray,
    y: np.ndarray,
    t: float,
    tol: float = 1e-9,
) -> CocycleReport:
    """Check F(g exp(ty)) = F(exp ty) + e^(-t ad y) F(g) and the product identity
    F(g' g) = F(g) + Ad(g^-1) F(g')."""
    chart = field.chart
    alg = chart.algebra()
    g = chart.validate_point(g)
    g_prime = chart.validate_point(g_prime)
    y = np.asarray(y, dtype=float)

    lhs1 = field.f_map(chart.multiply(g, chart.exp_map(t * y)))
    rhs1 = field.f_map(chart.exp_map(t * y)) + linalg.expm(-t * alg.ad(y)) @ field.f_map(g)
    res1 = float(np.max(np.abs(lhs1 - rhs1), initial=0.0))

    lhs2 = field.f_map(chart.multiply(g_prime, g))
    rhs2 = field.f_map(g) + chart.adjoint(chart.inverse(g)) @ field.f_map(g_prime)
    res2 = float(np.max(np.abs(lhs2 - rhs2), initial=0.0))

    return CocycleReport(res1, res2, tol)


# ---------------------------------------------------------------------------
# R^n
# ---------------------------------------------------------------------------


class EuclideanChart(GroupChart):
    """The abelian group R^n; exponential and logarithm are the identity."""

    def __init__(self, n: int):
        if n < 1:
            raise ValidationError("dimension must be at least 1")
        self.dim = n
        self.coord_dim = n
        self.coord_names = tuple(f"x{i + 1}" for i in range(n))
        self.covector_names = tuple(f"p{i + 1}" for i in range(n))
        self._algebra = LieAlgebraModel(
            dim=n,
            basis_labels=tuple(f"e{i + 1}" for i in range(n)),
            structure=np.zeros((n, n, n)),
        )

    def algebra(self):
        return self._algebra

    def identity(self):
        return np.zeros(self.dim)

    def multiply(self, g, h):
        return np.asarray(g, dtype=float) + np.asarray(h, dtype=float)

    def inverse(self, g):
        return -np.asarray(g, dtype=float)

    def exp_map(self, y):
        return np.array(y, dtype=float)

    def log_map(self, g):
        return np.array(g, dtype=float)

    def left_jacobian(self, g):
        return np.eye(self.dim)

    def left_jacobian_inv(self, g):
        return np.eye(self.dim)

    def left_jacobian_grad(self):
        return np.zeros((self.dim, self.dim, self.dim))

    def adjoint(self, g):
        return np.eye(self.dim)

    def default_box(self):
        return [(-1.0, 1.0)] * self.dim

    def linear_field(self, derivation):
        return _EuclideanLinearField(self, self._validated_derivation(derivation))


class _EuclideanLinearField(LinearField):
    def f_map(self, g):
        return self.derivation @ np.asarray(g, dtype=float)

    def chart_value(self, g):
        return self.derivation @ np.asarray(g, dtype=float)

    def chart_jacobian(self, g):
        return self.derivation


# ---------------------------------------------------------------------------
# Aff+(2)
# ---------------------------------------------------------------------------


def _expm1_over(a: float) -> float:
    """(e^a - 1)/a, stable near a = 0."""
    if abs(a) < 1e-8:
        return 1.0 + a / 2.0 + a * a / 6.0
    return math.expm1(a) / a


class Aff2Chart(GroupChart):
    """Identity component of the affine group of the line.

    Points (x, y), x > 0, standing for ((x, y), (0, 1)); algebra basis
    (X, Y) with [X, Y] = Y.
    """

    dim = 2
    coord_dim = 2
    coord_names = ("x", "y")
    covector_names = ("p", "q")

    #: trajectories are aborted once x drops to this level
    X_FLOOR = 1e-12

    def __init__(self):
        structure = np.zeros((2, 2, 2))
        structure[0, 1, 1] = 1.0
        structure[1, 0, 1] = -1.0
        self._algebra = LieAlgebraModel(2, ("X", "Y"), structure)

    def algebra(self):
        return self._algebra

    def identity(self):
        return np.array([1.0, 0.0])

    def validate_point(self, g):
        g = super().validate_point(g)
        if g[0] <= 0.0:
            raise ValidationError(f"chart requires x > 0, got x = {g[0]!r}")
        return g

    def guard_point(self, g, t=None):
        if g[0] <= self.X_FLOOR:
            raise NumericError(f"trajectory hit the chart boundary x <= {self.X_FLOOR}", t)

    def multiply(self, g, h):
        g = np.asarray(g, dtype=float)
        h = np.asarray(h, dtype=float)
        return np.array([g[0] * h[0], g[0] * h[1] + g[1]])

    def inverse(self, g):
        g = np.asarray(g, dtype=float)
        return np.array([1.0 / g[0], -g[1] / g[0]])

    def exp_map(self, y):
        a, b = float(y[0]), float(y[1])
        return np.array([math.exp(a), b * _expm1_over(a)])

    def log_map(self, g):
        g = self.validate_point(g)
        a = math.log(g[0])
        return np.array([a, g[1] / _expm1_over(a)])

    def left_jacobian(self, g):
        return float(g[0]) * np.eye(2)

    def left_jacobian_inv(self, g):
        return np.eye(2) / float(g[0])

    def left_jacobian_grad(self):
        t = np.zeros((2, 2, 2))
        t[0, 0, 0] = 1.0
        t[1, 1, 0] = 1.0
        return t

    def adjoint(self, g):
        x, y = float(g[0]), float(g[1])
        return np.array([[1.0, 0.0], [-y, x]])

    def default_box(self):
        return [(0.2, 2.2), (-1.0, 1.0)]

    def linear_field(self, derivation):
        return _Aff2LinearField(self, self._validated_derivation(derivation))


class _Aff2LinearField(LinearField):
    """Field row (0, a(x-1) + b y); every derivation here is inner."""

    def __init__(self, chart, derivation):
        super().__init__(chart, derivation)
        self._a = float(self.derivation[1, 0])
        self._b = float(self.derivation[1, 1])

    def f_map(self, g):
        x, y = float(g[0]), float(g[1])
        return np.array([0.0, (self._a * (x - 1.0) + self._b * y) / x])

    def chart_value(self, g):
        x, y = float(g[0]), float(g[1])
        return np.array([0.0, self._a * (x - 1.0) + self._b * y])

    def chart_jacobian(self, g):
        return np.array([[0.0, 0.0], [self._a, self._b]])


# ---------------------------------------------------------------------------
# Heisenberg
# ---------------------------------------------------------------------------


class HeisenbergChart(GroupChart):
    """Simply connected Heisenberg group in exponential-adjacent coordinates.

    Points (x, y, z) stand for the unitriangular matrix with x, y on the
    superdiagonal and z in the corner; algebra basis (X, Y, Z), [X, Y] = Z.
    """

    dim = 3
    coord_dim = 3
    coord_names = ("x", "y", "z")
    covector_names = ("p", "q", "r")

    def __init__(self):
        structure = np.zeros((3, 3, 3))
        structure[0, 1, 2] = 1.0
        structure[1, 0, 2] = -1.0
        self._algebra = LieAlgebraModel(3, ("X", "Y", "Z"), structure)

    def algebra(self):
        return self._algebra

    def identity(self):
        return np.zeros(3)

    def multiply(self, g, h):
        g = np.asarray(g, dtype=float)
        h = np.asarray(h, dtype=float)
        return np.array([g[0] + h[0], g[1] + h[1], g[2] + h[2] + g[0] * h[1]])

    def inverse(self, g):
        g = np.asarray(g, dtype=float)
        return np.array([-g[0], -g[1], -g[2] + g[0] * g[1]])

    def exp_map(self, y):
        a, b, c = (float(v) for v in y)
        return np.array([a, b, c + 0.5 * a * b])

    def log_map(self, g):
        x, y, z = (float(v) for v in g)
        return np.array([x, y, z - 0.5 * x * y])

    def left_jacobian(self, g):
        m = np.eye(3)
        m[2, 1] = float(g[0])
        return m

    def left_jacobian_inv(self, g):
        m = np.eye(3)
        m[2, 1] = -float(g[0])
        return m

    def left_jacobian_grad(self):
        t = np.zeros((3, 3, 3))
        t[2, 1, 0] = 1.0
        return t

    def adjoint(self, g):
        x, y, _ = (float(v) for v in g)
        m = np.eye(3)
        m[2, 0] = -y
        m[2, 1] = x
        return m

    def default_box(self):
        return [(-1.0, 1.0)] * 3

    def linear_field(self, derivation):
        return _HeisenbergLinearField(self, self._validated_derivation(derivation))


class _HeisenbergLinearField(LinearField):
    """Closed-form field for the general Heisenberg derivation.

    The Leibniz rule forces the matrix shape ((a, b, 0), (c, d, 0),
    (e, f, a+d)); the coefficients are read off after validation.
    """

    def __init__(self, chart, derivation):
        super().__init__(chart, derivation)
        d = self.derivation
        self._a, self._b = d[0, 0], d[0, 1]
        self._c, self._d = d[1, 0], d[1, 1]
        self._e, self._f = d[2, 0], d[2, 1]

    def f_map(self, g):
        x, y, z = (float(v) for v in g)
        a, b, c, d, e, f = self._a, self._b, self._c, self._d, self._e, self._f
        return np.array(
            [
                a * x + b * y,
                c * x + d * y,
                e * x + f * y + (a + d) * z - 0.5 * c * x * x + 0.5 * b * y * y - d * x * y,
            ]
        )

    def chart_value(self, g):
        x, y, z = (float(v) for v in g)
        a, b, c, d, e, f = self._a, self._b, self._c, self._d, self._e, self._f
        return np.array(
            [
                a * x + b * y,
                c * x + d * y,
                e * x + f * y + (a + d) * z + 0.5 * c * x * x + 0.5 * b * y * y,
            ]
        )

    def chart_jacobian(self, g):
        x, y, _ = (float(v) for v in g)
        a, b, c, d, e, f = self._a, self._b, self._c, self._d, self._e, self._f
        return np.array(
            [
                [a, b, 0.0],
                [c, d, 0.0],
                [e + c * x, f + b * y, a + d],
            ]
        )


# ---------------------------------------------------------------------------
# SL(2, R)
# ---------------------------------------------------------------------------

_SL2_H = np.array([[1.0, 0.0], [0.0, -1.0]])
_SL2_X = np.array([[0.0, 1.0], [0.0, 0.0]])
_SL2_Y = np.array([[0.0, 0.0], [1.0, 0.0]])
_SL2_BASIS = (_SL2_H, _SL2_X, _SL2_Y)


def _sl2_coeffs(w: np.ndarray) -> np.ndarray:
    """Coordinates of a (numerically) traceless 2x2 matrix in the (H, X, Y) basis."""
    return np.array([0.5 * (w[0, 0] - w[1, 1]), w[0, 1], w[1, 0]])


def _sl2_matrix(v: np.ndarray) -> np.ndarray:
    return v[0] * _SL2_H + v[1] * _SL2_X + v[2] * _SL2_Y


class Sl2Chart(GroupChart):
    """2x2 real matrices of determinant one, stored entrywise (a, b, c, d).

    The chart has four coordinates for a three-dimensional group; the
    determinant constraint is restored by ``normalize_point`` after every
    integration step.
    """

    dim = 3
    coord_dim = 4
    coord_names = ("a", "b", "c", "d")
    covector_names = ("pa", "pb", "pc", "pd")

    DET_TOL = 1e-8

    def __init__(self):
        structure = np.zeros((3, 3, 3))
        # [H, X] = 2X, [H, Y] = -2Y, [X, Y] = H
        structure[0, 1, 1] = 2.0
        structure[1, 0, 1] = -2.0
        structure[0, 2, 2] = -2.0
        structure[2, 0, 2] = 2.0
        structure[1, 2, 0] = 1.0
        structure[2, 1, 0] = -1.0
        self._algebra = LieAlgebraModel(3, ("H", "X", "Y"), structure)

    @staticmethod
    def mat(g: np.ndarray) -> np.ndarray:
        return np.asarray(g, dtype=float).reshape(2, 2)

    @staticmethod
    def unmat(m: np.ndarray) -> np.ndarray:
        return np.asarray(m, dtype=float).reshape(4)

    def algebra(self):
        return self._algebra

    def identity(self):
        return np.array([1.0, 0.0, 0.0, 1.0])

    def validate_point(self, g):
        g = GroupChart.validate_point(self, g)
        det = g[0] * g[3] - g[1] * g[2]
        if abs(det - 1.0) > self.DET_TOL:
            raise ValidationError(f"point has determinant {det!r}, expected 1")
        return g

    def normalize_point(self, g):
        det = g[0] * g[3] - g[1] * g[2]
        if det <= 0.0:
            raise NumericError("determinant collapsed during integration")
        return g / math.sqrt(det)

    def multiply(self, g, h):
        return self.unmat(self.mat(g) @ self.mat(h))

    def inverse(self, g):
        g = np.asarray(g, dtype=float)
        return np.array([g[3], -g[1], -g[2], g[0]])

    def exp_map(self, y):
        return self.unmat(linalg.expm(_sl2_matrix(np.asarray(y, dtype=float))))

    def left_jacobian(self, g):
        gm = self.mat(g)
        return np.column_stack([self.unmat(gm @ b) for b in _SL2_BASIS])

    def left_jacobian_inv(self, g):
        gm_inv = self.mat(self.inverse(g))
        cols = []
        for k in range(4):
            e = np.zeros(4)
            e[k] = 1.0
            cols.append(_sl2_coeffs(gm_inv @ self.mat(e)))
        return np.column_stack(cols)

    def left_jacobian_grad(self):
        t = np.zeros((4, 3, 4))
        for k in range(4):
            e = np.zeros(4)
            e[k] = 1.0
            em = self.mat(e)
            for j, b in enumerate(_SL2_BASIS):
                t[:, j, k] = self.unmat(em @ b)
        return t

    def adjoint(self, g):
        gm = self.mat(g)
        gm_inv = self.mat(self.inverse(g))
        return np.column_stack([_sl2_coeffs(gm @ b @ gm_inv) for b in _SL2_BASIS])

    def linear_field(self, derivation):
        d = self._validated_derivation(derivation)
        return _Sl2LinearField(self, d)


class _Sl2LinearField(LinearField):
    """Inner field g -> g x0 - x0 g; non-inner derivations are rejected."""

    def __init__(self, chart, derivation):
        super().__init__(chart, derivation)
        if self._inner_generator is None:
            raise ValidationError(
                "derivation is not inner; only inner derivations exist here, "
                "so the matrix is inconsistent with the structure constants"
            )
        self._x0_mat = _sl2_matrix(self._inner_generator)
        jac = np.zeros((4, 4))
        for k in range(4):
            e = np.zeros(4)
            e[k] = 1.0
            em = Sl2Chart.mat(e)
            jac[:, k] = Sl2Chart.unmat(em @ self._x0_mat - self._x0_mat @ em)
        self._jac = jac

    def f_map(self, g):
        inv = self.chart.inverse(g)
        return self._inner_generator - self.chart.adjoint(inv) @ self._inner_generator

    def chart_value(self, g):
        gm = Sl2Chart.mat(g)
        return Sl2Chart.unmat(gm @ self._x0_mat - self._x0_mat @ gm)

    def chart_jacobian(self, g):
        return self._jac
