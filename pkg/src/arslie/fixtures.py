"""Ready-made structures on the four built-in groups.

These are the configurations exercised across the test suite and by the
``verify`` command; parameters default to the values whose behaviour is
pinned by the acceptance checks.
"""

from __future__ import annotations

import numpy as np

from .ars import SimpleArs, build_ars
from .group_models import Aff2Chart, EuclideanChart, HeisenbergChart, Sl2Chart


def grushin_plane() -> SimpleArs:
    """Plane with frame {(0, x1), (1, 0)}; singular locus {x1 = 0}."""
    chart = EuclideanChart(2)
    d = np.array([[0.0, 0.0], [1.0, 0.0]])
    return build_ars(chart, d, [[1.0, 0.0]])


def aff2_ars(a: float = 1.0, b: float = 0.0) -> SimpleArs:
    """Affine group with distribution span{X} and derivation X -> aY, Y -> bY.

    The default (a, b) = (1, 0) is the inner field of the Y generator, whose
    geodesics from the singular line {x = 1} have closed forms.
    """
    chart = Aff2Chart()
    d = np.array([[0.0, 0.0], [float(a), float(b)]])
    return build_ars(chart, d, [[1.0, 0.0]])


def heisenberg_ideal_ars(e: float = 0.0) -> SimpleArs:
    """Heisenberg with distribution span{X, Z} (an ideal) and shear X -> Y + eZ.

    Singular locus {x = 0}; with e = 0 this is the pendulum-reduction fixture.
    """
    chart = HeisenbergChart()
    d = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [float(e), 0.0, 0.0]])
    return build_ars(chart, d, [[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])


def heisenberg_quadric_ars(a: float = 0.0, b: float = 0.0, c: float = 1.0) -> SimpleArs:
    """Heisenberg with distribution span{X, Y} and a traceless block derivation.

    Locus {y - c x^2/2 + b y^2/2 + a x y = 0}: a plane for c = 0, otherwise a
    parabolic cylinder glued along it; the local-subgroup criterion flips at
    c = 0.
    """
    chart = HeisenbergChart()
    d = np.array(
        [
            [float(a), float(b), 0.0],
            [float(c), -float(a), 0.0],
            [0.0, 1.0, 0.0],
        ]
    )
    return build_ars(chart, d, [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])


def heisenberg_degenerate_ars(b: float = 1.0, c: float = -1.0) -> SimpleArs:
    """Heisenberg with distribution span{X, Y} and an off-diagonal block derivation.

    Locus {b y^2 = c x^2}: the z-axis for opposite signs of b and c, two
    crossing planes for equal signs, one plane when c = 0.
    """
    chart = HeisenbergChart()
    d = np.array(
        [
            [0.0, float(b), 0.0],
            [float(c), 0.0, 0.0],
            [0.0, 0.0, 0.0],
        ]
    )
    return build_ars(chart, d, [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])


def heisenberg_tangential_ars() -> SimpleArs:
    """Heisenberg fixture whose locus {z = x^2 + x y} is tangent to the distribution
    along a whole parabola."""
    chart = HeisenbergChart()
    d = np.array([[0.0, 0.0, 0.0], [2.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    return build_ars(chart, d, [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])


def heisenberg_ars(derivation, delta=None) -> SimpleArs:
    """Heisenberg with an arbitrary derivation; distribution defaults to span{X, Y}."""
    chart = HeisenbergChart()
    if delta is None:
        delta = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]
    return build_ars(chart, np.asarray(derivation, dtype=float), delta)


def sl2_lower_ars() -> SimpleArs:
    """SL(2) with distribution span{H, X} and the inner field of the lower generator.

    The distribution is a subalgebra but the locus {a = +-1} is only a
    submanifold: its tangent algebra span{X, Y} is not a subalgebra.
    """
    chart = Sl2Chart()
    alg = chart.algebra()
    y = np.array([0.0, 0.0, 1.0])
    d = -alg.ad(y)
    return build_ars(chart, d, [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])


def sl2_upper_ars() -> SimpleArs:
    """SL(2) with distribution span{X, Y} and the inner field of the upper generator.

    The locus {c d = 0} contains the subgroup generated by span{H, X} near the
    identity but is globally not a subgroup.
    """
    chart = Sl2Chart()
    alg = chart.algebra()
    x = np.array([0.0, 1.0, 0.0])
    d = -alg.ad(x)
    return build_ars(chart, d, [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
