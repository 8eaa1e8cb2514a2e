"""Almost-Riemannian structures on low-dimensional Lie groups.

Library layout:

* ``lie_core`` -- structure-constant algebra: brackets, derivations, series,
  normalizers, invariant hulls and cores.
* ``group_models`` -- charts for R^n, the affine group, Heisenberg and SL(2),
  with their linear fields, flows and frame-read maps.
* ``ars`` -- structure construction, the singularity function psi, locus
  classification, abnormal algebra, locus sampling.
* ``extremals`` -- normal geodesic integration, closed forms on the affine
  group, wavefronts, abnormal descriptions, the pendulum reduction.
* ``desing`` -- the semidirect-product lift and its projection bookkeeping.
* ``cli`` -- the ``arslie`` command-line front end.
"""

from .ars import SimpleArs, build_ars, classify_locus, abnormal_algebra, sample_locus
from .errors import ArsLieError, InvariantViolation, NumericError, ValidationError
from .extremals import (
    ExtremalState,
    GeodesicTrajectory,
    aff2_closed_form,
    aff2_first_return,
    abnormal_description,
    heisenberg_pendulum,
    integrate,
    maximized_hamiltonian,
    normal_controls,
    wavefront,
)
from .desing import LiftedState, LiftedStructure, lift, lifted_integrate, project
from .group_models import (
    Aff2Chart,
    EuclideanChart,
    HeisenbergChart,
    LinearField,
    Sl2Chart,
    cocycle_check,
    f_series,
)
from .lie_core import LieAlgebraModel, Subspace

__version__ = "0.1.0"

__all__ = [
    "ArsLieError",
    "ValidationError",
    "NumericError",
    "InvariantViolation",
    "LieAlgebraModel",
    "Subspace",
    "EuclideanChart",
    "Aff2Chart",
    "HeisenbergChart",
    "Sl2Chart",
    "LinearField",
    "cocycle_check",
    "f_series",
    "SimpleArs",
    "build_ars",
    "classify_locus",
    "abnormal_algebra",
    "sample_locus",
    "ExtremalState",
    "GeodesicTrajectory",
    "integrate",
    "normal_controls",
    "maximized_hamiltonian",
    "aff2_closed_form",
    "aff2_first_return",
    "abnormal_description",
    "heisenberg_pendulum",
    "wavefront",
    "LiftedState",
    "LiftedStructure",
    "lift",
    "lifted_integrate",
    "project",
    "__version__",
]
