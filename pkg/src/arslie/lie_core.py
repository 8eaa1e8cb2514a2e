"""Exact finite-dimensional Lie-algebra computations over structure constants.

Everything here is pure linear algebra on the structure tensor: brackets,
derivations and their Leibniz check, derived/lower-central series,
normalizers, preimages, and the two fixed-point constructions behind the
iterated-bracket annihilation test (``condition_hz``).

Algebra elements and one-forms are plain float arrays of length ``dim``;
subspaces carry a canonical row-echelon basis so equality and membership are
deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import ValidationError

__all__ = [
    "LieAlgebraModel",
    "Subspace",
    "DerivationReport",
    "check_derivation",
    "inner_derivation",
    "solve_inner_generator",
    "derived_subalgebra",
    "normalizer",
    "preimage",
    "subspace_classify",
    "invariant_hull",
    "invariant_core",
    "condition_hz",
    "solvability",
]


@dataclass(frozen=True)
class Subspace:
    """A subspace of the algebra, stored as a canonical row-echelon basis."""

    basis: np.ndarray  # shape (dim_subspace, dim_algebra); rows are basis vectors
    ambient_dim: int

    @classmethod
    def from_spanning(cls, vectors, ambient_dim: int) -> "Subspace":
        arr = np.asarray(vectors, dtype=float).reshape(-1, ambient_dim)
        return cls(linalg.row_space(arr), ambient_dim)

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(np.zeros((0, ambient_dim)), ambient_dim)

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(np.eye(ambient_dim), ambient_dim)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def contains(self, vec: np.ndarray, tol: float = linalg.TOL) -> bool:
        return linalg.in_row_space(self.basis, vec, tol) if self.dim else bool(
            np.max(np.abs(vec), initial=0.0) <= tol
        )

    def contains_subspace(self, other: "Subspace", tol: float = linalg.TOL) -> bool:
        return all(self.contains(v, tol) for v in other.basis)

    def annihilator(self) -> np.ndarray:
        """Canonical basis (rows) of the covectors vanishing on this subspace."""
        if self.dim == 0:
            return np.eye(self.ambient_dim)
        return linalg.null_space(self.basis)

    def intersect(self, other: "Subspace") -> "Subspace":
        stacked = np.vstack([self.annihilator(), other.annihilator()])
        return Subspace(linalg.row_space(linalg.null_space(stacked)), self.ambient_dim)

    def sum(self, other: "Subspace") -> "Subspace":
        return Subspace.from_spanning(
            np.vstack([self.basis, other.basis]), self.ambient_dim
        )

    def equals(self, other: "Subspace", tol: float = linalg.TOL) -> bool:
        return self.dim == other.dim and self.contains_subspace(other, tol)


@dataclass(frozen=True)
class LieAlgebraModel:
    """A Lie algebra given by structure constants: [e_i, e_j] = sum_k c[i,j,k] e_k."""

    dim: int
    basis_labels: tuple[str, ...]
    structure: np.ndarray = field(repr=False)

    def __post_init__(self):
        structure = np.asarray(self.structure, dtype=float)
        object.__setattr__(self, "structure", structure)
        n = self.dim
        if n <= 0:
            raise ValidationError("algebra dimension must be positive")
        if len(self.basis_labels) != n:
            raise ValidationError("need one basis label per dimension")
        if structure.shape != (n, n, n):
            raise ValidationError(f"structure tensor must have shape {(n, n, n)}")
        anti, jacobi = self.structure_residuals()
        if anti > linalg.TOL:
            raise ValidationError(f"structure constants are not antisymmetric (residual {anti:.3e})")
        if jacobi > linalg.TOL:
            raise ValidationError(f"structure constants violate the Jacobi identity (residual {jacobi:.3e})")

    def structure_residuals(self) -> tuple[float, float]:
        """Max antisymmetry and Jacobi residuals of the structure tensor."""
        c = self.structure
        anti = float(np.max(np.abs(c + c.transpose(1, 0, 2)), initial=0.0))
        # [[e_i,e_j],e_k] = sum_m c[i,j,m] c[m,k,:]
        t = np.einsum("ijm,mkl->ijkl", c, c)
        jac = t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3)
        return anti, float(np.max(np.abs(jac), initial=0.0))

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.shape != (self.dim,) or y.shape != (self.dim,):
            raise ValidationError(f"bracket arguments must be vectors of length {self.dim}")
        return np.einsum("i,j,ijk->k", x, y, self.structure)

    def ad(self, x: np.ndarray) -> np.ndarray:
        """Matrix of ad(x): column j holds the coordinates of [x, e_j]."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ValidationError(f"ad argument must be a vector of length {self.dim}")
        return np.einsum("i,ijk->kj", x, self.structure)

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim)
        v[i] = 1.0
        return v


def bracket(alg: LieAlgebraModel, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return alg.bracket(x, y)


@dataclass(frozen=True)
class DerivationReport:
    max_residual: float
    passed: bool
    worst_pair: tuple[int, int]


def check_derivation(alg: LieAlgebraModel, d: np.ndarray, tol: float = linalg.TOL) -> DerivationReport:
    """Leibniz check D[x,y] = [Dx,y] + [x,Dy] over all basis pairs."""
    d = np.asarray(d, dtype=float)
    if d.shape != (alg.dim, alg.dim):
        raise ValidationError(f"derivation matrix must be {alg.dim}x{alg.dim}")
    worst = 0.0
    worst_pair = (0, 0)
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            ei, ej = alg.basis_vector(i), alg.basis_vector(j)
            res = d @ alg.bracket(ei, ej) - alg.bracket(d @ ei, ej) - alg.bracket(ei, d @ ej)
            r = float(np.max(np.abs(res), initial=0.0))
            if r > worst:
                worst, worst_pair = r, (i, j)
    return DerivationReport(worst, worst <= tol, worst_pair)


def inner_derivation(alg: LieAlgebraModel, x: np.ndarray) -> np.ndarray:
    """The derivation -ad(x) attached to the algebra element x."""
    return -alg.ad(x)


def solve_inner_generator(alg: LieAlgebraModel, d: np.ndarray, tol: float = 1e-10) -> np.ndarray | None:
    """Find x with d = -ad(x), or None when d is not inner.

    Solves the least-squares system column by column; the generator is unique
    up to the center of the algebra, and the minimum-norm solution is returned.
    """
    d = np.asarray(d, dtype=float)
    n = alg.dim
    # -ad(x)[k, j] = -sum_i x_i c[i, j, k]
    a = -alg.structure.transpose(2, 1, 0).reshape(n * n, n)
    x, *_ = np.linalg.lstsq(a, d.reshape(n * n), rcond=None)
    if np.max(np.abs(-alg.ad(x) - d)) > tol:
        return None
    return x


def derived_subalgebra(alg: LieAlgebraModel) -> Subspace:
    """Span of all brackets of basis vectors."""
    vecs = [
        alg.structure[i, j]
        for i in range(alg.dim)
        for j in range(i + 1, alg.dim)
    ]
    if not vecs:
        return Subspace.zero(alg.dim)
    return Subspace.from_spanning(np.array(vecs), alg.dim)


def normalizer(alg: LieAlgebraModel, delta: Subspace) -> Subspace:
    """{y : [y, delta] is contained in delta}, via a kernel computation.

    For each basis vector b of delta the condition reads Q ad(b) y = 0 where
    Q spans the annihilator of delta (note [y, b] = -ad(b) y).
    """
    if delta.dim == 0 or delta.dim == alg.dim:
        return Subspace.full(alg.dim)
    q = delta.annihilator()
    blocks = [q @ (-alg.ad(b)) for b in delta.basis]
    return Subspace(linalg.row_space(linalg.null_space(np.vstack(blocks))), alg.dim)


def preimage(d: np.ndarray, delta: Subspace) -> Subspace:
    """{y : d @ y lies in delta}."""
    d = np.asarray(d, dtype=float)
    q = delta.annihilator()
    if q.shape[0] == 0:
        return Subspace.full(delta.ambient_dim)
    return Subspace(linalg.row_space(linalg.null_space(q @ d)), delta.ambient_dim)


@dataclass(frozen=True)
class SubspaceKind:
    is_subalgebra: bool
    is_ideal: bool


def subspace_classify(alg: LieAlgebraModel, delta: Subspace) -> SubspaceKind:
    """Bracket closure of delta within itself and within the whole algebra."""
    sub = all(
        delta.contains(alg.bracket(delta.basis[i], delta.basis[j]))
        for i in range(delta.dim)
        for j in range(i + 1, delta.dim)
    )
    ideal = all(
        delta.contains(alg.bracket(alg.basis_vector(k), b))
        for k in range(alg.dim)
        for b in delta.basis
    )
    return SubspaceKind(is_subalgebra=sub, is_ideal=ideal)


def invariant_hull(alg: LieAlgebraModel, h: Subspace, seed: Subspace) -> Subspace:
    """Smallest ad(h)-invariant subspace containing seed.

    Fixed point of V <- V + [h, V]; terminates in at most dim steps and equals
    the span of all iterated brackets ad(z_1)...ad(z_m) s with z_i in h.
    """
    current = Subspace.from_spanning(seed.basis, alg.dim) if seed.dim else Subspace.zero(alg.dim)
    while True:
        new_vecs = [
            alg.bracket(z, v) for z in h.basis for v in current.basis
        ]
        if not new_vecs:
            return current
        grown = Subspace.from_spanning(
            np.vstack([current.basis, np.array(new_vecs)]), alg.dim
        )
        if grown.dim == current.dim:
            return current
        current = grown


def invariant_core(alg: LieAlgebraModel, h: Subspace, delta: Subspace) -> Subspace:
    """Largest ad(h)-invariant subspace contained in delta.

    Fixed point of V <- {x in V : [h, x] in V}, starting from V = delta.
    """
    current = delta
    while current.dim > 0:
        q = current.annihilator()
        blocks = [q @ alg.ad(z) @ current.basis.T for z in h.basis]
        if not blocks:
            return current
        coeff_kernel = linalg.null_space(np.vstack(blocks))
        refined_basis = coeff_kernel @ current.basis
        refined = Subspace.from_spanning(refined_basis, alg.dim) if coeff_kernel.size else Subspace.zero(alg.dim)
        if refined.dim == current.dim:
            return current
        current = refined
    return current


def condition_hz(
    alg: LieAlgebraModel,
    h: Subspace,
    d: np.ndarray,
    omega: np.ndarray,
    tol: float = linalg.TOL,
) -> bool:
    """Iterated-bracket annihilation test for a subalgebra h.

    True when every vector of the form ad(z_1)...ad(z_m) d y, with y and all
    z_i in h, is annihilated by omega. The unbounded word length is replaced
    by the (equivalent, finite) invariant hull of d(h) under ad(h).
    """
    kind = subspace_classify(alg, h)
    if not kind.is_subalgebra:
        raise ValidationError("condition_hz requires a subalgebra")
    d = np.asarray(d, dtype=float)
    seed = Subspace.from_spanning(np.array([d @ y for y in h.basis]), alg.dim) if h.dim else Subspace.zero(alg.dim)
    hull = invariant_hull(alg, h, seed)
    omega = np.asarray(omega, dtype=float)
    return all(abs(float(omega @ v)) <= tol for v in hull.basis)


@dataclass(frozen=True)
class SolvabilityReport:
    solvable: bool
    nilpotent: bool


def solvability(alg: LieAlgebraModel) -> SolvabilityReport:
    """Whether the derived series / lower central series reach zero."""

    def bracket_span(a: Subspace, b: Subspace) -> Subspace:
        vecs = [alg.bracket(x, y) for x in a.basis for y in b.basis]
        if not vecs:
            return Subspace.zero(alg.dim)
        return Subspace.from_spanning(np.array(vecs), alg.dim)

    full = Subspace.full(alg.dim)

    series = full
    for _ in range(alg.dim + 1):
        nxt = bracket_span(series, series)
        if nxt.dim == series.dim:
            break
        series = nxt
    solvable = series.dim == 0

    central = full
    for _ in range(alg.dim + 1):
        nxt = bracket_span(full, central)
        if nxt.dim == central.dim:
            break
        central = nxt
    nilpotent = central.dim == 0

    return SolvabilityReport(solvable=solvable, nilpotent=nilpotent)
