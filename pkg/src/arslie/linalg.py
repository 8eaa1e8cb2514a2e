"""Small dense linear-algebra kernel shared by the whole package.

Subspace computations (rank, row space, null space) go through one reduced
row-echelon routine with partial pivoting and a single exactness threshold,
so that integer-valued inputs reduce exactly and the resulting bases are
canonical: the same subspace always gets the same basis matrix.

Also hosts the scaling-and-squaring matrix exponential used for group
exponentials and for e^{t ad(Y)} factors.
"""

from __future__ import annotations

import numpy as np

#: Threshold below which a computed entry counts as an exact zero.
TOL = 1e-12


def rref(mat: np.ndarray, tol: float = TOL) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form with partial pivoting.

    Returns the reduced matrix and the list of pivot column indices.
    """
    r = np.array(mat, dtype=float)
    if r.ndim == 1:
        r = r.reshape(1, -1)
    rows, cols = r.shape
    pivots: list[int] = []
    lead = 0
    for col in range(cols):
        if lead >= rows:
            break
        sub = np.abs(r[lead:, col])
        k = int(np.argmax(sub))
        if sub[k] <= tol:
            r[lead:, col][np.abs(r[lead:, col]) <= tol] = 0.0
            continue
        k += lead
        if k != lead:
            r[[lead, k]] = r[[k, lead]]
        r[lead] = r[lead] / r[lead, col]
        for i in range(rows):
            if i != lead and abs(r[i, col]) > 0.0:
                r[i] = r[i] - r[i, col] * r[lead]
        pivots.append(col)
        lead += 1
    r[np.abs(r) <= tol] = 0.0
    return r, pivots


def rank(mat: np.ndarray, tol: float = TOL) -> int:
    if np.size(mat) == 0:
        return 0
    _, pivots = rref(mat, tol)
    return len(pivots)


def row_space(mat: np.ndarray, tol: float = TOL) -> np.ndarray:
    """Canonical basis (as rows) of the row space of ``mat``."""
    mat = np.atleast_2d(np.asarray(mat, dtype=float))
    if mat.size == 0:
        return np.zeros((0, mat.shape[1] if mat.ndim == 2 else 0))
    r, pivots = rref(mat, tol)
    return r[: len(pivots)].copy()


def null_space(mat: np.ndarray, tol: float = TOL) -> np.ndarray:
    """Canonical basis (as rows) of the kernel {x : mat @ x = 0}."""
    mat = np.atleast_2d(np.asarray(mat, dtype=float))
    _, cols = mat.shape
    r, pivots = rref(mat, tol)
    free = [j for j in range(cols) if j not in pivots]
    basis = np.zeros((len(free), cols))
    for row, j in enumerate(free):
        basis[row, j] = 1.0
        for i, p in enumerate(pivots):
            basis[row, p] = -r[i, j]
    return basis


def in_row_space(mat: np.ndarray, vec: np.ndarray, tol: float = TOL) -> bool:
    """Whether ``vec`` lies in the row space of ``mat``."""
    mat = np.atleast_2d(np.asarray(mat, dtype=float))
    if rank(mat, tol) == 0:
        return bool(np.max(np.abs(vec), initial=0.0) <= tol)
    stacked = np.vstack([mat, np.asarray(vec, dtype=float)])
    return rank(stacked, tol) == rank(mat, tol)


# [6/6] Pade coefficients for the matrix exponential.
_PADE6 = (1.0, 1 / 2, 5 / 44, 1 / 66, 1 / 792, 1 / 15840, 1 / 665280)
# Largest scaled norm for which the [6/6] approximant stays below ~1e-13.
_THETA6 = 0.25


def expm(a: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a [6/6] Pade core."""
    a = np.asarray(a, dtype=float)
    norm = np.max(np.sum(np.abs(a), axis=1), initial=0.0)
    squarings = 0
    if norm > _THETA6:
        squarings = int(np.ceil(np.log2(norm / _THETA6)))
        a = a / (2.0**squarings)
    n = a.shape[0]
    ident = np.eye(n)
    a2 = a @ a
    a4 = a2 @ a2
    u = a @ (_PADE6[1] * ident + _PADE6[3] * a2 + _PADE6[5] * a4)
    v = _PADE6[0] * ident + _PADE6[2] * a2 + _PADE6[4] * a4 + _PADE6[6] * (a4 @ a2)
    r = np.linalg.solve(v - u, v + u)
    for _ in range(squarings):
        r = r @ r
    return r
