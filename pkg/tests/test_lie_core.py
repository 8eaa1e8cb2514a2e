import numpy as np
import pytest

from arslie.errors import ValidationError
from arslie.group_models import Aff2Chart, EuclideanChart, HeisenbergChart, Sl2Chart
from arslie.lie_core import (
    LieAlgebraModel,
    Subspace,
    check_derivation,
    condition_hz,
    derived_subalgebra,
    inner_derivation,
    invariant_core,
    invariant_hull,
    normalizer,
    preimage,
    solvability,
    solve_inner_generator,
    subspace_classify,
)

HEIS = HeisenbergChart().algebra()
SL2 = Sl2Chart().algebra()
AFF2 = Aff2Chart().algebra()
ABELIAN = EuclideanChart(3).algebra()
ALGEBRAS = [HEIS, SL2, AFF2, ABELIAN]

X, Y, Z = np.eye(3)


def heis_derivation(a=0.0, b=0.0, c=0.0, d=0.0, e=0.0, f=0.0):
    return np.array([[a, b, 0.0], [c, d, 0.0], [e, f, a + d]])


def span(*vecs):
    return Subspace.from_spanning(np.array(vecs, dtype=float), len(vecs[0]))


# --- structure constants and brackets ---------------------------------------


def test_builtin_structure_residuals_exactly_zero():
    for alg in ALGEBRAS:
        anti, jac = alg.structure_residuals()
        assert anti == 0.0
        assert jac == 0.0


def test_heisenberg_bracket_xy_is_z():
    assert np.array_equal(HEIS.bracket(X, Y), Z)
    assert np.array_equal(HEIS.bracket(Y, X), -Z)
    assert np.array_equal(HEIS.bracket(X, Z), np.zeros(3))


def test_bracket_of_vector_with_itself_vanishes():
    rng = np.random.default_rng(0)
    for alg in ALGEBRAS:
        for _ in range(20):
            v = rng.standard_normal(alg.dim)
            assert np.allclose(alg.bracket(v, v), 0.0)


def test_sl2_bracket_table():
    h, x, y = np.eye(3)
    assert np.array_equal(SL2.bracket(h, x), 2 * x)
    assert np.array_equal(SL2.bracket(h, y), -2 * y)
    assert np.array_equal(SL2.bracket(x, y), h)


def test_bracket_bilinear_antisymmetric_random():
    rng = np.random.default_rng(1)
    for alg in ALGEBRAS:
        for _ in range(50):
            u, v, w = rng.standard_normal((3, alg.dim))
            a, b = rng.standard_normal(2)
            lhs = alg.bracket(a * u + b * v, w)
            rhs = a * alg.bracket(u, w) + b * alg.bracket(v, w)
            assert np.allclose(lhs, rhs, atol=1e-12)
            assert np.allclose(alg.bracket(u, v), -alg.bracket(v, u), atol=1e-14)


def test_bad_structure_rejected():
    c = np.zeros((2, 2, 2))
    c[0, 1, 0] = 1.0  # not antisymmetric
    with pytest.raises(ValidationError):
        LieAlgebraModel(2, ("a", "b"), c)


def test_jacobi_violation_rejected():
    # antisymmetric with [e1,e2]=e2, [e1,e3]=e3, [e2,e3]=e1:
    # the cyclic sum on (e1,e2,e3) comes out to 2 e1
    c = np.zeros((3, 3, 3))
    for (i, j, k) in [(0, 1, 1), (0, 2, 2), (1, 2, 0)]:
        c[i, j, k] = 1.0
        c[j, i, k] = -1.0
    with pytest.raises(ValidationError):
        LieAlgebraModel(3, ("a", "b", "c"), c)


# --- derivations -------------------------------------------------------------


def test_heisenberg_derivation_family_passes():
    rng = np.random.default_rng(2)
    for _ in range(20):
        d = heis_derivation(*rng.uniform(-2, 2, 6))
        assert check_derivation(HEIS, d).passed


def test_zero_matrix_is_a_derivation():
    for alg in ALGEBRAS:
        assert check_derivation(alg, np.zeros((alg.dim, alg.dim))).passed


def test_perturbed_corner_fails_with_unit_residual():
    # Oracle: on the pair (X, Y), D[X,Y] = corner * Z while
    # [DX,Y] + [X,DY] = (a+d) Z, so bumping the corner by 1 leaves residual 1.
    d = heis_derivation(a=0.3, b=-1.0, c=0.7, d=0.2, e=0.1, f=0.4)
    d[2, 2] += 1.0
    report = check_derivation(HEIS, d)
    assert not report.passed
    assert report.max_residual == pytest.approx(1.0, abs=1e-15)
    assert report.worst_pair == (0, 1)


def test_inner_derivation_is_minus_ad_column_by_column():
    rng = np.random.default_rng(3)
    for alg in ALGEBRAS:
        for _ in range(1000):
            x = rng.standard_normal(alg.dim)
            d = inner_derivation(alg, x)
            for j in range(alg.dim):
                assert np.allclose(d[:, j], -alg.bracket(x, alg.basis_vector(j)), atol=1e-12)


def test_inner_derivations_satisfy_leibniz():
    rng = np.random.default_rng(4)
    for alg in ALGEBRAS:
        for _ in range(1000):
            report = check_derivation(alg, inner_derivation(alg, rng.standard_normal(alg.dim)))
            assert report.passed


def test_inner_derivation_of_zero_is_zero():
    assert np.array_equal(inner_derivation(SL2, np.zeros(3)), np.zeros((3, 3)))


def test_sl2_inner_derivation_of_lower_generator():
    # D = -ad(Y): H -> [H,Y] = -2Y, X -> [X,Y] = H, Y -> 0
    y = np.array([0.0, 0.0, 1.0])
    d = inner_derivation(SL2, y)
    assert np.array_equal(d @ np.array([1.0, 0, 0]), np.array([0.0, 0, -2]))
    assert np.array_equal(d @ np.array([0.0, 1, 0]), np.array([1.0, 0, 0]))
    assert np.array_equal(d @ y, np.zeros(3))


def test_heisenberg_inner_derivation_shear_pattern():
    # x = aY - bX gives DX = aZ, DY = bZ, DZ = 0 (image in the center).
    a, b = 1.5, -0.5
    x = a * Y - b * X
    d = inner_derivation(HEIS, x)
    assert np.allclose(d @ X, a * Z)
    assert np.allclose(d @ Y, b * Z)
    assert np.allclose(d @ Z, 0.0)


def test_solve_inner_generator_roundtrip_and_failure():
    rng = np.random.default_rng(5)
    for alg in (SL2, AFF2):
        for _ in range(20):
            x = rng.standard_normal(alg.dim)
            got = solve_inner_generator(alg, -alg.ad(x))
            assert got is not None
            assert np.allclose(-alg.ad(got), -alg.ad(x), atol=1e-10)
    # the shear X -> Y on the Heisenberg algebra is not inner
    assert solve_inner_generator(HEIS, heis_derivation(c=1.0)) is None


# --- subspaces ---------------------------------------------------------------


def test_derived_subalgebra_examples():
    assert derived_subalgebra(HEIS).equals(span(Z))
    assert derived_subalgebra(ABELIAN).dim == 0
    assert derived_subalgebra(SL2).dim == 3
    assert derived_subalgebra(AFF2).equals(Subspace.from_spanning(np.array([[0.0, 1.0]]), 2))


def test_normalizer_examples():
    assert normalizer(HEIS, span(X, Z)).dim == 3
    assert normalizer(SL2, Subspace.full(3)).dim == 3
    got = normalizer(SL2, span(np.array([1.0, 0, 0]), np.array([0.0, 1, 0])))
    assert got.equals(span(np.array([1.0, 0, 0]), np.array([0.0, 1, 0])))


def test_normalizer_brute_force_oracle():
    # Oracle: a vector normalizes iff its bracket with every basis vector of
    # the subspace stays inside; check the computed basis and random outsiders.
    rng = np.random.default_rng(6)
    for alg, delta in [(HEIS, span(X, Z)), (SL2, span(np.eye(3)[0], np.eye(3)[1]))]:
        result = normalizer(alg, delta)
        for v in result.basis:
            for b in delta.basis:
                assert delta.contains(alg.bracket(v, b))
        for _ in range(50):
            v = rng.standard_normal(alg.dim)
            normalizes = all(delta.contains(alg.bracket(v, b)) for b in delta.basis)
            assert normalizes == result.contains(v)


def test_preimage_examples():
    d = inner_derivation(SL2, np.array([0.0, 0, 1]))
    got = preimage(d, span(np.array([1.0, 0, 0]), np.array([0.0, 1, 0])))
    assert got.equals(span(np.array([0.0, 1, 0]), np.array([0.0, 0, 1])))

    # invariance: D delta inside delta implies delta inside the preimage
    d2 = heis_derivation(a=1.0, e=0.5)  # DX = X + Z/2... X,Z invariant
    delta = span(X, Z)
    assert preimage(d2, delta).contains_subspace(delta)

    d3 = heis_derivation(a=0.3, b=-0.4, c=0.9, d=-0.3, f=1.0)
    got = preimage(d3, span(X, Y))
    assert got.equals(span(X, Z))


def test_preimage_is_kernel_of_pulled_back_form():
    rng = np.random.default_rng(7)
    for _ in range(30):
        d = heis_derivation(*rng.uniform(-2, 2, 6))
        delta = span(X, Y)
        omega = np.array([0.0, 0.0, 1.0])
        got = preimage(d, delta)
        row = d.T @ omega
        if np.max(np.abs(row)) <= 1e-12:
            assert got.dim == 3
        else:
            for v in got.basis:
                assert abs(row @ v) <= 1e-12
            assert got.dim == 2


def test_subspace_classify_examples():
    assert subspace_classify(HEIS, span(X, Z)) == subspace_classify(HEIS, span(X, Z))
    kind = subspace_classify(HEIS, span(X, Z))
    assert kind.is_subalgebra and kind.is_ideal
    assert not subspace_classify(HEIS, span(X, Y)).is_subalgebra
    assert subspace_classify(HEIS, Subspace.full(3)).is_ideal
    assert subspace_classify(SL2, span(np.eye(3)[0], np.eye(3)[1])).is_subalgebra


def test_subspace_set_operations():
    a = span(X, Y)
    b = span(Y, Z)
    assert a.intersect(b).equals(span(Y))
    assert a.sum(b).dim == 3
    assert a.annihilator().shape == (1, 3)
    assert abs(a.annihilator()[0] @ X) <= 1e-15


# --- invariant hull / core / condition (HZ) ---------------------------------


def test_invariant_hull_fixed_point_when_seed_invariant():
    h = span(X, Z)
    seed = span(Z)  # [h, Z] = 0
    assert invariant_hull(HEIS, h, seed).equals(seed)


def test_invariant_hull_monotone_idempotent():
    rng = np.random.default_rng(8)
    for alg in ALGEBRAS:
        for _ in range(30):
            h = Subspace.from_spanning(rng.standard_normal((2, alg.dim)), alg.dim)
            seed = Subspace.from_spanning(rng.standard_normal((1, alg.dim)), alg.dim)
            hull = invariant_hull(alg, h, seed)
            assert hull.contains_subspace(seed)
            assert invariant_hull(alg, h, hull).equals(hull)
            assert hull.dim <= alg.dim


def test_invariant_hull_heisenberg_shear_cases():
    omega = np.array([0.0, 0.0, 1.0])
    h = span(X, Z)
    # c = 0 block: D maps h inside the annihilated plane and stays there
    d0 = np.array([[1.0, 1.0, 0.0], [0.0, -1.0, 0.0], [0.0, 1.0, 0.0]])
    seed0 = Subspace.from_spanning(np.array([d0 @ v for v in h.basis]), 3)
    hull0 = invariant_hull(HEIS, h, seed0)
    assert all(abs(omega @ v) <= 1e-15 for v in hull0.basis)
    # c != 0: the hull reaches the center, which omega does not annihilate
    d1 = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    seed1 = Subspace.from_spanning(np.array([d1 @ v for v in h.basis]), 3)
    hull1 = invariant_hull(HEIS, h, seed1)
    assert max(abs(omega @ v) for v in hull1.basis) > 0.5


def enumerate_words(alg, h, d, omega, max_len):
    """Independent oracle: explicit <omega, ad(z_1)..ad(z_m) D y> enumeration."""
    worst = 0.0
    ads = [alg.ad(z) for z in h.basis]
    seeds = [d @ y for y in h.basis]
    frontier = seeds
    for _ in range(max_len + 1):
        for w in frontier:
            worst = max(worst, abs(float(omega @ w)))
        frontier = [a @ w for a in ads for w in frontier]
    return worst


def test_condition_hz_examples_and_word_oracle():
    omega_z = np.array([0.0, 0.0, 1.0])
    # trivially true for D = 0
    assert condition_hz(HEIS, span(X, Z), np.zeros((3, 3)), omega_z)

    # shear with c != 0 fails
    d1 = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    assert not condition_hz(HEIS, span(X, Z), d1, omega_z)

    # upper-triangular subalgebra of sl2 with the upper inner field passes
    d_sl2 = inner_derivation(SL2, np.array([0.0, 1.0, 0.0]))
    h_sl2 = span(np.eye(3)[0], np.eye(3)[1])
    omega_h = np.array([1.0, 0.0, 0.0])
    assert condition_hz(SL2, h_sl2, d_sl2, omega_h)
    assert enumerate_words(SL2, h_sl2, d_sl2, omega_h, 4) <= 1e-12

    # whenever the fixed-point test says yes, the word oracle agrees to length 4
    d0 = np.array([[1.0, 1.0, 0.0], [0.0, -1.0, 0.0], [0.0, 1.0, 0.0]])
    assert condition_hz(HEIS, span(X, Z), d0, omega_z)
    assert enumerate_words(HEIS, span(X, Z), d0, omega_z, 4) <= 1e-12


def test_condition_hz_requires_subalgebra():
    with pytest.raises(ValidationError):
        condition_hz(SL2, span(np.eye(3)[1], np.eye(3)[2]), np.zeros((3, 3)), np.ones(3))


def test_invariant_core_examples():
    # h-invariant distribution is its own core
    h = span(X, Z)
    assert invariant_core(HEIS, h, span(X, Z)).equals(span(X, Z))
    # the whole algebra is trivially invariant
    assert invariant_core(HEIS, h, Subspace.full(3)).dim == 3
    # shear with c=0, a=1: core of span{X, Y} under span{X, Z} is span{X}
    core = invariant_core(HEIS, span(X, Z), span(X, Y))
    assert core.equals(span(X))


def test_invariant_core_membership_failure_off_axis():
    # With the c=0, a=1 shear, the frame-read field leaves the core at
    # points (-1 - b*y/2, y, z) with y != 0.
    from arslie.fixtures import heisenberg_quadric_ars

    b = 1.0
    ars = heisenberg_quadric_ars(a=1.0, b=b, c=0.0)
    core = invariant_core(HEIS, span(X, Z), ars.delta_subspace)
    y_val = 0.5
    g = np.array([-1.0 - b * y_val / 2.0, y_val, 0.3])
    assert abs(ars.psi(g)) <= 1e-12  # the point is singular
    assert not core.contains(ars.field.f_map(g), tol=1e-9)


def test_invariant_core_is_stable_under_h():
    rng = np.random.default_rng(9)
    for alg in (HEIS, SL2):
        for _ in range(20):
            h = Subspace.from_spanning(rng.standard_normal((2, alg.dim)), alg.dim)
            delta = Subspace.from_spanning(rng.standard_normal((2, alg.dim)), alg.dim)
            core = invariant_core(alg, h, delta)
            assert delta.contains_subspace(core)
            for z in h.basis:
                for v in core.basis:
                    assert core.contains(alg.bracket(z, v), tol=1e-9)


def test_solvability_flags():
    assert solvability(HEIS) == solvability(HEIS)
    rep = solvability(HEIS)
    assert rep.solvable and rep.nilpotent
    rep = solvability(SL2)
    assert not rep.solvable and not rep.nilpotent
    rep = solvability(ABELIAN)
    assert rep.solvable and rep.nilpotent
    rep = solvability(AFF2)
    assert rep.solvable and not rep.nilpotent
