import numpy as np
import pytest

from arslie import fixtures
from arslie.ars import (
    SimpleArs,
    abnormal_algebra,
    build_ars,
    classify_locus,
    sample_locus,
)
from arslie.errors import ValidationError
from arslie.group_models import EuclideanChart, HeisenbergChart
from arslie.lie_core import Subspace

ALL_FIXTURES = [
    fixtures.grushin_plane,
    fixtures.aff2_ars,
    fixtures.heisenberg_ideal_ars,
    fixtures.heisenberg_quadric_ars,
    fixtures.heisenberg_degenerate_ars,
    fixtures.heisenberg_tangential_ars,
    fixtures.sl2_lower_ars,
    fixtures.sl2_upper_ars,
]


# --- construction ------------------------------------------------------------


def test_build_normalizes_annihilator():
    for make in ALL_FIXTURES:
        ars = make()
        for row in ars.delta:
            assert abs(ars.omega @ row) <= 1e-14
        assert ars.omega @ ars.y_n == pytest.approx(1.0, abs=1e-14)
        assert np.count_nonzero(ars.y_n) == 1  # unit coordinate completion


def test_grushin_is_valid_with_linear_locus():
    ars = fixtures.grushin_plane()
    for y in np.linspace(-1, 1, 7):
        assert ars.in_locus(np.array([0.0, y]))
        assert not ars.in_locus(np.array([0.4, y]))


def test_rank_condition_rejections():
    heis = HeisenbergChart()
    # distribution span{X, Z} needs the derivation to push X out of it
    d_flat = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.5, 0.0, 1.0]])
    with pytest.raises(ValidationError, match="rank condition"):
        build_ars(heis, d_flat, [[1.0, 0, 0], [0.0, 0, 1]])

    # abelian group: distribution invariant under the derivation
    eu = EuclideanChart(2)
    with pytest.raises(ValidationError, match="rank condition"):
        build_ars(eu, np.array([[1.0, 0.0], [0.0, 2.0]]), [[1.0, 0.0]])


def test_zero_derivation_rejected():
    with pytest.raises(ValidationError, match="zero derivation"):
        build_ars(HeisenbergChart(), np.zeros((3, 3)), [[1.0, 0, 0], [0.0, 1, 0]])


def test_dependent_distribution_rejected():
    with pytest.raises(ValidationError, match="dependent"):
        build_ars(
            HeisenbergChart(),
            np.array([[0.0, 0, 0], [1.0, 0, 0], [0.0, 0, 0]]),
            [[1.0, 0, 0], [2.0, 0, 0]],
        )


def test_wrong_row_count_rejected():
    with pytest.raises(ValidationError, match="directions"):
        build_ars(
            HeisenbergChart(),
            np.array([[0.0, 0, 0], [1.0, 0, 0], [0.0, 0, 0]]),
            [[1.0, 0, 0]],
        )


# --- psi and its gradient -----------------------------------------------------


def test_psi_vanishes_at_identity_everywhere():
    for make in ALL_FIXTURES:
        ars = make()
        assert ars.psi(ars.chart.identity()) == 0.0


def test_heisenberg_quadric_formula():
    # general derivation ((a,b,0),(c,d,0),(e,f,a+d)) with distribution span{X, Y}:
    # psi = e x + f y + (a+d) z - c x^2/2 + b y^2/2 - d x y
    a, b, c, d, e, f = 1.0, 2.0, 3.0, 4.0, 5.0, 6.0
    ars = fixtures.heisenberg_ars([[a, b, 0], [c, d, 0], [e, f, a + d]])
    rng = np.random.default_rng(0)
    for _ in range(50):
        x, y, z = rng.uniform(-2, 2, 3)
        expected = e * x + f * y + (a + d) * z - 0.5 * c * x * x + 0.5 * b * y * y - d * x * y
        assert ars.psi(np.array([x, y, z])) == pytest.approx(expected, abs=1e-12)


def test_sl2_locus_is_unit_diagonal_entry():
    ars = fixtures.sl2_lower_ars()
    rng = np.random.default_rng(1)
    for _ in range(50):
        b, c = rng.uniform(-2, 2, 2)
        a = rng.uniform(0.3, 3.0)
        g = np.array([a, b, c, (1.0 + b * c) / a])
        assert ars.psi(g) == pytest.approx(1.0 - a * a, abs=1e-10)


def test_psi_scales_with_omega_but_locus_does_not():
    base = fixtures.heisenberg_quadric_ars()
    scaled = SimpleArs(
        chart=base.chart,
        field=base.field,
        delta=base.delta,
        omega=-2.5 * base.omega,
        y_n=base.y_n / -2.5,
    )
    rng = np.random.default_rng(2)
    for _ in range(30):
        g = rng.uniform(-1, 1, 3)
        assert scaled.psi(g) == pytest.approx(-2.5 * base.psi(g), abs=1e-12)
        assert scaled.in_locus(g) == base.in_locus(g)


def test_grad_psi_at_identity_is_pulled_back_form():
    for make in ALL_FIXTURES:
        ars = make()
        expected = ars.field.derivation.T @ ars.omega
        assert np.allclose(ars.grad_psi(ars.chart.identity()), expected, atol=1e-14)


def test_grad_psi_matches_finite_differences():
    rng = np.random.default_rng(3)
    h = 1e-6
    for make in ALL_FIXTURES:
        ars = make()
        chart = ars.chart
        for _ in range(25):
            g = chart.sample_point(rng)
            y = rng.uniform(-1, 1, ars.dim)
            fd = (
                ars.psi(chart.multiply(g, chart.exp_map(h * y)))
                - ars.psi(chart.multiply(g, chart.exp_map(-h * y)))
            ) / (2 * h)
            an = float(ars.grad_psi(g) @ y)
            assert abs(fd - an) <= 1e-6 * (1.0 + abs(an))


def test_psi_can_be_critical_on_the_locus():
    # with the c=0, a=1 shear the locus contains points where grad psi vanishes
    ars = fixtures.heisenberg_quadric_ars(a=1.0, b=1.0, c=0.0)
    for z in (-1.0, 0.0, 2.0):
        g = np.array([-1.0, 0.0, z])
        assert abs(ars.psi(g)) <= 1e-14
        assert np.allclose(ars.grad_psi(g), 0.0, atol=1e-14)
        assert ars.in_locus(g)


# --- classification ----------------------------------------------------------

EXPECT = {
    # (delta subalg, delta ideal, solvable, submanifold, ideal-subgroup,
    #  solvable-subgroup, local-subgroup, numeric)
    "grushin": (True, True, True, True, True, True, True, "consistent"),
    "aff2": (True, False, True, True, False, True, True, "consistent"),
    "heis-ideal": (True, True, True, True, True, True, True, "consistent"),
    "heis-quadric-c1": (False, False, True, False, False, False, False, "inconsistent"),
    "heis-quadric-c0": (False, False, True, False, False, False, True, "inconsistent"),
    "heis-degenerate-axis": (False, False, True, False, False, False, False, "consistent"),
    "heis-degenerate-planes": (False, False, True, False, False, False, False, "inconsistent"),
    "heis-degenerate-single": (False, False, True, False, False, False, False, "consistent"),
    "heis-tangential": (False, False, True, False, False, False, False, "inconsistent"),
    "sl2-lower": (True, False, False, True, False, False, False, "unsampled"),
    "sl2-upper": (False, False, False, False, False, False, True, "unsampled"),
}

BUILDERS = {
    "grushin": fixtures.grushin_plane,
    "aff2": lambda: fixtures.aff2_ars(1.0, 1.0),
    "heis-ideal": fixtures.heisenberg_ideal_ars,
    "heis-quadric-c1": lambda: fixtures.heisenberg_quadric_ars(0.0, 0.0, 1.0),
    "heis-quadric-c0": lambda: fixtures.heisenberg_quadric_ars(1.0, 1.0, 0.0),
    "heis-degenerate-axis": lambda: fixtures.heisenberg_degenerate_ars(1.0, -1.0),
    "heis-degenerate-planes": lambda: fixtures.heisenberg_degenerate_ars(1.0, 1.0),
    "heis-degenerate-single": lambda: fixtures.heisenberg_degenerate_ars(1.0, 0.0),
    "heis-tangential": fixtures.heisenberg_tangential_ars,
    "sl2-lower": fixtures.sl2_lower_ars,
    "sl2-upper": fixtures.sl2_upper_ars,
}


@pytest.mark.parametrize("name", sorted(EXPECT))
def test_classification_table(name):
    report = classify_locus(BUILDERS[name]())
    got = (
        report.delta_subalgebra,
        report.delta_ideal,
        report.solvable,
        report.verdict("submanifold").applies,
        report.verdict("ideal-subgroup").applies,
        report.verdict("solvable-subgroup").applies,
        report.verdict("local-subgroup").applies,
        report.numeric_zx_consistent,
    )
    assert got == EXPECT[name]


def test_verdict_list_covers_each_rule_once():
    report = classify_locus(fixtures.grushin_plane())
    rules = [v.rule for v in report.verdicts]
    assert rules == [
        "submanifold",
        "ideal-subgroup",
        "solvable-subgroup",
        "fixed-point-set",
        "local-subgroup",
    ]


def test_locus_tangent_space_examples():
    rep = classify_locus(fixtures.sl2_lower_ars())
    assert rep.z_tangent.equals(
        Subspace.from_spanning(np.array([[0.0, 1, 0], [0.0, 0, 1]]), 3)
    )
    assert not rep.kernel_subalgebra  # span{X, Y} is not closed: [X, Y] = H
    assert "cannot be a codimension-one subgroup" in rep.verdict("local-subgroup").conclusion

    rep = classify_locus(fixtures.heisenberg_ideal_ars())
    assert rep.z_tangent.equals(
        Subspace.from_spanning(np.array([[0.0, 1, 0], [0.0, 0, 1]]), 3)
    )


def test_local_subgroup_failure_message_when_words_escape():
    rep = classify_locus(fixtures.heisenberg_quadric_ars(0.0, 0.0, 1.0))
    assert rep.kernel_subalgebra and not rep.hz_on_kernel
    assert "not a subgroup" in rep.verdict("local-subgroup").conclusion


def test_subgroup_claims_respect_necessary_condition():
    # every fixture whose report claims a subgroup must satisfy the
    # annihilation condition on the locus algebra
    for make in ALL_FIXTURES:
        rep = classify_locus(make())
        if rep.verdict("ideal-subgroup").applies or rep.verdict("solvable-subgroup").applies:
            assert rep.kernel_subalgebra and rep.hz_on_kernel


def test_product_stability_of_locus_under_ideal_branch():
    ars = fixtures.heisenberg_ideal_ars()
    pts = sample_locus(ars, [(-1, 1)] * 3, resolution=5)
    assert len(pts) > 0
    for g in pts[:10]:
        for gp in pts[:10]:
            assert abs(ars.psi(ars.chart.multiply(gp, g))) <= 1e-8


# --- abnormal algebra ---------------------------------------------------------


def test_abnormal_algebra_heisenberg_is_center():
    a = abnormal_algebra(fixtures.heisenberg_ideal_ars())
    assert a.dim == 1
    assert a.contains(np.array([0.0, 0.0, 1.0]))


def test_abnormal_algebra_aff2_is_trivial():
    assert abnormal_algebra(fixtures.aff2_ars()).dim == 0


def test_abnormal_algebra_dimension_bound():
    for make in ALL_FIXTURES:
        ars = make()
        a = abnormal_algebra(ars)
        assert a.dim <= ars.dim - 2
        assert ars.delta_subspace.contains_subspace(a)


def test_abnormal_algebra_subalgebra_case_has_full_dimension():
    # distribution a subalgebra forces dim = n - 2
    for make in (fixtures.heisenberg_ideal_ars, fixtures.sl2_lower_ars, fixtures.grushin_plane):
        ars = make()
        a = abnormal_algebra(ars)
        assert a.dim == ars.dim - 2


def test_abnormal_algebra_triple_intersection_oracle():
    # brute-force membership check over random vectors
    rng = np.random.default_rng(4)
    for make in (fixtures.heisenberg_ideal_ars, fixtures.heisenberg_quadric_ars):
        ars = make()
        alg = ars.chart.algebra()
        d = ars.field.derivation
        delta = ars.delta_subspace
        a = abnormal_algebra(ars)
        for _ in range(100):
            v = rng.standard_normal(ars.dim)
            in_all = (
                delta.contains(v, tol=1e-9)
                and all(delta.contains(alg.bracket(v, b), tol=1e-9) for b in delta.basis)
                and delta.contains(d @ v, tol=1e-9)
            )
            assert in_all == a.contains(v, tol=1e-9)


# --- locus sampling -----------------------------------------------------------


def test_sample_locus_grushin_line():
    ars = fixtures.grushin_plane()
    pts = sample_locus(ars, [(-1, 1), (-1, 1)], resolution=9)
    assert len(pts) > 0
    assert np.max(np.abs(pts[:, 0])) <= 1e-9


def test_sample_locus_tangential_quadric():
    ars = fixtures.heisenberg_tangential_ars()
    pts = sample_locus(ars, [(-1, 1)] * 3, resolution=9)
    assert len(pts) > 0
    residual = np.abs(pts[:, 2] - pts[:, 0] ** 2 - pts[:, 0] * pts[:, 1])
    assert np.max(residual) <= 1e-8


def test_sample_locus_codimension_two_case():
    ars = fixtures.heisenberg_degenerate_ars(1.0, -1.0)
    pts = sample_locus(ars, [(-1, 1)] * 3, resolution=11)
    assert len(pts) > 0
    assert np.max(np.abs(pts[:, 0])) <= 1e-6
    assert np.max(np.abs(pts[:, 1])) <= 1e-6


def test_sample_locus_deterministic_and_sorted():
    ars = fixtures.heisenberg_tangential_ars()
    box = [(-1, 1)] * 3
    a = sample_locus(ars, box, resolution=7)
    b = sample_locus(ars, box, resolution=7)
    assert np.array_equal(a, b)
    assert np.array_equal(a, np.array(sorted(map(tuple, a))))


def test_sample_locus_rejects_constrained_chart():
    with pytest.raises(ValidationError):
        sample_locus(fixtures.sl2_lower_ars(), [(-1, 1)] * 4, resolution=5)


def test_sample_locus_empty_result_is_valid():
    ars = fixtures.grushin_plane()
    pts = sample_locus(ars, [(0.5, 1.0), (-1, 1)], resolution=5)
    assert pts.shape == (0, 2)
