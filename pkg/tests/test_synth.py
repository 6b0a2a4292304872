import numpy as np
import pytest

from minorant.core import AffineMap, AffineTransform, MaxAffineFn, Polytope
from minorant.gauge import eval_gauge, shift
from minorant.harness import gen_line_constrained_set
from minorant.synth import (
    ConditionViolated,
    FiniteScoredSet,
    LiftedPolytope,
    UnboundedBelow,
    build_gauge_support_lp,
    check_scored_midpoint,
    min_convex_over_polytope,
    min_over_scored_set,
    support_at_point,
    synth_affine_from_scored_set,
    synth_composed_minorant,
    synth_tight_minorant,
)


class TestSupportSystem:
    def test_abs_system(self, abs_fn):
        sys_ = build_gauge_support_lp(shift(abs_fn))
        # For |.| the region is mu >= 0, mu1 + mu2 <= 1, i.e. |Lam| <= lam <= 1.
        assert sys_.neg_shifted_offsets == pytest.approx([1.0, 1.0])
        lift = sys_.project([1.0, 0.0])
        assert lift.Lam.w == pytest.approx([1.0]) and lift.lam == pytest.approx(1.0)
        lift0 = sys_.project([0.0, 0.0])
        assert lift0.lam == 0.0 and lift0.Lam.w == pytest.approx([0.0])

    def test_feasible_points_dominated_by_gauge(self):
        # Soundness of the parameterization: every feasible (Lam, lam)
        # satisfies <Lam, x> - lam*a <= gauge(x, a) on samples.
        rng = np.random.default_rng(31)
        for _ in range(10):
            F = MaxAffineFn(rng.uniform(-2, 2, (4, 2)), rng.uniform(-2, 2, 4))
            sys_ = build_gauge_support_lp(shift(F))
            # Random feasible mu: scale a positive draw onto the constraint.
            mu = rng.uniform(0, 1, 4)
            bound = float(sys_.neg_shifted_offsets @ mu)
            if bound > 1.0:
                mu = mu / bound * rng.uniform(0.2, 1.0)
            lift = sys_.project(mu)
            for _ in range(1000):
                x = rng.uniform(-6, 6, 2)
                a = rng.uniform(-6, 6)
                g = eval_gauge(F, x, a)
                assert lift.Lam.w @ x - lift.lam * a <= g.value + 1e-9

    def test_presampled_oracle_bound(self):
        # Independent pre-build check: max of Lam.x - lam*fshift(x) over a
        # coarse grid stays <= 1 for feasible points.
        rng = np.random.default_rng(33)
        F = MaxAffineFn(rng.uniform(-2, 2, (3, 1)), rng.uniform(-2, 2, 3))
        fsh = shift(F)
        sys_ = build_gauge_support_lp(fsh)
        mu = np.array([0.4, 0.1, 0.2])
        if float(sys_.neg_shifted_offsets @ mu) > 1.0:
            mu /= float(sys_.neg_shifted_offsets @ mu)
        lift = sys_.project(mu)
        grid = np.linspace(-50, 50, 2001)
        vals = [lift.Lam.w[0] * x - lift.lam * fsh([x]) for x in grid]
        assert max(vals) <= 1.0 + 1e-9


class TestMinOverScoredSet:
    def test_finite(self, abs_fn):
        d, _ = min_over_scored_set(abs_fn, FiniteScoredSet(np.array([[2.0]]), np.array([5.0])))
        assert d == pytest.approx(7.0)
        d0, _ = min_over_scored_set(abs_fn, FiniteScoredSet(np.array([[0.0]]), np.array([0.0])))
        assert d0 == 0.0

    def test_polytope(self, abs_fn):
        B = LiftedPolytope(Polytope(np.array([[1.0], [3.0]])), np.array([0.0]), 0.0)
        d, w = min_over_scored_set(abs_fn, B)
        assert d == pytest.approx(1.0)
        assert w == pytest.approx([1.0])

    def test_sentinel_triggers_unbounded(self, abs_fn):
        B = FiniteScoredSet(np.array([[1.0]]), np.array([-2e12]))
        with pytest.raises(UnboundedBelow):
            min_over_scored_set(abs_fn, B)


class TestScoredMidpoint:
    def test_singleton_passes(self, abs_fn):
        B = FiniteScoredSet(np.array([[4.0]]), np.array([2.0]))
        assert check_scored_midpoint(abs_fn, B).satisfied

    def test_relu_three_points_pass(self, relu_fn):
        B = FiniteScoredSet(np.array([[0.0], [0.5], [1.0]]), np.zeros(3))
        rep = check_scored_midpoint(relu_fn, B)
        assert rep.satisfied
        # Point 0 witnesses every pair: its recession value max(w, 0) with
        # w = -midpoint is 0, and witnesses are reported in input order.
        assert rep.witnesses[(0, 2)] == 0
        assert rep.witnesses[(0, 1)] == 0

    def test_abs_pair_violated(self, abs_fn):
        B = FiniteScoredSet(np.array([[0.0], [1.0]]), np.zeros(2))
        rep = check_scored_midpoint(abs_fn, B)
        assert not rep.satisfied
        assert rep.violation[0] == (0, 1)


class TestSynthPipeline:
    def test_single_scored_point(self, abs_fn):
        cert = synth_affine_from_scored_set(
            abs_fn, FiniteScoredSet(np.array([[2.0]]), np.array([5.0])))
        assert cert.affine.w == pytest.approx([1.0])
        assert cert.affine.c == pytest.approx(0.0)
        assert cert.lhs == pytest.approx(7.0) and cert.rhs == pytest.approx(7.0)
        assert cert.t_star >= 1.0 - 1e-8
        assert cert.lifted.lam > 1e-12

    def test_support_point_form(self, abs_fn):
        cert = synth_affine_from_scored_set(
            abs_fn, FiniteScoredSet(np.array([[2.0]]), np.array([0.0])))
        assert cert.affine(np.array([2.0])) == pytest.approx(2.0)
        assert cert.affine.w == pytest.approx([1.0])

    def test_symmetric_polytope(self, abs_fn):
        B = LiftedPolytope(Polytope(np.array([[-1.0], [1.0]])), np.array([0.0]), 0.0)
        cert = synth_affine_from_scored_set(abs_fn, B)
        assert cert.affine.w == pytest.approx([0.0], abs=1e-12)
        assert cert.lhs == pytest.approx(0.0, abs=1e-12)
        assert cert.lifted.Lam.w == pytest.approx([0.0], abs=1e-12)
        assert cert.lifted.lam == pytest.approx(1.0)
        assert cert.t_star == pytest.approx(1.0)

    def test_random_passing_instances(self):
        for seed in range(20):
            F, Z = gen_line_constrained_set(seed, d=3, p=4)
            cert = synth_tight_minorant(F, Z)
            assert cert.condition.satisfied
            assert abs(cert.gap) <= 1e-6
            assert cert.t_star >= 1.0 - 1e-8
            assert cert.lifted.lam > 1e-12
            assert cert.domination.worst_deficit >= -1e-7


class TestSupportAtPoint:
    def test_abs_examples(self, abs_fn, relu_fn):
        A = support_at_point(abs_fn, [2.0])
        assert A.w == pytest.approx([1.0]) and A([2.0]) == pytest.approx(2.0)
        A0 = support_at_point(abs_fn, [0.0])
        assert A0.w == pytest.approx([1.0])  # lowest-index tie break
        assert A0([0.0]) == pytest.approx(0.0)
        Ar = support_at_point(relu_fn, [-1.0])
        assert Ar.w == pytest.approx([0.0]) and Ar.c == pytest.approx(0.0)

    def test_cross_check_against_pipeline(self):
        # Both routes must support f at x and stay below f; the maps may
        # differ when the subdifferential is not a singleton.
        rng = np.random.default_rng(44)
        for _ in range(10):
            F = MaxAffineFn(rng.uniform(-2, 2, (4, 2)), rng.uniform(-2, 2, 4))
            x = rng.uniform(-3, 3, 2)
            direct = support_at_point(F, x)
            cert = synth_affine_from_scored_set(
                F, FiniteScoredSet(x.reshape(1, -1), np.array([0.0])))
            for A in (direct, cert.affine):
                assert A(x) == pytest.approx(F(x), abs=1e-7)
                for _ in range(200):
                    y = rng.uniform(-8, 8, 2)
                    assert A(y) <= F(y) + 1e-7


class TestTightMinorant:
    def test_interval(self, abs_fn):
        cert = synth_tight_minorant(abs_fn, Polytope(np.array([[1.0], [3.0]])))
        assert cert.affine.w == pytest.approx([1.0])
        assert cert.lhs == pytest.approx(1.0)

    def test_symmetric_interval(self, abs_fn):
        cert = synth_tight_minorant(abs_fn, Polytope(np.array([[-1.0], [1.0]])))
        assert cert.lhs == pytest.approx(0.0, abs=1e-12)

    def test_finite_violation_raises(self, abs_fn):
        with pytest.raises(ConditionViolated) as ei:
            synth_tight_minorant(abs_fn, [np.array([-1.0]), np.array([1.0])])
        assert ei.value.report.violation[0] == (0, 1)

    def test_fallback_on_unbounded(self, abs_fn):
        cert = synth_composed_minorant(
            abs_fn, np.array([[2.0]]), np.array([-2e12]), None)
        assert cert.fallback == "unbounded-below"
        A = cert.affine
        x0 = np.array([2.0])
        assert A(x0) == pytest.approx(abs_fn(x0))
        rng = np.random.default_rng(1)
        for _ in range(200):
            y = rng.uniform(-9, 9, 1)
            assert A(y) <= abs_fn(y) + 1e-12


class TestMinConvexOverPolytope:
    def test_interval_vertex_min(self, abs_fn):
        x, v = min_convex_over_polytope(abs_fn, np.array([[1.0], [3.0]]))
        assert v == pytest.approx(1.0) and x == pytest.approx([1.0])

    def test_interior_min(self, abs_fn):
        x, v = min_convex_over_polytope(abs_fn, np.array([[-1.0], [1.0]]))
        assert v == pytest.approx(0.0, abs=1e-12)

    def test_constant(self):
        F = MaxAffineFn(np.array([[0.0, 0.0]]), np.array([4.0]))
        _, v = min_convex_over_polytope(F, np.array([[1.0, 0.0], [0.0, 1.0]]))
        assert v == pytest.approx(4.0)


class TestComposedMinorant:
    def test_singleton_table(self, abs_fn):
        cert = synth_composed_minorant(abs_fn, np.array([[2.0]]), np.array([5.0]), None)
        assert cert.affine.w == pytest.approx([1.0])
        assert cert.lhs == pytest.approx(7.0) and cert.rhs == pytest.approx(7.0)

    def test_singleton_zero_payload_matches_support(self, abs_fn):
        cert = synth_composed_minorant(abs_fn, np.array([[2.0]]), np.array([0.0]), None)
        A = support_at_point(abs_fn, [2.0])
        assert cert.affine(np.array([2.0])) == pytest.approx(A(np.array([2.0])))
        assert cert.lhs == pytest.approx(2.0) and cert.rhs == pytest.approx(2.0)

    def test_polytope_affine_payload(self, abs_fn):
        cert = synth_composed_minorant(
            abs_fn,
            AffineTransform(np.array([[1.0]]), np.array([0.0])),
            AffineMap(np.array([-1.0]), 0.0),
            Polytope(np.array([[0.0], [1.0]])),
        )
        assert cert.affine.w == pytest.approx([1.0])
        assert cert.lhs == pytest.approx(0.0, abs=1e-12)
        assert cert.rhs == pytest.approx(0.0, abs=1e-12)
        assert not cert.approximate

    def test_polytope_maxaffine_payload_is_approximate(self, abs_fn):
        # k(z) = |z - 1/2| is convex but not affine: grid discretization.
        k = MaxAffineFn(np.array([[1.0], [-1.0]]), np.array([-0.5, 0.5]))
        cert = synth_composed_minorant(
            abs_fn,
            AffineTransform(np.array([[1.0]]), np.array([0.0])),
            k,
            Polytope(np.array([[0.0], [1.0]])),
        )
        assert cert.approximate
        # True min of |z| + |z - 1/2| on [0, 1] is 1/2; grid error only.
        assert cert.rhs == pytest.approx(0.5, abs=1e-2)
        assert cert.domination.worst_deficit >= -1e-7

    def test_condition_violation(self, abs_fn):
        with pytest.raises(ConditionViolated):
            synth_composed_minorant(
                abs_fn, np.array([[-1.0], [1.0]]), np.zeros(2), None)
