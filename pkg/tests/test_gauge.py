import math

import numpy as np
import pytest

from minorant.core import ConvexOracle, MaxAffineFn
from minorant.gauge import (
    Branch,
    eval_gauge,
    eval_gauge_batch,
    gauge_is_zero,
    perspective,
    shift,
    sublinearity_suite,
)


def quadratic_oracle():
    return ConvexOracle(evaluator=lambda x: float(x[0]) ** 2, dim=1)


def quadratic_gauge(x, a):
    # Positive root of mu^2 + a*mu - x^2 = 0.
    return (-a + math.sqrt(a * a + 4 * x * x)) / 2.0


def as_oracle(F):
    """Wrap a max-affine function as a black box to force the bisection path."""
    return ConvexOracle(evaluator=lambda x, F=F: F(x), dim=F.dim)


class TestShift:
    def test_abs(self, abs_fn):
        fsh = shift(abs_fn)
        assert fsh.offsets == pytest.approx([-1.0, -1.0])

    def test_two_pieces(self):
        F = MaxAffineFn(np.array([[1.0], [-2.0]]), np.array([1.0, 0.0]))
        fsh = shift(F)
        assert fsh.offsets == pytest.approx([-1.0, -2.0])
        assert fsh([0.0]) == pytest.approx(-1.0)

    def test_constant(self):
        F = MaxAffineFn(np.array([[0.0]]), np.array([7.0]))
        assert shift(F).offsets == pytest.approx([-1.0])


class TestPerspective:
    def test_abs_closed_form(self, abs_fn):
        # For |.| the slice is |x| - mu.
        assert perspective(abs_fn, [2.0], 1.0) == pytest.approx(1.0)
        assert perspective(abs_fn, [2.0], 5.0) == pytest.approx(-3.0)

    def test_origin_slice_is_minus_mu(self, abs_fn, relu_fn):
        for F in (abs_fn, relu_fn):
            assert perspective(F, [0.0], 3.0) == pytest.approx(-3.0)

    def test_rejects_nonpositive_mu(self, abs_fn):
        with pytest.raises(Exception):
            perspective(abs_fn, [1.0], 0.0)
        with pytest.raises(Exception):
            perspective(abs_fn, [1.0], -2.0)

    def test_monotone_decreasing_shifted(self):
        # mu < nu implies slice(nu) + nu <= slice(mu) + mu.
        rng = np.random.default_rng(7)
        for _ in range(50):
            F = MaxAffineFn(rng.uniform(-2, 2, (4, 2)), rng.uniform(-2, 2, 4))
            x = rng.uniform(-4, 4, 2)
            mu, nu = sorted(rng.uniform(1e-3, 10.0, 2))
            if mu == nu:
                continue
            assert perspective(F, x, nu) + nu <= perspective(F, x, mu) + mu + 1e-12


class TestGaugeIsZero:
    def test_abs_examples(self, abs_fn):
        assert gauge_is_zero(abs_fn, [1.0], 2.0) is True
        assert gauge_is_zero(abs_fn, [1.0], 0.5) is False

    def test_origin_always_zero_for_nonneg_alpha(self, abs_fn, relu_fn):
        for F in (abs_fn, relu_fn):
            assert gauge_is_zero(F, [0.0], 1.0) is True

    def test_zero_equivalence_with_eval(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            F = MaxAffineFn(rng.uniform(-2, 2, (3, 2)), rng.uniform(-2, 2, 3))
            x = rng.uniform(-4, 4, 2)
            a = rng.uniform(-4, 4)
            is_zero = gauge_is_zero(F, x, a)
            g = eval_gauge(F, x, a)
            assert is_zero == (g.value == 0.0)

    def test_oracle_path(self):
        q = quadratic_oracle()
        assert gauge_is_zero(q, [0.0], 1.0) is True
        assert gauge_is_zero(q, [1.0], 1.0) is False


class TestEvalGauge:
    def test_abs_root(self, abs_fn):
        g = eval_gauge(abs_fn, [2.0], 1.0)
        assert g.branch is Branch.ROOT
        assert g.value == pytest.approx(1.0)
        # Implicit check: value * fshift(x / value) == alpha.
        assert g.value * shift(abs_fn)([2.0 / g.value]) == pytest.approx(1.0)

    def test_axis_negative_part(self, abs_fn, relu_fn):
        for F in (abs_fn, relu_fn):
            assert eval_gauge(F, [0.0], -2.0).value == pytest.approx(2.0)
            assert eval_gauge(F, [0.0], 3.0).value == 0.0

    def test_graph_value_one(self, abs_fn):
        fx = shift(abs_fn)([3.0])
        assert fx == pytest.approx(2.0)
        assert eval_gauge(abs_fn, [3.0], fx).value == pytest.approx(1.0)

    def test_quadratic_oracle_bisection(self):
        q = quadratic_oracle()
        g = eval_gauge(q, [2.0], 0.0)
        assert g.branch is Branch.ROOT
        assert g.value == pytest.approx(2.0, abs=1e-9)
        rng = np.random.default_rng(3)
        for _ in range(50):
            x = rng.uniform(-10, 10)
            a = rng.uniform(-10, 10)
            want = quadratic_gauge(x, a)
            got = eval_gauge(q, [x], a).value
            assert got == pytest.approx(want, abs=1e-6)

    def test_closed_form_matches_bisection(self):
        rng = np.random.default_rng(5)
        for _ in range(40):
            F = MaxAffineFn(rng.uniform(-2, 2, (4, 2)), rng.uniform(-2, 2, 4))
            x = rng.uniform(-4, 4, 2)
            a = rng.uniform(-4, 4)
            fast = eval_gauge(F, x, a).value
            slow = eval_gauge(as_oracle(F), x, a).value
            assert fast == pytest.approx(slow, abs=1e-9)

    def test_root_residual_small(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            F = MaxAffineFn(rng.uniform(-2, 2, (4, 3)), rng.uniform(-2, 2, 4))
            x = rng.uniform(-5, 5, 3)
            a = rng.uniform(-5, 5)
            g = eval_gauge(F, x, a)
            if g.branch is Branch.ROOT:
                assert abs(g.value * shift(F)(x / g.value) - a) <= 1e-8

    def test_batch_matches_scalar(self):
        rng = np.random.default_rng(13)
        F = MaxAffineFn(rng.uniform(-2, 2, (5, 2)), rng.uniform(-2, 2, 5))
        X = rng.uniform(-4, 4, (30, 2))
        alphas = rng.uniform(-4, 4, 30)
        batch = eval_gauge_batch(F, X, alphas)
        for i in range(30):
            assert batch[i] == pytest.approx(eval_gauge(F, X[i], alphas[i]).value,
                                             abs=1e-12)


class TestSublinearitySuite:
    def test_abs_instances(self, abs_fn):
        # Homogeneity and subadditivity instances solved by the closed form
        # max(|x| - a, 0).
        assert eval_gauge(abs_fn, [4.0], 2.0).value == pytest.approx(2.0)
        assert eval_gauge(abs_fn, [2.0], 1.0).value == pytest.approx(1.0)
        s1 = eval_gauge(abs_fn, [2.0], 1.0).value
        s2 = eval_gauge(abs_fn, [-1.0], 1.0).value
        s3 = eval_gauge(abs_fn, [1.0], 2.0).value
        assert s1 + s2 >= s3
        assert (s1, s2, s3) == (1.0, 0.0, 0.0)
        # Hypograph instance (x, a) = (3, 1) with fshift(3) = 2 >= 1.
        assert eval_gauge(abs_fn, [3.0], 1.0).value == pytest.approx(2.0)

    def test_full_suite_passes(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            F = MaxAffineFn(rng.uniform(-2, 2, (4, 2)), rng.uniform(-2, 2, 4))
            samples = [(rng.uniform(-5, 5, 2), rng.uniform(-5, 5)) for _ in range(15)]
            rep = sublinearity_suite(F, samples)
            assert rep.all_passed, rep.summary()

    def test_empty_samples_rejected(self, abs_fn):
        with pytest.raises(Exception):
            sublinearity_suite(abs_fn, [])
