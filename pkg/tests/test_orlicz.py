import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nakano.orlicz import (
    ExponentMeasure,
    LacunarySeries,
    LogPerturbed,
    Mixture,
    NonconvexError,
    OrliczBoundError,
    PowerPhi,
    PowerPsi,
    QuadratureError,
    SampleDomainError,
    Sampled,
    conjugate,
    conjugate_values,
    evaluate,
    evaluate_with_bound,
    integrate,
    orlicz_bound,
    orlicz_from_json,
    psi_mixture,
)
from nakano.orlicz.quadrature import gauss_kronrod

E = math.e


class TestEvaluate:
    def test_examples(self):
        assert evaluate(PowerPsi(2), 1) == 0.5
        assert evaluate(PowerPhi("inf"), 1) == 0.0
        assert evaluate(PowerPsi("inf"), 1.5).is_infinite
        assert evaluate(LogPerturbed(2, 1), 1 / E) == pytest.approx(E**-2, rel=1e-15)

    def test_negative_argument(self):
        with pytest.raises(ValueError):
            evaluate(PowerPsi(2), -1)

    def test_log_perturbed_branches(self):
        F = LogPerturbed(2, 1.5)
        t = np.array([0.0, 1e-3, 0.5, 2.0])
        np.testing.assert_allclose(F(t), [0.0, 1e-6 * math.log(1e3) ** 1.5, 0.25, 4.0])

    def test_lacunary_tail_bound(self):
        F = LacunarySeries((2.0, 1.5), (0.5, 0.25), tail_weight=0.25)
        val, bound = evaluate_with_bound(F, 2.0)
        assert val == pytest.approx(0.5 * 4 + 0.25 * 2**1.5)
        assert bound == 0.25 * 2**1.5
        assert F.tail_bound(0.5) == 0.25

    def test_sampled_refuses_extrapolation(self):
        S = Sampled(np.array([0.1, 1.0]), np.array([0.01, 1.0]))
        assert S(0.5) == pytest.approx(0.25)  # power-law interpolation is exact on t^2
        with pytest.raises(SampleDomainError):
            S(1.5)
        with pytest.raises(SampleDomainError):
            S(0.05)

    def test_from_json(self):
        assert orlicz_from_json({"kind": "psi", "p": 2}) == PowerPsi(2)
        assert orlicz_from_json({"kind": "phi", "p": "inf"}) == PowerPhi("inf")
        assert orlicz_from_json({"kind": "log", "r": 2, "a": 1}) == LogPerturbed(2, 1)
        mix = orlicz_from_json({"kind": "mixture", "atoms": [{"p": 1, "w": 0.5}, {"p": 3, "w": 0.5}]})
        assert mix(1.0) == pytest.approx(0.5 + 0.5 / 3)
        lac = orlicz_from_json({"kind": "lacunary", "r": [2, 1.5], "b": [0.5, 0.5]})
        assert lac(1.0) == 1.0
        for bad in ({"kind": "psi", "p": 2, "x": 1}, {"kind": "nope"}, {"p": 2}):
            with pytest.raises(ValueError):
                orlicz_from_json(bad)


class TestMixture:
    def test_examples(self):
        assert psi_mixture(ExponentMeasure.dirac(2), 1.0) == 0.5
        assert psi_mixture(ExponentMeasure((1, 2), (0.5, 0.5)), 1.0) == 0.75
        assert psi_mixture(ExponentMeasure((1, "inf"), (0.5, 0.5)), 1.0) == 0.5

    def test_domain(self):
        with pytest.raises(ValueError):
            psi_mixture(ExponentMeasure.dirac(2), 1.5)

    def test_weights_must_sum_to_one(self):
        with pytest.raises(ValueError):
            ExponentMeasure((1, 2), (0.5, 0.6))

    def test_extension_beyond_one(self):
        F = Mixture(ExponentMeasure((1, "inf"), (0.5, 0.5)))
        assert F(1.0) == 0.5 and F(1.5) == math.inf
        assert F.infinite_beyond == 1.0

    @given(st.floats(0.2, 6), st.floats(0.2, 6), st.floats(0.01, 0.99))
    def test_nonincreasing_in_the_exponent(self, p, q, w):
        lo, hi = sorted((p, q))
        t = np.linspace(0, 1, 33)
        mu = ExponentMeasure((lo, 3.0), (w, 1 - w))
        pushed = ExponentMeasure((hi, 3.0), (w, 1 - w))
        assert np.all(psi_mixture(pushed, t) <= psi_mixture(mu, t) + 1e-15)


class TestQuadrature:
    def test_panel_exact_for_polynomials(self):
        for deg in range(0, 23):
            k, _ = gauss_kronrod(lambda x: x**deg, 0.0, 1.0)
            assert k == pytest.approx(1 / (deg + 1), rel=1e-14)

    def test_adaptive_against_closed_forms(self):
        val, err = integrate(np.exp, 0.0, 1.0)
        assert val == pytest.approx(E - 1, abs=1e-13)
        val, _ = integrate(lambda x: 1 / np.sqrt(x + 1e-300), 0.0, 1.0, abs_tol=1e-8, max_panels=20000)
        assert val == pytest.approx(2.0, abs=1e-7)
        assert integrate(np.exp, 1.0, 0.0)[0] == pytest.approx(1 - E)

    def test_budget_exhaustion_reports_tolerance(self):
        with pytest.raises(QuadratureError) as info:
            integrate(lambda x: np.sin(1 / (x + 1e-9)), 0.0, 1.0, abs_tol=1e-14, max_panels=50)
        assert info.value.error > 0


class TestConjugate:
    def test_psi_two_is_self_dual(self):
        v = np.geomspace(1e-4, 10, 200)
        np.testing.assert_allclose(conjugate(PowerPsi(2), v).values, v**2 / 2, atol=1e-6)

    def test_psi_one(self):
        np.testing.assert_array_equal(conjugate_values(PowerPsi(1), np.array([0.5, 1.5])), [0.0, math.inf])

    def test_psi_three_at_one(self):
        assert conjugate_values(PowerPsi(3), np.array([1.0]))[0] == pytest.approx(2 / 3, abs=1e-12)

    def test_maximizer_between_bracket_doublings(self):
        # for p = 3 and v = 2.25 the sup sits at u = 1.5, between the first two doubling points
        assert conjugate_values(PowerPsi(3), np.array([2.25]))[0] == pytest.approx(2.25**1.5 * 2 / 3, rel=1e-12)

    def test_infinite_ray_restricts_the_sup(self):
        # Φ_∞ = ∞ beyond 1, so the sup runs over [0, 1]: F*(v) = v
        np.testing.assert_allclose(conjugate_values(PowerPhi("inf"), np.array([0.5, 3.0])), [0.5, 3.0])

    def test_nonconvex_rejected(self):
        with pytest.raises(NonconvexError):
            conjugate(PowerPsi(0.5), np.array([1.0]))
        with pytest.raises(NonconvexError):
            conjugate(LogPerturbed(2, 1), np.array([1.0]))

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            conjugate(PowerPsi(2), np.array([1.0, 0.5]))

    @settings(max_examples=40, deadline=None)
    @given(st.floats(1.1, 6), st.floats(0, 3), st.floats(0, 3))
    def test_fenchel_young(self, p, u, v):
        F = PowerPsi(p)
        assert u * v <= F(u) + conjugate_values(F, np.array([v]))[0] + 1e-9

    def test_biconjugation(self):
        v = np.geomspace(1e-3, 2.0, 256)
        u = np.geomspace(0.05, 1.0, 50)
        for p in (1.5, 2.0, 3.0):
            back = conjugate_values(conjugate(PowerPsi(p), v), u)
            np.testing.assert_allclose(back, u**p / p, atol=1e-5)


class TestOrliczBound:
    def test_examples(self):
        r = orlicz_bound(PowerPsi(2), c=1, C=1, A=1, v=1)
        assert (r.w, r.bound_ok) == (0.5, True)
        assert r.conjugate_at_w == pytest.approx(0.125)
        r = orlicz_bound(PowerPsi(2), c=1, C=2, A=0.5, v=1)
        assert r.w == 0.5 and r.conjugate_at_w == pytest.approx(0.125) and r.bound_ok

    def test_small_v(self):
        r = orlicz_bound(PowerPsi(2), c=1, C=1, A=1, v=1e-9)
        assert r.w == 1e-9 and r.conjugate_at_w < 1e-17 and r.bound_ok

    def test_failing_hypothesis_names_u(self):
        with pytest.raises(OrliczBoundError) as info:
            orlicz_bound(PowerPsi(2), c=1, C=1, A=0.1, v=1)
        assert 0 < info.value.u <= 1
