import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import exp1

from nakano.grids import near_zero_grid, unit_grid
from nakano.orlicz import (
    ExponentMeasure,
    LogPerturbed,
    Mixture,
    NearZeroSearch,
    PowerPhi,
    PowerPsi,
    decay_diagnostic,
    doubling_equivalence,
    equivalence_near_zero,
    krs_membership,
    lacunary_build,
    log_identity_asymptote,
    log_perturbed_identity,
    minsupp_sandwich,
    power_difference_gap,
    psi_sup_distance,
)

# C(t) for (r, a, s) = (2, 1, 3), 50-digit mpmath quadrature of the direct p-integral
C_213 = {
    1 / math.e: 0.26491339698297457,
    1e-2: 0.021296458611426289,
    1e-4: 0.0056038205136113471,
    1e-6: 0.0025310074752156114,
    1e-8: 0.0014355437100164119,
}
# same for (r, a, s) = (2, 0.5, 3)
C_2h3 = {1 / math.e: 0.33552125728266511, 1e-2: 0.091532200020913163, 1e-8: 0.023741213036200707}


class TestKrs:
    def test_power_in_class(self):
        assert krs_membership(PowerPsi(2), 1, 3).passed

    def test_mixture_in_class(self):
        mu = ExponentMeasure((1, 3), (0.5, 0.5))
        assert krs_membership(Mixture(mu), 1, 3).passed

    def test_linear_fails_bound(self):
        rep = krs_membership(PowerPsi(1), 2, 3)
        assert not rep.passed
        (v,) = rep.by_condition("iv")
        assert v.points == (0.0, 1.0)
        assert v.margin == pytest.approx(0.5)

    @settings(max_examples=15, deadline=None)
    @given(st.lists(st.floats(1.0, 3.0), min_size=1, max_size=4), st.data())
    def test_mixtures_of_the_range(self, ps, data):
        w = np.array(data.draw(st.lists(st.floats(0.05, 1), min_size=len(ps), max_size=len(ps))))
        mu = ExponentMeasure(tuple(ps), tuple(w / w.sum()))
        assert krs_membership(Mixture(mu), 1, 3, grid=unit_grid(65)).passed


class TestNearZero:
    def test_constant_multiple(self):
        v = equivalence_near_zero(PowerPsi(2), PowerPhi(2))
        assert v.witness_found and (v["b"], v["C"], v["c"]) == (1.0, 2.0, 1.0)

    def test_dilation(self):
        v = equivalence_near_zero(PowerPsi(2), lambda t: PowerPsi(2)(2 * np.asarray(t)))
        assert v.witness_found and (v["b"], v["C"], v["c"]) == (2.0, 1.0, 0.5)

    def test_power_gap_is_a_violation(self):
        v = equivalence_near_zero(PowerPsi(2.5), PowerPsi(2))
        assert v.violation_found

    def test_doubling_both_ways(self):
        there, back = doubling_equivalence(PowerPsi(3), 2.0)
        assert there.witness_found and back.witness_found

    def test_search_box_recorded(self):
        v = equivalence_near_zero(PowerPsi(2), PowerPsi(2), NearZeroSearch(grid=near_zero_grid(1e-6, 1, 64)))
        assert v.searched["grid"]["n"] == 64


class TestSandwich:
    def test_two_atoms(self):
        r = minsupp_sandwich(ExponentMeasure((1, 3), (0.5, 0.5)), 2)
        assert r.lam == 0.5 and list(r.nu.p) == [1.0] and r.holds

    def test_identity(self):
        r = minsupp_sandwich(ExponentMeasure.dirac(2), 3)
        assert r.lam == 1.0 and r.max_violation <= 0.0

    def test_factor_ten(self):
        r = minsupp_sandwich(ExponentMeasure((1, 5), (0.1, 0.9)), 2)
        assert r.lam == pytest.approx(0.1) and r.holds

    def test_empty_band(self):
        with pytest.raises(ValueError):
            minsupp_sandwich(ExponentMeasure.dirac(2), 2)


class TestPowerInequalities:
    @settings(max_examples=200)
    @given(st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0, 1), st.floats(0, 1))
    def test_gap_nonpositive(self, r, s, u, v):
        r, s = sorted((r, s))
        u, v = sorted((u, v))
        assert power_difference_gap(r, s, u, v) <= 1e-12

    @pytest.mark.parametrize("r, s", [(1, 2), (1.5, 7), (0.5, 0.6)])
    def test_sup_distance(self, r, s):
        d, t = psi_sup_distance(r, s, unit_grid())
        assert d == pytest.approx(1 / r - 1 / s, abs=1e-9) and t == 1.0


class TestLogIdentity:
    def test_routes_agree_with_frozen_values(self):
        t = np.array(sorted(C_213))
        res = log_perturbed_identity(2, 1, 3, t)
        assert res.max_disagreement <= 1e-8
        np.testing.assert_allclose(res.c_substituted, [C_213[x] for x in t], rtol=1e-10)
        np.testing.assert_allclose(res.c_direct, [C_213[x] for x in t], rtol=1e-10)

    def test_fractional_power(self):
        t = np.array(sorted(C_2h3))
        res = log_perturbed_identity(2, 0.5, 3, t)
        np.testing.assert_allclose(res.c_substituted, [C_2h3[x] for x in t], rtol=1e-10)
        assert res.max_disagreement <= 1e-8

    def test_exponential_integral_closed_form(self):
        # a = 1: C = e^{rL}(E1(rL) − E1(sL)) / ((s − r)L)
        r, s, t = 2.0, 3.0, 1e-4
        L = -math.log(t)
        closed = math.exp(r * L) * (exp1(r * L) - exp1(s * L)) / ((s - r) * L)
        assert log_perturbed_identity(r, 1, s, [t]).values[0] == pytest.approx(closed, rel=1e-10)

    def test_ratio_definition_at_one_point(self):
        # direct ratio ∫_r^s Ψ_p(t) a(p−r)^{a−1}/(s−r)^a dp / F(t) with a = 1
        from scipy.integrate import quad

        r, s, t = 2.0, 3.0, 0.05
        num, _ = quad(lambda p: t**p / p / (s - r), r, s, epsabs=1e-15)
        assert log_perturbed_identity(r, 1, s, [t]).values[0] == pytest.approx(num / LogPerturbed(r, 1)(t), rel=1e-10)

    def test_decays_like_log_power(self):
        K = log_identity_asymptote(2, 1, 3)
        t = np.array([1e-20, 1e-40, 1e-80])
        scaled = np.array(log_perturbed_identity(2, 1, 3, t).values) * (-np.log(t)) ** 2
        assert np.all(np.diff(np.abs(scaled - K)) < 0)
        assert scaled[-1] == pytest.approx(K, rel=0.03)

    def test_lower_interval_end_not_attained(self):
        # the lower end 0.01 is not attained: C(1e-6) is about 0.00253 and C keeps falling
        res = log_perturbed_identity(2, 1, 3, [1e-2, 1e-4, 1e-6])
        assert not res.within(0.01, 100)
        assert res.values[-1] == pytest.approx(C_213[1e-6], rel=1e-10)

    def test_rejects_bad_grid(self):
        with pytest.raises(ValueError):
            log_perturbed_identity(2, 1, 3, [0.5])


class TestLacunary:
    def test_geometric_weights(self):
        F = lacunary_build(lambda n: 1 + 1 / n, lambda n: 2.0**-n, J=40, r_limit=1.0)
        assert F(1.0) == 1 - 2.0**-40
        assert decay_diagnostic(F, 1.0, (2, 4, 6)).strictly_decreasing

    def test_single_term_has_no_decay(self):
        F = lacunary_build([2.0], [1.0])
        d = decay_diagnostic(F, 2.0, (2, 4, 6))
        np.testing.assert_allclose(d.ratio, 1.0, rtol=1e-12)
        assert not d.strictly_decreasing

    def test_nonmonotone_rejected(self):
        with pytest.raises(ValueError, match="strictly decreasing"):
            lacunary_build([2.0, 2.5], [0.5, 0.5])

    def test_auto_truncation(self):
        F = lacunary_build(lambda n: 1 + 1 / n, lambda n: 2.0**-n)
        assert F.tail_weight < 1e-12
