import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nakano import (
    INF,
    INF_EXPONENT,
    Exponent,
    ExponentDomainError,
    ExtReal,
    IndeterminateForm,
    TailSpec,
    VarExponent,
    conjugate_exponent,
    essential_range,
    limit_points,
    phi,
    psi,
)

finite_ge1 = st.floats(min_value=1.0, max_value=1e6, allow_nan=False)


class TestExtReal:
    def test_ordering_and_infinity(self):
        assert ExtReal(3) < INF
        assert INF + 5 == INF
        assert INF.is_infinite and not ExtReal(2).is_infinite

    @pytest.mark.parametrize(
        "op",
        [lambda: ExtReal(0) * INF, lambda: INF * 0, lambda: INF - INF, lambda: INF / INF],
    )
    def test_indeterminate_forms_raise(self, op):
        with pytest.raises(IndeterminateForm):
            op()

    def test_nan_rejected(self):
        with pytest.raises(ValueError):
            ExtReal(float("nan"))

    def test_repr(self):
        assert repr(INF) == "inf"


class TestExponent:
    @pytest.mark.parametrize("text", ["inf", "Infinity", "∞"])
    def test_parse_infinity(self, text):
        assert Exponent(text).is_infinite

    @pytest.mark.parametrize("bad", [0, -1, float("nan"), "two"])
    def test_rejects_invalid(self, bad):
        with pytest.raises(ExponentDomainError):
            Exponent(bad)

    def test_reciprocal_and_json(self):
        assert INF_EXPONENT.reciprocal() == 0.0
        assert Exponent(4).reciprocal() == 0.25
        assert INF_EXPONENT.to_json() == "inf"
        assert Exponent(2).to_json() == 2.0

    def test_total_order(self):
        assert sorted([Exponent("inf"), Exponent(1), Exponent(0.5)]) == [Exponent(0.5), Exponent(1), INF_EXPONENT]


class TestConjugate:
    @pytest.mark.parametrize("p, q", [(2, 2), (1, math.inf), (4, 4 / 3), (math.inf, 1)])
    def test_examples(self, p, q):
        assert conjugate_exponent(p).value == q

    def test_below_one_is_an_error(self):
        with pytest.raises(ExponentDomainError):
            conjugate_exponent(0.9)

    @given(finite_ge1)
    def test_involution_is_exact(self, p):
        assert conjugate_exponent(conjugate_exponent(p)) == Exponent(p)

    @given(finite_ge1)
    def test_two_is_the_pivot(self, p):
        q = conjugate_exponent(p).value
        assert (p <= 2) == (q >= 2)
        if p == 2:
            assert q == 2

    def test_conjugate_is_reciprocal_complement(self):
        for p in np.linspace(1.01, 20, 50):
            q = conjugate_exponent(p).value
            assert 1 / p + 1 / q == pytest.approx(1.0, abs=1e-15)


class TestPowerFunctions:
    def test_conventions_at_infinity(self):
        assert phi(math.inf, 1.0) == 0.0
        assert phi(math.inf, 0.5) == 0.0
        assert phi(math.inf, 1.5) == math.inf
        assert psi(math.inf, 1.0) == 0.0
        assert psi(math.inf, 1.0 + 1e-12) == math.inf

    def test_zero_to_the_zero(self):
        assert phi(2.0, 0.0) == 0.0
        assert psi(0.5, 0.0) == 0.0

    def test_broadcasting(self):
        out = phi(np.array([1.0, 2.0, math.inf])[:, None], np.array([0.5, 2.0])[None, :])
        np.testing.assert_array_equal(out, [[0.5, 2.0], [0.25, 4.0], [0.0, math.inf]])
        assert psi(2, 3) == 4.5


class TestVarExponent:
    def test_masks(self):
        P = VarExponent((0.5, 1, "inf"), (1, 2, 3))
        np.testing.assert_array_equal(P.infinite_mask, [False, False, True])
        np.testing.assert_array_equal(P.convex_mask, [False, True, True])
        assert not P.is_convex()

    @pytest.mark.parametrize("w", [0.0, -1.0, math.inf])
    def test_bad_weights(self, w):
        with pytest.raises(ValueError):
            VarExponent((2,), (w,))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            VarExponent((), ())

    def test_json_roundtrip(self):
        P = VarExponent((2, "inf"), (1.0, 0.5), TailSpec.convergent(1.5))
        text = json.dumps(P.to_json())
        assert '"inf"' in text
        assert VarExponent.from_json(text) == P

    def test_json_unknown_keys_rejected(self):
        with pytest.raises(ValueError, match="unknown keys"):
            VarExponent.from_json({"atoms": [{"p": 2, "w": 1, "q": 3}]})
        with pytest.raises(ValueError, match="unknown keys"):
            VarExponent.from_json({"atoms": [{"p": 2}], "extra": 1})

    def test_conjugate_roundtrip_is_exact(self):
        P = VarExponent((1, 2.7, "inf"), (1, 1, 1), TailSpec.convergent(1.5))
        assert P.conjugate().conjugate() == P
        assert P.conjugate().tail.values == (Exponent(3.0),)

    def test_conjugate_needs_convexity(self):
        with pytest.raises(ExponentDomainError):
            VarExponent((0.5, 2), (1, 1)).conjugate()


class TestRanges:
    def test_essential_range_examples(self):
        R = essential_range(VarExponent((2, 3), (1, 1)))
        assert list(R) == [Exponent(2), Exponent(3)]
        assert (R.p_minus, R.p_plus) == (Exponent(2), Exponent(3))
        assert list(essential_range(VarExponent((2, 2), (0.5, 0.5)))) == [Exponent(2)]
        R = essential_range(VarExponent((1,), (1,), TailSpec.convergent(2)))
        assert list(R) == [Exponent(1), Exponent(2)]
        assert essential_range(VarExponent((0.5, 3), (1, 1))).p_c == 0.5

    def test_limit_points(self):
        mk = lambda tail: VarExponent((1,), (1,), tail)  # noqa: E731
        assert limit_points(mk(TailSpec.constant(2))) == (Exponent(2),)
        assert limit_points(mk(TailSpec.convergent(1.5))) == (Exponent(1.5),)
        assert limit_points(mk(TailSpec.periodic([3, 2, 3]))) == (Exponent(2), Exponent(3))
        with pytest.raises(ExponentDomainError, match="A\\(P\\) undefined"):
            limit_points(VarExponent((1,), (1,)))

    @given(st.lists(st.tuples(st.floats(0.1, 20), st.floats(0.01, 5)), min_size=1, max_size=8))
    def test_range_sorted_unique(self, atoms):
        R = list(essential_range(VarExponent.from_atoms(atoms)))
        assert R == sorted(set(R))
        assert set(R) == {Exponent(p) for p, _ in atoms}
