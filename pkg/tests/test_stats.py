import numpy as np
import pytest
import scipy.stats
from hypothesis import given, settings
from hypothesis import strategies as st

from polarlab.errors import DegenerateInputError, ParameterError
from polarlab.stats import betainc_regularized, ensemble_stats, pearson


class TestEnsembleStats:
    def test_one_to_five(self):
        s = ensemble_stats([1, 2, 3, 4, 5])
        assert (s.q1, s.median, s.q3) == (2.0, 3.0, 4.0)
        assert s.mean == 3.0
        assert s.std == pytest.approx(np.sqrt(2.0))

    def test_interpolated_quartiles(self):
        s = ensemble_stats([1.0, 2.0, 3.0, 4.0])
        assert s.q1 == pytest.approx(1.75)
        assert s.q3 == pytest.approx(3.25)

    def test_empty_rejected(self):
        with pytest.raises(ParameterError):
            ensemble_stats([])


class TestIncompleteBeta:
    @given(
        a=st.floats(0.5, 20), b=st.floats(0.5, 20), x=st.floats(0.001, 0.999)
    )
    @settings(max_examples=200, deadline=None)
    def test_matches_scipy(self, a, b, x):
        ours = betainc_regularized(a, b, x)
        ref = scipy.stats.beta.cdf(x, a, b)
        assert ours == pytest.approx(ref, abs=1e-12)

    def test_boundaries(self):
        assert betainc_regularized(2.0, 3.0, 0.0) == 0.0
        assert betainc_regularized(2.0, 3.0, 1.0) == 1.0

    def test_domain_checks(self):
        with pytest.raises(ParameterError):
            betainc_regularized(0.0, 1.0, 0.5)
        with pytest.raises(ParameterError):
            betainc_regularized(1.0, 1.0, 1.5)


class TestPearson:
    def test_perfect_linear(self):
        res = pearson([1, 2, 3, 4], [3, 5, 7, 9])  # y = 2x + 1
        assert res.r == pytest.approx(1.0)
        assert res.p_value <= 1e-10

    def test_perfect_negative(self):
        res = pearson([1, 2, 3], [3, 2, 1])
        assert res.r == pytest.approx(-1.0)
        assert res.p_value <= 1e-6  # only 1 degree of freedom here

    def test_hand_computed(self):
        res = pearson([1, 2, 3, 4], [1, 3, 2, 4])
        assert res.r == pytest.approx(0.8)

    @given(seed=st.integers(0, 2**31 - 1), n=st.integers(3, 60))
    @settings(max_examples=60, deadline=None)
    def test_matches_scipy(self, seed, n):
        rng = np.random.default_rng(seed)
        x = rng.standard_normal(n)
        y = rng.standard_normal(n) + 0.5 * x
        ours = pearson(x, y)
        ref_r, ref_p = scipy.stats.pearsonr(x, y)
        assert ours.r == pytest.approx(ref_r, abs=1e-12)
        assert ours.p_value == pytest.approx(ref_p, abs=1e-10)

    def test_zero_variance_rejected(self):
        with pytest.raises(DegenerateInputError):
            pearson([1, 1, 1], [1, 2, 3])

    def test_length_checks(self):
        with pytest.raises(ParameterError):
            pearson([1, 2], [1, 2])
        with pytest.raises(ParameterError):
            pearson([1, 2, 3], [1, 2])
