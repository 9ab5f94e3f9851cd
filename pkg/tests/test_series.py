import datetime

import numpy as np
import pytest

from potrisk.errors import (
    EmptyPeriodWarning,
    OverlappingRanges,
    TooFewObservations,
    ValidationError,
    ZeroDenominator,
)
from potrisk.series import (
    EarningsSeries,
    box_plot,
    compute_returns,
    read_earnings_csv,
    read_returns_csv,
    split_by_period,
    split_by_sign,
    write_returns_csv,
)

from helpers import weekly_returns


def _earnings(revenues, start=datetime.date(1990, 1, 5)):
    dates = tuple(start + datetime.timedelta(weeks=i) for i in range(len(revenues)))
    return EarningsSeries(dates=dates, revenues=np.asarray(revenues, dtype=float))


class TestComputeReturns:
    def test_identity_case(self):
        out = compute_returns(_earnings([100.0, 100.0]))
        assert out.values.tolist() == [0.0]

    def test_single_step_gain(self):
        out = compute_returns(_earnings([100.0, 150.0]))
        assert out.values[0] == pytest.approx(0.5, abs=1e-15)

    def test_hand_evaluation(self):
        out = compute_returns(_earnings([100.0, 150.0, 120.0]))
        np.testing.assert_allclose(out.values, [0.5, -0.2], atol=1e-9)

    def test_dates_are_later_weekend(self):
        earnings = _earnings([100.0, 150.0, 120.0])
        out = compute_returns(earnings)
        assert out.dates == earnings.dates[1:]

    def test_too_few_observations(self):
        with pytest.raises(TooFewObservations):
            compute_returns(_earnings([100.0]))

    def test_zero_denominator(self):
        with pytest.raises(ZeroDenominator):
            compute_returns(_earnings([100.0, 0.0, 120.0]))

    def test_trailing_zero_revenue_is_fine(self):
        out = compute_returns(_earnings([100.0, 0.0]))
        assert out.values[0] == -1.0

    @pytest.mark.parametrize("seed", range(5))
    def test_reconstruction_round_trip(self, seed):
        rng = np.random.default_rng(seed)
        revenues = np.exp(rng.normal(4.0, 0.5, size=60))
        earnings = _earnings(revenues)
        returns = compute_returns(earnings)
        assert np.all(returns.values >= -1.0)
        rebuilt = [revenues[0]]
        for v in returns.values:
            rebuilt.append(rebuilt[-1] * (1.0 + v))
        np.testing.assert_allclose(rebuilt, revenues, rtol=1e-12)


class TestSplitByPeriod:
    def _ten_weeks(self):
        return weekly_returns(np.arange(10) / 10.0, start=datetime.date(2001, 1, 5))

    def test_midpoint_partition(self):
        returns = self._ten_weeks()
        mid = returns.dates[5]
        a, b = split_by_period(returns, [(returns.dates[0], mid), (mid, datetime.date(2002, 1, 1))])
        assert len(a) + len(b) == 10

    def test_boundary_date_belongs_to_starting_range(self):
        returns = self._ten_weeks()
        mid = returns.dates[5]
        a, b = split_by_period(returns, [(returns.dates[0], mid), (mid, datetime.date(2002, 1, 1))])
        assert mid not in a.dates
        assert b.dates[0] == mid

    def test_empty_second_range_warns(self):
        returns = self._ten_weeks()
        with pytest.warns(EmptyPeriodWarning):
            a, b = split_by_period(
                returns,
                [(datetime.date(2000, 1, 1), datetime.date(2002, 1, 1)),
                 (datetime.date(2005, 1, 1), datetime.date(2006, 1, 1))],
            )
        assert len(a) == 10
        assert len(b) == 0

    def test_overlapping_ranges(self):
        returns = self._ten_weeks()
        with pytest.raises(OverlappingRanges):
            split_by_period(
                returns,
                [(datetime.date(2001, 1, 1), datetime.date(2001, 2, 1)),
                 (datetime.date(2001, 1, 20), datetime.date(2001, 3, 1))],
            )

    def test_invalid_range(self):
        with pytest.raises(ValidationError):
            split_by_period(self._ten_weeks(), [(datetime.date(2001, 2, 1), datetime.date(2001, 1, 1))])

    def test_order_preserved(self):
        returns = self._ten_weeks()
        (only,) = split_by_period(returns, [(datetime.date(2000, 1, 1), datetime.date(2002, 1, 1))])
        assert only.dates == returns.dates


class TestSplitBySign:
    def test_mixed(self):
        split = split_by_sign(weekly_returns([0.5, -0.2, 0.0, 0.1]))
        assert split.positive.values.tolist() == [0.5, 0.1]
        assert split.negative.values.tolist() == [pytest.approx(0.2)]
        assert split.n_zero == 1

    def test_all_positive(self):
        split = split_by_sign(weekly_returns([0.5, 0.1]))
        assert len(split.negative) == 0

    def test_sign_flip(self):
        split = split_by_sign(weekly_returns([-0.3]))
        assert len(split.positive) == 0
        assert split.negative.values.tolist() == [pytest.approx(0.3)]

    @pytest.mark.parametrize("seed", range(5))
    def test_counts_reconcile(self, seed):
        rng = np.random.default_rng(seed)
        vals = np.round(rng.normal(0, 1, size=200), 1)
        split = split_by_sign(weekly_returns(vals))
        assert len(split.positive) + len(split.negative) + split.n_zero == 200


class TestBoxPlot:
    def test_hand_evaluation(self):
        s = box_plot(weekly_returns([1.0, 2.0, 3.0, 4.0, 5.0]))
        assert (s.q1, s.median, s.q3) == (2.0, 3.0, 4.0)
        assert (s.whisker_low, s.whisker_high) == (-1.0, 7.0)
        assert s.min_outlier is None and s.max_outlier is None

    def test_constant_sample(self):
        s = box_plot(weekly_returns([1.0, 1.0, 1.0, 1.0]))
        assert s.iqr == 0.0
        assert s.whisker_low == s.whisker_high == 1.0
        assert s.min_outlier is None and s.max_outlier is None

    def test_max_outlier(self):
        s = box_plot(weekly_returns([1.0, 2.0, 3.0, 4.0, 100.0]))
        assert s.max_outlier == 100.0
        assert s.min_outlier is None

    def test_too_few(self):
        with pytest.raises(TooFewObservations):
            box_plot(weekly_returns([1.0, 2.0, 3.0]))

    @pytest.mark.parametrize("seed", range(8))
    def test_outlier_invariants(self, seed):
        rng = np.random.default_rng(seed)
        s = box_plot(weekly_returns(rng.standard_t(2, size=50)))
        assert s.q1 <= s.median <= s.q3
        assert s.iqr == pytest.approx(s.q3 - s.q1)
        if s.min_outlier is not None:
            assert s.min_outlier < s.whisker_low
        if s.max_outlier is not None:
            assert s.max_outlier > s.whisker_high


class TestCsv:
    def test_round_trip(self, tmp_path):
        returns = weekly_returns([0.123456789012345, -0.5, 0.0])
        path = tmp_path / "returns.csv"
        write_returns_csv(returns, path)
        back = read_returns_csv(path)
        assert back.dates == returns.dates
        np.testing.assert_allclose(back.values, returns.values, rtol=1e-14)

    def test_returns_csv_has_15_significant_digits(self, tmp_path):
        returns = weekly_returns([1.0 / 3.0])
        path = tmp_path / "returns.csv"
        write_returns_csv(returns, path)
        assert "0.333333333333333" in path.read_text()

    def test_earnings_reader(self, tmp_path):
        path = tmp_path / "e.csv"
        path.write_text("date,revenue\n2001-01-05,100.0\n2001-01-12,150.0\n")
        earnings = read_earnings_csv(path)
        assert len(earnings) == 2
        assert earnings.revenues.tolist() == [100.0, 150.0]

    def test_earnings_reader_bad_header(self, tmp_path):
        path = tmp_path / "e.csv"
        path.write_text("week,money\n2001-01-05,100.0\n")
        with pytest.raises(ValidationError):
            read_earnings_csv(path)

    def test_earnings_reader_reports_row_number(self, tmp_path):
        path = tmp_path / "e.csv"
        path.write_text("date,revenue\n2001-01-05,100.0\nnot-a-date,1.0\n")
        with pytest.raises(ValidationError, match=":3"):
            read_earnings_csv(path)

    def test_earnings_reader_rejects_negative_revenue(self, tmp_path):
        path = tmp_path / "e.csv"
        path.write_text("date,revenue\n2001-01-05,100.0\n2001-01-12,-1.0\n")
        with pytest.raises(ValidationError):
            read_earnings_csv(path)

    def test_earnings_reader_rejects_unsorted_dates(self, tmp_path):
        path = tmp_path / "e.csv"
        path.write_text("date,revenue\n2001-01-12,100.0\n2001-01-05,1.0\n")
        with pytest.raises(ValidationError):
            read_earnings_csv(path)
