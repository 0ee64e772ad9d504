from datetime import date

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import make_panel
from ranklab.errors import DomainError, DuplicateKeyError, InsufficientDataError, ParseError
from ranklab.panel import (
    CleaningPolicy,
    PricePanel,
    RawPanel,
    clean,
    observation_dates,
    parse_csv,
    parse_series_csv,
    series_to_csv,
    synthesize,
    to_csv,
)
from ranklab.ranksde import RankModelSpec

WIDE = "date,gold,oil\n2010-01-04,10,50\n2010-01-05,12,45\n"
LONG_ROWS = [
    "2010-01-04,gold,10",
    "2010-01-04,oil,50",
    "2010-01-05,gold,12",
    "2010-01-05,oil,45",
]


def long_csv(rows):
    return "date,commodity,price\n" + "\n".join(rows) + "\n"


def test_wide_parse_transcribes_matrix():
    p = clean(parse_csv(WIDE, "wide"))
    assert p.commodities == ("gold", "oil")
    assert p.dates == (date(2010, 1, 4), date(2010, 1, 5))
    np.testing.assert_array_equal(p.prices, [[10, 50], [12, 45]])


def test_long_parse_is_row_order_independent():
    a = clean(parse_csv(long_csv(LONG_ROWS), "long"))
    # shuffled rows; gold still appears first so the column order is unchanged
    shuffled = [LONG_ROWS[2], LONG_ROWS[3], LONG_ROWS[0], LONG_ROWS[1]]
    b = clean(parse_csv(long_csv(shuffled), "long"))
    assert a == b
    assert a == clean(parse_csv(WIDE, "wide"))


def test_long_parse_column_order_is_first_appearance():
    rows = [LONG_ROWS[1], LONG_ROWS[0], LONG_ROWS[3], LONG_ROWS[2]]
    p = clean(parse_csv(long_csv(rows), "long"))
    assert p.commodities == ("oil", "gold")
    np.testing.assert_array_equal(p.prices, [[50, 10], [45, 12]])


def test_long_duplicate_key_is_an_error():
    rows = LONG_ROWS + ["2010-01-05,gold,13"]
    with pytest.raises(DuplicateKeyError) as exc:
        parse_csv(long_csv(rows), "long")
    assert exc.value.row == 6


@pytest.mark.parametrize(
    "text, layout, err, row",
    [
        ("date,a,b\n2010-13-01,1,2\n", "wide", ParseError, 2),
        ("date,a,b\n2010/01/01,1,2\n", "wide", ParseError, 2),
        ("date,a,b\n2010-01-01,1,x\n", "wide", ParseError, 2),
        ("date,a,b\n2010-01-01,1,2\n2010-01-02,0,2\n", "wide", DomainError, 3),
        ("date,a,b\n2010-01-01,-1,2\n", "wide", DomainError, 2),
        ("date,a,b\n2010-01-01,1,2\n2010-01-01,1,2\n", "wide", DuplicateKeyError, 3),
        ("date,commodity,price\n2010-01-01,a,nan\n", "long", ParseError, 2),
        ("date,commodity,price\n2010-01-01,a\n", "long", ParseError, 2),
    ],
)
def test_parse_errors_carry_row(text, layout, err, row):
    with pytest.raises(err) as exc:
        parse_csv(text, layout)
    assert exc.value.row == row


def test_wrong_header():
    with pytest.raises(ParseError):
        parse_csv("day,commodity,price\n", "long")
    with pytest.raises(ParseError):
        parse_csv("when,a,b\n", "wide")


def test_identifiers_are_case_sensitive():
    p = clean(parse_csv("date,Gold,gold\n2010-01-04,1,2\n2010-01-05,1,2\n"))
    assert p.commodities == ("Gold", "gold")


GAPPY = "date,a,b\n2010-01-04,1,2\n2010-01-05,,3\n2010-01-06,4,5\n"


def test_clean_complete_panel_is_identity():
    raw = parse_csv(WIDE)
    for policy in (CleaningPolicy(), CleaningPolicy("drop_incomplete_commodities"), CleaningPolicy.forward_fill(2)):
        assert clean(raw, policy) == clean(raw)


def test_drop_incomplete_dates():
    p = clean(parse_csv(GAPPY), CleaningPolicy("drop_incomplete_dates"))
    assert p.dates == (date(2010, 1, 4), date(2010, 1, 6))


def test_forward_fill_one():
    p = clean(parse_csv(GAPPY), CleaningPolicy.forward_fill(1))
    np.testing.assert_array_equal(p.prices, [[1, 2], [1, 3], [4, 5]])


def test_forward_fill_leaves_long_gaps_and_drops_them():
    text = "date,a,b\n2010-01-04,1,2\n2010-01-05,,3\n2010-01-06,,4\n2010-01-07,5,6\n"
    p = clean(parse_csv(text), CleaningPolicy.forward_fill(1))
    assert len(p.dates) == 2
    p = clean(parse_csv(text), CleaningPolicy.forward_fill(2))
    np.testing.assert_array_equal(p.prices[:, 0], [1, 1, 1, 5])


def test_forward_fill_max_gap_bounded_by_length():
    with pytest.raises(DomainError):
        clean(parse_csv(GAPPY), CleaningPolicy.forward_fill(10))


def test_drop_incomplete_commodities():
    text = "date,a,b,c\n2010-01-04,1,2,3\n2010-01-05,,3,4\n2010-01-06,4,5,6\n"
    p = clean(parse_csv(text), CleaningPolicy("drop_incomplete_commodities"))
    assert p.commodities == ("b", "c")


def test_clean_insufficient_data():
    with pytest.raises(InsufficientDataError):
        clean(parse_csv("date,a,b\n2010-01-04,1,\n2010-01-05,2,3\n"))


def test_panel_invariants_enforced():
    with pytest.raises(InsufficientDataError):
        make_panel([[1.0, 2.0]])
    with pytest.raises(DomainError):
        make_panel([[1.0, np.inf], [1.0, 2.0]])
    with pytest.raises(DomainError):
        PricePanel([date(2010, 1, 2), date(2010, 1, 1)], ["a", "b"], [[1, 2], [1, 2]])


def test_panel_is_immutable():
    p = make_panel([[1.0, 2.0], [3.0, 4.0]])
    with pytest.raises(ValueError):
        p.prices[0, 0] = 5.0


prices_st = st.integers(2, 6).flatmap(
    lambda n: st.lists(
        st.lists(st.floats(1e-6, 1e6, allow_nan=False, allow_infinity=False), min_size=n, max_size=n),
        min_size=2,
        max_size=8,
    )
)


@settings(max_examples=200, deadline=None)
@given(prices_st)
def test_wide_csv_round_trip(rows):
    p = make_panel(rows)
    assert clean(parse_csv(to_csv(p))) == p


@settings(max_examples=200, deadline=None)
@given(prices_st, st.data())
def test_clean_is_idempotent(rows, data):
    arr = np.array(rows)
    mask = np.array(data.draw(st.lists(st.booleans(), min_size=arr.size, max_size=arr.size))).reshape(arr.shape)
    arr[mask] = np.nan
    base = make_panel(rows)
    raw = RawPanel(base.dates, base.commodities, arr)
    for policy in (CleaningPolicy(), CleaningPolicy("drop_incomplete_commodities"), CleaningPolicy.forward_fill(1)):
        try:
            once = clean(raw, policy)
        except InsufficientDataError:
            continue
        assert clean(once, policy) == once


def test_series_csv_round_trip():
    dates = observation_dates(4)
    cols = {"x": [0.1, -0.2, np.nan, 1e-17], "y": [1.0, 2.0, 3.0, 4.0]}
    d, back = parse_series_csv(series_to_csv(dates, cols))
    assert d == tuple(dates)
    np.testing.assert_array_equal(back["x"], cols["x"])
    np.testing.assert_array_equal(back["y"], cols["y"])


def test_observation_dates():
    d = observation_dates(6)
    assert all(x.weekday() < 5 for x in d)
    m = observation_dates(14, "monthly", date(1980, 1, 1))
    assert m[12] == date(1981, 1, 1)


def test_synthesize_degenerate_is_constant():
    spec = RankModelSpec([0, 0, 0], [0, 0, 0], horizon=0.1, init_log_prices=[0.0, 1.0, 2.0])
    p = synthesize(spec, 1)
    np.testing.assert_array_equal(p.prices, np.tile(np.exp([0.0, 1.0, 2.0]), (len(p.dates), 1)))


def test_synthesize_deterministic():
    spec = RankModelSpec([-0.1, 0.0, 0.1], 0.2, horizon=0.5)
    a, b = synthesize(spec, 42), synthesize(spec, 42)
    assert a == b
    assert not np.array_equal(a.prices, synthesize(spec, 43).prices)


def test_synthesize_monthly_labels():
    spec = RankModelSpec([-0.1, 0.1], 0.2, dt=1 / 120, obs_interval=1 / 12, horizon=2)
    p = synthesize(spec, 0)
    assert p.frequency == "monthly" and len(p.dates) == 25


def test_synthesized_volatility_matches_rank_vols():
    s = 0.25
    spec = RankModelSpec([-0.3, -0.1, 0, 0.1, 0.3], s, horizon=10)
    p = synthesize(spec, 2024)
    vol = np.diff(np.log(p.prices), axis=0).std(axis=0, ddof=1) * np.sqrt(252)
    np.testing.assert_allclose(vol, s, rtol=0.05)

    s_vec = np.array([0.15, 0.2, 0.25, 0.3, 0.35])
    spec = RankModelSpec([-0.3, -0.1, 0, 0.1, 0.3], s_vec, horizon=10)
    dx = np.diff(np.log(synthesize(spec, 7).prices), axis=0)
    pooled = np.sqrt((dx**2).mean() * 252)
    assert abs(pooled / np.sqrt(np.mean(s_vec**2)) - 1) < 0.05
