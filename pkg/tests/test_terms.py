from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from advisor.errors import ParseError
from advisor.terms import TermLabel, next_with_season, parse_term, successor, term_span


def test_successor_crosses_calendar_year():
    assert successor(TermLabel("Fall", 2025)) == TermLabel("Spring", 2026)
    assert successor(TermLabel("Spring", 2026)) == TermLabel("Fall", 2026)


def test_successor_with_summer_calendar():
    cal = ("Fall", "Spring", "Summer")
    assert successor(TermLabel("Spring", 2026), cal) == TermLabel("Summer", 2026)
    assert successor(TermLabel("Summer", 2026), cal) == TermLabel("Fall", 2026)
    assert successor(TermLabel("Fall", 2026), cal) == TermLabel("Spring", 2027)


def test_successor_reenters_cycle_for_out_of_calendar_season():
    assert successor(TermLabel("Summer", 2025)) == TermLabel("Fall", 2025)


def test_ordering_is_chronological():
    assert TermLabel("Fall", 2025) < TermLabel("Spring", 2026) < TermLabel("Fall", 2026)


def test_parse_and_format_round_trip():
    assert parse_term("Fall 2025") == TermLabel("Fall", 2025)
    assert parse_term("spring-2026") == TermLabel("Spring", 2026)
    assert str(TermLabel("Fall", 2025)) == "Fall 2025"


def test_parse_rejects_garbage():
    with pytest.raises(ParseError):
        parse_term("sometime soon")
    with pytest.raises(ParseError):
        TermLabel("Autumn", 2025)


def test_next_with_season():
    ref = TermLabel("Fall", 2025)
    assert next_with_season(ref, "Spring") == TermLabel("Spring", 2026)
    assert next_with_season(ref, "Fall") == TermLabel("Fall", 2026)


def test_term_span_counts_inclusively():
    assert term_span(TermLabel("Fall", 2025), TermLabel("Fall", 2025)) == 1
    assert term_span(TermLabel("Fall", 2025), TermLabel("Spring", 2027)) == 4
    assert term_span(TermLabel("Spring", 2026), TermLabel("Fall", 2025)) == 0


@given(
    year=st.integers(min_value=1990, max_value=2100),
    season=st.sampled_from(["Fall", "Spring"]),
    steps=st.integers(min_value=1, max_value=8),
)
def test_successor_strictly_increases(year, season, steps):
    term = TermLabel(season, year)
    for _ in range(steps):
        nxt = successor(term)
        assert nxt > term
        term = nxt
