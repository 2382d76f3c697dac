"""Academic term arithmetic: seasons, term labels, and calendar cycles.

A calendar is an ordered list of seasons making up one academic cycle,
``("Fall", "Spring")`` by default. Chronological comparison uses the
season's slot within the calendar year, so Fall 2025 < Spring 2026 <
Fall 2026 regardless of the cycle's listing order.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Sequence

from .errors import ParseError

# Chronological slot of each season within a calendar year.
_SEASON_POS = {"Spring": 0, "Summer": 1, "Fall": 2}

SEASONS = tuple(_SEASON_POS)

DEFAULT_CALENDAR: tuple[str, ...] = ("Fall", "Spring")


def normalize_season(value: str) -> str:
    season = value.strip().capitalize()
    if season not in _SEASON_POS:
        raise ParseError(f"unknown season {value!r}; expected one of {sorted(_SEASON_POS)}")
    return season


@functools.total_ordering
@dataclass(frozen=True)
class TermLabel:
    """A single academic term, e.g. Fall 2025."""

    season: str
    year: int

    def __post_init__(self):
        object.__setattr__(self, "season", normalize_season(self.season))
        if not isinstance(self.year, int) or self.year < 1:
            raise ParseError(f"bad term year {self.year!r}")

    def sort_key(self) -> tuple[int, int]:
        return (self.year, _SEASON_POS[self.season])

    def __lt__(self, other: "TermLabel") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return f"{self.season} {self.year}"


def parse_term(text: str) -> TermLabel:
    """Parse "Fall 2025" or "Fall-2025" (case-insensitive) into a TermLabel."""
    parts = text.replace("-", " ").split()
    if len(parts) != 2 or not parts[1].isdigit():
        raise ParseError(f"bad term label {text!r}; expected '<Season> <Year>'")
    return TermLabel(parts[0], int(parts[1]))


def successor(term: TermLabel, calendar: Sequence[str] = DEFAULT_CALENDAR) -> TermLabel:
    """Next academic term in the calendar cycle. Total and strictly increasing."""
    cal = [normalize_season(s) for s in calendar]
    if not cal:
        raise ParseError("calendar must list at least one season")
    if term.season not in cal:
        # Re-enter the cycle at the next calendar season in the same year, or wrap.
        later = [s for s in cal if _SEASON_POS[s] > _SEASON_POS[term.season]]
        if later:
            return TermLabel(min(later, key=_SEASON_POS.get), term.year)
        return TermLabel(min(cal, key=_SEASON_POS.get), term.year + 1)
    i = cal.index(term.season)
    nxt = cal[(i + 1) % len(cal)]
    wraps = _SEASON_POS[nxt] <= _SEASON_POS[term.season]
    return TermLabel(nxt, term.year + 1 if wraps else term.year)


def next_with_season(
    reference: TermLabel, season: str, calendar: Sequence[str] = DEFAULT_CALENDAR
) -> TermLabel:
    """First term strictly after ``reference`` whose season matches."""
    season = normalize_season(season)
    term = successor(reference, calendar)
    for _ in range(2 * len(calendar) + 4):
        if term.season == season:
            return term
        term = successor(term, calendar)
    raise ParseError(f"season {season!r} never occurs in calendar {tuple(calendar)}")


def term_span(start: TermLabel, end: TermLabel, calendar: Sequence[str] = DEFAULT_CALENDAR) -> int:
    """Number of terms from ``start`` through ``end`` inclusive (0 when end < start)."""
    if end < start:
        return 0
    count = 1
    term = start
    while term != end:
        term = successor(term, calendar)
        count += 1
        if count > 1000:
            raise ParseError(f"{end} not reachable from {start} with calendar {tuple(calendar)}")
    return count
