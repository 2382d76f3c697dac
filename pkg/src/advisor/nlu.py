"""Intent classification and entity extraction over advising queries.

Both steps are deterministic keyword/pattern rules driven by editable
config tables shipped under assets/. Routing reproducibility matters more
here than linguistic coverage, so there is no learned component.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from .catalog import Catalog
from .errors import ParseError
from .terms import TermLabel, next_with_season, normalize_season, successor


class AdvisingIntent(str, Enum):
    SHORT_TERM = "ShortTerm"
    LONG_TERM = "LongTerm"
    SKILL_ALIGNED = "SkillAligned"
    OUT_OF_SCOPE = "OutOfScope"


@dataclass(frozen=True)
class IntentLexicon:
    """Cue phrase table. Matching is word-bounded on normalized text."""

    long_term: tuple[str, ...]
    skill_aligned: tuple[str, ...]
    short_term: tuple[str, ...]

    @classmethod
    def from_dict(cls, data: Mapping) -> "IntentLexicon":
        return cls(
            long_term=tuple(data.get("long_term", ())),
            skill_aligned=tuple(data.get("skill_aligned", ())),
            short_term=tuple(data.get("short_term", ())),
        )


@dataclass(frozen=True)
class SkillTable:
    """Surface-form synonyms plus related-skill classes used for expansion."""

    synonyms: Mapping[str, str]
    classes: Mapping[str, tuple[str, ...]]

    @classmethod
    def from_dict(cls, data: Mapping) -> "SkillTable":
        return cls(
            synonyms={k.lower(): v.lower() for k, v in data.get("synonyms", {}).items()},
            classes={k.lower(): tuple(x.lower() for x in v) for k, v in data.get("classes", {}).items()},
        )

    def expand(self, skills: Sequence[str]) -> tuple[str, ...]:
        """Ordered expansion: each skill followed by its class members, deduped."""
        out: list[str] = []
        for skill in skills:
            for tag in self.classes.get(skill, (skill,)):
                if tag not in out:
                    out.append(tag)
        return tuple(out)


@dataclass(frozen=True)
class ExtractedEntities:
    course_ids: frozenset[str] = frozenset()
    unknown_course_ids: frozenset[str] = frozenset()
    skills: frozenset[str] = frozenset()
    expanded_skills: tuple[str, ...] = ()
    credit_cap: int | None = None
    term: TermLabel | None = None
    program_hint: str | None = None

    def to_dict(self) -> dict:
        return {
            "course_ids": sorted(self.course_ids),
            "unknown_course_ids": sorted(self.unknown_course_ids),
            "skills": sorted(self.skills),
            "expanded_skills": list(self.expanded_skills),
            "credit_cap": self.credit_cap,
            "term": str(self.term) if self.term else None,
            "program_hint": self.program_hint,
        }


@dataclass(frozen=True)
class ParsedQuery:
    raw_text: str
    intent: AdvisingIntent
    entities: ExtractedEntities

    def to_dict(self) -> dict:
        return {
            "raw_text": self.raw_text,
            "intent": self.intent.value,
            "entities": self.entities.to_dict(),
        }


def _load_asset(name: str) -> dict:
    return json.loads(resources.files("advisor.assets").joinpath(name).read_text(encoding="utf-8"))


@lru_cache(maxsize=1)
def default_lexicon() -> IntentLexicon:
    return IntentLexicon.from_dict(_load_asset("intent_lexicon.json"))


@lru_cache(maxsize=1)
def default_skill_table() -> SkillTable:
    return SkillTable.from_dict(_load_asset("skill_table.json"))


def load_lexicon(path: str | Path) -> IntentLexicon:
    return IntentLexicon.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def load_skill_table(path: str | Path) -> SkillTable:
    return SkillTable.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def normalize(text: str) -> str:
    """Lowercase, fold separators to spaces, collapse runs of whitespace."""
    text = re.sub(r"[-_/]", " ", text.lower())
    return re.sub(r"\s+", " ", text).strip()


def _phrase_found(phrase: str, normalized: str) -> bool:
    return re.search(rf"(?<!\w){re.escape(normalize(phrase))}(?!\w)", normalized) is not None


def classify_intent(text: str, lexicon: IntentLexicon | None = None) -> AdvisingIntent:
    """Cue-class priority: LongTerm > SkillAligned > ShortTerm, else OutOfScope."""
    if not text.strip():
        raise ParseError("query text must be non-empty")
    lexicon = lexicon or default_lexicon()
    norm = normalize(text)
    if any(_phrase_found(p, norm) for p in lexicon.long_term):
        return AdvisingIntent.LONG_TERM
    if any(_phrase_found(p, norm) for p in lexicon.skill_aligned):
        return AdvisingIntent.SKILL_ALIGNED
    if any(_phrase_found(p, norm) for p in lexicon.short_term):
        return AdvisingIntent.SHORT_TERM
    return AdvisingIntent.OUT_OF_SCOPE


_CAP_PATTERNS = (
    r"max(?:imum)?(?: of)? (\d{1,2}) credits?",
    r"(\d{1,2}) credit cap",
    r"cap(?:ped)? (?:of|at) (\d{1,2}) credits?",
    r"no more than (\d{1,2}) credits?",
    r"at most (\d{1,2}) credits?",
    r"under (\d{1,2}) credits?",
)

_HINT_STOPWORDS = {
    "the", "a", "an", "my", "our", "your", "this", "that", "of", "for", "in", "to",
    "finish", "finishing", "complete", "completing", "start", "starting", "take",
    "pursue", "pursuing", "toward", "towards", "with", "on",
}


def _extract_credit_cap(norm: str) -> int | None:
    for pattern in _CAP_PATTERNS:
        m = re.search(rf"(?<!\w){pattern}(?!\w)", norm)
        if m:
            cap = int(m.group(1))
            if cap >= 1:
                return cap
    return None


def _extract_term(norm: str, reference: TermLabel, calendar: Sequence[str]) -> TermLabel | None:
    m = re.search(r"(?<!\w)(fall|spring|summer) (\d{4})(?!\d)", norm)
    if m:
        return TermLabel(m.group(1), int(m.group(2)))
    m = re.search(r"(?<!\w)next (fall|spring|summer)(?!\w)", norm)
    if m:
        season = normalize_season(m.group(1))
        if season in calendar:
            return next_with_season(reference, season, calendar)
        return None
    if re.search(r"(?<!\w)next (semester|term)(?!\w)", norm):
        return successor(reference, calendar)
    if re.search(r"(?<!\w)this (semester|term)(?!\w)", norm):
        return reference
    return None


def _extract_program_hint(raw: str) -> str | None:
    # "the CS minor" style mentions keep the keyword; "my CS-BS degree" keeps
    # only the token before "degree".
    m = re.search(r"((?:[\w&+-]+\s+){1,3}?)(major|minor|certificate)(?!\w)", raw, re.IGNORECASE)
    if m:
        words = [w for w in m.group(1).split()]
        while words and words[0].lower() in _HINT_STOPWORDS:
            words.pop(0)
        if words:
            return " ".join(words + [m.group(2)])
    m = re.search(r"(?:my|the|our)\s+([\w&+-]{2,16})\s+degree(?!\w)", raw, re.IGNORECASE)
    if m:
        return m.group(1)
    return None


def extract_entities(
    text: str,
    catalog: Catalog,
    reference_term: TermLabel,
    skill_table: SkillTable | None = None,
) -> ExtractedEntities:
    """Pull course codes, skills, credit caps, terms, and program hints.

    Course codes are pattern matches verified against the catalog; unknown
    but well-formed codes are retained and flagged. Skills match the
    catalog vocabulary plus the synonym table, case-insensitively.
    """
    if not text.strip():
        raise ParseError("query text must be non-empty")
    skill_table = skill_table or default_skill_table()
    norm = normalize(text)

    code_re = re.compile(rf"(?<![A-Za-z0-9])({catalog.code_pattern})(?![A-Za-z0-9])", re.IGNORECASE)
    codes = frozenset(m.group(1).upper() for m in code_re.finditer(text))
    unknown = frozenset(c for c in codes if not catalog.has_course(c))

    matched: set[str] = set()
    for tag in sorted(catalog.skill_vocabulary):
        if _phrase_found(tag, norm):
            matched.add(tag)
    for surface, target in sorted(skill_table.synonyms.items()):
        if _phrase_found(surface, norm):
            matched.add(target)

    return ExtractedEntities(
        course_ids=codes,
        unknown_course_ids=unknown,
        skills=frozenset(matched),
        expanded_skills=skill_table.expand(sorted(matched)),
        credit_cap=_extract_credit_cap(norm),
        term=_extract_term(norm, reference_term, catalog.calendar),
        program_hint=_extract_program_hint(text),
    )


def parse_query(
    text: str,
    catalog: Catalog,
    reference_term: TermLabel,
    lexicon: IntentLexicon | None = None,
    skill_table: SkillTable | None = None,
) -> ParsedQuery:
    return ParsedQuery(
        raw_text=text,
        intent=classify_intent(text, lexicon),
        entities=extract_entities(text, catalog, reference_term, skill_table),
    )


_GOAL_PREFIXES = (
    "what courses should i take",
    "what courses can i take",
    "what should i take",
    "what can i take",
    "what are",
    "i would like",
    "i'd like",
    "i would love",
    "i want",
    "i need",
    "please suggest",
    "please",
    "can you",
    "could you",
    "would you",
    "tell me",
    "give me",
    "show me",
    "help me",
    "suggest",
    "recommend",
    "lay out",
    "plan",
)

_GOAL_ARTICLES = ("a", "an", "the", "me", "my")


def goal_phrase(text: str) -> str:
    """The query minus request boilerplate; used as the frame's goal field."""
    phrase = re.sub(r"\s+", " ", text).strip()
    lowered = phrase.lower()
    for prefix in _GOAL_PREFIXES:
        if lowered.startswith(prefix + " "):
            phrase = phrase[len(prefix) + 1 :]
            lowered = phrase.lower()
            break
    changed = True
    while changed:
        changed = False
        for article in _GOAL_ARTICLES:
            if lowered.startswith(article + " "):
                phrase = phrase[len(article) + 1 :]
                lowered = phrase.lower()
                changed = True
    phrase = phrase.strip().rstrip(".?!").strip()
    return phrase if phrase else text.strip().rstrip(".?!")
