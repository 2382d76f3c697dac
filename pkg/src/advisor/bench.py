"""Benchmark harness: semantic similarity, course-level accuracy, latency,
and retrieval-footprint reporting over a fixed query suite.

The default embedding provider is a term-frequency vector over lowercased
alphanumeric token runs, L2-normalized. It keeps desk-scale numbers
deterministic; any sentence-embedding service can be plugged in through
the same one-method contract. Out-of-scope queries are scored on their
fallback text only and reported in a separate block so they do not
pollute in-scope course accuracy.
"""

from __future__ import annotations

import json
import math
import re
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Protocol, Sequence

from .catalog import DEFAULT_CODE_PATTERN
from .errors import AdvisorError, DimensionMismatch, ParseError
from .nlu import AdvisingIntent

_TOKEN_RE = re.compile(r"[a-z0-9]+")


class EmbeddingProvider(Protocol):
    identity: str

    def embed(self, text: str) -> Mapping[str, float]: ...


class TfEmbedding:
    """Term-frequency sparse vectors, L2-normalized. Empty text embeds to
    the zero vector."""

    identity = "tf"

    def embed(self, text: str) -> dict[str, float]:
        counts: dict[str, float] = {}
        for token in _TOKEN_RE.findall(text.lower()):
            counts[token] = counts.get(token, 0.0) + 1.0
        norm = math.sqrt(sum(v * v for v in counts.values()))
        if norm == 0:
            return {}
        return {t: v / norm for t, v in counts.items()}


_DEFAULT_PROVIDER = TfEmbedding()


def embed(text: str, provider: EmbeddingProvider | None = None) -> Mapping[str, float]:
    return (provider or _DEFAULT_PROVIDER).embed(text)


def cosine_similarity(a, b) -> float:
    """dot(a, b) / (|a| |b|); 0.0 when either norm is zero.

    Accepts sparse mappings (keys as dimensions) or equal-length sequences.
    """
    if isinstance(a, Mapping) and isinstance(b, Mapping):
        if a == b:
            return 1.0 if a else 0.0
        dot = sum(v * b.get(k, 0.0) for k, v in a.items())
        na = math.sqrt(sum(v * v for v in a.values()))
        nb = math.sqrt(sum(v * v for v in b.values()))
    else:
        if isinstance(a, Mapping) or isinstance(b, Mapping):
            raise DimensionMismatch("cannot mix sparse and dense vectors")
        if len(a) != len(b):
            raise DimensionMismatch(f"vector dimensions differ: {len(a)} vs {len(b)}")
        dot = sum(x * y for x, y in zip(a, b))
        na = math.sqrt(sum(x * x for x in a))
        nb = math.sqrt(sum(y * y for y in b))
    if na == 0 or nb == 0:
        return 0.0
    # Cosine is bounded; clamp float drift so metric-range invariants hold.
    return max(-1.0, min(1.0, dot / (na * nb)))


def extract_course_ids(text: str, pattern: str = DEFAULT_CODE_PATTERN) -> frozenset[str]:
    """All maximal course-code substrings, case-folded and deduplicated."""
    code_re = re.compile(rf"(?<![A-Za-z0-9])(?:{pattern})(?![A-Za-z0-9])", re.IGNORECASE)
    return frozenset(m.group(0).upper() for m in code_re.finditer(text))


def course_prf(recommended: Iterable[str], truth: Iterable[str]) -> tuple[float, float, float]:
    """Precision, recall, F1 over course-id sets.

    Edge conventions: both empty scores (1, 1, 1); an empty recommendation
    against a non-empty truth scores (0, 0, 0); a non-empty recommendation
    against an empty truth scores (0, 1, 0). F1 is 0 when p + r is 0.
    """
    rec = set(recommended)
    tru = set(truth)
    if not rec and not tru:
        return (1.0, 1.0, 1.0)
    if not rec:
        return (0.0, 0.0, 0.0)
    if not tru:
        return (0.0, 1.0, 0.0)
    hit = len(rec & tru)
    p = hit / len(rec)
    r = hit / len(tru)
    f1 = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return (p, r, f1)


# ---------------------------------------------------------------------------
# Suite


@dataclass(frozen=True)
class BenchmarkQuery:
    id: str
    category: AdvisingIntent
    persona: str
    text: str
    student_id: str
    expected_courses: frozenset[str]
    expert_answer: str


def load_suite(path: str | Path) -> tuple[BenchmarkQuery, ...]:
    path = Path(path)
    if not path.exists():
        raise ParseError(f"suite file not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    queries = []
    for i, row in enumerate(data.get("queries", [])):
        ctx = f"queries[{i}]"
        try:
            queries.append(
                BenchmarkQuery(
                    id=row["id"],
                    category=AdvisingIntent(row["category"]),
                    persona=row.get("persona", ""),
                    text=row["text"],
                    student_id=row["student_id"],
                    expected_courses=frozenset(row.get("expected_courses", [])),
                    expert_answer=row["expert_answer"],
                )
            )
        except (KeyError, ValueError) as exc:
            raise ParseError(f"{ctx}: {exc}") from exc
    return tuple(queries)


# ---------------------------------------------------------------------------
# Runner


@dataclass(frozen=True)
class RunRecord:
    query_id: str
    run_index: int
    cosine: float
    precision: float
    recall: float
    f1: float
    latency: float
    tokens: int
    n_retrieved: int
    fallback: bool
    failed: bool = False
    unknown_ids: tuple[str, ...] = ()
    ungrounded_ids: tuple[str, ...] = ()


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values) if values else 0.0


def _stats(values: Sequence[float]) -> dict:
    if not values:
        return {"mean": 0.0, "stdev": 0.0, "min": 0.0, "max": 0.0}
    return {
        "mean": _mean(values),
        "stdev": statistics.pstdev(values),
        "min": min(values),
        "max": max(values),
    }


@dataclass
class MetricsSummary:
    mode: str
    backend: str
    runs: int
    records: tuple[RunRecord, ...]
    per_query: tuple[dict, ...]
    grand: dict
    out_of_scope: dict
    footprint: dict
    grounding: dict
    timings: dict

    def to_dict(self, include_timings: bool = True) -> dict:
        # Wall-clock numbers vary run to run; leaving them out yields a
        # byte-reproducible report for identical suite + config + backend.
        out = {
            "config": {"mode": self.mode, "backend": self.backend, "runs": self.runs},
            "queries": list(self.per_query),
            "grand": dict(self.grand),
            "out_of_scope": dict(self.out_of_scope),
            "footprint": dict(self.footprint),
            "grounding": dict(self.grounding),
        }
        if include_timings:
            out["timings"] = dict(self.timings)
        return out

    def to_json(self, include_timings: bool = True) -> str:
        return json.dumps(self.to_dict(include_timings=include_timings), indent=2, sort_keys=True)

    def render_table(self) -> str:
        header = f"{'query':<8}{'category':<14}{'cosine':>8}{'prec':>7}{'rec':>7}{'f1':>7}{'tokens':>8}{'facts':>7}{'fallback':>10}"
        lines = [header, "-" * len(header)]
        for row in self.per_query:
            lines.append(
                f"{row['id']:<8}{row['category']:<14}{row['cosine']:>8.4f}"
                f"{row['precision']:>7.2f}{row['recall']:>7.2f}{row['f1']:>7.2f}"
                f"{row['tokens']:>8.0f}{row['n_retrieved']:>7.1f}{row['fallback_rate']:>10.2f}"
            )
        lines.append("-" * len(header))
        g = self.grand
        lines.append(
            f"grand cosine (all) {g['cosine_all']:.4f} | in-scope cosine {g['cosine_in_scope']:.4f} | "
            f"P {g['precision']:.4f} R {g['recall']:.4f} F1 {g['f1']:.4f}"
        )
        f = self.footprint
        lines.append(
            f"footprint tokens mean {f['tokens']['mean']:.1f} sd {f['tokens']['stdev']:.1f} "
            f"range {f['tokens']['min']:.0f}-{f['tokens']['max']:.0f} | "
            f"facts mean {f['n_retrieved']['mean']:.1f} sd {f['n_retrieved']['stdev']:.1f} "
            f"range {f['n_retrieved']['min']:.0f}-{f['n_retrieved']['max']:.0f}"
        )
        lines.append(f"hallucinated ids: {self.grounding['total_hallucinated']}")
        return "\n".join(lines)


def run_benchmark(
    suite: Sequence[BenchmarkQuery],
    engine,
    runs: int = 5,
    mode: str = "grounded",
    provider: EmbeddingProvider | None = None,
    parallelism: int = 1,
    max_consecutive_failures: int = 2,
) -> MetricsSummary:
    """Execute runs x |suite| pipeline calls and aggregate the metrics.

    ``engine`` is an advising engine exposing ``advise`` and
    ``baseline_respond``; ``mode='baseline'`` bypasses retrieval and
    symbolic validation entirely. A query is aborted and scored zero after
    ``max_consecutive_failures`` consecutive backend errors.
    """
    if mode not in ("grounded", "baseline"):
        raise ParseError(f"unknown mode {mode!r}")
    provider = provider or _DEFAULT_PROVIDER
    catalog = engine.catalog
    known_courses = {c.id for c in catalog.courses}

    def run_query(query: BenchmarkQuery) -> list[RunRecord]:
        records: list[RunRecord] = []
        failures = 0
        for run_index in range(1, runs + 1):
            if failures >= max_consecutive_failures:
                records.append(
                    RunRecord(query.id, run_index, 0.0, 0.0, 0.0, 0.0, 0.0, 0, 0, False, failed=True)
                )
                continue
            started = time.perf_counter()
            try:
                if mode == "grounded":
                    response = engine.advise(query.text, query.student_id, query_id=query.id)
                    text = response.response
                    fallback = response.fallback
                    tokens = response.prompt_tokens
                    n_retrieved = response.n_retrieved
                    grounded_against = response.certified | engine.student(query.student_id).taken
                else:
                    result = engine.baseline_respond(query.text, query_id=query.id)
                    text = result.response
                    fallback = result.fallback
                    tokens = len(query.text.split())
                    n_retrieved = 0
                    grounded_against = None
            except AdvisorError:
                failures += 1
                records.append(
                    RunRecord(query.id, run_index, 0.0, 0.0, 0.0, 0.0, 0.0, 0, 0, False, failed=True)
                )
                continue
            failures = 0
            latency = time.perf_counter() - started
            cos = cosine_similarity(provider.embed(text), provider.embed(query.expert_answer))
            mentioned = extract_course_ids(text, catalog.code_pattern)
            unknown = tuple(sorted(mentioned - known_courses))
            ungrounded = ()
            if grounded_against is not None:
                ungrounded = tuple(sorted(mentioned - set(grounded_against)))
            if query.category is AdvisingIntent.OUT_OF_SCOPE:
                p = r = f1 = 1.0 if fallback else 0.0
            else:
                p, r, f1 = course_prf(mentioned, query.expected_courses)
            records.append(
                RunRecord(
                    query_id=query.id,
                    run_index=run_index,
                    cosine=cos,
                    precision=p,
                    recall=r,
                    f1=f1,
                    latency=latency,
                    tokens=tokens,
                    n_retrieved=n_retrieved,
                    fallback=fallback,
                    unknown_ids=unknown,
                    ungrounded_ids=ungrounded,
                )
            )
        return records

    if parallelism > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            grouped = list(pool.map(run_query, suite))
    else:
        grouped = [run_query(q) for q in suite]

    all_records = tuple(r for group in grouped for r in group)
    per_query: list[dict] = []
    for query, group in zip(suite, grouped):
        per_query.append(
            {
                "id": query.id,
                "category": query.category.value,
                "cosine": _mean([r.cosine for r in group]),
                "precision": _mean([r.precision for r in group]),
                "recall": _mean([r.recall for r in group]),
                "f1": _mean([r.f1 for r in group]),
                "tokens": _mean([r.tokens for r in group]),
                "n_retrieved": _mean([r.n_retrieved for r in group]),
                "fallback_rate": _mean([1.0 if r.fallback else 0.0 for r in group]),
                "failed_runs": sum(1 for r in group if r.failed),
                "cosine_stdev": statistics.pstdev([r.cosine for r in group]) if group else 0.0,
            }
        )

    in_scope = [row for row, q in zip(per_query, suite) if q.category is not AdvisingIntent.OUT_OF_SCOPE]
    oos = [row for row, q in zip(per_query, suite) if q.category is AdvisingIntent.OUT_OF_SCOPE]
    grand = {
        "cosine_all": _mean([row["cosine"] for row in per_query]),
        "cosine_in_scope": _mean([row["cosine"] for row in in_scope]),
        "cosine_out_of_scope": _mean([row["cosine"] for row in oos]),
        "precision": _mean([row["precision"] for row in in_scope]),
        "recall": _mean([row["recall"] for row in in_scope]),
        "f1": _mean([row["f1"] for row in in_scope]),
    }
    out_of_scope = {
        "count": len(oos),
        "fallback_rate": _mean([row["fallback_rate"] for row in oos]),
        "cosine": _mean([row["cosine"] for row in oos]),
    }
    live = [r for r in all_records if not r.failed]
    footprint = {
        "tokens": _stats([float(r.tokens) for r in live]),
        "n_retrieved": _stats([float(r.n_retrieved) for r in live]),
    }
    grounding = {
        "unknown_ids": sorted({i for r in all_records for i in r.unknown_ids}),
        "ungrounded_ids": sorted({i for r in all_records for i in r.ungrounded_ids}),
        "total_hallucinated": sum(len(r.unknown_ids) for r in all_records),
    }
    timings = {
        "latency": _stats([r.latency for r in live]),
        "mean_latency_per_query": _mean([r.latency for r in live]),
    }
    return MetricsSummary(
        mode=mode,
        backend=getattr(engine.backend, "identity", "unknown") if mode == "grounded" else getattr(engine.baseline_backend, "identity", "unknown"),
        runs=runs,
        records=all_records,
        per_query=tuple(per_query),
        grand=grand,
        out_of_scope=out_of_scope,
        footprint=footprint,
        grounding=grounding,
        timings=timings,
    )
