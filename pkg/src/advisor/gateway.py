"""Generation backends and the two-block output contract.

Every backend runs under the same fixed system directive: output a
<think> block then a <response> block opening with the mandated phrase,
cite only supplied evidence, and reply with the bare fallback token when
the evidence is insufficient. The stub backend is fully deterministic and
grounded by construction, which makes offline testing and benchmarking
reproducible. A degraded stub mimics an ungrounded generator for baseline
comparisons.
"""

from __future__ import annotations

import hashlib
import os
import re
import time
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Protocol

import httpx

from .errors import ContractViolation, ParseError, TransportError

FALLBACK_TOKEN = "INSUFFICIENT_CONTEXT"
RESPONSE_OPENING = "As your academic advisor, I recommend"
DIRECTIVE_VERSION = "v1"

_THINK_RE = re.compile(r"<think>(.*?)</think>", re.DOTALL)
_RESPONSE_RE = re.compile(r"<response>(.*?)</response>", re.DOTALL)
_FACT_ENTRY_RE = re.compile(
    r"id = (?P<id>\S+) name = (?P<name>.+?) credits = (?P<credits>\d+) description = '"
)


@lru_cache(maxsize=1)
def system_directive() -> str:
    name = f"system_directive_{DIRECTIVE_VERSION}.txt"
    return resources.files("advisor.assets").joinpath(name).read_text(encoding="utf-8")


@dataclass(frozen=True)
class DecodingParams:
    beam_count: int = 4
    temperature: float = 0.1
    max_new_tokens: int = 1024

    def __post_init__(self):
        if self.beam_count < 1:
            raise ParseError("beam_count must be >= 1")
        if self.temperature < 0:
            raise ParseError("temperature must be non-negative")

    def to_dict(self) -> dict:
        return {
            "beam_count": self.beam_count,
            "temperature": self.temperature,
            "max_new_tokens": self.max_new_tokens,
        }


@dataclass(frozen=True)
class GenerationRequest:
    prompt_body: str
    system_directive: str = field(default_factory=system_directive)
    decoding: DecodingParams = field(default_factory=DecodingParams)
    timeout: float = 30.0


@dataclass(frozen=True)
class GenerationResult:
    think: str
    response: str
    fallback: bool
    raw: str
    latency: float


class GeneratorBackend(Protocol):
    identity: str

    def generate(self, request: GenerationRequest) -> str: ...


def parse_output(raw: str) -> tuple[str, str] | None:
    """Split raw output into (think, response); None signals the fallback.

    The fallback token is matched after whitespace trimming but otherwise
    byte-exact. Text outside the two blocks stays in the raw transcript
    but never reaches a block.
    """
    trimmed = raw.strip()
    if trimmed == FALLBACK_TOKEN:
        return None
    thinks = _THINK_RE.findall(raw)
    responses = _RESPONSE_RE.findall(raw)
    if len(thinks) != 1 or len(responses) != 1:
        raise ContractViolation(
            f"expected exactly one <think> and one <response> block, "
            f"found {len(thinks)} and {len(responses)}"
        )
    if raw.index("<think>") > raw.index("<response>"):
        raise ContractViolation("<think> must precede <response>")
    return thinks[0].strip(), responses[0].strip()


def generate(request: GenerationRequest, backend: GeneratorBackend) -> GenerationResult:
    """Invoke the backend, time it, parse the contract, retry once on
    transport failure."""
    start = time.perf_counter()
    last_error: TransportError | None = None
    raw: str | None = None
    for _ in range(2):
        try:
            raw = backend.generate(request)
            break
        except TransportError as exc:
            last_error = exc
    if raw is None:
        assert last_error is not None
        raise last_error
    latency = time.perf_counter() - start
    parsed = parse_output(raw)
    if parsed is None:
        return GenerationResult(think="", response="", fallback=True, raw=raw.strip(), latency=latency)
    think, response = parsed
    if not think or not response:
        raise ContractViolation("both output blocks must be non-empty")
    if not response.startswith(RESPONSE_OPENING):
        raise ContractViolation(f"response must open with {RESPONSE_OPENING!r}")
    return GenerationResult(think=think, response=response, fallback=False, raw=raw, latency=latency)


# ---------------------------------------------------------------------------
# Backends


def _join_names(parts: list[str]) -> str:
    if len(parts) <= 1:
        return "".join(parts)
    return ", ".join(parts[:-1]) + " and " + parts[-1]


def stub_generate(prompt_body: str) -> str:
    """Deterministic offline generator.

    Emits the fallback token when the body is empty or has no course fact
    entries; otherwise enumerates every fact in body order, citing nothing
    outside the body.
    """
    facts = list(_FACT_ENTRY_RE.finditer(prompt_body))
    if not prompt_body.strip() or not facts:
        return FALLBACK_TOKEN
    ids = [m.group("id") for m in facts]
    listing = _join_names(
        [
            f"{m.group('id')} ({m.group('name')}, {m.group('credits')} "
            f"credit{'s' if m.group('credits') != '1' else ''})"
            for m in facts
        ]
    )
    think = (
        f"The evidence certifies {len(ids)} course option{'s' if len(ids) != 1 else ''}: "
        f"{', '.join(ids)}. Each already passed prerequisite, availability, and "
        f"program checks, so the recommendation lists them in the given order."
    )
    response = (
        f"{RESPONSE_OPENING} {listing}. Every option above was certified against "
        f"your completed courses and your program's rules, so any of them will "
        f"keep you on track."
    )
    return f"<think>{think}</think>\n<response>{response}</response>"


class StubBackend:
    """Pure, deterministic backend for offline runs."""

    identity = "stub"

    def generate(self, request: GenerationRequest) -> str:
        return stub_generate(request.prompt_body)


class DegradedStubBackend:
    """Ungrounded deterministic backend used as the baseline condition.

    It ignores any evidence and fabricates plausible-looking course codes
    from a hash of the prompt, mimicking a generator with no retrieval or
    rule validation behind it.
    """

    identity = "degraded-stub"

    def generate(self, request: GenerationRequest) -> str:
        digest = hashlib.sha256(request.prompt_body.encode("utf-8")).hexdigest()
        first = f"GEN{1000 + int(digest[:4], 16) % 9000}"
        second = f"GEN{1000 + int(digest[4:8], 16) % 9000}"
        think = "The question sounds like a scheduling request, so popular courses should work."
        response = (
            f"{RESPONSE_OPENING} {first} and {second}. Many students with similar "
            f"goals pick these, and you can usually register for them without "
            f"issues. You might also browse the catalog for other electives that "
            f"sound interesting."
        )
        return f"<think>{think}</think>\n<response>{response}</response>"


class RemoteBackend:
    """Chat-completion style HTTP backend.

    The credential is read from the named environment variable at call
    time and never logged. Any transport or protocol failure surfaces as
    TransportError so the caller's retry policy applies.
    """

    def __init__(
        self,
        endpoint: str,
        model: str | None = None,
        credential_env: str | None = None,
        client: httpx.Client | None = None,
    ):
        self.endpoint = endpoint
        self.model = model
        self.credential_env = credential_env
        self._client = client
        self.identity = f"remote:{model or endpoint}"

    def generate(self, request: GenerationRequest) -> str:
        headers = {}
        if self.credential_env:
            secret = os.environ.get(self.credential_env)
            if secret:
                headers["Authorization"] = f"Bearer {secret}"
        payload = {
            "messages": [
                {"role": "system", "content": request.system_directive},
                {"role": "user", "content": request.prompt_body},
            ],
            "temperature": request.decoding.temperature,
            "max_tokens": request.decoding.max_new_tokens,
            "n": 1,
        }
        if self.model:
            payload["model"] = self.model
        client = self._client or httpx.Client(timeout=request.timeout)
        try:
            reply = client.post(self.endpoint, json=payload, headers=headers)
            reply.raise_for_status()
            data = reply.json()
            return data["choices"][0]["message"]["content"]
        except (httpx.HTTPError, KeyError, IndexError, ValueError) as exc:
            raise TransportError(f"generation backend failed: {exc}") from exc
        finally:
            if self._client is None:
                client.close()


def make_backend(kind: str, **kwargs) -> GeneratorBackend:
    if kind == "stub":
        return StubBackend()
    if kind == "degraded-stub":
        return DegradedStubBackend()
    if kind == "remote":
        return RemoteBackend(**kwargs)
    raise ParseError(f"unknown backend kind {kind!r}; expected stub, degraded-stub, or remote")
