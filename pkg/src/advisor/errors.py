"""Exception types shared across the advising engine."""

from __future__ import annotations


class AdvisorError(Exception):
    """Base class for every error raised by this package."""


class ParseError(AdvisorError):
    """An input document is malformed (bad syntax, types, or enum values)."""


class IntegrityError(AdvisorError):
    """A catalog or student record violates a structural invariant.

    Carries the full list of findings so callers can report every offending
    record key, not just the first one.
    """

    def __init__(self, findings):
        self.findings = tuple(findings)
        details = "; ".join(f"{f.rule}: {f.key} ({f.detail})" for f in self.findings)
        super().__init__(f"integrity violations: {details}")


class UnknownCourse(AdvisorError):
    """A course id does not resolve against the catalog."""


class UnknownProgram(AdvisorError):
    """A program id does not resolve against the catalog."""


class UnknownStudent(AdvisorError):
    """A student id does not resolve against the loaded profiles."""


class InfeasiblePlan(AdvisorError):
    """The planner cannot cover the remaining program courses.

    ``stuck`` names the courses that could not be scheduled.
    """

    def __init__(self, message: str, stuck=()):
        self.stuck = tuple(sorted(stuck))
        if self.stuck:
            message = f"{message}; stuck courses: {', '.join(self.stuck)}"
        super().__init__(message)


class EmptyEvidence(AdvisorError):
    """No certified course survived validation; signals the fallback path."""


class TransportError(AdvisorError):
    """The generation backend could not be reached or timed out."""


class ContractViolation(AdvisorError):
    """Generator output does not honor the two-block output contract."""


class DimensionMismatch(AdvisorError):
    """Vectors handed to a similarity function have different dimensions."""


class ProviderError(AdvisorError):
    """A remote embedding provider failed."""


class PipelineError(AdvisorError):
    """A pipeline stage failed; wraps the original error and names the stage."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage {stage!r} failed: {cause}")
