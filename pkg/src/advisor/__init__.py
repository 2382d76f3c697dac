"""Catalog-grounded degree advising engine."""

from .catalog import (
    Catalog,
    Course,
    Program,
    ProgramCourse,
    PrereqEdge,
    StudentProfile,
    ValidationReport,
    catalog_checksum,
    catalog_to_dict,
    direct_dependents,
    dump_catalog,
    load_catalog,
    load_students,
    parse_catalog,
    prereq_closure,
    validate_integrity,
)
from .errors import (
    AdvisorError,
    ContractViolation,
    DimensionMismatch,
    EmptyEvidence,
    InfeasiblePlan,
    IntegrityError,
    ParseError,
    PipelineError,
    TransportError,
    UnknownCourse,
    UnknownProgram,
    UnknownStudent,
)
from .nlu import (
    AdvisingIntent,
    ExtractedEntities,
    ParsedQuery,
    classify_intent,
    extract_entities,
    parse_query,
)
from .planner import (
    PlannerConfig,
    Roadmap,
    SemesterBlock,
    eligible_set,
    greedy_pack,
    plan_roadmap,
    unlock_weight,
)
from .prompting import (
    EvidenceBundle,
    FiveWOneH,
    PromptBundle,
    build_evidence,
    build_frame,
    count_tokens,
    footprint_ratio,
    render_prompt,
    serialize_full_catalog,
)
from .routing import CandidateSet, FilterSpec, filter_candidates
from .rules import (
    RuleTrace,
    TraceEntry,
    Verdict,
    certify_candidates,
    detect_cycles,
    prereqs_met,
    validate_selection,
)
from .service import AdvisingResponse, AdvisorEngine, ProvenanceStore, build_engine
from .terms import TermLabel, parse_term, successor

__version__ = "0.1.0"
