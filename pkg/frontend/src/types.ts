/** Payload types mirroring docs/api/v1.md. The client renders these
 * shapes verbatim and never derives course facts on its own. */

export interface SemesterBlock {
  term: string;
  courses: string[];
  credits: number;
  flags: string[];
}

export interface Roadmap {
  blocks: SemesterBlock[];
  covered: string[];
}

export interface AdvisingResponse {
  query_id: string;
  intent: string;
  think: string;
  response: string;
  fallback: boolean;
  plan: Roadmap | null;
  certified: string[];
  provenance_ref: string;
  prompt_tokens: number;
  n_retrieved: number;
  stage_latencies: Record<string, number>;
}

export interface TraceEntry {
  rule: string;
  subject: string;
  verdict: "Pass" | "Fail";
  facts: string[];
}

export interface PromptInfo {
  body: string;
  token_count: number;
  n_retrieved: number;
  query_id: string;
}

export interface GenerationInfo {
  backend: string;
  decoding: Record<string, number>;
  latency: number;
  fallback: boolean;
}

export interface ProvenanceRecord {
  query_id: string;
  timestamp: string;
  student_id: string;
  parsed_query?: Record<string, unknown>;
  filter_spec?: Record<string, unknown>;
  rule_trace?: { entries: TraceEntry[] };
  prompt?: PromptInfo;
  generation?: GenerationInfo;
  stage_latencies?: Record<string, number>;
}

export interface ProvenanceEnvelope {
  ref: string;
  record: ProvenanceRecord;
}

export interface CourseInfo {
  id: string;
  title: string;
  credits: number;
  department: string;
  level: number;
  description: string;
  terms_offered: string[];
  skills: string[];
  prerequisites: string[];
}

export interface StudentInfo {
  id: string;
  program_id: string;
  taken: string[];
  start_term: string;
}

export interface HealthInfo {
  status: string;
  api_version: string;
  catalog_checksum: string;
  courses: number;
  programs: number;
  students: number;
  backend: string;
  directive_version: string;
}

export interface PlanRequest {
  program_id?: string;
  student_id?: string;
  taken?: string[];
  credit_cap?: number;
  start?: string;
  min_courses_per_term?: number;
}

export interface InfeasibleDetail {
  error: string;
  message: string;
  stuck: string[];
}
