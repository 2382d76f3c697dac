import type {
  AdvisingResponse,
  CourseInfo,
  HealthInfo,
  PlanRequest,
  ProvenanceEnvelope,
  Roadmap,
  StudentInfo,
} from "./types";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Non-2xx reply; `detail` carries the server's error payload (for 409
 * infeasible plans this is the diagnostic object). */
export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: unknown,
  ) {
    super(`API error ${status}`);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const reply = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    const body = await reply.json().catch(() => null);
    if (!reply.ok) {
      throw new ApiError(reply.status, body && (body as { detail?: unknown }).detail);
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  health(): Promise<HealthInfo> {
    return this.request("/api/health");
  }

  students(): Promise<StudentInfo[]> {
    return this.request("/api/students");
  }

  courses(): Promise<CourseInfo[]> {
    return this.request("/api/catalog/courses");
  }

  advise(text: string, studentId: string): Promise<AdvisingResponse> {
    return this.post("/api/advise", { text, student_id: studentId });
  }

  plan(requestBody: PlanRequest): Promise<Roadmap> {
    return this.post("/api/plan", requestBody);
  }

  provenance(ref: string): Promise<ProvenanceEnvelope> {
    return this.request(`/api/provenance/${ref}`);
  }
}
