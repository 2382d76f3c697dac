import type { FetchLike } from "../src/api";

export interface RecordedRequest {
  method: string;
  path: string;
  body: unknown;
}

/** Canned-response fetch that records every request, so tests can audit
 * exactly which payloads the client saw. */
export class FakeFetch {
  readonly requests: RecordedRequest[] = [];
  private readonly routes = new Map<string, { status: number; payload: unknown }>();
  private readonly served: unknown[] = [];

  route(method: string, path: string, payload: unknown, status = 200): void {
    this.routes.set(`${method} ${path}`, { status, payload });
  }

  /** Everything this fake ever returned, for thin-client audits. */
  servedPayloads(): unknown[] {
    return [...this.served];
  }

  fetch: FetchLike = async (input, init) => {
    const method = init?.method ?? "GET";
    const path = input.replace(/^https?:\/\/[^/]+/, "");
    const body = init?.body ? JSON.parse(init.body as string) : undefined;
    this.requests.push({ method, path, body });
    const route = this.routes.get(`${method} ${path}`);
    if (!route) {
      return new Response(JSON.stringify({ detail: `no route ${method} ${path}` }), { status: 404 });
    }
    this.served.push(route.payload);
    return new Response(JSON.stringify(route.payload), {
      status: route.status,
      headers: { "Content-Type": "application/json" },
    });
  };
}

export const COURSE_CODE = /\b[A-Z]{2,4}\d{4}\b/g;

export function codesIn(text: string): Set<string> {
  return new Set(text.match(COURSE_CODE) ?? []);
}
