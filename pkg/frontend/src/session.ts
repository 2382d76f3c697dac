import type { PlanRequest, StudentInfo } from "./types";

/** What-if overrides live client-side only; they never mutate server
 * fixtures and are applied by parameterizing explicit plan requests. */
export interface WhatIfOverrides {
  takenAdded: Set<string>;
  takenRemoved: Set<string>;
  creditCap: number | null;
  start: string | null;
}

export function emptyOverrides(): WhatIfOverrides {
  return { takenAdded: new Set(), takenRemoved: new Set(), creditCap: null, start: null };
}

/** Toggle a course in or out of the effective taken set. */
export function toggleTaken(overrides: WhatIfOverrides, baseTaken: string[], courseId: string): void {
  const inBase = baseTaken.includes(courseId);
  if (inBase) {
    if (overrides.takenRemoved.has(courseId)) {
      overrides.takenRemoved.delete(courseId);
    } else {
      overrides.takenRemoved.add(courseId);
    }
  } else if (overrides.takenAdded.has(courseId)) {
    overrides.takenAdded.delete(courseId);
  } else {
    overrides.takenAdded.add(courseId);
  }
}

export function effectiveTaken(baseTaken: string[], overrides: WhatIfOverrides): string[] {
  const taken = new Set(baseTaken);
  for (const id of overrides.takenRemoved) taken.delete(id);
  for (const id of overrides.takenAdded) taken.add(id);
  return [...taken].sort();
}

/** Deterministic plan request: same overrides always produce the same
 * payload, so the server sees idempotent what-if traffic. */
export function buildPlanRequest(student: StudentInfo, overrides: WhatIfOverrides): PlanRequest {
  const body: PlanRequest = {
    program_id: student.program_id,
    taken: effectiveTaken(student.taken, overrides),
  };
  if (overrides.creditCap !== null) body.credit_cap = overrides.creditCap;
  if (overrides.start !== null) body.start = overrides.start;
  return body;
}
