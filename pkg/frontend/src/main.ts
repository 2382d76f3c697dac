import { ApiClient, ApiError } from "./api";
import { buildPlanRequest, emptyOverrides, toggleTaken } from "./session";
import {
  clear,
  renderError,
  renderInfeasible,
  renderProvenance,
  renderResponse,
  renderTimeline,
} from "./render";
import type { CourseInfo, InfeasibleDetail, StudentInfo } from "./types";

const API_BASE = import.meta.env.VITE_API_BASE ?? "http://127.0.0.1:8000";

const api = new ApiClient(API_BASE);
const overrides = emptyOverrides();

let students: StudentInfo[] = [];
let courses: CourseInfo[] = [];

function byId(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function currentStudent(): StudentInfo | undefined {
  const select = byId("student-select") as HTMLSelectElement;
  return students.find((s) => s.id === select.value);
}

async function refreshPlan(): Promise<void> {
  const student = currentStudent();
  if (!student) return;
  const container = byId("plan-view");
  const capInput = byId("cap-input") as HTMLInputElement;
  const startInput = byId("start-input") as HTMLInputElement;
  overrides.creditCap = capInput.value ? Number(capInput.value) : null;
  overrides.start = startInput.value || null;
  try {
    const plan = await api.plan(buildPlanRequest(student, overrides));
    renderTimeline(container, plan, overrides.creditCap);
  } catch (error) {
    if (error instanceof ApiError && error.status === 409) {
      renderInfeasible(container, error.detail as InfeasibleDetail);
    } else {
      renderError(container, `Plan request failed: ${error}`, () => void refreshPlan());
    }
  }
}

function renderOverridesPanel(): void {
  const student = currentStudent();
  const panel = byId("taken-panel");
  clear(panel);
  if (!student) return;
  const taken = new Set(student.taken);
  for (const id of overrides.takenRemoved) taken.delete(id);
  for (const id of overrides.takenAdded) taken.add(id);
  for (const course of courses) {
    const label = document.createElement("label");
    label.className = "taken-toggle";
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = taken.has(course.id);
    box.addEventListener("change", () => {
      toggleTaken(overrides, student.taken, course.id);
      void refreshPlan();
    });
    label.appendChild(box);
    label.appendChild(document.createTextNode(` ${course.id} ${course.title}`));
    panel.appendChild(label);
  }
}

async function submitQuery(event: Event): Promise<void> {
  event.preventDefault();
  const student = currentStudent();
  if (!student) return;
  const input = byId("query-input") as HTMLInputElement;
  const container = byId("response-view");
  try {
    const response = await api.advise(input.value, student.id);
    renderResponse(container, response);
    const refNode = container.querySelector<HTMLElement>(".provenance-ref");
    refNode?.addEventListener("click", () => void showProvenance(response.provenance_ref));
    if (response.plan) {
      renderTimeline(byId("plan-view"), response.plan, null);
    }
  } catch (error) {
    renderError(container, `Advising request failed: ${error}`);
  }
}

async function showProvenance(ref: string): Promise<void> {
  const container = byId("provenance-view");
  try {
    renderProvenance(container, await api.provenance(ref));
  } catch (error) {
    if (error instanceof ApiError && error.status === 404) {
      renderError(container, `No provenance record ${ref}`);
    } else {
      renderError(container, `Provenance fetch failed: ${error}`);
    }
  }
}

async function bootstrap(): Promise<void> {
  const health = await api.health();
  byId("status").textContent =
    `${health.courses} courses, ${health.programs} programs, catalog ${health.catalog_checksum.slice(0, 12)}`;
  students = await api.students();
  courses = await api.courses();
  const select = byId("student-select") as HTMLSelectElement;
  clear(select);
  for (const student of students) {
    const option = document.createElement("option");
    option.value = student.id;
    option.textContent = `${student.id} (${student.program_id})`;
    select.appendChild(option);
  }
  select.addEventListener("change", () => {
    overrides.takenAdded.clear();
    overrides.takenRemoved.clear();
    renderOverridesPanel();
    void refreshPlan();
  });
  byId("query-form").addEventListener("submit", (event) => void submitQuery(event));
  byId("replan-button").addEventListener("click", () => void refreshPlan());
  renderOverridesPanel();
  await refreshPlan();
}

bootstrap().catch((error) => {
  renderError(byId("response-view"), `Service unreachable: ${error}`, () => void bootstrap());
});
