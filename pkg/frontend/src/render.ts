import type {
  AdvisingResponse,
  InfeasibleDetail,
  ProvenanceEnvelope,
  Roadmap,
} from "./types";

/** DOM renderers. Every visible fact is copied from a service payload via
 * textContent; nothing is synthesized or re-derived client-side. */

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function chipRow(ids: string[], className = "chip"): HTMLElement {
  const row = el("div", "chip-row");
  for (const id of ids) {
    row.appendChild(el("span", className, id));
  }
  return row;
}

export function clear(container: HTMLElement): void {
  container.replaceChildren();
}

export function renderResponse(container: HTMLElement, response: AdvisingResponse): void {
  clear(container);
  if (response.fallback) {
    container.appendChild(
      el("div", "banner banner-fallback", "Insufficient context: this request could not be answered from certified data."),
    );
  }
  const meta = el("div", "meta");
  meta.appendChild(el("span", "tag", response.intent));
  meta.appendChild(el("span", "tag", `${response.n_retrieved} facts`));
  meta.appendChild(el("span", "tag", `${response.prompt_tokens} tokens`));
  container.appendChild(meta);

  if (response.think) {
    const details = el("details", "think");
    details.appendChild(el("summary", undefined, "reasoning"));
    details.appendChild(el("pre", undefined, response.think));
    container.appendChild(details);
  }
  container.appendChild(el("p", "response-text", response.response));
  if (response.certified.length > 0 && !response.fallback) {
    container.appendChild(el("h3", undefined, "Certified options"));
    container.appendChild(chipRow(response.certified));
  }
  if (response.plan && !response.fallback) {
    const planView = el("div", "plan-inline");
    renderTimeline(planView, response.plan, null);
    container.appendChild(planView);
  }
  const provenance = el("p", "provenance-ref", `provenance: ${response.provenance_ref}`);
  provenance.dataset.ref = response.provenance_ref;
  container.appendChild(provenance);
}

export function renderTimeline(container: HTMLElement, plan: Roadmap, creditCap: number | null): void {
  clear(container);
  if (plan.blocks.length === 0) {
    container.appendChild(el("p", "empty", "Nothing left to schedule."));
    return;
  }
  const list = el("ol", "timeline");
  for (const block of plan.blocks) {
    const item = el("li", "term-block");
    if (block.flags.includes("overflow")) item.classList.add("overflow");
    const header = el("div", "term-header");
    header.appendChild(el("strong", undefined, block.term));
    header.appendChild(el("span", "credits", `${block.credits} cr`));
    for (const flag of block.flags) {
      header.appendChild(el("span", `flag flag-${flag}`, flag));
    }
    item.appendChild(header);
    item.appendChild(chipRow(block.courses));
    const meter = el("div", "credit-meter");
    const fill = el("div", "credit-meter-fill");
    const cap = creditCap ?? Math.max(block.credits, 12);
    fill.style.width = `${Math.min(100, (block.credits / cap) * 100)}%`;
    if (creditCap !== null && block.credits > creditCap) fill.classList.add("over");
    meter.appendChild(fill);
    item.appendChild(meter);
    list.appendChild(item);
  }
  container.appendChild(list);
  container.appendChild(
    el("p", "coverage", `${plan.covered.length} course(s) over ${plan.blocks.length} term(s)`),
  );
}

export function renderInfeasible(container: HTMLElement, detail: InfeasibleDetail): void {
  clear(container);
  container.appendChild(el("div", "banner banner-error", "This plan is infeasible."));
  container.appendChild(el("p", undefined, detail.message));
  if (detail.stuck.length > 0) {
    container.appendChild(el("h3", undefined, "Stuck courses"));
    container.appendChild(chipRow(detail.stuck, "chip chip-stuck"));
  }
}

export function renderError(container: HTMLElement, message: string, onRetry?: () => void): void {
  clear(container);
  container.appendChild(el("div", "banner banner-error", message));
  if (onRetry) {
    const button = el("button", "retry", "Retry");
    button.addEventListener("click", onRetry);
    container.appendChild(button);
  }
}

export function renderProvenance(container: HTMLElement, envelope: ProvenanceEnvelope): void {
  clear(container);
  const record = envelope.record;
  container.appendChild(el("h3", undefined, `Record ${envelope.ref}`));
  container.appendChild(el("p", "meta", `query ${record.query_id} at ${record.timestamp}`));

  if (record.filter_spec) {
    container.appendChild(el("h4", undefined, "Filter"));
    const table = el("table", "kv");
    for (const [key, value] of Object.entries(record.filter_spec)) {
      const row = el("tr");
      row.appendChild(el("th", undefined, key));
      row.appendChild(el("td", undefined, JSON.stringify(value)));
      table.appendChild(row);
    }
    container.appendChild(table);
  }

  if (record.rule_trace) {
    container.appendChild(el("h4", undefined, "Rule trace"));
    const table = el("table", "trace");
    const head = el("tr");
    for (const column of ["rule", "course", "verdict", "facts"]) {
      head.appendChild(el("th", undefined, column));
    }
    table.appendChild(head);
    for (const entry of record.rule_trace.entries) {
      const row = el("tr", entry.verdict === "Fail" ? "fail" : "pass");
      row.appendChild(el("td", undefined, entry.rule));
      row.appendChild(el("td", undefined, entry.subject));
      row.appendChild(el("td", undefined, entry.verdict));
      row.appendChild(el("td", undefined, entry.facts.join("; ")));
      table.appendChild(row);
    }
    container.appendChild(table);
  }

  if (record.prompt) {
    container.appendChild(
      el("h4", undefined, `Prompt (${record.prompt.token_count} tokens, ${record.prompt.n_retrieved} facts)`),
    );
    container.appendChild(el("pre", "prompt-body", record.prompt.body));
  }

  if (record.generation) {
    container.appendChild(el("h4", undefined, "Generation"));
    container.appendChild(
      el(
        "p",
        "meta",
        `${record.generation.backend} in ${record.generation.latency.toFixed(3)}s ` +
          `(decoding ${JSON.stringify(record.generation.decoding)})`,
      ),
    );
  }
}
