// DOM rendering. Pure functions of the view state: no fetches, no math on
// the service's numbers, just layout. Handlers are injected by main.ts.

import type { SessionView } from "./state.js";
import type { DatasetSummary } from "./types.js";

export interface Handlers {
  pickDataset(datasetId: string): void;
  cycleSymptom(symptom: string): void;
  retractSymptom(symptom: string): void;
  selectSymptom(symptom: string): void;
  confirmReplace(): void;
  cancelReplace(): void;
}

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

function renderDatasetPicker(datasets: DatasetSummary[], view: SessionView, handlers: Handlers): HTMLElement {
  const wrap = el("div", "dataset-picker");
  wrap.append(el("label", undefined, "Dataset: "));
  const select = el("select");
  select.id = "dataset-select";
  for (const ds of datasets) {
    const option = el("option", undefined, `${ds.dataset_id} (${ds.disorders.length} disorders)`);
    option.value = ds.dataset_id;
    if (view.dataset?.dataset_id === ds.dataset_id) option.selected = true;
    select.append(option);
  }
  select.addEventListener("change", () => handlers.pickDataset(select.value));
  wrap.append(select);
  return wrap;
}

function renderChips(view: SessionView, handlers: Handlers): HTMLElement {
  const panel = el("section", "panel symptoms-panel");
  panel.append(el("h2", undefined, "Symptoms"));
  panel.append(
    el(
      "p",
      "hint",
      "Click to cycle: unset → present → absent → unset. Absent is a finding, not a gap.",
    ),
  );
  const grid = el("div", "chip-grid");
  for (const symptom of view.dataset?.symptoms ?? []) {
    const state = view.stateOf(symptom);
    const chip = el("button", `chip state-${state ?? "unset"}`, symptom);
    chip.dataset.symptom = symptom;
    chip.dataset.state = state ?? "unset";
    chip.disabled = view.busy || view.sessionId === null;
    chip.addEventListener("click", () => handlers.cycleSymptom(symptom));
    grid.append(chip);
  }
  panel.append(grid);
  return panel;
}

function renderObservationTray(view: SessionView, handlers: Handlers): HTMLElement {
  const tray = el("section", "panel observation-tray");
  tray.append(el("h2", undefined, "Observations"));
  const list = el("ul");
  list.id = "observation-list";
  for (const [symptom, state] of view.observations) {
    const item = el("li", `obs obs-${state}`, `${symptom}: ${state} `);
    const retract = el("button", "retract", "×");
    retract.title = `retract ${symptom}`;
    retract.dataset.retract = symptom;
    retract.disabled = view.busy;
    retract.addEventListener("click", () => handlers.retractSymptom(symptom));
    item.append(retract);
    list.append(item);
  }
  if (view.observations.size === 0) {
    list.append(el("li", "obs obs-empty", "none recorded yet"));
  }
  tray.append(list);
  return tray;
}

function renderCandidates(view: SessionView): HTMLElement {
  const panel = el("section", "panel candidates-panel");
  panel.append(el("h2", undefined, "Candidate disorders"));
  const rec = view.recommendation;
  if (!rec) {
    panel.append(el("p", "hint", "No recommendation yet."));
    return panel;
  }
  if (rec.diagnosis_complete) {
    panel.append(
      el("div", "banner diagnosis-complete", "Diagnosis complete: a single candidate remains."),
    );
  }
  if (rec.candidates.length === 0) {
    panel.append(el("p", "empty-candidates", "No disorder is consistent with these observations."));
  }
  const list = el("ul");
  list.id = "candidate-list";
  for (const label of rec.candidates) {
    const size = rec.group_sizes[label];
    list.append(el("li", "candidate", `${label} — ${size} surviving profile${size === 1 ? "" : "s"}`));
  }
  panel.append(list);
  if (rec.excluded.length > 0) {
    panel.append(el("p", "excluded", `Excluded: ${rec.excluded.join(", ")}`));
  }
  return panel;
}

function renderNextSymptoms(view: SessionView, handlers: Handlers): HTMLElement {
  const panel = el("section", "panel next-panel");
  panel.append(el("h2", undefined, "Next symptoms to assess"));
  const rec = view.recommendation;
  if (!rec) {
    panel.append(el("p", "hint", "Record observations to get suggestions."));
    return panel;
  }
  if (rec.s_inter.length > 0) {
    const row = el("div", "next-chips");
    for (const symptom of rec.s_inter) {
      const chip = el("button", "chip next-chip", symptom);
      chip.dataset.symptom = symptom;
      chip.addEventListener("click", () => handlers.selectSymptom(symptom));
      row.append(chip);
    }
    panel.append(row);
    if (view.selectedSymptom && rec.pairs[view.selectedSymptom]) {
      const detail = el("div", "pair-detail");
      detail.id = "pair-detail";
      detail.append(el("h3", undefined, view.selectedSymptom));
      const list = el("ul");
      for (const [always, never] of rec.pairs[view.selectedSymptom] ?? []) {
        list.append(
          el(
            "li",
            "pair",
            `${view.selectedSymptom} separates ${always} (always) from ${never} (never)`,
          ),
        );
      }
      detail.append(list);
      panel.append(detail);
    }
  } else {
    const fallback = el("div", "fallback");
    fallback.id = "fallback-panel";
    fallback.append(
      el(
        "p",
        "hint",
        "No single symptom gives a hard two-sided split; use these one-sided checks instead.",
      ),
    );
    const keep = el("div", "fallback-keep");
    keep.append(el("h3", undefined, "Confirm to keep (always present somewhere)"));
    keep.append(el("p", undefined, rec.s1.length ? rec.s1.join(", ") : "(none)"));
    const exclude = el("div", "fallback-exclude");
    exclude.append(el("h3", undefined, "Confirm to exclude (always absent somewhere)"));
    exclude.append(el("p", undefined, rec.s0.length ? rec.s0.join(", ") : "(none)"));
    fallback.append(keep, exclude);
    panel.append(fallback);
  }
  return panel;
}

function renderStatus(view: SessionView, handlers: Handlers): HTMLElement {
  const bar = el("div", "status-bar");
  const revision = el("span", "revision", `revision ${view.shownRevision < 0 ? "–" : view.shownRevision}`);
  revision.id = "revision-indicator";
  bar.append(revision);
  if (view.busy) {
    bar.append(el("span", "busy", "waiting for the service…"));
  }
  if (view.error) {
    const err = el("div", "banner error-banner", view.error);
    err.id = "error-banner";
    bar.append(err);
  }
  if (view.pendingReplace) {
    const ask = el("div", "banner replace-banner");
    ask.id = "replace-banner";
    ask.append(
      el(
        "span",
        undefined,
        `${view.pendingReplace.symptom} is recorded with the opposite state. Replace it with "${view.pendingReplace.state}"?`,
      ),
    );
    const yes = el("button", "confirm-replace", "Replace");
    yes.id = "confirm-replace";
    yes.addEventListener("click", () => handlers.confirmReplace());
    const no = el("button", "cancel-replace", "Cancel");
    no.id = "cancel-replace";
    no.addEventListener("click", () => handlers.cancelReplace());
    ask.append(yes, no);
    bar.append(ask);
  }
  for (const warning of view.recommendation?.warnings ?? []) {
    bar.append(el("div", "banner warning-banner", warning));
  }
  return bar;
}

export function render(
  root: HTMLElement,
  datasets: DatasetSummary[],
  view: SessionView,
  handlers: Handlers,
): void {
  root.replaceChildren();
  const header = el("header");
  header.append(el("h1", undefined, "dxrec session console"));
  header.append(renderDatasetPicker(datasets, view, handlers));
  root.append(header);
  root.append(renderStatus(view, handlers));
  const main = el("main", "columns");
  const left = el("div", "column");
  left.append(renderChips(view, handlers), renderObservationTray(view, handlers));
  const right = el("div", "column");
  right.append(renderCandidates(view), renderNextSymptoms(view, handlers));
  main.append(left, right);
  root.append(main);
}
