// Wiring: every user action round-trips through the service before anything
// re-renders (optimistic updates are deliberately off; the engine owns all
// diagnostic state).

import { ApiClient, ApiRequestError } from "./api.js";
import { SessionView } from "./state.js";
import { render, type Handlers } from "./ui.js";
import type { DatasetSummary } from "./types.js";

export interface AppOptions {
  root: HTMLElement;
  client: ApiClient;
}

export class App {
  readonly view = new SessionView();
  private datasets: DatasetSummary[] = [];
  private readonly root: HTMLElement;
  private readonly client: ApiClient;

  constructor(options: AppOptions) {
    this.root = options.root;
    this.client = options.client;
  }

  async start(): Promise<void> {
    this.datasets = await this.client.listDatasets();
    const first = this.datasets[0];
    if (first) {
      await this.openSession(first);
    } else {
      this.paint();
    }
  }

  private paint(): void {
    const handlers: Handlers = {
      pickDataset: (id) => void this.pickDataset(id),
      cycleSymptom: (symptom) => void this.cycleSymptom(symptom),
      retractSymptom: (symptom) => void this.retractSymptom(symptom),
      selectSymptom: (symptom) => this.selectSymptom(symptom),
      confirmReplace: () => void this.confirmReplace(),
      cancelReplace: () => this.cancelReplace(),
    };
    render(this.root, this.datasets, this.view, handlers);
  }

  private async openSession(dataset: DatasetSummary): Promise<void> {
    const created = await this.client.createSession(dataset.dataset_id);
    this.view.startSession(dataset, created.session_id, created.revision);
    await this.refreshRecommendation();
  }

  private async pickDataset(datasetId: string): Promise<void> {
    const dataset = this.datasets.find((d) => d.dataset_id === datasetId);
    if (!dataset) return;
    try {
      await this.openSession(dataset);
    } catch (e) {
      this.fail(e);
    }
  }

  /** Fetch the recommendation for the current revision and re-render. */
  private async refreshRecommendation(): Promise<void> {
    const sessionId = this.view.sessionId;
    if (sessionId === null) return;
    const forRevision = this.view.revision;
    this.view.busy = true;
    this.paint();
    try {
      const rec = await this.client.getRecommendation(sessionId);
      this.view.applyRecommendation(rec, forRevision);
    } catch (e) {
      this.fail(e);
      return;
    } finally {
      this.view.busy = false;
    }
    this.view.error = null;
    this.paint();
  }

  async cycleSymptom(symptom: string): Promise<void> {
    const sessionId = this.view.sessionId;
    if (sessionId === null || this.view.busy) return;
    const next = this.view.nextStateOf(symptom);
    try {
      if (next === null) {
        this.view.applySummary(await this.client.deleteObservation(sessionId, symptom));
      } else {
        this.view.applySummary(await this.client.postObservation(sessionId, symptom, next));
      }
    } catch (e) {
      if (e instanceof ApiRequestError && e.body.code === "ContradictoryObservationError" && next !== null) {
        this.view.pendingReplace = { symptom, state: next };
        this.paint();
        return;
      }
      this.fail(e);
      return;
    }
    await this.refreshRecommendation();
  }

  async retractSymptom(symptom: string): Promise<void> {
    const sessionId = this.view.sessionId;
    if (sessionId === null || this.view.busy) return;
    try {
      this.view.applySummary(await this.client.deleteObservation(sessionId, symptom));
    } catch (e) {
      this.fail(e);
      return;
    }
    await this.refreshRecommendation();
  }

  async confirmReplace(): Promise<void> {
    const pending = this.view.pendingReplace;
    const sessionId = this.view.sessionId;
    if (!pending || sessionId === null) return;
    this.view.pendingReplace = null;
    try {
      this.view.applySummary(
        await this.client.postObservation(sessionId, pending.symptom, pending.state, true),
      );
    } catch (e) {
      this.fail(e);
      return;
    }
    await this.refreshRecommendation();
  }

  cancelReplace(): void {
    this.view.pendingReplace = null;
    this.paint();
  }

  selectSymptom(symptom: string): void {
    this.view.selectedSymptom = this.view.selectedSymptom === symptom ? null : symptom;
    this.paint();
  }

  private fail(e: unknown): void {
    this.view.busy = false;
    this.view.error =
      e instanceof ApiRequestError
        ? `${e.body.code}: ${e.body.detail}`
        : `request failed: ${String(e)}`;
    this.paint();
  }
}

export function bootstrap(): void {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app mount point");
  const base = (window as { DXREC_BASE?: string }).DXREC_BASE ?? "";
  const app = new App({ root, client: new ApiClient(base) });
  void app.start().catch((e) => {
    root.textContent = `failed to reach the service: ${String(e)}`;
  });
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  bootstrap();
}
