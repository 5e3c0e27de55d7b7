// Session view state. The UI performs no diagnostic computation of its own:
// everything rendered comes verbatim from the latest service responses, and
// recommendation responses are revision-gated so an out-of-order reply for an
// older session revision can never overwrite a newer one.

import type {
  DatasetSummary,
  Recommendation,
  SessionSummary,
  SymptomState,
} from "./types.js";

export interface PendingReplace {
  symptom: string;
  state: "present" | "absent";
}

export class SessionView {
  dataset: DatasetSummary | null = null;
  sessionId: string | null = null;
  /** Latest session revision confirmed by the service. */
  revision = 0;
  /** Revision whose recommendation is currently rendered (-1 = none yet). */
  shownRevision = -1;
  observations = new Map<string, "present" | "absent">();
  recommendation: Recommendation | null = null;
  /** Symptom whose pair map detail is expanded. */
  selectedSymptom: string | null = null;
  /** Contradiction awaiting an explicit replace confirmation. */
  pendingReplace: PendingReplace | null = null;
  error: string | null = null;
  busy = false;

  startSession(dataset: DatasetSummary, sessionId: string, revision: number): void {
    this.dataset = dataset;
    this.sessionId = sessionId;
    this.revision = revision;
    this.shownRevision = -1;
    this.observations = new Map();
    this.recommendation = null;
    this.selectedSymptom = null;
    this.pendingReplace = null;
    this.error = null;
  }

  /** Absorb a mutation response: authoritative observation list + revision. */
  applySummary(summary: SessionSummary): void {
    this.revision = summary.revision;
    this.observations = new Map(summary.observations.map((o) => [o.symptom, o.state]));
  }

  /**
   * Absorb a recommendation fetched at `forRevision`. Returns false (and
   * changes nothing) when a newer revision is already on screen.
   */
  applyRecommendation(rec: Recommendation, forRevision: number): boolean {
    if (forRevision <= this.shownRevision) {
      return false;
    }
    this.recommendation = rec;
    this.shownRevision = forRevision;
    if (this.selectedSymptom !== null && !(this.selectedSymptom in rec.pairs)) {
      this.selectedSymptom = null;
    }
    return true;
  }

  stateOf(symptom: string): SymptomState {
    return this.observations.get(symptom) ?? null;
  }

  /** Tri-state cycle: unset -> present -> absent -> unset. */
  nextStateOf(symptom: string): SymptomState {
    const current = this.stateOf(symptom);
    if (current === null) return "present";
    if (current === "present") return "absent";
    return null;
  }
}
