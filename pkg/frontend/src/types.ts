// Wire types mirroring the service's JSON bodies exactly.

export interface DatasetSummary {
  dataset_id: string;
  disorders: string[];
  symptom_count: number;
  symptoms: string[];
  has_matrix: boolean;
  has_specs: boolean;
  profile_count: number | null;
  warnings: string[];
}

export interface SessionCreated {
  session_id: string;
  dataset_id: string;
  revision: number;
}

export interface ObservationOut {
  symptom: string;
  state: "present" | "absent";
}

export interface SessionSummary {
  session_id: string;
  dataset_id: string;
  revision: number;
  observations: ObservationOut[];
  unknown_symptom: boolean;
  warnings: string[];
}

export interface Recommendation {
  candidates: string[];
  excluded: string[];
  s1: string[];
  s0: string[];
  s_inter: string[];
  pairs: Record<string, [string, string][]>;
  group_sizes: Record<string, number>;
  path: string;
  diagnosis_complete: boolean;
  warnings: string[];
}

export interface ApiErrorBody {
  status: number;
  code: string;
  detail: string;
  location?: string | null;
}

/** Tri-state of one symptom chip: not yet assessed, present, or absent. */
export type SymptomState = "present" | "absent" | null;
