// Read models mirroring the session service's JSON wire formats.

export type HvacAction = number[]; // one destination per worker, 0 = stay home

export interface ObservationView {
  statuses: string[];
  availability: boolean[][];
  timestep: number;
}

export interface TrueStateView {
  statuses: string[];
  onsets: number[];
  availability: boolean[][];
  timestep: number;
}

export interface BeliefMarginals {
  status: number[][]; // [location][Ok, Mech, Elec, Cool]
  age: number[][];
}

export interface StepEntry {
  t: number;
  action: HvacAction;
  observation: ObservationView;
  belief_marginals: BeliefMarginals;
  features: number[];
  reward: number;
  running_return: number;
  penalties: boolean[];
  true_state?: TrueStateView;
}

export interface ExplanationStatement {
  feature_index: number;
  label: string;
  ratio: number | null;
  percent: number | null;
  text: string;
}

export interface ReconciliationEntry {
  t: number;
  a_a: HvacAction;
  a_h: HvacAction;
  phi_hat: number[];
  U: number;
  feasible: boolean;
  l1_distance?: number;
  residual?: number;
  explanation: ExplanationStatement[];
}

export interface SessionConfigView {
  hvac: {
    n_locations: number;
    n_workers: number;
    horizon: number;
    [key: string]: unknown;
  };
  phi_a: number[];
  [key: string]: unknown;
}

export interface SessionDoc {
  version: number;
  config: SessionConfigView;
  seed: number;
  steps: StepEntry[];
  reconciliations: ReconciliationEntry[];
}

export interface SessionView extends SessionDoc {
  id: string;
  timestep: number;
  terminal: boolean;
  has_recommendation: boolean;
}

export interface QValueEntry {
  action: HvacAction;
  q: number;
}

export interface RecommendResponse {
  action: HvacAction;
  q_values: QValueEntry[];
}

export interface StepReportView {
  t: number;
  action: HvacAction;
  observation: ObservationView;
  belief_marginals: BeliefMarginals;
  features: number[];
  reward: number;
  running_return: number;
  penalties: boolean[];
}

export interface ProposeResponse {
  reconcile_result: {
    phi_hat: number[];
    objective: number;
    l1_distance: number;
    residual: number;
    feasible: boolean;
    early_out: boolean;
  };
  explanation: ExplanationStatement[];
}
