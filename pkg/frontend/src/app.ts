// Browser wiring for the operator console. All state lives on the server;
// every mutation awaits the response and then re-fetches the session view,
// so a reload reconstructs exactly what the server knows.

import { ApiClient, ServiceError } from "./api";
import {
  featureLabels,
  qValuesTable,
  reconciliationPanel,
  timelinePanel,
} from "./render";
import type { HvacAction, RecommendResponse, SessionView } from "./types";

interface UiState {
  client: ApiClient;
  sessionId?: string;
  view?: SessionView;
  recommendation?: RecommendResponse;
  debug: boolean;
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function setStatus(text: string, isError = false) {
  const node = el<HTMLParagraphElement>("status");
  node.textContent = text;
  node.className = isError ? "status error" : "status";
}

async function refresh(state: UiState): Promise<void> {
  if (!state.sessionId) return;
  state.view = await state.client.getSession(state.sessionId, state.debug);
  el("timeline-panel").innerHTML = timelinePanel(state.view);
  el("session-meta").textContent =
    `session ${state.view.id} — timestep ${state.view.timestep}` +
    (state.view.terminal ? " (episode over)" : "");
  renderProposalForm(state);
  renderReconciliations(state);
  const proposeReady = state.recommendation !== undefined && !state.view.terminal;
  el<HTMLButtonElement>("propose-button").disabled = !proposeReady;
  el<HTMLButtonElement>("step-recommended").disabled = !proposeReady;
}

function renderProposalForm(state: UiState) {
  if (!state.view) return;
  const { n_locations: n, n_workers: r } = state.view.config.hvac;
  const form = el<HTMLDivElement>("proposal-form");
  if (form.childElementCount !== r) {
    form.innerHTML = "";
    for (let worker = 0; worker < r; worker += 1) {
      const select = document.createElement("select");
      select.id = `worker-${worker}`;
      for (let loc = 0; loc <= n; loc += 1) {
        const option = document.createElement("option");
        option.value = String(loc);
        option.textContent = loc === 0 ? `worker ${worker + 1}: stay home` : `worker ${worker + 1} -> location ${loc}`;
        select.appendChild(option);
      }
      form.appendChild(select);
    }
  }
}

function readProposal(state: UiState): HvacAction {
  const r = state.view?.config.hvac.n_workers ?? 0;
  const action: HvacAction = [];
  for (let worker = 0; worker < r; worker += 1) {
    action.push(Number(el<HTMLSelectElement>(`worker-${worker}`).value));
  }
  return action;
}

function renderReconciliations(state: UiState) {
  if (!state.view) return;
  const { n_locations, n_workers } = state.view.config.hvac;
  const labels = featureLabels(n_locations, n_workers);
  el("reconciliations").innerHTML = state.view.reconciliations
    .map((entry) => reconciliationPanel(entry, labels, state.view!.config.phi_a))
    .join("");
}

async function guard(fn: () => Promise<void>) {
  try {
    await fn();
  } catch (err) {
    if (err instanceof ServiceError) {
      setStatus(`${err.code}: ${err.message}`, true);
    } else {
      setStatus(String(err), true);
    }
  }
}

export function mount(): void {
  const state: UiState = {
    client: new ApiClient(
      (el<HTMLInputElement>("base-url").value || window.location.origin),
    ),
    debug: false,
  };

  el("base-url").addEventListener("change", () => {
    state.client = new ApiClient(el<HTMLInputElement>("base-url").value);
  });

  el("debug-toggle").addEventListener("change", () =>
    guard(async () => {
      state.debug = el<HTMLInputElement>("debug-toggle").checked;
      await refresh(state);
    }),
  );

  el("create-session").addEventListener("click", () =>
    guard(async () => {
      const created = await state.client.createSession();
      state.sessionId = created.id;
      state.recommendation = undefined;
      setStatus(`created session ${created.id}`);
      await refresh(state);
    }),
  );

  el("recommend").addEventListener("click", () =>
    guard(async () => {
      if (!state.sessionId) throw new Error("create a session first");
      state.recommendation = await state.client.recommend(state.sessionId);
      el("q-panel").innerHTML = qValuesTable(
        state.recommendation.q_values,
        state.recommendation.action,
      );
      setStatus(`planner recommends (${state.recommendation.action.join(",")})`);
      await refresh(state);
    }),
  );

  el("propose-button").addEventListener("click", () =>
    guard(async () => {
      if (!state.sessionId) throw new Error("create a session first");
      const proposal = readProposal(state);
      const result = await state.client.propose(state.sessionId, proposal);
      setStatus(
        result.reconcile_result.feasible
          ? "proposal reconciled; see the explanation below"
          : "no nearby weighting makes that proposal at least as good",
      );
      await refresh(state);
    }),
  );

  el("step-recommended").addEventListener("click", () =>
    guard(async () => {
      if (!state.sessionId || !state.recommendation) throw new Error("recommend first");
      await state.client.step(state.sessionId, state.recommendation.action);
      state.recommendation = undefined;
      el("q-panel").innerHTML = "";
      await refresh(state);
    }),
  );

  el("step-mine").addEventListener("click", () =>
    guard(async () => {
      if (!state.sessionId) throw new Error("create a session first");
      await state.client.step(state.sessionId, readProposal(state));
      state.recommendation = undefined;
      el("q-panel").innerHTML = "";
      await refresh(state);
    }),
  );
}

if (typeof document !== "undefined" && document.getElementById("create-session")) {
  mount();
}
