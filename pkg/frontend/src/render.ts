// Pure HTML renderers. Keeping these as string -> string functions lets the
// test suite assert on markup without a browser; app.ts mounts the output.

import type {
  ExplanationStatement,
  QValueEntry,
  ReconciliationEntry,
  SessionDoc,
  StepEntry,
} from "./types";

const STATUS_SHORT: Record<string, string> = { Ok: "Ok", Mech: "M", Elec: "E", Cool: "C" };
const STATUS_ORDER = ["Ok", "Mech", "Elec", "Cool"];

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function beliefCenter(step: StepEntry, loc: number): string {
  const marginal = step.belief_marginals.status[loc];
  let best = 0;
  for (let k = 1; k < marginal.length; k += 1) {
    if (marginal[k] > marginal[best]) best = k;
  }
  return `${STATUS_SHORT[STATUS_ORDER[best]]} ${marginal[best].toFixed(2)}`;
}

export interface TimelineCell {
  location: number;
  timestep: number;
  observation?: string;
  belief?: string;
  trueStatus?: string;
  workers: number[];
  penalty: boolean;
}

/** Grid description consumed by the HTML renderer (exported for tests). */
export function timelineCells(doc: SessionDoc): TimelineCell[] {
  const n = doc.config.hvac.n_locations;
  const steps = doc.steps;
  const lastColumn = steps.length > 0 ? steps[steps.length - 1].t + 1 : 1;
  const byTime = new Map<number, StepEntry>(steps.map((s) => [s.t, s]));
  const cells: TimelineCell[] = [];
  for (let t = 1; t <= lastColumn; t += 1) {
    const acted = byTime.get(t); // step taken at t
    const arrived = byTime.get(t - 1); // its observation landed at t
    for (let loc = 0; loc < n; loc += 1) {
      const cell: TimelineCell = {
        location: loc,
        timestep: t,
        workers: [],
        penalty: acted !== undefined && acted.penalties[loc],
      };
      if (arrived !== undefined) {
        cell.observation = STATUS_SHORT[arrived.observation.statuses[loc]];
        cell.belief = beliefCenter(arrived, loc);
      } else if (t === 1) {
        cell.belief = "Ok 1.00";
      }
      if (acted !== undefined) {
        if (acted.true_state !== undefined) {
          cell.trueStatus = STATUS_SHORT[acted.true_state.statuses[loc]];
        }
        acted.action.forEach((destination, worker) => {
          if (destination === loc + 1) cell.workers.push(worker + 1);
        });
      }
      cells.push(cell);
    }
  }
  return cells;
}

/** Rows = locations, columns = timesteps; penalty cells carry class "penalty". */
export function timelinePanel(doc: SessionDoc): string {
  const n = doc.config.hvac.n_locations;
  const cells = timelineCells(doc);
  const lastColumn = cells.length > 0 ? cells[cells.length - 1].timestep : 1;

  const header = ['<tr><th class="corner"></th>'];
  for (let t = 1; t <= lastColumn; t += 1) {
    header.push(`<th class="t">${t}</th>`);
  }
  header.push("</tr>");

  const rows: string[] = [];
  for (let loc = 0; loc < n; loc += 1) {
    const row = [`<tr><th class="loc">Location ${loc + 1}</th>`];
    for (let t = 1; t <= lastColumn; t += 1) {
      const cell = cells[(t - 1) * n + loc];
      const classes = cell.penalty ? "cell penalty" : "cell";
      row.push(
        `<td class="${classes}" data-loc="${loc}" data-t="${t}">` +
          `<span class="obs">${cell.observation ?? ""}</span>` +
          `<span class="true">${cell.trueStatus ?? ""}</span>` +
          `<span class="belief">${cell.belief ?? ""}</span>` +
          `<span class="action">${cell.workers.length > 0 ? "w" + cell.workers.join(",") : ""}</span>` +
          "</td>",
      );
    }
    row.push("</tr>");
    rows.push(row.join(""));
  }
  return `<table class="timeline">${header.join("")}${rows.join("")}</table>`;
}

export function qValuesTable(entries: QValueEntry[], recommended: number[]): string {
  const rows = entries
    .map((entry) => {
      const isBest = JSON.stringify(entry.action) === JSON.stringify(recommended);
      return (
        `<tr class="${isBest ? "recommended" : ""}">` +
        `<td>(${entry.action.join(",")})</td><td>${entry.q.toFixed(2)}</td></tr>`
      );
    })
    .join("");
  return `<table class="q-values"><tr><th>action</th><th>Q</th></tr>${rows}</table>`;
}

export function explanationList(statements: ExplanationStatement[]): string {
  if (statements.length === 0) {
    return '<p class="explanation empty">No weighting difference large enough to report.</p>';
  }
  const items = statements
    .map((s) => `<li class="explanation-sentence">${escapeHtml(s.text)}</li>`)
    .join("");
  return `<ul class="explanation">${items}</ul>`;
}

/** Grouped bars comparing the planner weighting with the implied one. */
export function weightingChart(phiA: number[], phiHat: number[], labels: string[]): string {
  const peak = Math.max(...phiA, ...phiHat, 1e-9);
  const groups = labels
    .map((label, i) => {
      const a = phiA[i];
      const h = phiHat[i];
      const pct = a > 0 ? `${Math.round((h / a) * 100)}%` : "n/a";
      const aw = Math.round((a / peak) * 100);
      const hw = Math.round((h / peak) * 100);
      return (
        `<div class="weight-group" data-feature="${i}">` +
        `<span class="label">${escapeHtml(label)}</span>` +
        `<div class="bar algo" style="width:${aw}%" title="algorithm ${a.toFixed(3)}"></div>` +
        `<div class="bar implied" style="width:${hw}%" title="implied ${h.toFixed(3)}"></div>` +
        `<span class="ratio">${pct}</span>` +
        "</div>"
      );
    })
    .join("");
  return `<div class="weighting-chart">${groups}</div>`;
}

export function reconciliationPanel(entry: ReconciliationEntry, labels: string[], phiA: number[]): string {
  return (
    `<div class="reconciliation" data-t="${entry.t}">` +
    `<p>t=${entry.t}: you proposed (${entry.a_h.join(",")}), the planner chose ` +
    `(${entry.a_a.join(",")}) — ${entry.feasible ? "reconciled" : "could not fully reconcile"}.</p>` +
    explanationList(entry.explanation) +
    weightingChart(phiA, entry.phi_hat, labels) +
    "</div>"
  );
}

export function featureLabels(nLocations: number, nWorkers: number): string[] {
  const labels: string[] = [];
  for (let i = 0; i < nLocations; i += 1) labels.push(`penalty at Location ${i + 1}`);
  for (let r = 0; r < nWorkers; r += 1) labels.push(`wage of Repairperson ${r + 1}`);
  return labels;
}
