/** HTML builders for the agreement and guideline panels (server values verbatim). */

import { formatKappa } from "./format.js";
import { ZONES } from "./keymap.js";
import type { AgreementResponse, FleissResponse, Guidelines } from "./types.js";
import { isInsufficient } from "./types.js";

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderAgreementPanel(
  report: AgreementResponse,
  fleiss?: FleissResponse,
): string {
  if (isInsufficient(report)) {
    return `<p class="muted">not enough shared items (${escapeHtml(report.reason)})</p>`;
  }
  const rows: string[] = [];
  rows.push(`<p>Overall Fleiss κ: <strong>${formatKappa(report.fleiss)}</strong>`
    + ` over ${report.n_items} items</p>`);
  if (fleiss && !fleiss.insufficient_overlap && fleiss.fleiss !== undefined) {
    rows.push(`<p class="muted">${fleiss.n_annotators} annotators</p>`);
  }
  rows.push('<table class="kappa"><tr><th>Pair</th><th>Cohen κ</th></tr>');
  for (const [pair, kappa] of Object.entries(report.pairwise)) {
    rows.push(`<tr><td>${escapeHtml(pair)}</td><td>${formatKappa(kappa)}</td></tr>`);
  }
  rows.push("</table>");
  rows.push('<table class="kappa"><tr><th>Class</th><th>κ</th><th></th></tr>');
  for (const zone of ZONES) {
    const kappa = report.per_class[zone] ?? null;
    const width = kappa === null ? 0 : Math.round(Math.max(0, kappa) * 100);
    rows.push(
      `<tr><td>${zone}</td><td>${formatKappa(kappa)}</td>` +
        `<td><div class="bar" style="width:${width}px"></div></td></tr>`,
    );
  }
  rows.push("</table>");
  return rows.join("\n");
}

export function renderGuidelinePanel(guidelines: Guidelines): string {
  const items = guidelines.classes.map(
    (entry) =>
      `<details><summary><kbd>${entry.shortcut}</kbd> ` +
      `<strong>${escapeHtml(entry.code)}</strong> — ${escapeHtml(entry.name)}</summary>` +
      `<p>${escapeHtml(entry.definition)}</p>` +
      `<p class="muted">e.g. ${escapeHtml(entry.example)}</p></details>`,
  );
  return items.join("\n");
}
