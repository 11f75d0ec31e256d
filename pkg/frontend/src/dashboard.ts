/** Eval-report dashboard: difficulty / type tables and the error histogram. */

import type { EvalReport, GroupStats } from "./types.js";

const pct = (value: number) => `${(value * 100).toFixed(2)}`;

function statsTable(title: string, rows: Array<[string, GroupStats]>): HTMLElement {
  const section = document.createElement("section");
  section.className = "report-section";
  const heading = document.createElement("h3");
  heading.textContent = title;
  section.appendChild(heading);

  const table = document.createElement("table");
  table.className = "report-table";
  const head = document.createElement("tr");
  for (const label of ["Questions", "Count", "Precision", "Recall", "Match"]) {
    const th = document.createElement("th");
    th.textContent = label;
    head.appendChild(th);
  }
  table.appendChild(head);

  for (const [label, stats] of rows) {
    const tr = document.createElement("tr");
    for (const cell of [label, String(stats.count), pct(stats.precision), pct(stats.recall), pct(stats.match)]) {
      const td = document.createElement("td");
      td.textContent = cell;
      tr.appendChild(td);
    }
    table.appendChild(tr);
  }
  section.appendChild(table);
  return section;
}

export function renderReport(report: EvalReport): HTMLElement {
  const container = document.createElement("div");
  container.className = "report";

  const difficultyRows: Array<[string, GroupStats]> = [];
  for (const bucket of ["Easy", "Medium", "Difficult"]) {
    if (report.by_difficulty[bucket]) difficultyRows.push([bucket, report.by_difficulty[bucket]]);
  }
  difficultyRows.push(["Total", report.totals]);
  container.appendChild(statsTable("By difficulty", difficultyRows));

  const typeRows = Object.entries(report.by_type).sort(([a], [b]) => a.localeCompare(b));
  container.appendChild(statsTable("By question type", typeRows));

  const errors = document.createElement("section");
  errors.className = "report-section";
  const heading = document.createElement("h3");
  heading.textContent = "Error classes";
  errors.appendChild(heading);
  const list = document.createElement("ul");
  list.className = "error-histogram";
  let any = false;
  for (const [name, count] of Object.entries(report.error_histogram)) {
    if (!count) continue;
    any = true;
    const item = document.createElement("li");
    item.textContent = `${name}: ${count}`;
    list.appendChild(item);
  }
  if (!any) {
    const item = document.createElement("li");
    item.textContent = "No errors.";
    list.appendChild(item);
  }
  errors.appendChild(list);
  container.appendChild(errors);
  return container;
}
