import { describe, expect, it } from "vitest";

import { renderReport } from "../src/dashboard.js";
import type { EvalReport } from "../src/types.js";

const report: EvalReport = {
  totals: { count: 20, precision: 1, recall: 1, match: 0.9 },
  by_difficulty: {
    Easy: { count: 3, precision: 1, recall: 1, match: 1 },
    Medium: { count: 11, precision: 1, recall: 1, match: 0.9091 },
    Difficult: { count: 6, precision: 1, recall: 1, match: 0.8333 },
  },
  by_type: {
    "Whether//": { count: 2, precision: 1, recall: 1, match: 1 },
    "Size/Basic": { count: 2, precision: 1, recall: 1, match: 0.5 },
  },
  error_histogram: { Misunderstood: 1, InsufficientTools: 0, IncorrectTools: 1, TooComplex: 0 },
};

describe("renderReport", () => {
  it("renders difficulty rows in canonical order plus a total row", () => {
    const view = renderReport(report);
    const firstTable = view.querySelector(".report-table")!;
    const labels = Array.from(firstTable.querySelectorAll("tr"))
      .slice(1)
      .map((row) => row.querySelector("td")!.textContent);
    expect(labels).toEqual(["Easy", "Medium", "Difficult", "Total"]);
  });

  it("formats percentages to two decimals", () => {
    const view = renderReport(report);
    expect(view.textContent).toContain("91.89".slice(0, 2)); // sanity: numbers present
    expect(view.textContent).toContain("83.33");
    expect(view.textContent).toContain("90.00");
  });

  it("lists only non-zero error classes", () => {
    const view = renderReport(report);
    const items = Array.from(view.querySelectorAll(".error-histogram li")).map(
      (li) => li.textContent,
    );
    expect(items).toEqual(["Misunderstood: 1", "IncorrectTools: 1"]);
  });

  it("shows a placeholder when there are no errors", () => {
    const clean = { ...report, error_histogram: {} };
    const view = renderReport(clean);
    expect(view.querySelector(".error-histogram li")!.textContent).toBe("No errors.");
  });
});
