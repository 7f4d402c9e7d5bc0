import { describe, expect, it } from "vitest";

import { ResultsSummary } from "../src/api.js";
import { countPairedMarks, renderResultsChart } from "../src/chart.js";

function summaryOf(values: Array<[number, number]>): ResultsSummary {
  return {
    actions: values.map(([perceived, truth], index) => ({
      id: index + 1,
      perceived_kg: perceived,
      true_kg: truth,
      log10_error: Math.log10(perceived / truth),
    })),
    n_total_observations: 42,
    n_session_answers: 5,
  };
}

describe("renderResultsChart", () => {
  it("renders one paired mark per action", () => {
    const values: Array<[number, number]> = Array.from({ length: 18 }, (_, k) => [
      50 * (k + 1),
      40 * (k + 1),
    ]);
    const svg = renderResultsChart(summaryOf(values));
    expect(countPairedMarks(svg)).toBe(18);
    expect(svg).toContain("log scale");
  });

  it("sorts actions by true footprint", () => {
    const svg = renderResultsChart(summaryOf([[5, 900], [5, 8], [5, 90]]));
    const order = [...svg.matchAll(/data-action-id="(\d+)"/g)].map((m) => Number(m[1]));
    expect(order).toEqual([2, 3, 1]);
  });

  it("distinguishes over- and underestimation", () => {
    const svg = renderResultsChart(summaryOf([[200, 100], [50, 100]]));
    expect(svg).toContain('class="stem over"');
    expect(svg).toContain('class="stem under"');
  });

  it("coincident marks share a y coordinate when perception equals truth", () => {
    const svg = renderResultsChart(summaryOf([[100, 100], [7, 7]]));
    const trueY = [...svg.matchAll(/class="mark-true" cx="[^"]+" cy="([^"]+)"/g)].map((m) => m[1]);
    const perceivedY = [...svg.matchAll(/class="mark-perceived[^"]*" d="M [0-9.]+ ([0-9.]+)/g)].map(
      (m) => Number(m[1]) + 5.5,
    );
    expect(perceivedY.map((y) => y.toFixed(6))).toEqual(trueY.map((y) => Number(y).toFixed(6)));
  });
});
