/**
 * Perceived-vs-true results chart as an SVG string.
 *
 * Actions are sorted by true footprint; each gets a pair of marks on a
 * log-scale kg axis (circle = true, diamond = perceived) joined by a stem
 * whose class says whether the population over- or underestimates.
 */

import { ResultsSummary } from "./api.js";

const MARGIN = { top: 24, right: 16, bottom: 34, left: 64 };

function niceDecades(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.floor(Math.log10(lo)); e <= Math.ceil(Math.log10(hi)); e += 1) {
    ticks.push(Math.pow(10, e));
  }
  return ticks;
}

function escapeXml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

export function renderResultsChart(summary: ResultsSummary, width = 760, height = 420): string {
  const rows = [...summary.actions].sort((a, b) => a.true_kg - b.true_kg);
  const innerWidth = width - MARGIN.left - MARGIN.right;
  const innerHeight = height - MARGIN.top - MARGIN.bottom;

  const values = rows.flatMap((r) => [r.true_kg, r.perceived_kg]);
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const logLo = Math.log10(lo) - 0.15;
  const logHi = Math.log10(hi) + 0.15;
  const yOf = (kg: number) =>
    MARGIN.top + innerHeight - ((Math.log10(kg) - logLo) / (logHi - logLo)) * innerHeight;
  const xOf = (index: number) => MARGIN.left + ((index + 0.5) / rows.length) * innerWidth;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
      `width="${width}" height="${height}" role="img" class="results-chart">`,
  );

  for (const tick of niceDecades(lo, hi)) {
    const y = yOf(tick);
    if (y < MARGIN.top || y > MARGIN.top + innerHeight) continue;
    parts.push(`<line class="grid" x1="${MARGIN.left}" x2="${width - MARGIN.right}" y1="${y}" y2="${y}"/>`);
    parts.push(`<text class="tick" x="${MARGIN.left - 8}" y="${y + 4}" text-anchor="end">${tick}</text>`);
  }
  parts.push(
    `<text class="axis-label" x="${MARGIN.left - 44}" y="${MARGIN.top + innerHeight / 2}" ` +
      `transform="rotate(-90 ${MARGIN.left - 44} ${MARGIN.top + innerHeight / 2})" text-anchor="middle">kgCO2e (log scale)</text>`,
  );

  rows.forEach((row, index) => {
    const x = xOf(index);
    const yTrue = yOf(row.true_kg);
    const yPerceived = yOf(row.perceived_kg);
    const direction = row.perceived_kg >= row.true_kg ? "over" : "under";
    const tooltip = escapeXml(
      `Action ${row.id}: perceived ${row.perceived_kg.toFixed(1)} kg, true ${row.true_kg.toFixed(1)} kg`,
    );
    parts.push(`<g class="action-pair" data-action-id="${row.id}">`);
    parts.push(`<title>${tooltip}</title>`);
    parts.push(
      `<line class="stem ${direction}" x1="${x}" x2="${x}" y1="${yTrue}" y2="${yPerceived}"/>`,
    );
    parts.push(`<circle class="mark-true" cx="${x}" cy="${yTrue}" r="4.5"/>`);
    parts.push(
      `<path class="mark-perceived ${direction}" d="M ${x} ${yPerceived - 5.5} L ${x + 5.5} ${yPerceived} ` +
        `L ${x} ${yPerceived + 5.5} L ${x - 5.5} ${yPerceived} Z"/>`,
    );
    parts.push(
      `<text class="tick" x="${x}" y="${height - MARGIN.bottom + 16}" text-anchor="middle">${row.id}</text>`,
    );
    parts.push("</g>");
  });

  parts.push(
    `<text class="tick" x="${MARGIN.left + innerWidth / 2}" y="${height - 6}" text-anchor="middle">action (sorted by true footprint)</text>`,
  );
  parts.push("</svg>");
  return parts.join("");
}

/** Count the paired marks in a rendered chart (used by tests and badges). */
export function countPairedMarks(svg: string): number {
  const trueMarks = (svg.match(/class="mark-true"/g) ?? []).length;
  const perceivedMarks = (svg.match(/class="mark-perceived/g) ?? []).length;
  return Math.min(trueMarks, perceivedMarks);
}
