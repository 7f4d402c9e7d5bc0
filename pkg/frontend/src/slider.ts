/**
 * Logarithmic ratio slider mapping.
 *
 * Slider positions live in [-1, +1]; the stated impact ratio is
 * 10^(3 * position), so the control spans three decades each way
 * (1/1000 .. 1000) with "equal impact" at the center.
 *
 * The mapping is reciprocal-symmetric: negative positions are computed as
 * the exact float reciprocal of their mirror image, so for p >= 0,
 * ratioFromPosition(-p) === 1 / ratioFromPosition(p) bit for bit, and the
 * product ratioFromPosition(-p) * ratioFromPosition(p) is 1 within one ulp
 * for every p.
 */

export const DECADES = 3;

/** Snapping detents at whole decades, with their display labels. */
export const DETENTS: ReadonlyArray<{ position: number; label: string }> = [
  { position: -1, label: "÷1000" },
  { position: -2 / 3, label: "÷100" },
  { position: -1 / 3, label: "÷10" },
  { position: 0, label: "=" },
  { position: 1 / 3, label: "×10" },
  { position: 2 / 3, label: "×100" },
  { position: 1, label: "×1000" },
];

export function clampPosition(position: number): number {
  return Math.min(1, Math.max(-1, position));
}

/** Ratio stated by the slider: 10^(3p), reciprocal-symmetric around 0. */
export function ratioFromPosition(position: number): number {
  const p = clampPosition(position);
  if (p < 0) {
    return 1 / Math.pow(10, DECADES * -p);
  }
  return Math.pow(10, DECADES * p);
}

export function positionFromRatio(ratio: number): number {
  if (!(ratio > 0) || !Number.isFinite(ratio)) {
    throw new Error(`ratio must be a positive finite number, got ${ratio}`);
  }
  return clampPosition(Math.log10(ratio) / DECADES);
}

/** Human-readable preview of the ratio at a position, e.g. "×10" or "÷2.5". */
export function formatRatio(position: number): string {
  const p = clampPosition(position);
  const detent = DETENTS.find((d) => Math.abs(d.position - p) < 1e-9);
  if (detent) {
    return detent.label;
  }
  const ratio = ratioFromPosition(Math.abs(p));
  const rounded = ratio >= 10 ? Math.round(ratio) : Math.round(ratio * 10) / 10;
  return p < 0 ? `÷${rounded}` : `×${rounded}`;
}

/** Snap a raw slider value to the nearest detent when close enough. */
export function snapToDetent(position: number, tolerance = 0.04): number {
  const p = clampPosition(position);
  for (const detent of DETENTS) {
    if (Math.abs(detent.position - p) <= tolerance) {
      return detent.position;
    }
  }
  return p;
}
