/** Client-side hunt session: seeds, live parameters, and the cached report.
 *
 * The session never computes similarity; it only keeps the last API report
 * and derives *views* of it (per-candidate best scores, the alert set at a
 * threshold) from the numbers the server already returned. That is what
 * makes threshold-only steering instant: the scores are cached here, and
 * the server confirms with `scores=hit` on the follow-up request.
 */

import type { CacheNote, HuntReport } from "./api.js";

export interface HuntParameters {
  threshold: number;
  w1: number;
  w2: number;
  w3: number;
  jT: number;
}

export const DEFAULT_PARAMETERS: HuntParameters = {
  threshold: 0.5,
  w1: 1.0,
  w2: 0.2,
  w3: 0.8,
  jT: 0.6,
};

function clampNumber(value: number, lo: number, hi: number, fallback: number): number {
  if (!Number.isFinite(value)) return fallback;
  return Math.min(hi, Math.max(lo, value));
}

/** Mirror the API's ranges: threshold in [0,1], weights >= 0, j_t in (0,1]. */
export function clampParameters(p: HuntParameters): HuntParameters {
  return {
    threshold: clampNumber(p.threshold, 0, 1, DEFAULT_PARAMETERS.threshold),
    w1: clampNumber(p.w1, 0, Number.MAX_VALUE, DEFAULT_PARAMETERS.w1),
    w2: clampNumber(p.w2, 0, Number.MAX_VALUE, DEFAULT_PARAMETERS.w2),
    w3: clampNumber(p.w3, 0, Number.MAX_VALUE, DEFAULT_PARAMETERS.w3),
    jT: clampNumber(p.jT, Number.MIN_VALUE, 1, DEFAULT_PARAMETERS.jT),
  };
}

/** True when the change requires the server to re-score pairs.
 *
 * Only the alert threshold is applied after scoring, so a threshold-only
 * change can be answered from the cached report; anything else (weights,
 * j_t, seeds) invalidates the scores themselves.
 */
export function needsRescore(
  prev: HuntParameters,
  next: HuntParameters,
  seedsChanged: boolean,
): boolean {
  if (seedsChanged) return true;
  return (
    prev.w1 !== next.w1 ||
    prev.w2 !== next.w2 ||
    prev.w3 !== next.w3 ||
    prev.jT !== next.jT
  );
}

/** Best clamped score per non-seed graph, straight from the report's pairs. */
export function bestScores(report: HuntReport): Map<string, number> {
  const seeds = new Set(report.params.seeds);
  const best = new Map<string, number>();
  for (const pair of report.pairs) {
    for (const [graph, other] of [
      [pair.a, pair.b],
      [pair.b, pair.a],
    ] as const) {
      if (!seeds.has(graph) && seeds.has(other)) {
        const previous = best.get(graph) ?? 0;
        if (pair.clamped > previous) best.set(graph, pair.clamped);
      }
    }
  }
  return best;
}

/** Alert set at a threshold, derived from cached API scores. */
export function alertSet(report: HuntReport, threshold: number): Set<string> {
  const alerts = new Set<string>();
  for (const [graph, score] of bestScores(report)) {
    if (score >= threshold) alerts.add(graph);
  }
  return alerts;
}

/** Encode seeds + parameters as a shareable query string. */
export function encodeSession(seeds: string[], p: HuntParameters): string {
  const query = new URLSearchParams();
  if (seeds.length) query.set("seeds", seeds.join(","));
  query.set("t", String(p.threshold));
  query.set("w1", String(p.w1));
  query.set("w2", String(p.w2));
  query.set("w3", String(p.w3));
  query.set("jt", String(p.jT));
  return query.toString();
}

/** Inverse of encodeSession; missing or bad values fall back to defaults. */
export function decodeSession(queryString: string): {
  seeds: string[];
  parameters: HuntParameters;
} {
  const query = new URLSearchParams(queryString);
  const seeds = (query.get("seeds") ?? "")
    .split(",")
    .map((s) => s.trim())
    .filter((s) => s.length > 0);
  const num = (key: string, fallback: number): number => {
    const raw = query.get(key);
    return raw === null ? fallback : Number(raw);
  };
  const parameters = clampParameters({
    threshold: num("t", DEFAULT_PARAMETERS.threshold),
    w1: num("w1", DEFAULT_PARAMETERS.w1),
    w2: num("w2", DEFAULT_PARAMETERS.w2),
    w3: num("w3", DEFAULT_PARAMETERS.w3),
    jT: num("jt", DEFAULT_PARAMETERS.jT),
  });
  return { seeds, parameters };
}

export interface SelectedPair {
  a: string;
  b: string;
}

/** All mutable state for one analyst session. */
export class HuntSession {
  seeds: string[] = [];
  parameters: HuntParameters = { ...DEFAULT_PARAMETERS };
  report: HuntReport | null = null;
  cache: CacheNote = { buckets: null, scores: null };
  selectedPair: SelectedPair | null = null;
}
