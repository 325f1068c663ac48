/** Deterministic force-directed layout with degree-based elision.
 *
 * Provenance graphs can be large; beyond `maxNodes` only the highest-degree
 * nodes are kept (ties broken by id) so the drill-down stays readable. The
 * layout is a plain Fruchterman-Reingold loop with a seeded PRNG, so the
 * same graph always lands in the same picture.
 */

export interface LayoutOptions {
  width: number;
  height: number;
  iterations?: number;
  maxNodes?: number;
  seed?: number;
}

export interface LayoutNode {
  id: string;
  x: number;
  y: number;
  degree: number;
}

export interface LayoutResult {
  nodes: LayoutNode[];
  edges: Array<[string, string]>;
  elided: number;
}

/** Small deterministic PRNG (mulberry32). */
function prng(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function forceLayout(
  ids: string[],
  edges: Array<[string, string]>,
  options: LayoutOptions,
): LayoutResult {
  const iterations = options.iterations ?? 60;
  const maxNodes = options.maxNodes ?? 40;
  const random = prng(options.seed ?? 1);

  const degree = new Map<string, number>(ids.map((id) => [id, 0]));
  for (const [src, dst] of edges) {
    degree.set(src, (degree.get(src) ?? 0) + 1);
    degree.set(dst, (degree.get(dst) ?? 0) + 1);
  }

  let kept = [...ids];
  let elided = 0;
  if (kept.length > maxNodes) {
    kept.sort((a, b) => {
      const byDegree = (degree.get(b) ?? 0) - (degree.get(a) ?? 0);
      return byDegree !== 0 ? byDegree : a < b ? -1 : 1;
    });
    elided = kept.length - maxNodes;
    kept = kept.slice(0, maxNodes);
    kept.sort(); // restore stable order for positioning
  }
  const keptSet = new Set(kept);
  const keptEdges = edges.filter(([src, dst]) => keptSet.has(src) && keptSet.has(dst));

  const pad = 14;
  const width = options.width;
  const height = options.height;
  const positions = new Map<string, { x: number; y: number }>();
  kept.forEach((id, index) => {
    // start on a circle with a little jitter so symmetric graphs still split
    const angle = (2 * Math.PI * index) / Math.max(1, kept.length);
    positions.set(id, {
      x: width / 2 + (width / 3) * Math.cos(angle) + (random() - 0.5) * 8,
      y: height / 2 + (height / 3) * Math.sin(angle) + (random() - 0.5) * 8,
    });
  });

  const area = width * height;
  const k = Math.sqrt(area / Math.max(1, kept.length));
  let temperature = width / 8;

  for (let step = 0; step < iterations; step++) {
    const shift = new Map<string, { x: number; y: number }>(
      kept.map((id) => [id, { x: 0, y: 0 }]),
    );
    for (let i = 0; i < kept.length; i++) {
      for (let j = i + 1; j < kept.length; j++) {
        const a = positions.get(kept[i])!;
        const b = positions.get(kept[j])!;
        let dx = a.x - b.x;
        let dy = a.y - b.y;
        let dist = Math.hypot(dx, dy);
        if (dist < 1e-6) {
          dx = random() - 0.5;
          dy = random() - 0.5;
          dist = Math.hypot(dx, dy);
        }
        const repulse = (k * k) / dist;
        const fx = (dx / dist) * repulse;
        const fy = (dy / dist) * repulse;
        const sa = shift.get(kept[i])!;
        const sb = shift.get(kept[j])!;
        sa.x += fx;
        sa.y += fy;
        sb.x -= fx;
        sb.y -= fy;
      }
    }
    for (const [src, dst] of keptEdges) {
      const a = positions.get(src)!;
      const b = positions.get(dst)!;
      const dx = a.x - b.x;
      const dy = a.y - b.y;
      const dist = Math.max(1e-6, Math.hypot(dx, dy));
      const attract = (dist * dist) / k;
      const fx = (dx / dist) * attract;
      const fy = (dy / dist) * attract;
      const sa = shift.get(src)!;
      const sb = shift.get(dst)!;
      sa.x -= fx;
      sa.y -= fy;
      sb.x += fx;
      sb.y += fy;
    }
    for (const id of kept) {
      const p = positions.get(id)!;
      const s = shift.get(id)!;
      const magnitude = Math.max(1e-6, Math.hypot(s.x, s.y));
      const capped = Math.min(magnitude, temperature);
      p.x += (s.x / magnitude) * capped;
      p.y += (s.y / magnitude) * capped;
      p.x = Math.min(width - pad, Math.max(pad, p.x));
      p.y = Math.min(height - pad, Math.max(pad, p.y));
    }
    temperature *= 0.92;
  }

  return {
    nodes: kept.map((id) => ({
      id,
      x: positions.get(id)!.x,
      y: positions.get(id)!.y,
      degree: degree.get(id) ?? 0,
    })),
    edges: keptEdges,
    elided,
  };
}
