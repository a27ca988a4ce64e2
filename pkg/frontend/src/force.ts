// Small deterministic force-directed layout: seeded initial placement,
// pairwise repulsion, spring attraction along links, and a centering
// pull, annealed over a fixed number of iterations. Deterministic so a
// given query always renders the same picture.

export interface LayoutNode {
  id: string;
  r: number;
  x: number;
  y: number;
}

export interface LayoutLink {
  source: string;
  target: string;
}

export interface LayoutOptions {
  width: number;
  height: number;
  iterations?: number;
  seed?: number;
}

// mulberry32: tiny seeded PRNG, plenty for jittering start positions.
function makeRng(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function runLayout(
  nodes: LayoutNode[],
  links: LayoutLink[],
  options: LayoutOptions,
): void {
  const { width, height } = options;
  const iterations = options.iterations ?? 250;
  const rng = makeRng(options.seed ?? 1);
  const cx = width / 2;
  const cy = height / 2;
  const n = nodes.length;
  if (n === 0) return;

  // Start on a ring with a little jitter so symmetric graphs still split.
  const ringR = Math.min(width, height) * 0.3;
  nodes.forEach((node, i) => {
    const angle = (2 * Math.PI * i) / n;
    node.x = cx + ringR * Math.cos(angle) + (rng() - 0.5) * 10;
    node.y = cy + ringR * Math.sin(angle) + (rng() - 0.5) * 10;
  });
  if (n === 1) {
    const only = nodes[0]!;
    only.x = cx;
    only.y = cy;
    return;
  }

  const index = new Map(nodes.map((node, i) => [node.id, i]));
  const springs: Array<[number, number]> = [];
  for (const link of links) {
    const a = index.get(link.source);
    const b = index.get(link.target);
    if (a !== undefined && b !== undefined && a !== b) springs.push([a, b]);
  }

  const area = width * height;
  const k = Math.sqrt(area / n) * 0.6; // ideal pairwise distance
  const dx = new Float64Array(n);
  const dy = new Float64Array(n);

  for (let iter = 0; iter < iterations; iter++) {
    dx.fill(0);
    dy.fill(0);

    for (let i = 0; i < n; i++) {
      const a = nodes[i]!;
      for (let j = i + 1; j < n; j++) {
        const b = nodes[j]!;
        let ddx = a.x - b.x;
        let ddy = a.y - b.y;
        let dist = Math.hypot(ddx, ddy);
        if (dist < 1e-6) {
          // coincident points: push apart along a deterministic direction
          ddx = Math.cos(i + j);
          ddy = Math.sin(i + j);
          dist = 1;
        }
        const repel = (k * k) / dist;
        dx[i]! += (ddx / dist) * repel;
        dy[i]! += (ddy / dist) * repel;
        dx[j]! -= (ddx / dist) * repel;
        dy[j]! -= (ddy / dist) * repel;
      }
    }

    for (const [a, b] of springs) {
      const na = nodes[a]!;
      const nb = nodes[b]!;
      const ddx = na.x - nb.x;
      const ddy = na.y - nb.y;
      const dist = Math.max(Math.hypot(ddx, ddy), 1e-6);
      const attract = (dist * dist) / k;
      dx[a]! -= (ddx / dist) * attract;
      dy[a]! -= (ddy / dist) * attract;
      dx[b]! += (ddx / dist) * attract;
      dy[b]! += (ddy / dist) * attract;
    }

    // Linear cooling caps per-step movement so the layout settles.
    const temperature = (Math.min(width, height) / 10) * (1 - iter / iterations);
    for (let i = 0; i < n; i++) {
      const node = nodes[i]!;
      let mx = dx[i]! + (cx - node.x) * 0.02;
      let my = dy[i]! + (cy - node.y) * 0.02;
      const move = Math.hypot(mx, my);
      if (move > temperature) {
        mx = (mx / move) * temperature;
        my = (my / move) * temperature;
      }
      node.x += mx;
      node.y += my;
      node.x = Math.min(width - node.r, Math.max(node.r, node.x));
      node.y = Math.min(height - node.r, Math.max(node.r, node.y));
    }
  }
}
