// Deterministic force-directed layout, seeded from node ids so the same
// subgraph lands in the same arrangement across reloads.

import type { GraphEdge, GraphNode } from './types.js';

export interface Point {
  x: number;
  y: number;
}

function hashString(text: string): number {
  let hash = 2166136261;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 16777619);
  }
  return hash >>> 0;
}

function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function layoutPositions(
  nodes: GraphNode[],
  edges: GraphEdge[],
  iterations = 60,
): Map<string, Point> {
  const ids = nodes.map((n) => n.id).sort();
  const positions = new Map<string, Point>();
  if (ids.length === 0) return positions;
  if (ids.length === 1) {
    positions.set(ids[0], { x: 0.5, y: 0.5 });
    return positions;
  }
  const rng = mulberry32(hashString(ids.join('|')));
  const pos = ids.map(() => ({ x: rng(), y: rng() }));
  const index = new Map(ids.map((id, i) => [id, i]));
  const pairs: Array<[number, number]> = [];
  for (const edge of edges) {
    const a = index.get(edge.source);
    const b = index.get(edge.target);
    if (a !== undefined && b !== undefined && a !== b) pairs.push([a, b]);
  }

  const k = 1 / Math.sqrt(ids.length);
  let temperature = 0.1;
  for (let iter = 0; iter < iterations; iter++) {
    const force = ids.map(() => ({ x: 0, y: 0 }));
    for (let i = 0; i < ids.length; i++) {
      for (let j = 0; j < ids.length; j++) {
        if (i === j) continue;
        const dx = pos[i].x - pos[j].x;
        const dy = pos[i].y - pos[j].y;
        const dist = Math.max(Math.hypot(dx, dy), 1e-4);
        const repulse = (k * k) / dist;
        force[i].x += (dx / dist) * repulse;
        force[i].y += (dy / dist) * repulse;
      }
    }
    for (const [a, b] of pairs) {
      const dx = pos[a].x - pos[b].x;
      const dy = pos[a].y - pos[b].y;
      const dist = Math.max(Math.hypot(dx, dy), 1e-4);
      const pull = (dist * dist) / k;
      force[a].x -= (dx / dist) * pull;
      force[a].y -= (dy / dist) * pull;
      force[b].x += (dx / dist) * pull;
      force[b].y += (dy / dist) * pull;
    }
    for (let i = 0; i < ids.length; i++) {
      const magnitude = Math.max(Math.hypot(force[i].x, force[i].y), 1e-9);
      const step = Math.min(magnitude, temperature);
      pos[i].x += (force[i].x / magnitude) * step;
      pos[i].y += (force[i].y / magnitude) * step;
    }
    temperature *= 0.95;
  }

  const xs = pos.map((p) => p.x);
  const ys = pos.map((p) => p.y);
  const minX = Math.min(...xs);
  const minY = Math.min(...ys);
  const spanX = Math.max(Math.max(...xs) - minX, 1e-9);
  const spanY = Math.max(Math.max(...ys) - minY, 1e-9);
  ids.forEach((id, i) => {
    positions.set(id, {
      x: (pos[i].x - minX) / spanX,
      y: (pos[i].y - minY) / spanY,
    });
  });
  return positions;
}
