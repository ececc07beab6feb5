/** Layered left-to-right layout for small DAGs.
 *
 * Longest-path layering puts every node one column right of its furthest
 * parent; within a column, nodes are ordered by the mean row of their
 * neighbours in the previous column (one barycenter pass).  Good enough for
 * the dozen-node graphs this tool is about.
 */

import type { DotGraph } from "./dot.js";

export interface PlacedNode {
  id: string;
  x: number;
  y: number;
}

export interface Layout {
  nodes: Map<string, PlacedNode>;
  width: number;
  height: number;
}

export const COLUMN_GAP = 190;
export const ROW_GAP = 86;
export const MARGIN = 70;

export function layout(graph: DotGraph): Layout {
  const ids = graph.nodes.map((n) => n.id);
  const parents = new Map<string, string[]>(ids.map((id) => [id, []]));
  const children = new Map<string, string[]>(ids.map((id) => [id, []]));
  for (const e of graph.edges) {
    parents.get(e.dst)?.push(e.src);
    children.get(e.src)?.push(e.dst);
  }

  const depth = new Map<string, number>();
  const visiting = new Set<string>();
  const resolve = (id: string): number => {
    const known = depth.get(id);
    if (known !== undefined) return known;
    if (visiting.has(id)) return 0; // defensive: service output is acyclic
    visiting.add(id);
    const ps = parents.get(id) ?? [];
    const d = ps.length ? Math.max(...ps.map(resolve)) + 1 : 0;
    visiting.delete(id);
    depth.set(id, d);
    return d;
  };
  ids.forEach(resolve);

  const columns = new Map<number, string[]>();
  for (const id of ids) {
    const d = depth.get(id) ?? 0;
    if (!columns.has(d)) columns.set(d, []);
    columns.get(d)!.push(id);
  }

  const row = new Map<string, number>();
  const sortedDepths = [...columns.keys()].sort((a, b) => a - b);
  for (const d of sortedDepths) {
    const column = columns.get(d)!;
    if (d === 0) {
      column.forEach((id, i) => row.set(id, i));
      continue;
    }
    const score = (id: string): number => {
      const anchors = (parents.get(id) ?? [])
        .map((p) => row.get(p))
        .filter((r): r is number => r !== undefined);
      return anchors.length
        ? anchors.reduce((a, b) => a + b, 0) / anchors.length
        : column.indexOf(id);
    };
    column.sort((a, b) => score(a) - score(b) || a.localeCompare(b));
    column.forEach((id, i) => row.set(id, i));
  }

  const nodes = new Map<string, PlacedNode>();
  let maxRow = 0;
  for (const id of ids) {
    const d = depth.get(id) ?? 0;
    const r = row.get(id) ?? 0;
    maxRow = Math.max(maxRow, r);
    nodes.set(id, {
      id,
      x: MARGIN + d * COLUMN_GAP,
      y: MARGIN + r * ROW_GAP + (d % 2) * 18,
    });
  }
  const maxDepth = Math.max(0, ...sortedDepths);
  return {
    nodes,
    width: MARGIN * 2 + maxDepth * COLUMN_GAP + 60,
    height: MARGIN * 2 + maxRow * ROW_GAP + 36,
  };
}
