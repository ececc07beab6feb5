/** SVG rendering of a parsed DOT graph with the deterministic notation.
 *
 * Determined nodes draw a second, inner outline; functional arcs draw as a
 * wide dark line with a thin light line on top (two parallel strokes);
 * same-time definition families get a dashed box; conditioned nodes arrive
 * pre-shaded from the service.  Roles and the current witness path are
 * overlaid on top without touching the underlying notation.
 */

import type { DotGraph } from "./dot.js";
import type { Layout } from "./layout.js";
import type { Role } from "./state.js";
import type { Witness } from "./types.js";

const NODE_W = 128;
const NODE_H = 44;

const ROLE_STROKE: Record<Role, string> = {
  none: "#444",
  conditioned: "#444",
  exposure: "#0b5fa5",
  outcome: "#b4540a",
};

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function trimLabel(label: string): string {
  return label.length > 20 ? label.slice(0, 19) + "…" : label;
}

export function renderSvg(
  graph: DotGraph,
  placed: Layout,
  roles: Record<string, Role>,
  witness: Witness | null,
): string {
  const parts: string[] = [];
  const witnessEdges = new Set(
    (witness?.edges ?? []).map((e) => `${e.src}->${e.dst}`),
  );

  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${placed.width}" ` +
      `height="${placed.height}" viewBox="0 0 ${placed.width} ${placed.height}">`,
    `<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" ` +
      `markerWidth="7" markerHeight="7" orient="auto-start-reverse">` +
      `<path d="M 0 0 L 10 5 L 0 10 z" fill="#444"/></marker></defs>`,
  );

  // dashed family boxes behind everything
  for (let c = 0; c < graph.clusterCount; c++) {
    const members = graph.nodes.filter((n) => n.cluster === c);
    if (!members.length) continue;
    const xs = members.map((n) => placed.nodes.get(n.id)!.x);
    const ys = members.map((n) => placed.nodes.get(n.id)!.y);
    const pad = 14;
    const x = Math.min(...xs) - NODE_W / 2 - pad;
    const y = Math.min(...ys) - NODE_H / 2 - pad;
    const w = Math.max(...xs) - Math.min(...xs) + NODE_W + 2 * pad;
    const h = Math.max(...ys) - Math.min(...ys) + NODE_H + 2 * pad;
    parts.push(
      `<rect x="${x}" y="${y}" width="${w}" height="${h}" fill="none" ` +
        `stroke="#888" stroke-dasharray="6 4" rx="10"/>`,
    );
  }

  for (const edge of graph.edges) {
    const a = placed.nodes.get(edge.src);
    const b = placed.nodes.get(edge.dst);
    if (!a || !b) continue;
    const dx = b.x - a.x;
    const dy = b.y - a.y;
    const len = Math.hypot(dx, dy) || 1;
    const sx = a.x + (dx / len) * (NODE_W / 2 + 4);
    const sy = a.y + (dy / len) * (NODE_H / 2 + 4);
    const tx = b.x - (dx / len) * (NODE_W / 2 + 8);
    const ty = b.y - (dy / len) * (NODE_H / 2 + 8);
    const onWitness =
      witnessEdges.has(`${edge.src}->${edge.dst}`) ||
      witnessEdges.has(`${edge.dst}->${edge.src}`);
    const base = onWitness ? "#c02626" : "#444";
    if (edge.doubled) {
      parts.push(
        `<line x1="${sx}" y1="${sy}" x2="${tx}" y2="${ty}" stroke="${base}" ` +
          `stroke-width="5" marker-end="url(#arrow)"/>`,
        `<line x1="${sx}" y1="${sy}" x2="${tx}" y2="${ty}" stroke="#fff" ` +
          `stroke-width="1.6"/>`,
      );
    } else {
      parts.push(
        `<line x1="${sx}" y1="${sy}" x2="${tx}" y2="${ty}" stroke="${base}" ` +
          `stroke-width="${onWitness ? 3 : 1.6}" marker-end="url(#arrow)"/>`,
      );
    }
  }

  const witnessNodes = new Set((witness?.nodes ?? []).map((s) => s.node));
  for (const node of graph.nodes) {
    const p = placed.nodes.get(node.id);
    if (!p) continue;
    const role: Role = roles[node.id] ?? "none";
    const stroke = ROLE_STROKE[role];
    const fill = node.filled ? "#d9d9d9" : "#fff";
    const strokeWidth = role === "exposure" || role === "outcome" ? 3 : 1.6;
    const x = p.x - NODE_W / 2;
    const y = p.y - NODE_H / 2;
    parts.push(
      `<g class="node" data-node="${esc(node.id)}" cursor="pointer">`,
      `<rect x="${x}" y="${y}" width="${NODE_W}" height="${NODE_H}" rx="10" ` +
        `fill="${fill}" stroke="${stroke}" stroke-width="${strokeWidth}"/>`,
    );
    if (node.doubled) {
      parts.push(
        `<rect x="${x + 4}" y="${y + 4}" width="${NODE_W - 8}" ` +
          `height="${NODE_H - 8}" rx="7" fill="none" stroke="${stroke}" ` +
          `stroke-width="1.2"/>`,
      );
    }
    if (witnessNodes.has(node.id)) {
      parts.push(
        `<rect x="${x - 4}" y="${y - 4}" width="${NODE_W + 8}" ` +
          `height="${NODE_H + 8}" rx="13" fill="none" stroke="#c02626" ` +
          `stroke-width="1.4" stroke-dasharray="3 3"/>`,
      );
    }
    parts.push(
      `<text x="${p.x}" y="${p.y - 2}" text-anchor="middle" ` +
        `font-size="13" font-weight="600">${esc(node.id)}</text>`,
      `<text x="${p.x}" y="${p.y + 14}" text-anchor="middle" ` +
        `font-size="10" fill="#555">${esc(trimLabel(node.label === node.id ? "" : node.label))}</text>`,
      `</g>`,
    );
  }

  parts.push("</svg>");
  return parts.join("");
}
