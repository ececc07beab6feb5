/** Explorer state: the DSL source plus one role per node.
 *
 * The whole UI is reconstructible from this pair, and it round-trips
 * through the URL fragment so any view can be shared as a link.
 */

export type Role = "none" | "conditioned" | "exposure" | "outcome";

export interface AppState {
  source: string;
  roles: Record<string, Role>;
}

const CYCLE: Role[] = ["none", "conditioned", "exposure", "outcome"];

export function nextRole(role: Role): Role {
  return CYCLE[(CYCLE.indexOf(role) + 1) % CYCLE.length];
}

/** Advance a node's role; exposure and outcome are single-occupancy. */
export function toggleRole(state: AppState, node: string): AppState {
  const current = state.roles[node] ?? "none";
  const next = nextRole(current);
  const roles: Record<string, Role> = { ...state.roles };
  if (next === "exposure" || next === "outcome") {
    for (const [other, role] of Object.entries(roles)) {
      if (role === next && other !== node) delete roles[other];
    }
  }
  if (next === "none") {
    delete roles[node];
  } else {
    roles[node] = next;
  }
  return { source: state.source, roles };
}

export function withSource(state: AppState, source: string): AppState {
  return { source, roles: state.roles };
}

/** Drop role assignments for nodes that no longer exist in the graph. */
export function pruneRoles(state: AppState, nodeIds: string[]): AppState {
  const known = new Set(nodeIds);
  const roles: Record<string, Role> = {};
  for (const [node, role] of Object.entries(state.roles)) {
    if (known.has(node)) roles[node] = role;
  }
  return { source: state.source, roles };
}

export function conditioned(state: AppState): string[] {
  return Object.entries(state.roles)
    .filter(([, role]) => role === "conditioned")
    .map(([node]) => node)
    .sort();
}

export function exposure(state: AppState): string | null {
  for (const [node, role] of Object.entries(state.roles)) {
    if (role === "exposure") return node;
  }
  return null;
}

export function outcome(state: AppState): string | null {
  for (const [node, role] of Object.entries(state.roles)) {
    if (role === "outcome") return node;
  }
  return null;
}

// -- URL fragment ------------------------------------------------------------

function b64encode(text: string): string {
  const bytes = new TextEncoder().encode(text);
  let binary = "";
  for (const b of bytes) binary += String.fromCharCode(b);
  return btoa(binary).replace(/\+/g, "-").replace(/\//g, "_").replace(/=+$/, "");
}

function b64decode(encoded: string): string {
  const padded = encoded.replace(/-/g, "+").replace(/_/g, "/");
  const binary = atob(padded + "=".repeat((4 - (padded.length % 4)) % 4));
  const bytes = Uint8Array.from(binary, (c) => c.charCodeAt(0));
  return new TextDecoder().decode(bytes);
}

export function encodeFragment(state: AppState): string {
  const roles = Object.entries(state.roles)
    .filter(([, role]) => role !== "none")
    .map(([node, role]) => `${node}:${role}`)
    .sort()
    .join(",");
  return `#src=${b64encode(state.source)}&roles=${roles}`;
}

export function decodeFragment(fragment: string): AppState | null {
  if (!fragment.startsWith("#")) return null;
  const params = new Map<string, string>();
  for (const part of fragment.slice(1).split("&")) {
    const eq = part.indexOf("=");
    if (eq > 0) params.set(part.slice(0, eq), part.slice(eq + 1));
  }
  const src = params.get("src");
  if (src === undefined) return null;
  let source: string;
  try {
    source = b64decode(src);
  } catch {
    return null;
  }
  const roles: Record<string, Role> = {};
  const rolesRaw = params.get("roles") ?? "";
  for (const pair of rolesRaw.split(",")) {
    if (!pair) continue;
    const [node, role] = pair.split(":");
    if (node && (role === "conditioned" || role === "exposure" || role === "outcome")) {
      roles[node] = role;
    }
  }
  return { source, roles };
}
