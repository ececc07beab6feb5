/** Reader for the DOT dialect the analysis service emits.
 *
 * The service's output is deterministic and line-oriented, so a full DOT
 * grammar is unnecessary: node statements, edge statements, and dashed
 * cluster subgraphs, with a known attribute vocabulary (label, peripheries,
 * style/fillcolor, and the black:white:black color list marking functional
 * arcs).  No causal interpretation happens here; this is presentation input.
 */

export interface DotNode {
  id: string;
  label: string;
  doubled: boolean; // peripheries=2: a fully determined node
  filled: boolean; // shaded (conditioned) in the requested rendering
  cluster: number | null;
}

export interface DotEdge {
  src: string;
  dst: string;
  doubled: boolean; // functional (deterministic) arc
}

export interface DotGraph {
  name: string;
  nodes: DotNode[];
  edges: DotEdge[];
  clusterCount: number;
}

const NODE_RE = /^"([^"]+)"(?: \[([^\]]*)\])?;$/;
const EDGE_RE = /^"([^"]+)" -> "([^"]+)"(?: \[([^\]]*)\])?;$/;
const CLUSTER_RE = /^subgraph cluster_(\d+) \{$/;
const NAME_RE = /^digraph "([^"]*)" \{$/;

function parseAttrs(raw: string | undefined): Map<string, string> {
  const attrs = new Map<string, string>();
  if (!raw) return attrs;
  for (const match of raw.matchAll(/([a-z]+)=(?:"([^"]*)"|([^,\s]+))/g)) {
    attrs.set(match[1], match[2] ?? match[3]);
  }
  return attrs;
}

export function parseDot(dot: string): DotGraph {
  const lines = dot.split("\n").map((line) => line.trim());
  let name = "";
  const nodes: DotNode[] = [];
  const edges: DotEdge[] = [];
  let cluster: number | null = null;
  let clusterCount = 0;

  for (const line of lines) {
    if (!line || line === "}" && cluster === null) continue;
    const nameMatch = line.match(NAME_RE);
    if (nameMatch) {
      name = nameMatch[1];
      continue;
    }
    const clusterMatch = line.match(CLUSTER_RE);
    if (clusterMatch) {
      cluster = Number(clusterMatch[1]);
      clusterCount = Math.max(clusterCount, cluster + 1);
      continue;
    }
    if (line === "}") {
      cluster = null;
      continue;
    }
    const edgeMatch = line.match(EDGE_RE);
    if (edgeMatch) {
      const attrs = parseAttrs(edgeMatch[3]);
      edges.push({
        src: edgeMatch[1],
        dst: edgeMatch[2],
        doubled: attrs.get("color") === "black:white:black",
      });
      continue;
    }
    const nodeMatch = line.match(NODE_RE);
    if (nodeMatch) {
      const attrs = parseAttrs(nodeMatch[2]);
      nodes.push({
        id: nodeMatch[1],
        label: attrs.get("label") ?? nodeMatch[1],
        doubled: attrs.get("peripheries") === "2",
        filled: attrs.get("style") === "filled",
        cluster,
      });
    }
  }
  return { name, nodes, edges, clusterCount };
}
