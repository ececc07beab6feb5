/** Wire types mirroring the analysis service's JSON (lower_snake_case fields). */

export interface ApiError {
  message: string;
  line?: number;
  column?: number;
  snippet?: string;
  code?: string;
}

export interface ApiEnvelope<T> {
  ok: boolean;
  result?: T;
  errors?: ApiError[];
}

export interface WitnessStep {
  node: string;
  role: string;
  note: string;
}

export interface WitnessEdge {
  src: string;
  dst: string;
  deterministic: boolean;
  forward: boolean;
}

export interface Witness {
  nodes: WitnessStep[];
  edges: WitnessEdge[];
  pretty: string;
}

export type SeparationStatus = "separated" | "connected" | "degenerate";

export interface SeparationVerdict {
  status: SeparationStatus;
  separated: boolean | null;
  witness: Witness | null;
  reason: string | null;
}

export interface WarningNote {
  code: string;
  text: string;
}

export interface EstimandReport {
  kind: string;
  exposure: string;
  outcome: string;
  adjust: string[];
  substituting: string[];
  numerator_base: string[];
  denominator_base: string[];
  warnings: WarningNote[];
  open_backdoors: string[];
  blocked_paths: string[];
  backdoor_sets: string[][];
  adjustment_sufficient: boolean;
}

export interface DagNodeJson {
  id: string;
  label: string | null;
  kind: "probabilistic" | "deterministic";
  form: string | null;
  time: number | null;
  fixed: boolean;
}

export interface DagEdgeJson {
  src: string;
  dst: string;
  kind: "probabilistic" | "deterministic";
  coef: number | null;
}

export interface DagJson {
  name: string;
  nodes: DagNodeJson[];
  edges: DagEdgeJson[];
}

export interface TautologyFinding {
  pair: [string, string];
  shared_base: string[];
  relation: "SelfOrPart" | "SharedParent";
  explanation: string;
}

export interface RenderResult {
  dot: string;
}

export interface ParseResult {
  dag: DagJson;
}

export interface TautologiesResult {
  findings: TautologyFinding[];
}

export interface SimulationSummary {
  nodes: string[];
  n: number;
  seed: number;
  provenance: string;
  means: number[];
  sds: number[];
  correlation: number[][];
}
