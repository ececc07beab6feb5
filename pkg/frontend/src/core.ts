/** The explorer's brain: state in, service calls out, a view snapshot back.
 *
 * Every verdict shown in the UI is verbatim from the service; this class
 * only decides which calls to make for the current (source, roles) pair and
 * assembles their responses.  The DOM layer renders snapshots and never
 * computes anything causal either.
 */

import { ApiClient, LatestOnly } from "./api.js";
import {
  AppState,
  Role,
  conditioned,
  exposure,
  outcome,
  pruneRoles,
  toggleRole,
  withSource,
} from "./state.js";
import type {
  ApiError,
  DagJson,
  EstimandReport,
  SeparationVerdict,
  TautologyFinding,
} from "./types.js";

export interface Snapshot {
  state: AppState;
  dag: DagJson | null;
  parseErrors: ApiError[];
  dot: string | null;
  verdict: SeparationVerdict | null;
  estimand: EstimandReport | null;
  queryErrors: ApiError[];
  tautologies: TautologyFinding[];
  /** true when the service reports no valid adjustment set at all */
  unidentifiable: boolean;
  rolesReady: boolean; // both exposure and outcome assigned
}

export class AppCore {
  state: AppState = { source: "", roles: {} };
  private readonly gate = new LatestOnly();

  constructor(private readonly api: ApiClient) {}

  async setSource(source: string): Promise<Snapshot | null> {
    this.state = withSource(this.state, source);
    return this.refresh();
  }

  async toggleNode(node: string): Promise<Snapshot | null> {
    this.state = toggleRole(this.state, node);
    return this.refresh();
  }

  async setState(state: AppState): Promise<Snapshot | null> {
    this.state = state;
    return this.refresh();
  }

  role(node: string): Role {
    return this.state.roles[node] ?? "none";
  }

  /** Re-query the service for the current state; stale refreshes return null. */
  async refresh(): Promise<Snapshot | null> {
    const ticket = this.gate.issue();
    const source = this.state.source;

    const parsed = await this.api.parse(source);
    if (ticket !== this.gate.current) return null;
    if (!parsed.ok || !parsed.result) {
      return {
        state: this.state,
        dag: null,
        parseErrors: parsed.errors ?? [],
        dot: null,
        verdict: null,
        estimand: null,
        queryErrors: [],
        tautologies: [],
        unidentifiable: false,
        rolesReady: false,
      };
    }

    const dag = parsed.result.dag;
    this.state = pruneRoles(
      this.state,
      dag.nodes.map((n) => n.id),
    );
    const given = conditioned(this.state);
    const x = exposure(this.state);
    const y = outcome(this.state);

    const [rendered, tautologies] = await Promise.all([
      this.api.render(source, given),
      this.api.tautologies(source),
    ]);
    if (ticket !== this.gate.current) return null;

    let verdict: SeparationVerdict | null = null;
    let estimand: EstimandReport | null = null;
    const queryErrors: ApiError[] = [];
    const rolesReady = x !== null && y !== null;
    if (rolesReady) {
      const [dsepResp, classifyResp] = await Promise.all([
        this.api.dsep(source, x!, y!, given),
        this.api.classify(source, x!, y!, given),
      ]);
      if (ticket !== this.gate.current) return null;
      if (dsepResp.ok && dsepResp.result) {
        verdict = dsepResp.result;
      } else {
        queryErrors.push(...(dsepResp.errors ?? []));
      }
      if (classifyResp.ok && classifyResp.result) {
        estimand = classifyResp.result;
      } else {
        queryErrors.push(...(classifyResp.errors ?? []));
      }
    }

    return {
      state: this.state,
      dag,
      parseErrors: [],
      dot: rendered.ok && rendered.result ? rendered.result.dot : null,
      verdict,
      estimand,
      queryErrors,
      tautologies:
        tautologies.ok && tautologies.result ? tautologies.result.findings : [],
      unidentifiable:
        estimand !== null &&
        estimand.backdoor_sets.length === 0 &&
        !estimand.adjustment_sufficient,
      rolesReady,
    };
  }
}
