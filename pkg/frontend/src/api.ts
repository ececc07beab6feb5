/** Typed client for the analysis service.
 *
 * Every call posts the full DSL source (the service is stateless).  Each
 * logical panel funnels its requests through a LatestOnly gate: responses
 * arriving after a newer request has been issued are discarded, so the UI
 * never renders stale verdicts.
 */

import type {
  ApiEnvelope,
  EstimandReport,
  ParseResult,
  RenderResult,
  SeparationVerdict,
  SimulationSummary,
  TautologiesResult,
} from "./types.js";

export type FetchLike = (
  url: string,
  init: { method: string; headers: Record<string, string>; body: string },
) => Promise<{ status: number; json(): Promise<unknown> }>;

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async post<T>(path: string, body: object): Promise<ApiEnvelope<T>> {
    const resp = await this.fetchFn(this.base + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    return (await resp.json()) as ApiEnvelope<T>;
  }

  parse(source: string): Promise<ApiEnvelope<ParseResult>> {
    return this.post("/api/parse", { source });
  }

  dsep(
    source: string,
    x: string,
    y: string,
    given: string[],
    classic = false,
  ): Promise<ApiEnvelope<SeparationVerdict>> {
    return this.post("/api/dsep", { source, x, y, given, classic });
  }

  classify(
    source: string,
    exposure: string,
    outcome: string,
    adjust: string[],
  ): Promise<ApiEnvelope<EstimandReport>> {
    return this.post("/api/classify", { source, exposure, outcome, adjust });
  }

  tautologies(source: string): Promise<ApiEnvelope<TautologiesResult>> {
    return this.post("/api/tautologies", { source });
  }

  render(source: string, highlight: string[]): Promise<ApiEnvelope<RenderResult>> {
    return this.post("/api/render", { source, highlight });
  }

  simulate(
    source: string,
    n: number,
    seed: number,
  ): Promise<ApiEnvelope<SimulationSummary>> {
    return this.post("/api/simulate", { source, n, seed });
  }
}

/** Monotonic request-id gate: only the newest request's result survives. */
export class LatestOnly {
  private counter = 0;

  async run<T>(work: () => Promise<T>): Promise<T | null> {
    const ticket = ++this.counter;
    const result = await work();
    return ticket === this.counter ? result : null;
  }

  /** The id a manual caller should check against `current` after awaiting. */
  issue(): number {
    return ++this.counter;
  }

  get current(): number {
    return this.counter;
  }
}
