/** Test support: recorded service fixtures and a fetch mock that serves them. */

import { readFileSync } from "node:fs";

import type { FetchLike } from "../src/api.js";

export interface Recording {
  request: { path: string; body: unknown };
  response: { status: number; json: unknown };
}

export function recording(name: string): Recording {
  const url = new URL(`./fixtures/${name}.json`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf-8")) as Recording;
}

export const ALL_RECORDINGS = [
  "parse_fig3",
  "parse_error",
  "parse_fig5d",
  "render_fig3_plain",
  "render_fig3_x",
  "render_fig5d",
  "dsep_fig3_x1_y",
  "dsep_fig3_x1_y_given_x",
  "dsep_fig3_x1_x2_given_x",
  "classify_fig3_x1_y",
  "classify_fig3_x1_y_adjust_x",
  "classify_fig5d_x_y",
  "dsep_fig5d_x_y",
  "tautologies_fig3",
  "tautologies_fig2a",
  "tautologies_fig5d",
  "simulate_fig3",
] as const;

function canonical(value: unknown): string {
  return JSON.stringify(value, (_key, v) =>
    v && typeof v === "object" && !Array.isArray(v)
      ? Object.fromEntries(Object.entries(v as object).sort())
      : v,
  );
}

/** A FetchLike that replays recordings, matching on path + canonical body. */
export function mockService(names: readonly string[] = ALL_RECORDINGS): FetchLike {
  const table = new Map<string, Recording>();
  for (const name of names) {
    const rec = recording(name);
    table.set(`${rec.request.path}|${canonical(rec.request.body)}`, rec);
  }
  return async (url, init) => {
    const key = `${url}|${canonical(JSON.parse(init.body))}`;
    const rec = table.get(key);
    if (!rec) {
      throw new Error(`no recorded response for ${url} ${init.body}`);
    }
    return {
      status: rec.response.status,
      json: async () => rec.response.json,
    };
  };
}
