/** DOM wiring: editor, fixture menu, graph view, results panel, URL sync. */

import { ApiClient } from "./api.js";
import { AppCore, Snapshot } from "./core.js";
import { parseDot } from "./dot.js";
import { FIXTURES } from "./generated/fixtures.js";
import { layout } from "./layout.js";
import { decodeFragment, encodeFragment } from "./state.js";
import { renderSvg } from "./svg.js";
import type { ApiError } from "./types.js";

const DEBOUNCE_MS = 300;

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

function errorLine(e: ApiError): string {
  const pos = e.line !== undefined ? `${e.line}:${e.column ?? 0}: ` : "";
  return `${pos}${e.message}`;
}

function main(): void {
  const core = new AppCore(new ApiClient(""));
  const editor = el<HTMLTextAreaElement>("editor");
  const errorsBox = el<HTMLDivElement>("parse-errors");
  const graphBox = el<HTMLDivElement>("graph");
  const verdictBox = el<HTMLDivElement>("verdict");
  const estimandBox = el<HTMLDivElement>("estimand");
  const warningsBox = el<HTMLUListElement>("warnings");
  const tautologyBox = el<HTMLDivElement>("tautologies");
  const bannerBox = el<HTMLDivElement>("banner");
  const hintBox = el<HTMLDivElement>("hint");
  const picker = el<HTMLSelectElement>("fixture-picker");

  for (const name of Object.keys(FIXTURES)) {
    const option = document.createElement("option");
    option.value = name;
    option.textContent = name;
    picker.appendChild(option);
  }

  function render(snapshot: Snapshot | null): void {
    if (snapshot === null) return; // superseded by a newer request
    errorsBox.replaceChildren();
    for (const e of snapshot.parseErrors) {
      const div = document.createElement("div");
      div.className = "error";
      div.textContent = errorLine(e);
      if (e.snippet) {
        const pre = document.createElement("pre");
        pre.textContent = e.snippet;
        div.appendChild(pre);
      }
      errorsBox.appendChild(div);
    }

    if (snapshot.dot) {
      const parsed = parseDot(snapshot.dot);
      graphBox.innerHTML = renderSvg(
        parsed,
        layout(parsed),
        snapshot.state.roles,
        snapshot.verdict?.witness ?? null,
      );
      for (const g of graphBox.querySelectorAll<SVGGElement>("g.node")) {
        g.addEventListener("click", () => {
          void core.toggleNode(g.dataset.node!).then(render);
        });
      }
    } else if (snapshot.parseErrors.length) {
      graphBox.innerHTML = '<p class="muted">fix the source to see the graph</p>';
    }

    hintBox.textContent = snapshot.rolesReady
      ? ""
      : "click nodes to cycle roles: conditioned → exposure → outcome";

    if (snapshot.verdict) {
      const v = snapshot.verdict;
      let text = v.status;
      if (v.status === "connected" && v.witness) text += ` via ${v.witness.pretty}`;
      if (v.status === "degenerate" && v.reason) text += `: ${v.reason}`;
      verdictBox.textContent = text;
      verdictBox.dataset.status = v.status;
    } else {
      verdictBox.textContent = snapshot.rolesReady ? "" : "—";
      delete verdictBox.dataset.status;
    }

    if (snapshot.estimand) {
      const r = snapshot.estimand;
      const bits = [`${r.kind}`];
      if (r.substituting.length) bits.push(`substituting {${r.substituting.join(", ")}}`);
      if (r.numerator_base.length)
        bits.push(
          `numerator {${r.numerator_base.join(", ")}} vs denominator {${r.denominator_base.join(", ")}}`,
        );
      bits.push(r.adjustment_sufficient ? "backdoors closed" : "open backdoors remain");
      estimandBox.textContent = bits.join(" · ");
    } else {
      estimandBox.textContent = "—";
    }

    warningsBox.replaceChildren();
    const notes = [
      ...(snapshot.estimand?.warnings ?? []),
      ...snapshot.queryErrors.map((e) => ({ code: e.code ?? "ERROR", text: e.message })),
    ];
    for (const w of notes) {
      const li = document.createElement("li");
      li.textContent = `[${w.code}] ${w.text}`;
      warningsBox.appendChild(li);
    }

    tautologyBox.replaceChildren();
    for (const f of snapshot.tautologies) {
      const badge = document.createElement("span");
      badge.className = "badge";
      badge.title = f.explanation;
      badge.textContent = `${f.pair[0]} ↔ ${f.pair[1]}`;
      tautologyBox.appendChild(badge);
    }

    bannerBox.hidden = !snapshot.unidentifiable;
    if (snapshot.unidentifiable) {
      bannerBox.textContent =
        "not identifiable: no valid adjustment set exists for this exposure and outcome";
    }

    if (editor.value !== snapshot.state.source) editor.value = snapshot.state.source;
    history.replaceState(null, "", encodeFragment(snapshot.state));
  }

  let timer: number | undefined;
  editor.addEventListener("input", () => {
    window.clearTimeout(timer);
    timer = window.setTimeout(() => {
      void core.setSource(editor.value).then(render);
    }, DEBOUNCE_MS);
  });

  picker.addEventListener("change", () => {
    const source = FIXTURES[picker.value];
    if (source !== undefined) {
      editor.value = source;
      void core.setState({ source, roles: {} }).then(render);
    }
  });

  window.addEventListener("hashchange", () => {
    const restored = decodeFragment(location.hash);
    if (restored) void core.setState(restored).then(render);
  });

  const initial = decodeFragment(location.hash) ?? {
    source: FIXTURES["fig3"] ?? "",
    roles: {},
  };
  editor.value = initial.source;
  void core.setState(initial).then(render);
}

main();
