"""Record service responses for the explorer's contract tests.

Boots the analysis service, replays the explorer's request repertoire over
real HTTP, and freezes each (request, response) pair under test/fixtures/.
Also regenerates src/generated/fixtures.ts from the .dag files the backend
package ships, so the examples menu matches the service exactly.

Run from frontend/:  python3 scripts/record_contract_fixtures.py
"""

import json
import pathlib
import subprocess
import sys
import time
import urllib.request

import detdag

PORT = 8923
BASE = f"http://127.0.0.1:{PORT}"
HERE = pathlib.Path(__file__).resolve().parent.parent
FIXTURE_DIR = HERE / "test" / "fixtures"
GENERATED = HERE / "src" / "generated" / "fixtures.ts"


def post(path: str, body: dict) -> tuple[int, dict]:
    req = urllib.request.Request(
        BASE + path,
        data=json.dumps(body).encode(),
        headers={"content-type": "application/json"},
        method="POST",
    )
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, json.loads(resp.read())
    except urllib.error.HTTPError as err:
        return err.code, json.loads(err.read())


def main() -> None:
    fig3 = detdag.fixture_source("fig3")
    fig2a = detdag.fixture_source("fig2a")
    fig5d = detdag.fixture_source("fig5d")

    recordings = {
        "parse_fig3": ("/api/parse", {"source": fig3}),
        "parse_error": ("/api/parse", {"source": "dag t {"}),
        "parse_fig5d": ("/api/parse", {"source": fig5d}),
        "render_fig3_plain": ("/api/render", {"source": fig3, "highlight": []}),
        "render_fig3_x": ("/api/render", {"source": fig3, "highlight": ["X"]}),
        "render_fig5d": ("/api/render", {"source": fig5d, "highlight": []}),
        "dsep_fig3_x1_y": (
            "/api/dsep",
            {"source": fig3, "x": "X1", "y": "Y", "given": [], "classic": False},
        ),
        "dsep_fig3_x1_y_given_x": (
            "/api/dsep",
            {"source": fig3, "x": "X1", "y": "Y", "given": ["X"], "classic": False},
        ),
        "dsep_fig3_x1_x2_given_x": (
            "/api/dsep",
            {"source": fig3, "x": "X1", "y": "X2", "given": ["X"], "classic": False},
        ),
        "classify_fig3_x1_y": (
            "/api/classify",
            {"source": fig3, "exposure": "X1", "outcome": "Y", "adjust": []},
        ),
        "classify_fig3_x1_y_adjust_x": (
            "/api/classify",
            {"source": fig3, "exposure": "X1", "outcome": "Y", "adjust": ["X"]},
        ),
        "classify_fig5d_x_y": (
            "/api/classify",
            {"source": fig5d, "exposure": "X", "outcome": "Y", "adjust": []},
        ),
        "dsep_fig5d_x_y": (
            "/api/dsep",
            {"source": fig5d, "x": "X", "y": "Y", "given": [], "classic": False},
        ),
        "tautologies_fig3": ("/api/tautologies", {"source": fig3}),
        "tautologies_fig2a": ("/api/tautologies", {"source": fig2a}),
        "tautologies_fig5d": ("/api/tautologies", {"source": fig5d}),
        "simulate_fig3": ("/api/simulate", {"source": fig3, "n": 2000, "seed": 7}),
    }

    server = subprocess.Popen(
        [
            sys.executable,
            "-m",
            "uvicorn",
            "--factory",
            "detdag.service:create_app",
            "--port",
            str(PORT),
            "--log-level",
            "warning",
        ]
    )
    try:
        for _ in range(50):
            time.sleep(0.2)
            try:
                post("/api/parse", {"source": "dag probe { }"})
                break
            except OSError:
                continue
        FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
        for name, (path, body) in recordings.items():
            status, payload = post(path, body)
            out = {
                "request": {"path": path, "body": body},
                "response": {"status": status, "json": payload},
            }
            (FIXTURE_DIR / f"{name}.json").write_text(
                json.dumps(out, indent=2) + "\n", encoding="utf-8"
            )
            print(f"recorded {name}: {status}")
    finally:
        server.terminate()
        server.wait()

    sources = {name: detdag.fixture_source(name) for name in detdag.FIXTURE_NAMES}
    lines = [
        "// Generated by scripts/record_contract_fixtures.py; do not edit.",
        "export const FIXTURES: Record<string, string> = {",
    ]
    for name, text in sources.items():
        lines.append(f"  {json.dumps(name)}: {json.dumps(text)},")
    lines.append("};")
    GENERATED.parent.mkdir(parents=True, exist_ok=True)
    GENERATED.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {GENERATED.relative_to(HERE)} with {len(sources)} sources")


if __name__ == "__main__":
    main()
