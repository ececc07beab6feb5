"""CLI subcommands: outputs and the exit-code contract."""

import json

import pytest

from detdag import fixture_source, parse
from detdag.cli import main


@pytest.fixture()
def fig_file(tmp_path):
    def write(name: str) -> str:
        path = tmp_path / f"{name}.dag"
        path.write_text(fixture_source(name), encoding="utf-8")
        return str(path)

    return write


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCheck:
    def test_valid_file_exits_zero(self, capsys, fig_file):
        code, out, _ = run(capsys, ["check", fig_file("fig4a")])
        assert code == 0
        assert "ok" in out and "4 nodes" in out

    def test_parse_errors_exit_three(self, capsys, tmp_path):
        bad = tmp_path / "bad.dag"
        bad.write_text("dag t { X := sum(A, B) }")
        code, out, err = run(capsys, ["check", str(bad)])
        assert code == 3
        assert "unknown identifier" in err
        assert ":1:" in err  # positioned

    def test_missing_file_exits_three(self, capsys, tmp_path):
        code, _, err = run(capsys, ["check", str(tmp_path / "absent.dag")])
        assert code == 3
        assert "cannot read" in err


class TestDsep:
    def test_separated_exits_zero(self, capsys, fig_file):
        code, out, _ = run(
            capsys,
            ["dsep", fig_file("fig3"), "--x", "X1", "--y", "X2"],
        )
        assert code == 0
        assert json.loads(out)["status"] == "separated"

    def test_connected_exits_one_with_witness(self, capsys, fig_file):
        code, out, _ = run(
            capsys,
            ["dsep", fig_file("fig3"), "--x", "X1", "--y", "X2", "--given", "X"],
        )
        assert code == 1
        payload = json.loads(out)
        assert payload["status"] == "connected"
        assert payload["witness"]["pretty"] == "X1 => X <= X2"

    def test_degenerate_exits_two(self, capsys, fig_file):
        code, out, _ = run(
            capsys,
            ["dsep", fig_file("fig1a"), "--x", "M", "--y", "Y", "--given", "B"],
        )
        assert code == 2
        assert json.loads(out)["status"] == "degenerate"

    def test_classic_flag_ignores_determinism(self, capsys, fig_file):
        path = fig_file("fig1a")
        code, out, _ = run(
            capsys, ["dsep", path, "--x", "M", "--y", "Y", "--given", "B", "--classic"]
        )
        assert code == 0  # plain d-separation: B blocks the only path

    def test_unknown_id_exits_four(self, capsys, fig_file):
        code, _, err = run(
            capsys, ["dsep", fig_file("fig3"), "--x", "X1", "--y", "nope"]
        )
        assert code == 4
        assert "nope" in err


class TestReduce:
    def test_emits_canonical_dsl(self, capsys, fig_file):
        code, out, _ = run(
            capsys,
            ["reduce", fig_file("fig4a"), "--keep", "height,weight,CVD"],
        )
        assert code == 0
        reduced = parse(out)
        assert reduced.node_ids() == ("height", "weight", "CVD")
        assert {(e.src, e.dst) for e in reduced.edges} == {
            ("height", "CVD"),
            ("weight", "CVD"),
        }

    def test_unknown_keep_exits_four(self, capsys, fig_file):
        code, _, _ = run(capsys, ["reduce", fig_file("fig3"), "--keep", "ghost"])
        assert code == 4


class TestClassify:
    def test_relative_effect_json(self, capsys, fig_file):
        code, out, _ = run(
            capsys,
            [
                "classify",
                fig_file("fig3"),
                "--exposure",
                "X1",
                "--outcome",
                "Y",
                "--adjust",
                "X",
            ],
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["kind"] == "RelativeEffect"
        assert payload["substituting"] == ["X2", "X3"]

    def test_degenerate_exits_two(self, capsys, fig_file):
        code, _, err = run(
            capsys,
            [
                "classify",
                fig_file("fig1a"),
                "--exposure",
                "M",
                "--outcome",
                "Y",
                "--adjust",
                "B",
            ],
        )
        assert code == 2
        assert "degenerate" in err


class TestOtherCommands:
    def test_tautologies_json(self, capsys, fig_file):
        code, out, _ = run(capsys, ["tautologies", fig_file("fig2a")])
        assert code == 0
        pairs = {frozenset(f["pair"]) for f in json.loads(out)}
        assert frozenset({"Z1", "Z2"}) in pairs

    def test_confounder_json(self, capsys, fig_file):
        code, out, _ = run(
            capsys,
            [
                "confounder",
                fig_file("fig5d"),
                "--exposure",
                "X",
                "--outcome",
                "Y",
                "--candidate",
                "C",
            ],
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["role"] == "ConfounderMediatorConflict"
        assert payload["identifiable"] is False

    def test_simulate_csv_stdout(self, capsys, fig_file):
        code, out, _ = run(
            capsys, ["simulate", fig_file("fig1b"), "--n", "5", "--seed", "1"]
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "Y1,Y2,Y"
        assert len(lines) == 6

    def test_simulate_env_seed(self, capsys, fig_file, monkeypatch):
        monkeypatch.setenv("DETDAG_SEED", "77")
        code, out, _ = run(capsys, ["simulate", fig_file("fig1b"), "--n", "3"])
        assert code == 0
        monkeypatch.setenv("DETDAG_SEED", "78")
        code2, out2, _ = run(capsys, ["simulate", fig_file("fig1b"), "--n", "3"])
        assert code2 == 0
        assert out != out2

    def test_verify_full_agreement_exits_zero(self, capsys, fig_file):
        code, out, _ = run(
            capsys, ["verify", fig_file("fig3"), "--n", "20000", "--seed", "11"]
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["full_agreement"] is True
        assert payload["agreement_rate"] == 1.0

    def test_render_dot(self, capsys, fig_file):
        code, out, _ = run(
            capsys, ["render", fig_file("fig3"), "--highlight", "X"]
        )
        assert code == 0
        assert out.startswith('digraph "fig3" {')
        assert "fillcolor=lightgrey" in out
