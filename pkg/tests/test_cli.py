"""Command-line interface: subcommands, exit codes, deterministic output."""

from __future__ import annotations

import json

import numpy as np
import pytest

from blockrank.cli import main

from helpers import G4_BLOCKS, G4_EDGES

SPLIT_EDGES = "a b\nb a\nc d\nd c\n"
SPLIT_BLOCKS = "a B1\nb B1\nc B2\nd B2\n"


@pytest.fixture
def g4_files(tmp_path):
    graph = tmp_path / "g4.edges"
    blocks = tmp_path / "g4.blocks"
    graph.write_text(G4_EDGES, encoding="utf-8")
    blocks.write_text(G4_BLOCKS, encoding="utf-8")
    return str(graph), str(blocks)


@pytest.fixture
def split_files(tmp_path):
    graph = tmp_path / "split.edges"
    blocks = tmp_path / "split.blocks"
    graph.write_text(SPLIT_EDGES, encoding="utf-8")
    blocks.write_text(SPLIT_BLOCKS, encoding="utf-8")
    return str(graph), str(blocks)


def run(args):
    return main(args)


class TestCheck:
    def test_admissible_exits_zero(self, g4_files, capsys):
        graph, blocks = g4_files
        code = run(["check", "--graph", graph, "--blocks", blocks])
        out = capsys.readouterr().out
        assert code == 0
        assert "irreducible\ttrue" in out
        assert "admissible\ttrue" in out
        assert "scc_count\t1" in out

    def test_reducible_exits_one_and_lists_components(self, split_files, capsys):
        graph, blocks = split_files
        code = run(["check", "--graph", graph, "--blocks", blocks])
        out = capsys.readouterr().out
        assert code == 1
        assert "irreducible\tfalse" in out
        assert "component\tB1" in out
        assert "component\tB2" in out

    def test_json_format(self, g4_files, capsys):
        graph, blocks = g4_files
        code = run(["check", "--graph", graph, "--blocks", blocks, "--format", "json"])
        payload = json.loads(capsys.readouterr().out)
        assert code == 0
        assert payload == {
            "blocks": 2,
            "scc_count": 1,
            "irreducible": True,
            "admissible": True,
            "components": [],
        }

    def test_missing_graph_file_exits_two(self, g4_files, capsys):
        _, blocks = g4_files
        code = run(["check", "--graph", "/nonexistent.edges", "--blocks", blocks])
        assert code == 2
        assert "error" in capsys.readouterr().err

    def test_coverage_error_exits_two(self, tmp_path, g4_files, capsys):
        graph, _ = g4_files
        partial = tmp_path / "partial.blocks"
        partial.write_text("a B1\nb B1\nc B2\n", encoding="utf-8")
        code = run(["check", "--graph", graph, "--blocks", str(partial)])
        assert code == 2
        assert "d" in capsys.readouterr().err


class TestRank:
    def test_scores_sorted_and_normalized(self, g4_files, capsys):
        graph, blocks = g4_files
        code = run(["rank", "--graph", graph, "--blocks", blocks,
                    "--eta", "0.5", "--mu", "0.5"])
        out = capsys.readouterr().out
        assert code == 0
        rows = [line.split("\t") for line in out.strip().splitlines()]
        assert len(rows) == 4
        scores = [float(s) for _, s in rows]
        assert abs(sum(scores) - 1.0) <= 1e-9
        assert scores == sorted(scores, reverse=True)
        assert [label for label, _ in rows] == ["a", "b", "d", "c"]

    def test_top_truncates(self, g4_files, capsys):
        graph, blocks = g4_files
        code = run(["rank", "--graph", graph, "--blocks", blocks, "--top", "2"])
        out = capsys.readouterr().out
        assert code == 0
        assert len(out.strip().splitlines()) == 2

    def test_json_meta(self, g4_files, capsys):
        graph, blocks = g4_files
        code = run(["rank", "--graph", graph, "--blocks", blocks,
                    "--eta", "0.5", "--mu", "0.5", "--format", "json"])
        payload = json.loads(capsys.readouterr().out)
        assert code == 0
        assert set(payload) == {"scores", "meta"}
        meta = payload["meta"]
        assert meta["converged"] is True
        assert meta["admissible"] is True
        assert meta["eta"] == 0.5 and meta["mu"] == 0.5 and meta["teleport"] == 0.0
        assert meta["residual"] <= 1e-9
        assert abs(sum(payload["scores"].values()) - 1.0) <= 1e-9

    def test_three_term_model(self, g4_files, capsys):
        graph, blocks = g4_files
        code = run(["rank", "--graph", graph, "--blocks", blocks,
                    "--eta", "0.6", "--mu", "0.3", "--teleport", "0.1"])
        out = capsys.readouterr().out
        assert code == 0
        scores = [float(line.split("\t")[1]) for line in out.strip().splitlines()]
        assert abs(sum(scores) - 1.0) <= 1e-9

    def test_inconsistent_weights_exit_two(self, g4_files, capsys):
        graph, blocks = g4_files
        code = run(["rank", "--graph", graph, "--blocks", blocks,
                    "--eta", "0.6", "--mu", "0.3", "--teleport", "0.2"])
        assert code == 2
        assert "error" in capsys.readouterr().err

    def test_non_positive_top_exits_two(self, g4_files, capsys):
        graph, blocks = g4_files
        for top in ("0", "-2"):
            code = run(["rank", "--graph", graph, "--blocks", blocks, "--top", top])
            assert code == 2
            assert "--top" in capsys.readouterr().err

    def test_strict_reducible_exits_one(self, split_files, capsys):
        graph, blocks = split_files
        code = run(["rank", "--graph", graph, "--blocks", blocks,
                    "--eta", "0.5", "--mu", "0.5"])
        captured = capsys.readouterr()
        assert code == 1
        assert captured.out == ""
        assert "B1" in captured.err and "B2" in captured.err

    def test_no_strict_overrides_the_gate(self, split_files, capsys):
        graph, blocks = split_files
        code = run(["rank", "--graph", graph, "--blocks", blocks,
                    "--eta", "0.5", "--mu", "0.5", "--no-strict"])
        out = capsys.readouterr().out
        assert code in (0, 3)
        assert len(out.strip().splitlines()) == 4

    def test_pagerank_compatible_flags_match_baseline(self, g4_files, capsys):
        graph, blocks = g4_files
        assert run(["rank", "--graph", graph, "--blocks", blocks,
                    "--eta", "0.85", "--mu", "0", "--teleport", "0.15"]) == 0
        ours = capsys.readouterr().out
        # identical model expressed through the baseline path
        from blockrank import DanglingPolicy, build_hyperlink, pagerank, parse_blocks, parse_edge_list
        g = parse_edge_list(G4_EDGES)
        d = parse_blocks(G4_BLOCKS, g)
        h = build_hyperlink(g, DanglingPolicy.OWN_BLOCK, d)
        base = pagerank(h, alpha=0.85)
        got = {line.split("\t")[0]: float(line.split("\t")[1]) for line in ours.strip().splitlines()}
        for i, label in enumerate(g.labels):
            assert got[label] == pytest.approx(base.scores[i], abs=1e-12)

    def test_non_convergence_exits_three(self, tmp_path, capsys):
        # periodic pure-link chain with a single block passes the gate but
        # oscillates forever
        graph = tmp_path / "periodic.edges"
        blocks = tmp_path / "periodic.blocks"
        graph.write_text("a b\nb a\nb c\nc b\n", encoding="utf-8")
        blocks.write_text("a B\nb B\nc B\n", encoding="utf-8")
        code = run(["rank", "--graph", str(graph), "--blocks", str(blocks),
                    "--eta", "1.0", "--mu", "0", "--max-iter", "50"])
        captured = capsys.readouterr()
        assert code == 3
        assert "warning" in captured.err


class TestCompare:
    def test_identical_models_have_zero_distance(self, tmp_path, capsys):
        # single block with eta=0.85, mu=0, teleport=0.15 IS the baseline
        graph = tmp_path / "g.edges"
        blocks = tmp_path / "g.blocks"
        graph.write_text(G4_EDGES, encoding="utf-8")
        blocks.write_text("a B\nb B\nc B\nd B\n", encoding="utf-8")
        code = run(["compare", "--graph", str(graph), "--blocks", str(blocks),
                    "--eta", "0.85", "--mu", "0", "--teleport", "0.15"])
        out = capsys.readouterr().out
        assert code == 0
        fields = dict(line.split("\t", 1) for line in out.strip().splitlines())
        assert float(fields["l1"]) == 0.0
        assert float(fields["overlap"]) == 1.0

    def test_reference_comparison(self, g4_files, capsys):
        graph, blocks = g4_files
        code = run(["compare", "--graph", graph, "--blocks", blocks,
                    "--eta", "0.5", "--mu", "0.5", "--top", "2"])
        out = capsys.readouterr().out
        assert code == 0
        fields = dict(line.split("\t", 1) for line in out.strip().splitlines())
        assert float(fields["l1"]) > 0
        assert fields["k"] == "2"
        assert fields["clipped"] == "false"
        assert set(fields["top_model"].split(",")) <= {"a", "b", "c", "d"}

    def test_top_clipped_with_warning(self, g4_files, capsys):
        graph, blocks = g4_files
        code = run(["compare", "--graph", graph, "--blocks", blocks, "--top", "9"])
        captured = capsys.readouterr()
        assert code == 0
        fields = dict(line.split("\t", 1) for line in captured.out.strip().splitlines())
        assert fields["k"] == "4"
        assert fields["clipped"] == "true"
        assert "clipped" in captured.err

    def test_json_payload(self, g4_files, capsys):
        graph, blocks = g4_files
        code = run(["compare", "--graph", graph, "--blocks", blocks,
                    "--format", "json"])
        payload = json.loads(capsys.readouterr().out)
        assert code == 0
        assert payload["model_converged"] and payload["baseline_converged"]
        assert payload["k"] == 4  # default 10 clipped to n
        assert len(payload["top_model"]) == 4


class TestMaterialize:
    def test_reference_blocks(self, g4_files, capsys):
        graph, blocks = g4_files
        code = run(["materialize", "--graph", graph, "--blocks", blocks])
        out = capsys.readouterr().out
        assert code == 0
        sections: dict[str, list[list[float]]] = {}
        current = None
        for line in out.strip().splitlines():
            if line.startswith("# "):
                current = line[2:]
                sections[current] = []
            else:
                sections[current].append([float(tok) for tok in line.split("\t")])
        assert set(sections) == {"H", "M", "R", "A", "W"}
        assert sections["W"] == [[0.75, 0.25], [0.25, 0.75]]
        np.testing.assert_allclose(
            np.array(sections["M"]),
            np.array(sections["R"]) @ np.array(sections["A"]),
            atol=1e-15,
        )
        assert sections["H"][2] == [0.0, 0.0, 0.0, 1.0]

    def test_dangling_row_under_block_policy(self, tmp_path, capsys):
        # dangling c with a singleton block: its substituted row is e_c
        graph = tmp_path / "d.edges"
        blocks = tmp_path / "d.blocks"
        graph.write_text("a b\nb c\n", encoding="utf-8")
        blocks.write_text("a B1\nb B1\nc B2\n", encoding="utf-8")
        code = run(["materialize", "--graph", str(graph), "--blocks", str(blocks),
                    "--dangling", "block"])
        out = capsys.readouterr().out
        assert code == 0
        h_rows = out.split("# H\n")[1].split("# ")[0].strip().splitlines()
        assert h_rows[2] == "0\t0\t1"

    def test_unknown_block_label_exits_two(self, tmp_path, capsys):
        graph = tmp_path / "d.edges"
        blocks = tmp_path / "d.blocks"
        graph.write_text("a b\n", encoding="utf-8")
        blocks.write_text("a B1\nb B1\nc B2\n", encoding="utf-8")
        # c never appears in the graph text: unknown labels are hard errors
        code = run(["materialize", "--graph", str(graph), "--blocks", str(blocks)])
        assert code == 2
        assert "c" in capsys.readouterr().err

    def test_json_format(self, g4_files, capsys):
        graph, blocks = g4_files
        code = run(["materialize", "--graph", graph, "--blocks", blocks,
                    "--format", "json"])
        payload = json.loads(capsys.readouterr().out)
        assert code == 0
        assert payload["W"] == [[0.75, 0.25], [0.25, 0.75]]

    def test_cap_exceeded_exits_two(self, tmp_path, capsys):
        n = 2101  # above the 2000-node materialization cap
        graph = tmp_path / "big.edges"
        blocks = tmp_path / "big.blocks"
        graph.write_text(
            "\n".join(f"n{i} n{(i + 1) % n}" for i in range(n)), encoding="utf-8"
        )
        blocks.write_text("\n".join(f"n{i} B" for i in range(n)), encoding="utf-8")
        code = run(["materialize", "--graph", str(graph), "--blocks", str(blocks)])
        assert code == 2
        assert "cap" in capsys.readouterr().err


class TestDeterminism:
    def test_repeated_runs_are_byte_identical(self, g4_files, capsys):
        graph, blocks = g4_files
        args = ["rank", "--graph", graph, "--blocks", blocks,
                "--eta", "0.5", "--mu", "0.5", "--format", "json"]
        assert run(args) == 0
        first = capsys.readouterr().out
        assert run(args) == 0
        second = capsys.readouterr().out
        assert first.encode() == second.encode()

    def test_all_commands_are_deterministic(self, g4_files, capsys):
        graph, blocks = g4_files
        for command in ("check", "rank", "compare", "materialize"):
            args = [command, "--graph", graph, "--blocks", blocks]
            run(args)
            first = capsys.readouterr().out
            run(args)
            assert first == capsys.readouterr().out
