import io
import json

import pytest

from radogames.cli import EXIT_CAP, EXIT_ILLEGAL, EXIT_OK, EXIT_PARSE, main
from radogames.engine import solve_exact
from radogames.hypergraphs import Board, Hypergraph, enumerate_solutions
from radogames.matrices import schur_system


def run(argv, inputs=()):
    out = io.StringIO()
    feed = iter(inputs)
    code = main(argv, out=out, input_fn=lambda prompt: next(feed))
    return code, out.getvalue()


class TestAnalyze:
    def test_schur(self):
        code, text = run(["analyze", "--system", "schur"])
        assert code == EXIT_OK
        assert "m = 2/1" in text and "threshold exponent -1/2" in text
        assert "strictly balanced: yes" in text

    def test_non_abundant_pair(self, tmp_path):
        f = tmp_path / "pair.txt"
        f.write_text("1 2\n2 -3\n0\n")
        code, text = run(["analyze", "--matrix-file", str(f)])
        assert code == EXIT_OK
        assert "abundant (no two-term row after elimination): no" in text
        assert "-1/3" in text

    def test_not_irredundant(self, tmp_path):
        f = tmp_path / "pos.txt"
        f.write_text("1 2\n1 1\n0\n")
        code, text = run(["analyze", "--matrix-file", str(f)])
        assert code == EXIT_OK
        assert "trivially the blocker's win" in text

    def test_parse_error_exit_code(self, tmp_path):
        f = tmp_path / "bad.txt"
        f.write_text("2 3\n1 2 x\n1 1 1\n0 0\n")
        code, _ = run(["analyze", "--matrix-file", str(f)])
        assert code == EXIT_PARSE

    def test_unknown_system(self):
        code, _ = run(["analyze", "--system", "nope"])
        assert code == EXIT_ILLEGAL


class TestEnumerateAndMu:
    def test_enumerate_json(self):
        code, text = run(["enumerate", "--system", "schur", "--n", "5"])
        assert code == EXIT_OK
        doc = json.loads(text)
        assert sorted(map(tuple, doc["edges"])) == [(1, 2, 3), (1, 3, 4), (1, 4, 5), (2, 3, 5)]

    def test_mu(self):
        code, text = run(["mu", "--system", "schur", "--n", "5", "--mode", "exact"])
        assert code == EXIT_OK and "= 3" in text

    def test_mu_cap(self):
        code, _ = run(["mu", "--system", "schur", "--n", "30", "--mode", "exact"])
        assert code == EXIT_CAP


class TestDetect:
    def test_board_input(self):
        code, text = run(["detect", "--system", "schur", "--n", "6"])
        assert code == EXIT_OK
        doc = json.loads(text)
        assert doc["components"]

    def test_hypergraph_file(self, tmp_path):
        h = Hypergraph(range(1, 8), [(1, 2, 3), (3, 4, 5), (5, 6, 7)], 3)
        f = tmp_path / "h.json"
        f.write_text(h.to_json())
        code, text = run(["detect", "--hypergraph", str(f)])
        assert code == EXIT_OK
        doc = json.loads(text)
        assert doc["components"][0]["case"] == "simple"

    def test_bicycle_reported(self, tmp_path):
        edges = [(1, 2, 3), (3, 4, 5), (1, 5, 6), (2, 4, 7)]
        h = Hypergraph(range(1, 8), edges, 3)
        f = tmp_path / "h.json"
        f.write_text(h.to_json())
        code, text = run(["detect", "--hypergraph", str(f)])
        assert code == EXIT_OK
        assert "bicycle" in text


class TestSolveAndSimulate:
    def test_solve_exact(self):
        code, text = run(["solve", "--system", "schur", "--n", "5"])
        assert code == EXIT_OK and "breaker" in text

    def test_solve_certify(self):
        code, text = run(["solve", "--system", "schur", "--n", "9", "--mode", "certify"])
        assert code == EXIT_OK
        h = enumerate_solutions(schur_system(), Board.full(9))
        assert solve_exact(h) in text

    def test_simulate_csv(self, tmp_path):
        out_file = tmp_path / "report.csv"
        code, text = run(
            [
                "simulate",
                "--system",
                "schur",
                "--n-values",
                "40",
                "--multipliers",
                "0.3,2",
                "--trials",
                "4",
                "--seed",
                "5",
                "--out",
                str(out_file),
            ]
        )
        assert code == EXIT_OK
        lines = out_file.read_text().splitlines()
        assert lines[0].startswith("system_id,n,p,seed")
        assert len(lines) == 1 + 2 * 4

    def test_simulate_formats_agree(self, tmp_path):
        args = ["simulate", "--system", "schur", "--n-values", "30", "--probabilities", "0.4", "--trials", "3", "--seed", "2"]
        _, csv_text = run(args + ["--format", "csv"])
        _, json_text = run(args + ["--format", "json"])
        rows = [ln.split(",") for ln in csv_text.strip().splitlines()[1:]]
        docs = json.loads(json_text)
        assert len(rows) == len(docs)
        for row, doc in zip(rows, docs):
            assert int(row[1]) == doc["n"]
            assert row[9] == doc["winner"]


class TestPlay:
    def test_scripted_game_with_illegal_move_retry(self):
        # human blocker against the greedy claimer on a tiny board
        code, text = run(
            ["play", "--system", "schur", "--board", "1,2,3", "--human", "breaker", "--opponent", "greedy-maker"],
            inputs=["99", "oops", "2"],
        )
        assert code == EXIT_OK
        assert "not available" in text
        assert "game over: breaker wins" in text

    def test_human_maker_loses_to_dl2_on_clean_board(self):
        # components of this board are bicycle-free, so the blocker holds
        code, text = run(
            ["play", "--system", "schur", "--board", "1,2,3,4", "--human", "maker", "--opponent", "dl2-breaker"],
            inputs=["1", "2", "4"],
        )
        assert code == EXIT_OK
        assert "game over: breaker wins" in text
