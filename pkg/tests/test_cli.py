"""End-to-end tests for the command line front end."""

import io
import json
import sys

import pytest

from cycledecomp.cli import main
from cycledecomp.graph import parse_edge_list

from helpers import complete_graph, cycle_graph


def run(capsys, argv, stdin: str = "") -> tuple[int, str, str]:
    if stdin:
        sys.stdin = io.StringIO(stdin)
    try:
        code = main(argv)
    finally:
        sys.stdin = sys.__stdin__
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGen:
    def test_gnp_deterministic(self, capsys):
        a = run(capsys, ["gen", "gnp", "16", "0.5", "--seed", "7"])
        b = run(capsys, ["gen", "gnp", "16", "0.5", "--seed", "7"])
        assert a == b and a[0] == 0
        g = parse_edge_list(a[1])
        assert g.host_n == 16

    def test_gallai_shape(self, capsys):
        code, out, _ = run(capsys, ["gen", "gallai", "1", "12"])
        assert code == 0
        assert parse_edge_list(out).m == 27

    def test_regular(self, capsys):
        code, out, _ = run(capsys, ["gen", "regular", "10", "4", "--seed", "3"])
        assert code == 0
        g = parse_edge_list(out)
        assert all(d == 4 for d in g.degrees().values())

    def test_bad_params_exit2(self, capsys):
        code, _, err = run(capsys, ["gen", "gnp", "16"])
        assert code == 2
        assert "gen" in err


class TestDecomposeRoundTrip:
    def test_pipe_gen_decompose_validate(self, capsys):
        code, edges, _ = run(capsys, ["gen", "gnp", "16", "0.5", "--seed", "7"])
        assert code == 0
        code, dec_json, _ = run(capsys, ["decompose", "--seed", "7", "--quiet"], stdin=edges)
        assert code == 0
        code, verdict, _ = run(capsys, ["validate"], stdin=dec_json)
        assert code == 0
        assert json.loads(verdict)["ok"] is True

    def test_validate_against_graph_file(self, capsys, tmp_path):
        code, edges, _ = run(capsys, ["gen", "gnp", "14", "0.4", "--seed", "2"])
        gpath = tmp_path / "g.edges"
        gpath.write_text(edges)
        code, dec_json, _ = run(capsys, ["decompose", "--quiet", str(gpath)])
        assert code == 0
        code, verdict, _ = run(
            capsys, ["validate", "--graph", str(gpath)], stdin=dec_json
        )
        assert code == 0

    def test_cross_check_catches_wrong_graph(self, capsys, tmp_path):
        _, edges, _ = run(capsys, ["gen", "gnp", "14", "0.4", "--seed", "2"])
        _, other, _ = run(capsys, ["gen", "gnp", "14", "0.4", "--seed", "3"])
        gpath = tmp_path / "other.edges"
        gpath.write_text(other)
        _, dec_json, _ = run(capsys, ["decompose", "--quiet"], stdin=edges)
        code, verdict, _ = run(capsys, ["validate", "--graph", str(gpath)], stdin=dec_json)
        assert code == 1
        assert json.loads(verdict)["ok"] is False

    def test_edgeless_input(self, capsys):
        code, out, _ = run(capsys, ["decompose", "--quiet"], stdin="5 0\n")
        assert code == 0
        doc = json.loads(out)
        assert doc["cycles"] == [] and doc["edges"] == []

    def test_malformed_line_exit2_cites_line(self, capsys):
        code, _, err = run(capsys, ["decompose"], stdin="4 1\na b\n")
        assert code == 2
        assert "line 2" in err

    def test_report_file(self, capsys, tmp_path):
        rpt = tmp_path / "report.json"
        _, edges, _ = run(capsys, ["gen", "gnp", "20", "0.4", "--seed", "1"])
        code, _, _ = run(
            capsys, ["decompose", "--quiet", "--report", str(rpt)], stdin=edges
        )
        assert code == 0
        doc = json.loads(rpt.read_text())
        assert doc["pieces"] == doc["n_cycles"] + doc["n_single_edges"]
        assert isinstance(doc["degree_trajectory"], list)

    def test_determinism_byte_identical(self, capsys):
        _, edges, _ = run(capsys, ["gen", "gnp", "24", "0.5", "--seed", "4"])
        _, a, _ = run(capsys, ["decompose", "--seed", "9", "--quiet"], stdin=edges)
        _, b, _ = run(capsys, ["decompose", "--seed", "9", "--quiet"], stdin=edges)
        assert a == b


class TestConfigPrecedence:
    def test_file_overrides_preset_and_flag_overrides_file(self, capsys, tmp_path):
        cfgfile = tmp_path / "knobs.cfg"
        cfgfile.write_text("eulerian_finish=false\nrng_seed=5\n")
        two_triangles = "6 6\n0 1\n0 2\n1 2\n3 4\n3 5\n4 5\n"
        code, out, _ = run(
            capsys,
            ["decompose", "--quiet", "--config", str(cfgfile), "--seed", "9"],
            stdin=two_triangles,
        )
        assert code == 0
        doc = json.loads(out)
        # file beat the preset: finisher off leaves 6 singles
        assert len(doc["edges"]) == 6
        # flag beat the file: seed 9, not 5
        assert doc["stats"]["seed"] == 9

    def test_unknown_key_exit2(self, capsys, tmp_path):
        cfgfile = tmp_path / "bad.cfg"
        cfgfile.write_text("no_such_knob=1\n")
        code, _, err = run(capsys, ["decompose", "--config", str(cfgfile)], stdin="3 0\n")
        assert code == 2
        assert "no_such_knob" in err

    def test_paper_preset_accepted(self, capsys):
        code, out, _ = run(
            capsys, ["decompose", "--preset", "paper", "--quiet"], stdin="4 3\n0 1\n1 2\n2 3\n"
        )
        assert code == 0
        assert json.loads(out)["stats"]["preset"] == "paper"


class TestCertify:
    def test_violation_witness_reverifies(self, capsys):
        c4 = "4 4\n0 1\n1 2\n2 3\n0 3\n"
        code, out, _ = run(
            capsys,
            ["certify", "--epsilon", "1", "--s", "1", "--denominator", "const"],
            stdin=c4,
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["is_expander"] is False and doc["certified"] is True
        assert doc["witness"]["reverified"] is True

    def test_positive_verdict(self, capsys):
        c4 = "4 4\n0 1\n1 2\n2 3\n0 3\n"
        code, out, _ = run(capsys, ["certify", "--epsilon", "1", "--s", "0.5"], stdin=c4)
        assert code == 0
        doc = json.loads(out)
        assert doc["is_expander"] is True and doc["witness"] is None


class TestExpanders:
    def test_parts_manifest(self, capsys):
        two_triangles = "6 6\n0 1\n0 2\n1 2\n3 4\n3 5\n4 5\n"
        code, out, _ = run(
            capsys, ["expanders", "--epsilon", "0.1", "--s", "0"], stdin=two_triangles
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["part_sizes"] == [3, 3]
        assert doc["removed_count"] == 0
        total = sum(p["m"] for p in doc["parts"])
        assert total == 6

    def test_split_mode(self, capsys):
        code, out, _ = run(
            capsys,
            ["expanders", "--epsilon", "0.5", "--s", "0", "--split", "3", "--seed", "1"],
            stdin="8 8\n0 1\n1 2\n2 3\n3 4\n4 5\n5 6\n6 7\n0 7\n",
        )
        assert code == 0
        doc = json.loads(out)
        assert len(doc["classes"]) == 3
        assert sum(c["m"] for c in doc["classes"]) == 8


class TestRoute:
    def test_success(self, capsys, tmp_path):
        pairs = tmp_path / "p.txt"
        pairs.write_text("0 4\n")
        through = tmp_path / "v.txt"
        through.write_text("1 2 3 5 6 7\n")
        c8 = "8 8\n0 1\n1 2\n2 3\n3 4\n4 5\n5 6\n6 7\n0 7\n"
        code, out, _ = run(
            capsys,
            ["route", "--pairs", str(pairs), "--through", str(through), "--ell", "4"],
            stdin=c8,
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["routed"] is True
        assert doc["paths"] == [[0, 1, 2, 3, 4]]

    def test_infeasible_exit1(self, capsys, tmp_path):
        pairs = tmp_path / "p.txt"
        pairs.write_text("0 2\n1 3\n")
        through = tmp_path / "v.txt"
        through.write_text("0 1 2 3\n")
        c4 = "4 4\n0 1\n1 2\n2 3\n0 3\n"
        code, out, _ = run(
            capsys,
            ["route", "--pairs", str(pairs), "--through", str(through),
             "--ell", "2", "--strategy", "matching_oracle"],
            stdin=c4,
        )
        assert code == 1
        assert json.loads(out)["routed"] is False


class TestPathsCyclesCommands:
    def test_paths_output_validates_standalone(self, capsys):
        _, edges, _ = run(capsys, ["gen", "gnp", "12", "0.4", "--seed", "6"])
        code, out, _ = run(capsys, ["paths"], stdin=edges)
        assert code == 0
        code, verdict, _ = run(capsys, ["validate"], stdin=out)
        assert code == 0

    def test_longcycle_min_len(self, capsys):
        c4 = "4 4\n0 1\n1 2\n2 3\n0 3\n"
        code, out, _ = run(capsys, ["longcycle", "--min-len", "4"], stdin=c4)
        assert code == 0 and json.loads(out)["length"] == 4
        code, _, _ = run(capsys, ["longcycle", "--min-len", "5", "--quiet"], stdin=c4)
        assert code == 1

    def test_longcycle_acyclic(self, capsys):
        code, out, _ = run(capsys, ["longcycle"], stdin="3 2\n0 1\n1 2\n")
        assert code == 1
        assert json.loads(out)["found"] is False

    def test_euler_even_graph(self, capsys):
        c4 = "4 4\n0 1\n1 2\n2 3\n0 3\n"
        code, out, _ = run(capsys, ["euler"], stdin=c4)
        assert code == 0
        assert json.loads(out)["cycles"] == [[0, 1, 2, 3]]

    def test_euler_rejects_odd(self, capsys):
        code, _, err = run(capsys, ["euler"], stdin="3 2\n0 1\n1 2\n")
        assert code == 1
        assert "odd" in err


class TestBenchCommand:
    def test_small_grid_csv(self, capsys, tmp_path):
        out = tmp_path / "r.csv"
        code, _, _ = run(
            capsys,
            ["bench", "--families", "gnp8n,gallai1", "--sizes", "16,24",
             "--seeds", "0", "--out", str(out), "--quiet"],
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("family,")
        assert len(lines) == 5

    def test_stdout_when_no_out(self, capsys):
        code, out, _ = run(
            capsys, ["bench", "--families", "gnp8n", "--sizes", "12", "--seeds", "1"]
        )
        assert code == 0
        assert out.startswith("family,")
