"""Command-line behavior: subcommands, exit codes, reports."""

import json

import pytest

from pstseq import cli, formats


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def nine_psts(tmp_path):
    path = tmp_path / "nine.psts"
    path.write_text("order 9\n1 2 3\n4 5 6\n7 8 9\n")
    return str(path)


@pytest.fixture()
def sts13_psts(tmp_path, capsys):
    path = tmp_path / "sts13.psts"
    code = cli.main(
        ["gen", "cyclic", "--n", "13", "--base", "0,1,4", "--base", "0,2,7",
         "--output", str(path)]
    )
    capsys.readouterr()
    assert code == 0
    return str(path)


class TestValidateAndGen:
    def test_validate(self, capsys, nine_psts):
        code, out, _ = run(capsys, "validate", nine_psts)
        assert code == 0
        assert "order 9" in out and "3 blocks" in out

    def test_gen_roundtrip(self, capsys, tmp_path):
        code, out, _ = run(capsys, "gen", "chain", "--sizes", "2,2")
        assert code == 0
        system = formats.parse_system_text(out)
        assert system.n == 9 and len(system.blocks) == 4

    def test_gen_random_deterministic(self, capsys):
        code, out1, _ = run(capsys, "gen", "random", "--n", "12", "--blocks", "4", "--seed", "7")
        code, out2, _ = run(capsys, "gen", "random", "--n", "12", "--blocks", "4", "--seed", "7")
        assert out1 == out2

    def test_gen_random_bound_error(self, capsys):
        code, _, err = run(capsys, "gen", "random", "--n", "10", "--blocks", "14", "--seed", "0")
        assert code == 3
        assert "bound" in err

    def test_bad_file_is_input_error(self, capsys, tmp_path):
        path = tmp_path / "bad.psts"
        path.write_text("order 4\n1 2 3\n1 2 4\n")
        code, _, err = run(capsys, "validate", str(path))
        assert code == 3
        assert "two blocks" in err

    def test_json_report_is_stable(self, capsys, nine_psts):
        code, out1, _ = run(capsys, "pack", nine_psts, "--json")
        code, out2, _ = run(capsys, "pack", nine_psts, "--json")
        r1, r2 = json.loads(out1), json.loads(out2)
        r1.pop("timing"), r2.pop("timing")
        assert r1 == r2


class TestDecideConstruct:
    def test_construct_nine(self, capsys, nine_psts):
        code, out, _ = run(capsys, "construct", nine_psts)
        assert code == 0
        assert out.strip() in ("1 2 4 3 5 7 6 8 9", "1 3 4 2 5 7 6 8 9")

    def test_decide_nine(self, capsys, nine_psts):
        code, out, _ = run(capsys, "decide", nine_psts, "--json")
        assert code == 0
        report = json.loads(out)
        assert report["outcome"] == "sequenceable"
        assert report["exit_code"] == 0

    def test_decide_sts13_budget_unknown(self, capsys, sts13_psts):
        code, out, _ = run(capsys, "decide", sts13_psts, "--budget", "50000")
        assert code == 2
        assert "unknown" in out

    def test_check_seq(self, capsys, nine_psts, tmp_path):
        good = tmp_path / "good.txt"
        good.write_text("1 2 4 3 5 7 6 8 9\n")
        code, out, _ = run(capsys, "check-seq", nine_psts, str(good))
        assert code == 0 and "admissible" in out
        bad = tmp_path / "bad.txt"
        bad.write_text("1 2 3 4 5 6 7 8 9\n")
        code, out, _ = run(capsys, "check-seq", nine_psts, str(bad), "--json")
        assert code == 1
        report = json.loads(out)
        assert report["outcome"] == "inadmissible"
        assert report["details"]["segments"][0]["length"] == 3

    def test_construct_matches_exit_code_contract(self, capsys, sts13_psts):
        # packing 4 at order 13 < threshold: falls back to search, which
        # cannot finish under a small default here; force a budget by env
        # is not exposed, so just decide with explicit small budget instead
        code, out, _ = run(capsys, "decide", sts13_psts, "--budget", "10000", "--json")
        report = json.loads(out)
        assert report["exit_code"] == code == 2


class TestPackingCommands:
    def test_pack(self, capsys, sts13_psts):
        code, out, _ = run(capsys, "pack", sts13_psts, "--json")
        assert code == 0
        report = json.loads(out)
        assert report["details"]["nu"] == 4
        assert report["details"]["exact"] is True

    def test_pack_budget(self, capsys, sts13_psts):
        code, out, _ = run(capsys, "pack", sts13_psts, "--budget", "3")
        assert code == 2
        assert "lower bound" in out

    def test_bad_sets(self, capsys, nine_psts):
        code, out, _ = run(capsys, "bad-sets", nine_psts, "--json")
        assert code == 0
        report = json.loads(out)
        assert report["details"]["m_size"] == 0
        assert len(report["details"]["bad_sets"]) == 1

    def test_good_set(self, capsys, tmp_path):
        path = tmp_path / "twelve.psts"
        path.write_text("order 12\n0 1 2\n3 4 5\n6 7 8\n")
        code, out, _ = run(capsys, "good-set", str(path), "--points", "9,10,11")
        assert code == 0 and "bad set" in out
        code, out, _ = run(capsys, "good-set", str(path), "--points", "0,10,11")
        assert code == 0 and "good set" in out

    def test_bound(self, capsys):
        code, out, _ = run(capsys, "bound", "10")
        assert code == 0 and out.strip() == "13"


class TestCertificateAndHunt:
    def test_verify_sts13(self, capsys):
        code, out, _ = run(capsys, "verify-sts13", "--json")
        assert code == 0
        report = json.loads(out)
        assert report["outcome"] == "verified"
        assert len(report["details"]["entries"]) == 13
        assert report["details"]["entries"][11]["blocks"] == [
            [0, 2, 7], [1, 3, 8], [5, 6, 9], [4, 10, 12],
        ]

    def test_hunt_streams_ndjson(self, capsys):
        code, out, _ = run(
            capsys, "hunt", "--order", "9", "--seeds", "0..3", "--blocks", "4",
            "--budget", "50000",
        )
        lines = [json.loads(line) for line in out.splitlines()]
        assert [r["seed"] for r in lines] == [0, 1, 2, 3]
        assert all(r["outcome"] == "sequenceable" for r in lines)
        assert code == 0

    def test_usage_error_exit_code(self, capsys):
        assert cli.main(["no-such-command"]) == 3
        capsys.readouterr()
        assert cli.main([]) == 3
        capsys.readouterr()
