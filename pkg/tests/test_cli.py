import json
import subprocess
import sys

import pytest

from shapeavoid.cli import main


@pytest.fixture
def run(capsys, tmp_path):
    cache = str(tmp_path / "cache.json")

    def _run(*argv, use_cache=True):
        args = list(argv)
        if use_cache:
            args += ["--cache", cache]
        code = main(args)
        out, err = capsys.readouterr()
        return code, out, err

    return _run


def as_json(out):
    payload = json.loads(out)
    assert set(payload) == {"schema", "command", "inputs", "result", "method", "cached", "elapsed_ms"}
    assert payload["schema"] == 1
    return payload


class TestDocumentedExamples:
    def test_shape(self, run):
        assert run("shape", "65127843")[:2] == (0, "4,2,1,1\n")

    def test_count(self, run):
        assert run("count", "--shape", "2,2", "--n", "4", "--method", "brute")[:2] == (0, "20\n")

    def test_witness(self, run):
        code, out, _ = run("witness", "--shape", "2,2", "--perm", "25314")
        assert code == 0
        lines = dict(line.split(" ", 1) for line in out.strip().splitlines())
        assert lines["positions"] == "1,2,4,5"
        assert lines["values"] == "2,5,1,4"
        assert lines["pattern"] == "2,4,1,3"
        assert lines["shape"] == "2,2"


class TestCommands:
    def test_rsk(self, run):
        code, out, _ = run("rsk", "3,1,4,2", "--json")
        result = as_json(out)["result"]
        assert code == 0
        assert result == {"p": [[1, 2], [3, 4]], "q": [[1, 3], [2, 4]], "shape": [2, 2]}

    def test_partition_commands(self, run):
        assert run("contains-shape", "2,2", "3,1,1")[1] == "false\n"
        assert run("contains-shape", "4,1,1,1", "4,2,1,1")[1] == "true\n"
        assert run("dominates", "3,1", "2,2")[1] == "true\n"
        assert run("conjugate", "4,2,1,1")[1] == "4,2,1,1\n"
        assert run("conjugate", "3")[1] == "1,1,1\n"

    def test_greene(self, run):
        code, out, _ = run("greene", "65127843", "--k", "2", "--json")
        result = as_json(out)["result"]
        assert code == 0
        assert result["shape"] == [4, 2, 1, 1]
        assert [r["increasing"] for r in result["prefix"]] == [4, 6, 7, 8]
        assert [r["decreasing"] for r in result["prefix"]] == [4, 6, 7, 8]
        assert result["total_size"] == 6
        code, out, _ = run("greene", "65127843", "--k", "1", "--direction", "decreasing")
        assert "1 decreasing chains (total 4)" in out

    def test_cell(self, run):
        code, out, _ = run("cell", "--shape", "2,2")
        assert out.split() == ["2,1,4,3", "2,4,1,3", "3,1,4,2", "3,4,1,2"]

    def test_avoids(self, run):
        assert run("avoids", "--perm", "25314", "--shape", "2,2")[1] == "false\n"
        assert run("avoids", "--perm", "65127843", "--shape", "4,1,1,1")[1] == "true\n"
        assert run("avoids", "--perm", "312", "--pattern", "123")[1] == "true\n"

    @pytest.mark.parametrize(
        "argv, expected",
        [(["--shape", "2,2", "--n", "9", "--method", "two-two"], "9232"),
         (["--shape", "3,1,1", "--n", "6", "--method", "hook"], "0"),
         (["--shape", "2,2", "--n", "5", "--method", "bound"], "70"),
         (["--pattern", "123", "--n", "5"], "42")],
    )
    def test_count_methods(self, run, argv, expected):
        code, out, _ = run("count", *argv)
        assert code == 0
        if expected != "0":
            assert out.strip() == expected
        else:
            assert int(out) > 0

    def test_counterexample(self, run):
        code, out, _ = run("counterexample", "--m", "4", "--k", "4", "--json")
        assert as_json(out)["result"] == {"perm": [6, 5, 1, 2, 7, 8, 4, 3], "shape": [4, 2, 1, 1]}
        code, out, _ = run("counterexample", "--n", "6")
        assert code == 0 and "shape" in out

    def test_witness_paths(self, run):
        code, out, _ = run("witness", "--perm", "65127843", "--shape", "4,1,1,1", "--json")
        payload = as_json(out)
        assert code == 0 and payload["result"]["found"] is False
        assert payload["method"] == "oracle"
        code, out, _ = run("witness", "--perm", "65127843", "--shape", "2,1,1", "--json")
        payload = as_json(out)
        assert payload["method"] == "hook" and payload["result"]["shape"] == [2, 1, 1]
        code, out, _ = run("witness", "--perm", "3,1,4,2", "--shape", "2,1", "--json")
        assert as_json(out)["method"] == "rectangle"
        code, out, _ = run("witness", "--perm", "3,1,4,2", "--shape", "2,1", "--oracle", "--json")
        assert as_json(out)["method"] == "oracle"

    def test_verify(self, run):
        code, out, _ = run("verify", "greene", "--n", "5", "--json")
        result = as_json(out)["result"]
        assert code == 0 and result["ok"] and result["checked"] > 0

    def test_growth_csv_and_json(self, run):
        code, out, _ = run("growth", "--shape", "2,2", "--n", "5")
        counts = [1, 2, 6, 20, 68]
        assert out.splitlines() == ["n,count,root"] + [
            f"{n},{c},{c ** (1 / (2 * n)):.6f}" for n, c in enumerate(counts, 1)
        ]
        code, out, _ = run("growth", "--shape", "3,1", "--n", "6", "--format", "json")
        result = json.loads(out)
        assert result["hook_limit"] == 2.0
        assert [p["n"] for p in result["points"]] == [3, 4, 5, 6]


class TestJsonAndCache:
    def test_text_and_json_agree(self, run):
        _, text, _ = run("count", "--shape", "2,2", "--n", "6")
        _, out, _ = run("count", "--shape", "2,2", "--n", "6", "--json")
        payload = as_json(out)
        assert payload["result"]["count"] == text.strip() == "232"
        assert payload["method"] == "brute"
        assert payload["inputs"]["shape"] == "2,2" and payload["inputs"]["n"] == 6

    def test_warm_and_cold_cache(self, run):
        argv = ("count", "--shape", "3,1", "--n", "6", "--json")
        cold = as_json(run(*argv)[1])
        warm = as_json(run(*argv)[1])
        assert cold["cached"] is False and warm["cached"] is True
        for payload in (cold, warm):
            del payload["cached"], payload["elapsed_ms"]
        assert cold == warm

    def test_no_cache(self, run, tmp_path):
        code, out, _ = run("count", "--shape", "2,2", "--n", "4", "--no-cache", "--json", use_cache=False)
        assert as_json(out)["cached"] is False
        assert not (tmp_path / "cache.json").exists()


class TestExitCodes:
    def test_usage_errors(self, run):
        assert run("frobnicate")[0] == 2
        assert run("count", "--shape", "2,2")[0] == 2
        assert run("count", "--n", "-1", "--shape", "2,2")[0] == 2
        assert run("shape", "1,1,2")[0] == 2
        assert run("count", "--shape", "3,1", "--n", "5", "--method", "two-two")[0] == 2
        assert run("counterexample", "--m", "4")[0] == 2

    def test_domain_errors_name_the_hypothesis(self, run):
        code, _, err = run("count", "--shape", "3,1,1", "--n", "4", "--method", "hook")
        assert code == 1 and "(m-1)(k-1)" in err
        code, _, err = run("counterexample", "--m", "3", "--k", "4")
        assert code == 1

    def test_budget(self, run):
        code, _, err = run("count", "--shape", "2,2", "--n", "12", "--budget", "1000")
        assert code == 3 and "budget" in err


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "shapeavoid", "shape", "65127843"],
        capture_output=True, text=True, cwd=tmp_path,
    )
    assert proc.returncode == 0 and proc.stdout == "4,2,1,1\n"
