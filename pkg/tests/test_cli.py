import json
import subprocess
import sys

import pytest

from prodembed import cli
from prodembed.pl_geometry import ResampleBudgetError


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def strip_elapsed(text):
    doc = json.loads(text)
    doc.pop("elapsed_ms")
    return json.dumps(doc, sort_keys=True, indent=2)


@pytest.mark.parametrize(
    "argv, d, case",
    [(["k5", "k5"], 5, 2), (["k5", "--circles", "1"], 4, 2), (["k5", "--intervals", "1"], 3, 1)],
)
def test_dim(capsys, argv, d, case):
    code, doc = run_json(capsys, "dim", *argv)
    assert code == 0
    assert (doc["result"]["d"], doc["result"]["case"]) == (d, case)
    assert doc["schema"] == 1 and doc["command"] == "dim"
    assert set(doc) == {"schema", "command", "inputs", "result", "version", "elapsed_ms"}


def test_dim_text_output(capsys):
    code, out, _ = run(capsys, "dim", "k5", "k5")
    assert code == 0 and out.startswith("d = 5 (case 2")


def test_dim_reads_edge_list_file(capsys, tmp_path):
    f = tmp_path / "k33.txt"
    f.write_text("# K3,3\n" + "".join(f"a{i} b{j}\n" for i in range(3) for j in range(3)))
    code, doc = run_json(capsys, "dim", str(f), "triod")
    assert code == 0 and doc["result"]["d"] == 4


def test_dim_parse_error(capsys, tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("a b\na b c\n")
    code, _, err = run(capsys, "dim", str(f))
    assert code == 2 and "line 2" in err


def test_dim_hypothesis_violation(capsys):
    code, _, err = run(capsys, "dim", "path:3", "cycle:4")
    assert code == 3 and "hypothesis" in err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as info:
        cli.main(["verify", "--kind", "bogus"])
    assert info.value.code == 2


def test_obstruction_standard(capsys):
    code, doc = run_json(capsys, "obstruction", "--n", "1")
    r = doc["result"]
    assert code == 0 and r["v"] == 1 and r["pairs_examined"] == 3
    assert r["linked_pairs"][0]["alpha_params"] == [[1, 3]]
    assert r["linked_pairs"][0]["beta_params"] == [[2, 4]]
    code, doc = run_json(capsys, "obstruction", "--n", "2", "--embedding", "standard")
    r = doc["result"]
    assert (r["v"], r["pairs_examined"], r["linked_count"]) == (1, 9, 1)


def test_obstruction_random_n3(capsys):
    code, doc = run_json(capsys, "obstruction", "--n", "3", "--embedding", "random", "--seed", "5")
    assert code == 0 and doc["result"]["v"] == 1 and doc["result"]["pairs_examined"] == 27
    assert doc["inputs"]["seed"] == 5


def test_obstruction_bad_arguments(capsys):
    assert run(capsys, "obstruction", "--n", "9")[0] == 2
    assert run(capsys, "obstruction", "--n", "2", "--base", "x,y")[0] == 2
    assert run(capsys, "obstruction", "--n", "2", "--base", "0,7")[0] == 2


def test_obstruction_geometric_failure(capsys, monkeypatch):
    def exhausted(*args, **kwargs):
        raise ResampleBudgetError("no sample")

    monkeypatch.setattr(cli, "random_embedding", exhausted)
    code, _, err = run(capsys, "obstruction", "--n", "2", "--embedding", "random")
    assert code == 5 and "geometric" in err


def test_verify(capsys):
    code, doc = run_json(capsys, "verify", "--kind", "sacks", "--trials", "3", "--seed", "42")
    r = doc["result"]
    assert code == 0 and r["linked_fraction"] == 1.0 and r["v_histogram"] == {"1": 3}
    assert doc["inputs"] == {"kind": "sacks_n", "n": 2, "trials": 3, "seed": 42}
    code, doc = run_json(capsys, "verify", "--kind", "k6", "--trials", "4", "--seed", "1")
    assert code == 0 and doc["result"]["linked_fraction"] == 1.0


def test_verify_property_violation_exit(capsys, monkeypatch):
    real = cli.campaign

    def broken(*args, **kwargs):
        res = real(*args, **kwargs)
        res.failing_seeds.append(res.seed)
        return res

    monkeypatch.setattr(cli, "campaign", broken)
    code, out, _ = run(capsys, "verify", "--kind", "k6", "--trials", "1")
    assert code == 4 and "PROPERTY VIOLATED" in out


def test_verify_geometric_failure_exit(capsys, monkeypatch):
    real = cli.campaign

    def flaky(*args, **kwargs):
        res = real(*args, **kwargs)
        res.error_seeds.append(res.seed)
        return res

    monkeypatch.setattr(cli, "campaign", flaky)
    assert run(capsys, "verify", "--kind", "k6", "--trials", "1")[0] == 5


def test_verify_respects_cap(capsys, monkeypatch):
    monkeypatch.setenv("PRODEMBED_MAX_N", "2")
    assert run(capsys, "verify", "--kind", "invariance", "--trials", "1")[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["dim", "k5", "k33", "--circles", "2"],
        ["obstruction", "--n", "2", "--embedding", "random", "--seed", "3"],
        ["verify", "--kind", "invariance", "--n", "2", "--trials", "2", "--seed", "9"],
        ["dump-complex", "--kind", "standard", "--n", "2", "--seed", "1"],
    ],
)
def test_json_is_byte_identical_modulo_elapsed(capsys, argv):
    _, first, _ = run(capsys, *argv, "--json")
    _, second, _ = run(capsys, *argv, "--json")
    assert strip_elapsed(first) == strip_elapsed(second)


def test_dump_complex(capsys):
    code, out, _ = run(capsys, "dump-complex", "--kind", "skeleton", "--m", "2", "--n", "6")
    assert code == 0 and len([l for l in out.splitlines() if l and not l.startswith("join")]) == 35
    code, out, _ = run(capsys, "dump-complex", "--kind", "product-link", "--degrees", "4,4")
    assert code == 0 and out.startswith("join_structure:")
    code, out, _ = run(capsys, "dump-complex", "--kind", "random", "--n", "2", "--seed", "4")
    assert code == 0 and out.startswith("ambient 3")
    code, _, _ = run(capsys, "dump-complex", "--kind", "product-link", "--degrees", "x")
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "prodembed", "dim", "k5", "k5"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and "d = 5" in proc.stdout
