"""CLI: dispatch, output shapes, determinism, exit codes."""

import json

import pytest

from radbound.cli import main
from radbound.reporting import parse_report


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_oracle_tail_fixture(capsys):
    code, out = run(capsys, "oracle", "tail", "--weights", "1/2,1/2,1/2,1/2",
                    "--t", "1", "--mode", "gt")
    assert code == 0
    assert out.splitlines()[0] == "1/16 = 0.0625"


def test_oracle_tail_json_deterministic(capsys):
    args = ("oracle", "tail", "--weights", "1,1,1,1,1,1,1,1,1",
            "--t", "1", "--mode", "gt", "--json")
    c1, o1 = run(capsys, *args)
    c2, o2 = run(capsys, *args)
    assert c1 == c2 == 0 and o1 == o2
    doc = json.loads(o1)
    assert doc["value"] == "23/256"


def test_oracle_tail_weights_file(capsys, tmp_path):
    f = tmp_path / "w.txt"
    f.write_text("1/2\n1/2\n1/2\n1/2\n")
    code, out = run(capsys, "oracle", "tail", "--weights", str(f),
                    "--t", "1", "--mode", "ge")
    assert code == 0 and out.startswith("5/16")


def test_oracle_vector_file(capsys, tmp_path):
    f = tmp_path / "v.txt"
    f.write_text("1/2 0\n1/2 0\n0 1/2\n0 1/2\n")
    code, out = run(capsys, "oracle", "tail", "--weights", str(f),
                    "--t", "1", "--mode", "norm_le", "--json")
    assert code == 0
    assert json.loads(out)["value"] == "3/4"


def test_chain_f(capsys):
    code, out = run(capsys, "chain", "f", "--k", "2", "--t", "2")
    assert code == 0 and out.strip() == "3"


def test_table_query_stash_value(capsys, table_path):
    code, out = run(capsys, "table", "query", "--table", table_path,
                    "--a", "0.3", "--x", "1", "--json")
    assert code == 0
    assert json.loads(out)["value"] > 0.09375


def test_walk_sim_deterministic(capsys):
    args = ("walk", "sim", "--set", "1,1,1", "--x", "2", "--trials", "20000",
            "--seed", "9", "--json")
    c1, o1 = run(capsys, *args)
    c2, o2 = run(capsys, *args)
    assert c1 == c2 == 0 and o1 == o2


def test_verify_stash_json_roundtrips(capsys, table_path):
    code, out = run(capsys, "verify", "stash", "--table", table_path,
                    "--json")
    assert code == 0
    rep = parse_report(out)
    assert rep.all_pass and rep.campaign.lower() == "stash"


def test_missing_table_is_config_error(capsys, monkeypatch):
    monkeypatch.delenv("RDMC_TABLE", raising=False)
    code = main(["table", "query", "--a", "0.5", "--x", "1"])
    assert code == 2


def test_bad_table_file_is_config_error(capsys, tmp_path):
    bad = tmp_path / "bad.rdmc"
    bad.write_bytes(b"garbage")
    code = main(["verify", "qsums", "--table", str(bad)])
    assert code == 2


def test_unknown_flag_rejected():
    with pytest.raises(SystemExit) as e:
        main(["oracle", "tail", "--weights", "1", "--t", "1", "--frob", "1"])
    assert e.value.code == 2


def test_rdmc_table_env(capsys, monkeypatch, table_path):
    monkeypatch.setenv("RDMC_TABLE", table_path)
    code, out = run(capsys, "table", "query", "--a", "0.35", "--x", "0.35",
                    "--json")
    assert code == 0
    assert json.loads(out)["value"] > 0.25
