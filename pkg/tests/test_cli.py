import json

import pytest

from queasylab.cli import EXIT_CENSORED, EXIT_OK, EXIT_USAGE, main


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_complexity_json(capsys):
    code, out, _ = _run(capsys, "complexity", "--instance", "b:1", "--max-len", "22")
    rep = json.loads(out)
    assert code == EXIT_OK
    assert (rep["c"], rep["ic"], rep["cd"]) == (4, 22, None)
    assert rep["config"]["max_len"] == 22


def test_complexity_all_censored_exit_code(capsys):
    code, out, _ = _run(capsys, "complexity", "--instance", "b:0", "--max-len", "2")
    assert code == EXIT_CENSORED
    assert json.loads(out)["censored"] == {"c": True, "cd": True, "ic": True}


def test_complexity_guards(capsys):
    assert _run(capsys, "complexity", "--instance", "b:0", "--max-len", "40")[0] == EXIT_USAGE
    assert _run(capsys, "complexity", "--instance", "zz")[0] == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["complexity"])
    assert info.value.code == EXIT_USAGE


def test_complexity_dimacs_proxy(capsys, fixtures):
    code, out, _ = _run(capsys, "complexity", "--instance", str(fixtures / "fac_15_10.cnf"))
    rep = json.loads(out)
    assert code == EXIT_OK and rep["mode"] == "proxy"
    assert rep["ic_proxy"]["value"] == 8


def test_reduce_and_invert(capsys, tmp_path, fixtures):
    out = tmp_path / "f.cnf"
    code, _, err = _run(capsys, "reduce", "--x", "15", "--a", "10", "--out", str(out))
    assert code == EXIT_OK and "inverted: 15:10" in err
    assert out.read_text() == (fixtures / "fac_15_10.cnf").read_text()
    code, stdout, _ = _run(capsys, "reduce", "--invert", str(out))
    assert (code, stdout.strip()) == (EXIT_OK, "15:10")
    bad = tmp_path / "bad.cnf"
    bad.write_text("p cnf 2 1\n1 2 0\n")
    assert _run(capsys, "reduce", "--invert", str(bad))[0] == EXIT_USAGE
    assert _run(capsys, "reduce", "--x", "3")[0] == EXIT_USAGE


def test_prune_trace(capsys):
    code, out, _ = _run(capsys, "prune", "--x", "15", "--adversaries", "50", "--seed", "1")
    lines = [json.loads(s) for s in out.splitlines()]
    assert code == EXIT_OK
    assert lines[0]["config"]["adversaries"] == 50
    assert lines[-1]["factor_bits"] == "101"


def test_amplify_csv(capsys):
    code, out, _ = _run(capsys, "amplify", "--epsilon", "0.5", "--copies", "10,50",
                        "--trials", "200", "--seed", "2")
    lines = out.splitlines()
    assert code == EXIT_OK and lines[0].startswith("# config:")
    assert lines[1] == "n_copies,j,a,trials,success_rate,failure_rate,failure_bound,binomial_se"
    assert [l.split(",")[:4] for l in lines[2:]] == [["10", "2", "1", "200"],
                                                     ["50", "2", "1", "200"]]


def test_config_file_merges_under_flags(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"trials": 50, "copies": "5"}))
    code, out, _ = _run(capsys, "amplify", "--config", str(cfg), "--copies", "7")
    rows = out.splitlines()[2:]
    assert code == EXIT_OK and rows[0].split(",")[0] == "7" and rows[0].split(",")[3] == "50"
    cfg.write_text(json.dumps({"bogus": 1}))
    with pytest.raises(SystemExit) as info:
        main(["amplify", "--config", str(cfg)])
    assert info.value.code == EXIT_USAGE


def test_landscape_is_byte_identical(tmp_path, capsys):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        code, _, _ = _run(capsys, "landscape", "--mode", "proxy", "--fac", "15:1", "221:11",
                          "--random-cnf", "3:12:50", "--seed", "4", "--out", str(p))
        assert code == EXIT_OK
    assert paths[0].read_bytes() == paths[1].read_bytes()
    text = paths[0].read_text().splitlines()
    assert text[0].startswith("# config:") and text[1].startswith("instance_id,")
    assert len(text) == 2 + 5


def test_landscape_exact_censored(capsys):
    code, out, _ = _run(capsys, "landscape", "--corpus", "same:1", "--max-len", "8")
    assert code == EXIT_CENSORED
    assert len(out.splitlines()) == 2 + 2
