import json

import pytest

from dioph.cli import RunConfig, main
from dioph.errors import InputError


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_bounds_alpha_one(capsys):
    code, out, _ = run(["bounds", "--alpha", "1", "--format", "table"], capsys)
    assert code == 0
    line = next(l for l in out.splitlines() if l.startswith("G_value"))
    assert line.split()[1] == "1.0"


def test_pipeline_remark4(tmp_path, capsys):
    m, s, svg = tmp_path / "m.json", tmp_path / "s.jsonl", tmp_path / "p.svg"
    assert main(["gallery", "--kind", "remark4", "--n", "3", "--seed", "7", "--out", str(m)]) == 0
    assert main(["enumerate", "--matrix", str(m), "--max-height", "100000", "--out", str(s)]) == 0
    capsys.readouterr()
    code, out, _ = run(["exponents", "--input", str(s), "--plot", str(svg)], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["flag"] == "stable"
    assert 0.85 <= float(doc["alpha_hat"]) <= 1.15 and 0.85 <= float(doc["beta_hat"]) <= 1.15
    assert svg.read_text().startswith("<svg")
    code, out, _ = run(["analyze", "--input", str(s), "--matrix", str(m)], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["dimension"]["tail_rank"] == 2
    assert "not the true exponent" in doc["alpha_source"]


def test_verify_random(tmp_path, capsys):
    m = tmp_path / "m.json"
    main(["gallery", "--kind", "random", "--n", "2", "--seed", "1", "--out", str(m)])
    code, out, _ = run(["verify", "--matrix", str(m), "--max-height", "1000"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["ok"] and len(rep["checks"]) > 10
    code, out2, _ = run(["verify", "--matrix", str(m), "--max-height", "1000", "--workers", "2"], capsys)
    assert out2 == out


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(["enumerate", "--matrix", str(bad), "--max-height", "10"], capsys)[0] == 2
    assert run(["enumerate", "--matrix", str(tmp_path / "missing.json"), "--max-height", "10"],
               capsys)[0] == 2
    good = tmp_path / "m.json"
    main(["gallery", "--kind", "random", "--n", "1", "--seed", "1", "--out", str(good)])
    assert run(["enumerate", "--matrix", str(good), "--max-height", "1"], capsys)[0] == 2
    assert run(["enumerate", "--matrix", str(good), "--max-height", "10",
                "--precision-bits", "32"], capsys)[0] == 2
    assert run(["bounds", "--alpha", "0.5", "--m", "1", "--n", "2"], capsys)[0] == 0
    rational = tmp_path / "r.json"
    rational.write_text(json.dumps({"n": 1, "rows": [["0.5", "0.25"]]}))
    assert run(["enumerate", "--matrix", str(rational), "--max-height", "10"], capsys)[0] == 2
    assert run(["exponents"], capsys)[0] == 2


def test_budget_exit_code(tmp_path, capsys, monkeypatch):
    m = tmp_path / "m.json"
    main(["gallery", "--kind", "random", "--n", "1", "--seed", "1", "--out", str(m)])
    capsys.readouterr()
    monkeypatch.setenv("DIOPH_ORACLE_LIMIT", "5")
    code, out, _ = run(["verify", "--matrix", str(m), "--max-height", "50", "--format", "table"], capsys)
    assert code == 0 and "skipped: bound above oracle limit" in out


def test_verify_failure_maps_to_four(tmp_path, capsys, monkeypatch):
    import dioph.cli as cli

    m = tmp_path / "m.json"
    main(["gallery", "--kind", "random", "--n", "1", "--seed", "1", "--out", str(m)])
    monkeypatch.setattr(cli, "run_verify", lambda *a, **k: {"checks": [], "ok": False,
                                                          "hard_failures": ["Lemma 3"]})
    assert run(["verify", "--matrix", str(m), "--max-height", "10"], capsys)[0] == 4


def test_run_config_invariants():
    with pytest.raises(InputError):
        RunConfig("bounds", precision_bits=63).validate()
    with pytest.raises(InputError):
        RunConfig("enumerate", max_height="1").validate()
    with pytest.raises(InputError):
        RunConfig("plot").validate()
    RunConfig("bounds", precision_bits=64, max_height="1.5").validate()


def test_gallery_params(tmp_path, capsys):
    out = tmp_path / "l.json"
    code, _, err = run(["gallery", "--kind", "liouville", "--n", "1", "--param", "a=3",
                        "--out", str(out)], capsys)
    assert code == 0 and "lacunary" in err
    assert json.loads(out.read_text())["n"] == 1
