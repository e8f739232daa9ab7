import json

import pytest

from ellcmm.cli import main, parse_config
from ellcmm.report import VerificationReport


def test_report_json_shape():
    rep = VerificationReport("demo", "Q")
    rep.add(True, i=1, j=0, beta=1, order=1)
    rep.add(False, "residual 1", i=0, j=0, beta=1, order=1)
    data = json.loads(rep.dumps())
    assert list(data)[:5] == ["identity", "cells", "tower", "backend", "points"]
    assert [(c["i"], c["status"]) for c in data["cells"]] == [(0, "fail"), (1, "pass")]
    assert data["cells"][0]["witness"] == "residual 1"
    assert data["cells"][1]["witness"] is None
    assert not rep.passed and len(rep.failures()) == 1


def test_empty_report_does_not_pass():
    assert not VerificationReport("demo", "Q").passed


def test_timed_cell():
    rep = VerificationReport("demo", "Q")
    with rep.timed() as box:
        box.update(ok=True, j=3)
    assert rep.cells[0].j == 3 and rep.passed


def test_cli_macdonald(capsys):
    assert main(["macdonald", "--j", "1"]) == 0
    assert capsys.readouterr().out.strip() == "X1 + X2"


def test_cli_shiraishi_json(capsys):
    assert main(["shiraishi", "--j", "0", "--beta", "1", "--order", "1", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["order"] == 1 and data["j"] == 0


def test_cli_verify_pass_and_out_file(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", "lemma7", "--format", "json", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["identity"] == "lemma7"
    assert [c["beta"] for c in data["cells"]] == [1, 2, 3, 4]


def test_cli_verify_failure_exit_code(capsys):
    assert main(["verify", "prop5", "--j", "0"]) == 1
    assert "witness" in capsys.readouterr().out
    assert main(["verify", "prop5", "--j", "1", "--corrected"]) == 0


def test_cli_elliptic(capsys):
    assert main(["verify", "elliptic-cmm", "--i", "1", "--j", "1", "--beta", "2"]) == 0
    assert "PASS" in capsys.readouterr().out


def test_cli_usage_errors():
    assert main(["verify", "nonsense"]) == 2
    assert main(["macdonald"]) == 2
    assert main(["verify", "cmm", "--points", "0"]) == 2
    assert main(["verify", "cmm", "--beta", "0"]) == 2


def test_cli_cache_error(monkeypatch, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    monkeypatch.setenv("ELLCMM_CACHE", str(blocker / "sub"))
    assert main(["shiraishi", "--j", "0", "--beta", "1"]) == 3


def test_env_overrides_cache_flag(monkeypatch):
    monkeypatch.setenv("ELLCMM_CACHE", "/from/env")
    cfg = parse_config(["verify", "cmm", "--cache", "/from/flag"])
    assert cfg.cache == "/from/env"


def test_backend_defaults_follow_order():
    assert parse_config(["verify", "elliptic-cmm"]).resolved_backend == "symbolic"
    assert parse_config(["verify", "elliptic-cmm", "--order", "2"]).resolved_backend == "evaluated"


@pytest.mark.parametrize("identity", ["eigen", "s-limit", "cmm"])
def test_cli_quick_identities(identity, capsys):
    assert main(["verify", identity, "--i", "1", "--j", "1"]) == 0


def _without_timing(data):
    for c in data["cells"]:
        c.pop("millis")
    return data


def test_reports_are_deterministic_apart_from_timing(tmp_path):
    args = ["verify", "elliptic-cmm", "--beta", "1", "--i", "1", "--j", "1", "--order", "2", "--seed", "7",
            "--format", "json", "--out"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(args + [str(a)]) == 0
    assert main(args + [str(b)]) == 0
    da, db = json.loads(a.read_text()), json.loads(b.read_text())
    assert da["points"] and da["notes"]["seed"] == 7
    assert _without_timing(da) == _without_timing(db)


def test_macdonald_json_round_trip(capsys):
    from ellcmm.exactfield import Tower
    from ellcmm.laurent import Laurent
    from ellcmm.macdonald import macdonald_A1

    assert main(["macdonald", "--j", "3", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    tower = Tower(("Q", "T"))
    assert data["tower"] == tower.fingerprint
    assert Laurent.from_json(tower, data["terms"]) == macdonald_A1(3, tower)


def test_shiraishi_order_zero_matches_macdonald(capsys):
    assert main(["shiraishi", "--j", "2", "--order", "0", "--beta", "2"]) == 0
    shir = capsys.readouterr().out.splitlines()
    assert main(["macdonald", "--j", "2", "--beta", "2"]) == 0
    mac = capsys.readouterr().out.strip()
    assert shir[1] == f"p^0: {mac}"


def test_shiraishi_j0_order_p_output(capsys):
    from ellcmm.exactfield import Tower
    from ellcmm.shiraishi import series_to_json, shiraishi_series

    assert main(["shiraishi", "--j", "0", "--order", "1", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    expected = series_to_json(shiraishi_series(0, 1, Tower(("Q", "S", "T"))))
    assert data["coeffs"] == expected["coeffs"]
