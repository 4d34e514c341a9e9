"""End-to-end command-line behaviour: configuration parsing, report
emission (text, CSV, PNG) and the exit-code contract."""

import json

import pytest

from elldilog.cli import (ConfigError, Report, _parse_divisor, load_config,
                          main)
from elldilog.divisors import build_Pk


def test_load_bundled_config():
    cfg = load_config(None)
    assert cfg.curve.disc == 37
    assert cfg.generator.x == 0 and cfg.generator.y == 0
    assert [lab for lab, _, _ in cfg.divisors] == ["P3", "P4", "P6",
                                                   "P10-4P5"]
    assert cfg.places == [2, 37]
    assert cfg.ratio_tolerance == 5e-4


def test_parse_divisor_forms(C37, G37):
    assert _parse_divisor({"Pk": 4}, C37, G37) == build_Pk(4, G37, C37)
    combo = _parse_divisor(
        {"combo": [[1, {"Pk": 10}], [-4, {"Pk": 5}]]}, C37, G37)
    assert combo == build_Pk(10, G37, C37) + (-4) * build_Pk(5, G37, C37)
    single = _parse_divisor({"multiple": 3}, C37, G37)
    assert single[C37.scalar_mul(3, G37)] == 1
    pts = _parse_divisor({"points": [[2, "0", "0"], [-1, "1", "0"]]},
                         C37, G37)
    assert pts[G37] == 2
    with pytest.raises(ConfigError):
        _parse_divisor({"label": "x"}, C37, G37)


def test_load_config_bad_file(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(str(p))
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.json"))


def test_load_config_invalid_content(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"curve": {"a1": "0"}}))
    with pytest.raises(ConfigError):
        load_config(str(p))


def test_report_rendering_and_csv(tmp_path):
    r = Report(header=("name", "value"))
    r.add("alpha", "1.5")
    r.add("beta", "-2.0")
    text = r.render()
    assert "alpha" in text and text.endswith("overall: PASS\n")
    out = tmp_path / "rep.csv"
    r.write_csv(str(out))
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "name,value"
    assert lines[1] == "alpha,1.5"
    png = tmp_path / "rep.png"
    r.write_png(str(png), value_col=1)
    assert png.stat().st_size > 0


def test_reproduce_example_passes(capsys, tmp_path):
    out = tmp_path / "table.csv"
    code = main(["reproduce-example", "--out", str(out)])
    captured = capsys.readouterr().out
    assert code == 0
    assert "overall: PASS" in captured
    for r in ("-8.000000", "-26.000000", "-90.000000", "-248.000000"):
        assert r in captured
    assert "eps=-1" in captured
    assert out.exists()
    assert (tmp_path / "table.png").exists()


def test_dilog_subcommand(capsys):
    assert main(["dilog", "--divisor", "P3"]) == 0
    outp = capsys.readouterr().out
    assert "P3" in outp and "-4.4939913166" in outp


def test_dilog_unknown_label_is_config_error(capsys):
    assert main(["dilog", "--divisor", "nope"]) == 2


def test_lvalue_subcommand(capsys):
    assert main(["lvalue", "--mode", "afe", "--terms", "80"]) == 0
    outp = capsys.readouterr().out
    assert "0.381575408261" in outp


def test_identities_subcommand(capsys):
    assert main(["identities", "--samples", "3", "--seed", "42"]) == 0
    outp = capsys.readouterr().out
    assert "seed = 42" in outp
    assert "overall: PASS" in outp
    assert "fail" not in outp.replace("failed", "")


def test_check_skip_archimedean(capsys):
    assert main(["check", "--skip-archimedean"]) == 0
    outp = capsys.readouterr().out
    assert "infinity" not in outp


def test_exit_code_for_bad_config(tmp_path, capsys):
    p = tmp_path / "broken.json"
    p.write_text("{]")
    assert main(["check", "--config", str(p)]) == 2


def test_exit_code_for_unsupported_place(tmp_path, capsys):
    cfg = {
        "curve": {"a1": "0", "a2": "0", "a3": "0", "a4": "0", "a6": "1"},
        "generators": [{"x": "0", "y": "1"}],
        "multiple_range": 3,
        "divisors": [{"label": "D", "multiple": 1}],
        "places": [3],
    }
    p = tmp_path / "additive.json"
    p.write_text(json.dumps(cfg))
    assert main(["check", "--config", str(p)]) == 4


def test_exit_code_for_precision_failure(monkeypatch, capsys):
    from elldilog.tate import PrecisionError
    import elldilog.cli as cli

    def boom(*a, **k):
        raise PrecisionError("synthetic")

    monkeypatch.setattr(cli, "cmd_check", boom)
    assert main(["check"]) == 3


def test_exit_code_for_failed_verdict(tmp_path, capsys):
    # an unbalanced divisor fails the checks -> exit code 1
    cfg = json.loads((_bundled_text()))
    cfg["divisors"] = [{"label": "P5", "Pk": 5}]
    p = tmp_path / "fail.json"
    p.write_text(json.dumps(cfg))
    assert main(["check", "--config", str(p)]) == 1
    outp = capsys.readouterr().out
    assert "overall: FAIL" in outp


def _bundled_text():
    from importlib import resources
    return (resources.files("elldilog") / "data" / "curve37a.json").read_text()
