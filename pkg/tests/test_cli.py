import json

import pytest

from filterlab.cli import ConfigError, config_to_campaign, main, parse_config
from filterlab.experiments import RESULT_COLUMNS

BASIC_CONFIG = """\
# calibration campaign
[experiment]
trials = 100
seed = 7
fp_samples = 2000

[filter]
kind = baseline_bloom
n = 1000
eps = 0.015625
t = 0
u_bits = 32

[adversary]
kind = random_probe
"""


def _write(tmp_path, text, name="cfg.ini"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_parse_config_sections_and_lines(tmp_path):
    path = _write(tmp_path, BASIC_CONFIG)
    sections = parse_config(path)
    assert sections["experiment"]["trials"] == (100, 3)
    assert sections["filter"]["eps"] == (0.015625, 10)
    assert sections["adversary"]["kind"] == ("random_probe", 15)


def test_parse_config_power_of_two_shorthand(tmp_path):
    path = _write(tmp_path, "[x]\neps = 2^-6\n")
    assert parse_config(path)["x"]["eps"] == (0.015625, 2)


def test_parse_config_rejects_garbage_with_line(tmp_path):
    path = _write(tmp_path, "[x]\nnot a kv line\n")
    with pytest.raises(ConfigError, match=":2:"):
        parse_config(path)
    path2 = _write(tmp_path, "orphan = 1\n", name="c2.ini")
    with pytest.raises(ConfigError, match=":1:"):
        parse_config(path2)


def test_experiment_writes_csv_with_fixed_header(tmp_path, capsys):
    cfg = _write(tmp_path, BASIC_CONFIG)
    out = tmp_path / "results.csv"
    assert main(["experiment", "--config", cfg, "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == ",".join(RESULT_COLUMNS)
    assert len(lines) == 2
    row = dict(zip(RESULT_COLUMNS, lines[1].split(",")))
    assert row["filter"] == "baseline_bloom"
    assert row["adversary"] == "random_probe"
    assert row["trials"] == "100"
    assert float(row["success_rate"]) <= 0.1


def test_experiment_rejects_zero_trials(tmp_path, capsys):
    bad = BASIC_CONFIG.replace("trials = 100", "trials = 0")
    cfg = _write(tmp_path, bad)
    rc = main(["experiment", "--config", cfg, "--out", str(tmp_path / "o.csv")])
    assert rc == 2
    assert "trials must be >= 1" in capsys.readouterr().err


def test_experiment_reports_missing_section_and_bad_values(tmp_path, capsys):
    cfg = _write(tmp_path, "[experiment]\ntrials = 10\n")
    assert main(["experiment", "--config", cfg, "--out", str(tmp_path / "o")]) == 2
    assert "missing required section" in capsys.readouterr().err

    bad_eps = BASIC_CONFIG.replace("eps = 0.015625", "eps = 3.0")
    cfg2 = _write(tmp_path, bad_eps, name="c3.ini")
    assert main(["experiment", "--config", cfg2, "--out", str(tmp_path / "o")]) == 2
    assert "eps must be a probability" in capsys.readouterr().err


def test_identical_runs_are_identical_outside_wall_time(tmp_path):
    # every column is reproducible from (config, seed); wall_time_ms is the
    # one physical measurement and is masked here
    cfg = _write(tmp_path, BASIC_CONFIG.replace("trials = 100", "trials = 30"))
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["experiment", "--config", cfg, "--out", str(out1)]) == 0
    assert main(["experiment", "--config", cfg, "--out", str(out2)]) == 0
    t_idx = RESULT_COLUMNS.index("wall_time_ms")

    def mask(path):
        rows = [r.split(",") for r in path.read_text().strip().splitlines()]
        for r in rows[1:]:
            r[t_idx] = "-"
        return rows

    assert mask(out1) == mask(out2)


def test_json_output(tmp_path):
    cfg = _write(tmp_path, BASIC_CONFIG.replace("trials = 100", "trials = 20"))
    out = tmp_path / "r.json"
    assert main(["experiment", "--config", cfg, "--out", str(out),
                 "--format", "json"]) == 0
    payload = json.loads(out.read_text())
    assert payload["schema_version"] == 1
    assert payload["columns"] == list(RESULT_COLUMNS)
    assert len(payload["records"]) == 1


def test_config_to_campaign_builds_game_config(tmp_path):
    cfg, trials, seed, fp_samples = config_to_campaign(_write(tmp_path, BASIC_CONFIG))
    assert trials == 100 and seed == 7 and fp_samples == 2000
    assert cfg.filter_kind == "baseline_bloom"
    assert cfg.params.n == 1000
    assert cfg.params.eps == 0.015625


def test_config_shielded_with_options(tmp_path):
    text = BASIC_CONFIG.replace("kind = baseline_bloom",
                                "kind = baseline_bloom\nshield = true\nm = 9592")
    text = text.replace("kind = random_probe",
                        "kind = seed_exposed\nexpose = full\ncandidate_budget = 5000")
    cfg, *_ = config_to_campaign(_write(tmp_path, text))
    assert cfg.shielded and cfg.bloom_bits == 9592
    assert cfg.expose == "full"
    assert cfg.adversary_opts == {"candidate_budget": 5000}


def test_unknown_filter_kind_rejected(tmp_path, capsys):
    bad = BASIC_CONFIG.replace("kind = baseline_bloom", "kind = quotient")
    assert main(["experiment", "--config", _write(tmp_path, bad),
                 "--out", "x"]) == 2
    assert "unknown filter kind" in capsys.readouterr().err


def test_selftest_single_fast_criterion(tmp_path, capsys):
    report = tmp_path / "report.txt"
    rc = main(["selftest", "--criteria", "9", "--out", str(report)])
    assert rc == 0
    text = report.read_text()
    assert "PASS criterion  9" in text
    assert "seed=" in text


def test_audit_memory_matches_serialization(tmp_path, capsys):
    rc = main(["audit-memory", "--filter", "cuckoo_random_query", "--n", "64",
               "--eps", "0.125", "--t", "256", "--u-bits", "12"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["match"] is True
    assert payload["declared_bits"] == payload["serialized_bits"]


def test_seed_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("FILTERLAB_SEED", "31337")
    text = "\n".join(l for l in BASIC_CONFIG.splitlines() if not l.startswith("seed"))
    text = text.replace("trials = 100", "trials = 10")
    cfg, trials, seed, _ = config_to_campaign(_write(tmp_path, text))
    assert seed == 31337
