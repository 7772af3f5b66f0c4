"""Configuration parsing, scenario running, and the command line surface."""

import copy
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

import gamowlab
from gamowlab.config import (
    config_digest,
    load_config,
    parse_config,
    reference_scenario_path,
)
from gamowlab.errors import ParseError, ValidationError
from gamowlab.runner import run


BASE = {
    "seed": 3,
    "model": {
        "kind": "flat",
        "poles": [{"E_R": 1.0, "Gamma": 0.1}],
    },
    "wavefunctions": {
        "psi": {
            "class": "hardy-lower",
            "terms": [{"coefficient": [1.0, 0.0], "pole": [0.0, 1.0], "multiplicity": 1}],
        },
        "phi": {
            "class": "hardy-lower",
            "terms": [{"coefficient": [1.0, 0.0], "pole": [0.5, 2.0], "multiplicity": 1}],
        },
    },
    "golden_rule": {
        "pole": {"E_R": 1.0, "Gamma": 0.05},
        "channels": [{"type": "constant", "amplitude": 0.8}],
        "born_energy": 1.0,
    },
    "tasks": [
        {"kind": "gamow-evolve", "pole_index": 0, "variant": "decaying", "t_grid": "0:5:21"},
        {"kind": "expand", "psi": "psi", "phi": "phi", "mode": "oracle"},
    ],
}


def _cfg(mutate=None):
    raw = copy.deepcopy(BASE)
    if mutate is not None:
        mutate(raw)
    return parse_config(raw, config_digest(raw))


def test_reference_scenario_parses():
    cfg = load_config(reference_scenario_path())
    assert cfg.seed == 20260814
    assert [t.kind for t in cfg.tasks] == [
        "hardy-check",
        "gamow-evolve",
        "expand",
        "golden-rule",
        "verify-all",
    ]
    assert len(cfg.digest) == 12


def test_digest_ignores_key_order_but_not_values():
    raw = copy.deepcopy(BASE)
    reordered = {k: raw[k] for k in reversed(list(raw))}
    assert config_digest(raw) == config_digest(reordered)
    raw["seed"] = 4
    assert config_digest(raw) != config_digest(BASE)


def test_unknown_fields_are_rejected_by_name():
    with pytest.raises(ParseError) as err:
        _cfg(lambda raw: raw.__setitem__("colour", 1))
    assert "colour" in str(err.value)

    with pytest.raises(ParseError) as err:
        _cfg(lambda raw: raw["model"].__setitem__("flavour", "up"))
    assert "flavour" in str(err.value)

    with pytest.raises(ParseError) as err:
        _cfg(lambda raw: raw["tasks"][0].__setitem__("speed", 11))
    assert "speed" in str(err.value)


def test_dangling_wavefunction_reference_is_named():
    def rename(raw):
        raw["tasks"][1]["psi"] = "psi2"

    with pytest.raises(ValidationError) as err:
        _cfg(rename)
    assert "psi2" in str(err.value)


def test_nonpositive_width_is_rejected():
    def poison(raw):
        raw["model"]["poles"][0]["Gamma"] = -0.5

    with pytest.raises(ValidationError) as err:
        _cfg(poison)
    assert "Gamma must be > 0" in str(err.value)


def test_grid_strings_are_validated():
    for bad in ("0:10", "0:10:1", "5:5:10", "a:b:c", "10:0:5"):
        def poison(raw, s=bad):
            raw["tasks"][0]["t_grid"] = s

        with pytest.raises((ParseError, ValidationError)):
            _cfg(poison)


def test_evolve_task_needs_exactly_one_pole_source():
    def both(raw):
        raw["tasks"][0]["pole"] = {"E_R": 1.0, "Gamma": 0.1}

    with pytest.raises(ParseError):
        _cfg(both)

    def neither(raw):
        del raw["tasks"][0]["pole_index"]

    with pytest.raises(ParseError):
        _cfg(neither)


def test_golden_rule_task_requires_the_section():
    def strip(raw):
        del raw["golden_rule"]
        raw["tasks"] = [{"kind": "golden-rule", "t_grid": "0:10:11"}]

    with pytest.raises(ValidationError):
        _cfg(strip)


def test_malformed_json_reports_the_position(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text('{"seed": 3,,}\n', encoding="utf-8")
    with pytest.raises(ParseError) as err:
        load_config(p)
    assert "line" in str(err.value)

    q = tmp_path / "list.json"
    q.write_text("[1, 2]\n", encoding="utf-8")
    with pytest.raises(ParseError):
        load_config(q)


def test_runs_are_reproducible_byte_for_byte(tmp_path):
    cfg = _cfg()
    _, dir_a = run(cfg, out_root=tmp_path / "a")
    _, dir_b = run(cfg, out_root=tmp_path / "b")
    names_a = sorted(p.name for p in Path(dir_a).iterdir())
    names_b = sorted(p.name for p in Path(dir_b).iterdir())
    assert names_a == names_b
    for name in names_a:
        assert (Path(dir_a) / name).read_bytes() == (Path(dir_b) / name).read_bytes()


def test_thread_count_does_not_change_the_output(tmp_path):
    cfg = _cfg()
    old = os.environ.get("GAMOW_LAB_THREADS")
    try:
        os.environ["GAMOW_LAB_THREADS"] = "1"
        _, dir_serial = run(cfg, out_root=tmp_path / "serial")
        os.environ["GAMOW_LAB_THREADS"] = "4"
        _, dir_pool = run(cfg, out_root=tmp_path / "pool")
    finally:
        if old is None:
            os.environ.pop("GAMOW_LAB_THREADS", None)
        else:
            os.environ["GAMOW_LAB_THREADS"] = old
    for name in sorted(p.name for p in Path(dir_serial).iterdir()):
        assert (Path(dir_serial) / name).read_bytes() == (Path(dir_pool) / name).read_bytes()


def test_report_layout_and_artifact_format(tmp_path):
    cfg = _cfg()
    report, run_dir = run(cfg, out_root=tmp_path)
    text = (Path(run_dir) / "report.json").read_text(encoding="utf-8")
    data = json.loads(text)
    assert data["version"] == gamowlab.__version__
    assert data["config_digest"] == cfg.digest
    assert text == json.dumps(data, indent=2, sort_keys=True) + "\n"
    assert Path(run_dir).name == f"run-{cfg.digest}"

    csv_bytes = (Path(run_dir) / "task-00-gamow-evolve.csv").read_bytes()
    assert b"\r\n" in csv_bytes
    lines = csv_bytes.decode("ascii").strip().splitlines()
    assert lines[0] == "t,re_factor,im_factor,abs_factor_squared"
    first = lines[1].split(",")
    # repr round-trip: parsing the cell back gives the exact float
    assert float(first[0]) == 0.0
    assert len(lines) == 1 + 21


def test_one_failing_task_does_not_block_the_rest(tmp_path):
    def poison(raw):
        raw["tasks"] = [
            {"kind": "gamow-evolve", "pole_index": 0, "variant": "decaying",
             "t_grid": "-2:2:9"},
            {"kind": "expand", "psi": "psi", "phi": "phi", "mode": "oracle"},
        ]

    cfg = _cfg(poison)
    report, _ = run(cfg, out_root=tmp_path)
    statuses = [t.status for t in report.tasks]
    assert statuses == ["fail", "pass"]
    assert not report.all_passed
    assert "TimeDirectionViolation" in report.tasks[0].error


def _cli(*args, cwd=None):
    proc = subprocess.run(
        [sys.executable, "-m", "gamowlab.cli", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
    )
    return proc


def test_cli_runs_a_config_file(tmp_path):
    cfg_path = tmp_path / "scenario.json"
    cfg_path.write_text(json.dumps(BASE), encoding="utf-8")
    proc = _cli("run", "--config", str(cfg_path), "--out", str(tmp_path / "out"))
    assert proc.returncode == 0
    assert "task 0 gamow-evolve: pass" in proc.stdout
    assert "task 1 expand: pass" in proc.stdout
    assert "report:" in proc.stdout


def test_cli_failing_task_yields_exit_one(tmp_path):
    proc = _cli(
        "gamow", "evolve", "--pole", "1.0,0.1", "--variant", "decaying",
        "--t-grid=-3:3:7", "--out", str(tmp_path / "out"),
    )
    assert proc.returncode == 1
    assert "fail" in proc.stdout
    assert "TimeDirectionViolation" in proc.stdout


def test_cli_bad_config_yields_exit_two(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"seed": 1, "tasks": [{"kind": "mystery"}]}', encoding="utf-8")
    proc = _cli("run", "--config", str(bad), "--out", str(tmp_path / "out"))
    assert proc.returncode == 2
    assert "config error" in proc.stderr or "config error" in proc.stdout

    missing = tmp_path / "nope.json"
    proc = _cli("run", "--config", str(missing), "--out", str(tmp_path / "out"))
    assert proc.returncode == 2


def test_cli_bundled_scenario_keyword(tmp_path):
    proc = _cli(
        "hardy", "check", "--config", "reference", "--wavefunction", "psi",
        "--out", str(tmp_path / "out"),
    )
    assert proc.returncode == 0
    assert "hardy-check: pass" in proc.stdout
