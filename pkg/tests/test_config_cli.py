import csv
import hashlib
import io
import json
import math
import os
import subprocess
import sys

import pytest

from kacstroock.cli import main, write_report
from kacstroock.config import (
    apply_overrides,
    config_from_dict,
    load_config,
    load_preset,
    preset_names,
)
from kacstroock.errors import ParseError, ValidationError
from kacstroock.levy import LevyTriplet, levy_exponent
from kacstroock.verify import StatReport

BASE = {"triplet": {"family": "poisson", "params": {"rate": 1.0}}, "thetas": [1.5708], "epsilon": 0.05}


def write(tmp_path, doc, name="cfg.json"):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return p


def test_round_trip(tmp_path):
    cfg = load_config(write(tmp_path, BASE))
    assert cfg.thetas == (1.5708,) and cfg.epsilon == 0.05 and cfg.warnings == ()
    again = config_from_dict(json.loads(json.dumps(cfg.to_dict())))
    assert again == cfg


def test_epsilon_zero_names_field(tmp_path):
    with pytest.raises(ValidationError) as exc:
        load_config(write(tmp_path, {**BASE, "epsilon": 0}))
    assert exc.value.field == "epsilon"


@pytest.mark.parametrize("key,value,field", [
    ("thetas", [], "thetas"),
    ("replicas", 0, "replicas"),
    ("unknown", 1, "unknown"),
    ("triplet", {"family": "poisson", "params": {"rate": -1}}, "triplet.params.rate"),
])
def test_validation_fields(tmp_path, key, value, field):
    with pytest.raises(ValidationError) as exc:
        load_config(write(tmp_path, {**BASE, key: value}))
    assert exc.value.field == field


def test_missing_required_field(tmp_path):
    doc = dict(BASE)
    del doc["epsilon"]
    with pytest.raises(ValidationError) as exc:
        load_config(write(tmp_path, doc))
    assert exc.value.field == "epsilon"


def test_inconsistent_triplet_is_validation_error(tmp_path):
    doc = {**BASE, "triplet": {"family": "poisson", "params": {"rate": 1.0}, "sigma": 2.0}}
    with pytest.raises(ValidationError) as exc:
        load_config(write(tmp_path, doc))
    assert exc.value.field == "triplet"


def test_parse_error_reports_line(tmp_path):
    with pytest.raises(ParseError, match="line 3"):
        load_config(write(tmp_path, '{\n  "epsilon": 0.1,\n  oops\n}'))
    with pytest.raises(ParseError):
        load_config(tmp_path / "missing.json")


def test_null_degenerate_loads_with_warning(tmp_path):
    cfg = load_config(write(tmp_path, {**BASE, "thetas": [2 * math.pi]}))
    assert len(cfg.warnings) == 1 and "NullDegenerate" in cfg.warnings[0]


def test_presets_load():
    names = preset_names()
    assert set(names) == {"poisson-pi-half", "poisson-pi", "brownian-theta1", "compound-poisson-symmetric",
                          "stable-alpha1.5", "md-poisson-2d"}
    for n in names:
        cfg = load_preset(n)
        assert cfg.name == n and cfg.master_seed > 0
    assert load_preset("md-poisson-2d").master_seed == load_preset("poisson-pi-half").master_seed
    assert "RealDegenerate" in load_preset("poisson-pi").warnings[0]


def test_overrides_win():
    cfg = apply_overrides(load_preset("poisson-pi-half"), epsilon=0.2, replicas=7, seed=3, T=2.0, thetas=[1.0])
    assert (cfg.epsilon, cfg.replicas, cfg.master_seed, cfg.T, cfg.thetas) == (0.2, 7, 3, 2.0, (1.0,))
    with pytest.raises(ValidationError):
        apply_overrides(cfg, epsilon=-1.0)


# -- CLI ------------------------------------------------------------------------------


def test_classify_real_degenerate(capsys):
    assert main(["classify", "--family", "poisson", "--rate", "1", "--theta", "3.14159265"]) == 0
    assert capsys.readouterr().out.strip() == "RealDegenerate"


def test_classify_inadmissible_vector(capsys):
    code = main(["classify", "--family", "poisson", "--theta", f"{math.pi / 2},{math.pi / 2}"])
    assert code == 2
    assert "a(theta_1-theta_2)=0" in capsys.readouterr().err


def test_exponent_full_precision(capsys):
    trip = LevyTriplet.symmetric_stable(1.5)
    assert main(["exponent", "--family", "symmetric_stable", "--alpha", "1.5", "--u", "0.1,0.7,2.9"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 3
    for row in rows:
        ev = levy_exponent(float(row["u"]), trip)
        assert float(row["a"]) == ev.a_part and float(row["b"]) == ev.b_part
        assert float(row["c"]) == ev.normalization()


def test_hypothesis_rows(capsys):
    assert main(["hypothesis", "--preset", "md-poisson-2d", "--epsilons", "0.2"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert {r["which"] for r in rows} == {"H1", "H2", "H3", "HBarCross"}


def test_missing_config_exit_2(capsys):
    assert main(["verify", "--config", "missing.json"]) == 2
    assert "missing.json" in capsys.readouterr().err


def test_usage_error_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["simulate"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_refusals_exit_2(tmp_path, capsys):
    code = main(["simulate", "--family", "poisson", "--theta", str(2 * math.pi), "--epsilon", "0.1",
                 "--out-dir", str(tmp_path / "a"), "--workers", "1"])
    assert code == 2 and "NullDegenerate" in capsys.readouterr().err
    code = main(["verify", "--preset", "md-poisson-2d", "--theta", f"{math.pi / 2},{math.pi / 2}",
                 "--out-dir", str(tmp_path / "b"), "--workers", "1"])
    assert code == 2 and "a(theta_1-theta_2)=0" in capsys.readouterr().err
    assert not (tmp_path / "b").exists()


def test_simulate_artifacts_and_force(tmp_path, monkeypatch):
    monkeypatch.setenv("KACSTROOCK_OUT", str(tmp_path / "env"))
    args = ["simulate", "--preset", "md-poisson-2d", "--replicas", "20", "--paths", "2", "--dump-driver", "1",
            "--workers", "1"]
    assert main(args) == 0
    out = tmp_path / "env"
    names = sorted(os.listdir(out))
    assert "path_r00001_c1.csv" in names and "driver_r00000.csv" in names and "manifest.json" in names
    header = (out / "path_r00000_c0.csv").read_text().splitlines()[0]
    assert header == "t,re,im,component"
    first = (out / "manifest.json").read_bytes()
    assert main(args) == 2  # refuses to overwrite
    assert main(args + ["--force"]) == 0
    assert (out / "manifest.json").read_bytes() == first


def test_verify_exit_codes_and_determinism(tmp_path):
    base = ["verify", "--preset", "poisson-pi-half", "--replicas", "2000", "--workers", "2"]
    assert main(base + ["--out-dir", str(tmp_path / "a")]) == 0
    assert main(base + ["--out-dir", str(tmp_path / "b"), "--workers", "1"]) == 0
    for name in ("report.json", "summary.csv", "manifest.json", "variance_profile.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    manifest = json.loads((tmp_path / "a" / "manifest.json").read_text())
    for entry in manifest["files"]:
        data = (tmp_path / "a" / entry["name"]).read_bytes()
        assert hashlib.sha256(data).hexdigest() == entry["sha256"]
    # below one expected jump per path the endpoint is far from Gaussian
    assert main(["verify", "--preset", "poisson-pi-half", "--epsilon", "1.5", "--replicas", "2000",
                 "--out-dir", str(tmp_path / "c"), "--workers", "1"]) == 1
    assert "fail" in (tmp_path / "c" / "summary.csv").read_text()


def test_write_report_empty(tmp_path):
    manifest = write_report(StatReport({}, 0), tmp_path / "r")
    assert [f["name"] for f in manifest["files"]] == ["report.json", "summary.csv"]
    lines = (tmp_path / "r" / "summary.csv").read_text().splitlines()
    assert lines == ["name,estimate,standard_error,target,tolerance,verdict,note"]


def test_write_report_unwritable_target(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    with pytest.raises(OSError):
        write_report(StatReport({}, 0), blocker / "out")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "kacstroock", "classify", "--family", "poisson",
                           "--theta", str(2 * math.pi)], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "NullDegenerate"


def test_acceptance_scenario_passes_and_manifest_is_stable(tmp_path):
    for sub in ("a", "b"):
        assert main(["verify", "--preset", "poisson-pi-half", "--out-dir", str(tmp_path / sub), "--workers", "4"]) == 0
    assert (tmp_path / "a" / "manifest.json").read_bytes() == (tmp_path / "b" / "manifest.json").read_bytes()
    report = json.loads((tmp_path / "a" / "report.json").read_text())
    assert report["passed"] and report["n_replicas"] == 10_000
