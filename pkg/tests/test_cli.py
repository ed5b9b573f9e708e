import json

import pytest

from vilenkin.cli import main
from vilenkin.experiments import ExperimentConfig

FAST = {
    "transform-check": ["--radices", "2,3", "--trials", "20"],
    "weaktype": ["--radices", "2,2,2", "--trials", "200", "--p-grid", "1.2,1.5,1.8"],
    "extrapolation": ["--radices", "2,3", "--level-repeat", "2"],
    "lemma1": ["--radices", "2", "--level-repeat", "5"],
    "convergence": ["--radices", "2", "--level-repeat", "6"],
}


def run_cli(tmp_path, name, args, tag="a"):
    out = tmp_path / f"{name}-{tag}.out"
    rc = main([name, *args, "--out", str(out)])
    return rc, out.read_bytes()


@pytest.mark.parametrize("name", sorted(FAST))
def test_deterministic_and_stamped(tmp_path, name):
    rc1, a = run_cli(tmp_path, name, FAST[name], "a")
    rc2, b = run_cli(tmp_path, name, FAST[name], "b")
    assert rc1 == rc2 == 0
    assert a == b
    if name == "lemma1":
        doc = json.loads(a)
        assert len(doc["config_hash"]) == 16 and doc["pass"] is True
    else:
        assert a.startswith(b"# config-hash=")
        assert b"\r\n" not in a


def test_hash_ignores_output_path():
    a = ExperimentConfig(experiment="weaktype", out="x.csv")
    b = ExperimentConfig(experiment="weaktype", out="y.csv")
    assert a.hash() == b.hash()
    assert a.hash() != ExperimentConfig(experiment="weaktype", seed=1).hash()


def test_weaktype_headers_and_sidecar(tmp_path):
    rc, text = run_cli(tmp_path, "weaktype", FAST["weaktype"])
    assert rc == 0
    lines = text.decode().splitlines()
    assert lines[1] == "p,C_p,witness_set_size"
    fit = json.loads((tmp_path / "weaktype-a.out.fit.json").read_text())
    assert {"C", "m", "r"} <= set(fit)


def test_extrapolation_header(tmp_path):
    rc, text = run_cli(tmp_path, "extrapolation", FAST["extrapolation"])
    assert rc == 0
    assert text.decode().splitlines()[1] == "epsilon,C,worst_f_id,margin"


def test_transform_check_header(tmp_path):
    rc, text = run_cli(tmp_path, "transform-check", FAST["transform-check"])
    assert text.decode().splitlines()[1] == "trial,forward_err,roundtrip_err,parseval_err"
    assert len(text.decode().splitlines()) == 22


def test_convergence_constant_function_zero():
    # S_j of a constant is the constant for every j >= 1
    from vilenkin.experiments import tail_deviation
    from vilenkin.radix import make_radix_sequence
    import numpy as np
    R = make_radix_sequence([2, 3, 2])
    for J in (1, 3, R.size):
        assert np.all(tail_deviation(R, np.full(R.size, 2.0 + 0j), J) < 1e-12)


def test_convergence_rows(tmp_path):
    rc, text = run_cli(tmp_path, "convergence", FAST["convergence"])
    rows = [l.split(",") for l in text.decode().splitlines()[2:]]
    assert rows and all(r[2] == "0" for r in rows if r[0] == "64")


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"radices": [2, 3], "trials": 5, "seed": 3}, indent=1))
    out = tmp_path / "o.csv"
    assert main(["transform-check", "--config", str(cfg), "--trials", "7",
                 "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 9


@pytest.mark.parametrize("payload,field,line", [
    ('{\n "radices": "2,1"\n}', "radices", 2),
    ('{\n "seed": 1,\n "trials": 0\n}', "trials", 3),
    ('{\n "bogus": 1\n}', "bogus", 2),
    ('{\n "seed": "x"\n}', "seed", 2),
    ('{"seed": ', "<file>", 1),
])
def test_config_errors_name_field_and_line(tmp_path, capsys, payload, field, line):
    cfg = tmp_path / "bad.json"
    cfg.write_text(payload)
    assert main(["weaktype", "--config", str(cfg)]) == 2
    err = capsys.readouterr().err
    assert f"field '{field}'" in err and f"line {line}" in err


def test_flag_errors(capsys):
    assert main(["weaktype", "--radices", "2,2", "--p-grid", "0.5"]) == 2
    assert "p_grid" in capsys.readouterr().err
    assert main(["lemma1", "--radices", "2,2", "--epsilon", "-1"]) == 2
    with pytest.raises(SystemExit):
        main(["nonsense"])


def test_negative_margin_fails_run(tmp_path, monkeypatch):
    from vilenkin import experiments
    from vilenkin.weak_type import GeneralizedRow, GeneralizedWeakTable

    def broken(*args, **kwargs):
        return GeneralizedWeakTable([GeneralizedRow(0.0, 1.0, "f", 1.0, -1e-3)])

    monkeypatch.setattr(experiments, "generalized_weak_check", broken)
    rc = main(["extrapolation", "--radices", "2,2", "--out", str(tmp_path / "x.csv")])
    assert rc == 1
