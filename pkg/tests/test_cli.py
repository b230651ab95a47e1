import io
import json

import pytest

from cvdamp.cli import run
from cvdamp.config import RunConfig, load_config
from cvdamp.errors import InvalidArgument

FIG = ["--r", "0.5", "--gamma-amp", "0.5", "--gamma-phase", "0.5", "--nbar", "0.5"]


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def test_classify_at_time_zero():
    code, text = call("classify", "--r", "0.5")
    assert code == 0 and "region: NPT_ENTANGLED" in text


def test_ln_json_echoes_every_numeric_flag():
    code, text = call("ln", *FIG, "--t", "0.25", "--json")
    rep = json.loads(text)
    assert code == 0 and rep["command"] == "ln"
    params = rep["params"]
    assert params["time"] == 0.25 and params["state.r"] == 0.5
    assert all(params[f"channel.{k}_{i}"] == 0.5 for k in ("gamma_amp", "gamma_phase", "nbar") for i in (1, 2))


def test_per_mode_flags_override_shared_ones():
    code, text = call("ln", *FIG, "--nbar-2", "0.1", "--json")
    params = json.loads(text)["params"]
    assert params["channel.nbar_1"] == 0.5 and params["channel.nbar_2"] == 0.1


def test_usage_errors_exit_one():
    assert call("nonsense")[0] == 1
    assert call("ln", "--r", "-1")[0] == 1
    assert call("ln", "--r", "0.5", "--eps", "2")[0] == 1
    assert call("crossings", "--r", "0.5", "--t-max", "1", "--grid", "1")[0] == 1
    code, text = call("chi", "--mu1", "oops", "--mu2", "0,0", "--json")
    assert code == 1 and json.loads(text)["error"] == "usage"


def test_numerical_errors_exit_two():
    code, text = call("oracle", "--r", "1.0", "--nbar", "2", "--gamma-amp", "0.1", "--t", "0.3",
                      "--cutoff", "6", "--json")
    assert code == 2
    err = json.loads(text)
    assert err["error"] == "cutoff-too-small" and "edge_population" in err["diagnostics"]


def test_spectrum_csv(tmp_path):
    path = tmp_path / "block.csv"
    code, text = call("spectrum", "--block", "3", "--r", "0.5", "--t", "0.2", "--gamma-phase", "0.5",
                      "--csv", str(path))
    lines = path.read_text().splitlines()
    assert code == 0 and lines[0].startswith("# cv-damp v") and lines[1] == "m,index,value"
    assert len(lines) == 2 + 4 and all(row.startswith("3,") for row in lines[2:])
    code, _ = call("spectrum", "--block", "-2", "--kind", "density", "--r", "0.5", "--t", "0.2")
    assert code == 0


def test_curves_are_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert call("curves", *FIG, "--t-max", "1", "--steps", "4", "--out", str(path))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[1].startswith("# ") and "t_max=1.0" in lines[1]
    assert lines[2] == "t,m_simon,m_ppt,m_sep,LN,CI" and len(lines) == 3 + 5


def test_entropy_bits_and_coherent_info():
    _, nats = call("entropy", *FIG, "--t", "0.3", "--json")
    _, bits = call("entropy", *FIG, "--t", "0.3", "--bits", "--json")
    s_n, s_b = json.loads(nats)["entropy"], json.loads(bits)["entropy"]
    assert s_b == pytest.approx(s_n / 0.6931471805599453)
    code, text = call("coherent-info", *FIG, "--t", "0.05")
    assert code == 0 and "coherent_info_1" in text


def test_chi_and_crossings():
    code, text = call("chi", "--mu1", "0.3,0.1", "--mu2", "0,-0.2", *FIG, "--t", "0.7", "--json")
    assert code == 0 and json.loads(text)["chi"].startswith("0.900046386375")
    code, text = call("crossings", *FIG, "--t-max", "2", "--grid", "30", "--json")
    rep = json.loads(text)
    assert code == 0 and rep["ordered"] and rep["t1"] < rep["t2"] < rep["t3"]


def test_prove_det(tmp_path):
    path = tmp_path / "report.json"
    code, text = call("prove-det", "--m-max", "5", "--json", str(path))
    assert code == 0 and "violations: 0" in text
    rep = json.loads(path.read_text())
    assert rep["violations"] == 0 and len(rep["minors"]) == sum(m + 1 for m in range(1, 6))


def test_oracle_compare():
    code, text = call("oracle", "--r", "0.2", "--gamma-amp", "0.3", "--gamma-phase", "0.2",
                      "--t", "0.2", "--cutoff", "8", "--compare")
    assert code == 0 and "abs diff" in text and "negativity" in text


def test_config_file_merge(tmp_path):
    cfg = tmp_path / "run.yaml"
    cfg.write_text("state: {preset: squeezed_thermal, r: 0.4, n0: 0.1}\nchannel: {gamma_amp_1: 0.2}\ntime: 0.5\n")
    code, text = call("ln", "--config", str(cfg), "--t", "0.1", "--json")
    params = json.loads(text)["params"]
    assert code == 0 and params["time"] == 0.1 and params["state.n0"] == 0.1
    assert params["channel.gamma_amp_1"] == 0.2 and params["channel.gamma_amp_2"] == 0.0


def test_config_rejects_unknown_keys(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"state": {"r": 0.4, "squeeze": 1}}))
    with pytest.raises(InvalidArgument):
        load_config(cfg)
    assert call("ln", "--config", str(cfg))[0] == 1
    cfg.write_text(json.dumps({"tolerances": {"eps_trace": 0}}))
    with pytest.raises(InvalidArgument):
        load_config(cfg)


def test_explicit_state_requires_coefficients():
    with pytest.raises(InvalidArgument):
        RunConfig(state={"preset": "explicit", "A10": 0.7}).gaussian_state()
    code, _ = call("ln", "--preset", "explicit", "--A10", "0.7", "--A20", "0.7", "--B0-re", "0.3")
    assert code == 0
