import json

from tfeosc import cli


def run(args):
    return cli.main(args)


def test_params_command(tmp_path, capsys):
    out = tmp_path / "p"
    assert run(["--out", str(out), "params", "--m", "1", "--n", "0"]) == 0
    printed = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert printed["alpha"] == 0.0
    assert printed["mu"] == 5.0
    assert abs(printed["beta"] - 0.142857) < 1e-6
    assert printed["cp_class"] == "C4"
    payload = json.loads((tmp_path / "p.json").read_text())
    assert payload["phi0"] == 1.0 / 120.0
    assert payload["config"]["rel_tol"] == 1e-11


def test_params_out_of_range_exit_code(tmp_path):
    assert run(["--out", str(tmp_path / "x"), "params", "--m", "0", "--n", "0"]) == 5


def test_intervals_command(tmp_path):
    out = tmp_path / "iv"
    assert run(["--out", str(out), "intervals"]) == 0
    data = json.loads((tmp_path / "iv.json").read_text())
    kinds = {r["kind"]: r for r in data["reports"]}
    assert abs(kinds["nonexistence_plus"]["mu_hi"] - 3.22474) < 1e-5
    assert abs(data["tfe4_n_plus"] - 1.9019238) < 1e-6


def test_m1_command_both_signs(tmp_path):
    for lam, ref, tol in (("+1", 0.178318, 1e-5), ("-1", 0.7060378, 1e-6)):
        out = tmp_path / f"m1_{lam}"
        assert run(["--out", str(out), "m1", "--lambda", lam]) == 0
        payload = json.loads((tmp_path / f"m1_{lam}.json").read_text())
        assert abs(payload["G"] - ref) < tol
        assert payload["max_junction_jump"] < 1e-9
        csv_lines = (tmp_path / f"m1_{lam}.csv").read_text().splitlines()
        assert len(csv_lines) == payload["n_pieces"] + 1


def test_m1_single_piece(tmp_path):
    out = tmp_path / "single"
    assert run(["--out", str(out), "m1", "--lambda", "+1", "--pieces", "1"]) == 0
    payload = json.loads((tmp_path / "single.json").read_text())
    assert payload["n_pieces"] == 1


def test_m1_bad_pieces_exit_code(tmp_path):
    assert run(["--out", str(tmp_path / "bad"), "m1", "--lambda", "+1",
                "--pieces", "0"]) == 2


def test_m1_json_format(tmp_path):
    out = tmp_path / "fmt"
    assert run(["--out", str(out), "--format", "json", "m1", "--lambda", "+1"]) == 0
    rows = json.loads((tmp_path / "fmt_table.json").read_text())
    assert rows[0]["piece_index"] == 0
    assert "c5" in rows[0]


def test_orbit_command_exact_seed(tmp_path):
    out = tmp_path / "orb"
    assert run(["--out", str(out), "orbit", "--m", "1", "--n", "0",
                "--lambda", "-1"]) == 0
    payload = json.loads((tmp_path / "orb.json").read_text())
    assert abs(payload["period"] - 0.6961732) < 1e-5
    header = (tmp_path / "orb.csv").read_text().splitlines()[0]
    assert header == "s_or_y,c0,c1,c2,c3,c4,event_flag"


def test_orbit_unstable_branch_march(tmp_path):
    # lam=-1 away from m=1 goes through branch continuation
    out = tmp_path / "marched"
    assert run(["--out", str(out), "orbit", "--m", "1.05", "--n", "0",
                "--lambda", "-1"]) == 0
    payload = json.loads((tmp_path / "marched.json").read_text())
    assert payload["converged"]
    assert 0.70 < payload["period"] < 0.82  # grows from 0.696 at m=1


def test_orbit_no_orbit_exit_code(tmp_path):
    # m = 1.5 > m_h for lam=+1: relaxation never settles -> exit 3
    out = tmp_path / "noorb"
    code = run(["--out", str(out), "--rel-tol", "1e-8", "orbit",
                "--m", "1.5", "--n", "0", "--lambda", "+1"])
    assert code == 3


def test_bifurcate_bad_bracket_exit_code(tmp_path):
    out = tmp_path / "bif"
    code = run(["--out", str(out), "bifurcate", "--n", "0", "--lambda", "+1",
                "--bracket", "1.0", "1.1", "--tol-m", "5e-3"])
    assert code == 4


def test_tfe4_bad_bracket_exit_code(tmp_path):
    # orbit survives on a bracket this short: exit 4 through the same path
    out = tmp_path / "t4"
    code = run(["--out", str(out), "tfe4", "--bracket", "1.0", "1.02"])
    assert code == 4


def test_config_file_merge_and_override(tmp_path):
    cfg_file = tmp_path / "cfg.json"
    cfg_file.write_text(json.dumps({"rel_tol": 1e-9, "reg_eps": 1e-8}))
    out = tmp_path / "c1"
    assert run(["--config", str(cfg_file), "--out", str(out),
                "params", "--m", "1", "--n", "0"]) == 0
    cfg = json.loads((tmp_path / "c1.json").read_text())["config"]
    assert cfg["rel_tol"] == 1e-9 and cfg["reg_eps"] == 1e-8
    out2 = tmp_path / "c2"
    assert run(["--config", str(cfg_file), "--rel-tol", "1e-7",
                "--out", str(out2), "params", "--m", "1", "--n", "0"]) == 0
    cfg2 = json.loads((tmp_path / "c2.json").read_text())["config"]
    assert cfg2["rel_tol"] == 1e-7 and cfg2["reg_eps"] == 1e-8


def test_deterministic_output(tmp_path):
    blobs = []
    for name in ("r1", "r2"):
        out = tmp_path / name
        assert run(["--out", str(out), "orbit", "--m", "1", "--n", "0",
                    "--lambda", "-1"]) == 0
        blobs.append((tmp_path / f"{name}.csv").read_bytes())
    assert blobs[0] == blobs[1]


def test_positive_command(tmp_path, capsys):
    out = tmp_path / "pos"
    assert run(["--out", str(out), "positive", "--m", "0.5", "--n", "0"]) == 0
    payload = json.loads((tmp_path / "pos.json").read_text())
    assert payload["sup_rel_error_vs_explicit"] < 1e-6


def test_identities_command(tmp_path):
    out = tmp_path / "ids"
    assert run(["--out", str(out), "identities", "--m", "1", "--n", "0",
                "--lambda", "-1"]) == 0
    payload = json.loads((tmp_path / "ids.json").read_text())
    assert abs(payload["r1"]) < 1e-6 and abs(payload["r2"]) < 1e-6
