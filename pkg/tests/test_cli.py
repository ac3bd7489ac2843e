import hashlib
import json

import pytest

from apgaps.cli import dispatch


def run(argv, capsys):
    code = dispatch(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_no_arguments_is_usage_error(capsys):
    code, out, err = run([], capsys)
    assert code == 1
    assert "usage" in err


def test_unknown_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        dispatch(["mk", "compute", "--bogus", "1"])
    assert exc.value.code == 1


def test_mk_compute_json(capsys):
    code, out, _ = run(["mk", "compute", "--k", "5", "--degree", "0"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["k"] == 5 and doc["degree"] == 0
    assert doc["lower_bound"] == pytest.approx(5 / 3, rel=1e-12)
    assert "r_k" not in doc


def test_mk_compute_with_theta_reports_rk(capsys):
    code, out, _ = run(
        ["mk", "compute", "--k", "5", "--degree", "2", "--theta", "0.49"], capsys
    )
    doc = json.loads(out)
    assert code == 0
    assert doc["r_k"] == 1


def test_tuple_find_and_check(tmp_path, capsys):
    code, out, _ = run(["tuple", "find", "--k", "5"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["k"] == 5 and doc["admissible"]

    f = tmp_path / "t.tup"
    f.write_text("0, 2, 6\n")
    code, out, _ = run(["tuple", "check", "--file", str(f)], capsys)
    assert code == 0 and json.loads(out)["admissible"]

    f.write_text("0, 1, 2\n")
    code, out, _ = run(["tuple", "check", "--file", str(f)], capsys)
    assert code == 2 and not json.loads(out)["admissible"]


def test_sieve_selftest(capsys):
    code, out, _ = run(["sieve", "selftest"], capsys)
    assert code == 0
    assert json.loads(out)["ok"] is True


def test_sieve_demo_reports_sums(capsys):
    code, out, _ = run(
        ["sieve", "demo", "--k", "2", "--X", "20000", "--M", "3", "--a", "1"],
        capsys,
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["k"] == 2 and doc["M"] == 3
    assert doc["S1"] > 0
    assert len(doc["S2_per_m"]) == 2
    assert doc["S_rho"] == pytest.approx(doc["S2"] - doc["rho"] * doc["S1"])


def test_bv_scan_csv(capsys):
    code, out, _ = run(
        ["--format", "csv", "bv", "scan", "--X", "1000", "--qmax", "4"], capsys
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "q,worst_a,discrepancy"
    assert len(lines) == 5  # q = 1..4 all coprime to M = 1


def test_gaps_scan_domain_error_exit_2(capsys):
    code, _, err = run(["gaps", "scan", "--X", "100", "--r", "0"], capsys)
    assert code == 2
    assert "error:" in err


def test_out_writes_file_and_manifest(tmp_path, capsys):
    out_path = tmp_path / "mk.json"
    code, out, _ = run(
        ["--out", str(out_path), "mk", "compute", "--k", "3", "--degree", "1"],
        capsys,
    )
    assert code == 0 and out == ""
    text = out_path.read_text()
    assert json.loads(text)["k"] == 3
    manifest = json.loads((tmp_path / "mk.json.manifest.json").read_text())
    assert manifest["output_sha256"] == hashlib.sha256(text.encode()).hexdigest()
    assert manifest["parameters"]["k"] == 3
    assert manifest["subcommand"].startswith("mk")


def test_threads_flag_does_not_change_output(tmp_path, capsys):
    paths = []
    for i, threads in enumerate(("1", "8")):
        p = tmp_path / ("out%d.json" % i)
        code, _, _ = run(
            ["--threads", threads, "--out", str(p),
             "gaps", "scan", "--X", "1000", "--M", "5", "--a", "2"],
            capsys,
        )
        assert code == 0
        paths.append(p)
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_config_file_provides_defaults(tmp_path, capsys):
    cfgfile = tmp_path / "scan.cfg"
    cfgfile.write_text("X = 1000  # window start\nqmax = 3\n")
    code, out, _ = run(
        ["--config", str(cfgfile), "bv", "scan", "--X", "500", "--qmax", "2"],
        capsys,
    )
    # explicit flags win over the config file
    assert json.loads(out)["X"] == 500

    bad = tmp_path / "bad.cfg"
    bad.write_text("no equals sign here\n")
    code, _, err = run(
        ["--config", str(bad), "bv", "scan", "--X", "500", "--qmax", "2"], capsys
    )
    assert code == 2 and "key=value" in err
