import os
import subprocess

import pytest

mmtnc = pytest.importorskip("mmtnc")


def test_field_arithmetic():
    f = mmtnc.Field()
    assert f.bits == 8 and f.poly == 0x11B
    assert f.mul(0x02, 0x80) == 0x1B
    assert f.mul(0x53, f.inv(0x53)) == 1
    with pytest.raises(mmtnc.Error):
        f.inv(0)


def test_topology_counts():
    text = mmtnc.topology(2)
    assert sum(line.startswith("node ") for line in text.splitlines()) == 16
    m = mmtnc.graph_metrics(4)
    assert m["node_count"] == 256
    assert m["edge_count_by_kind"] == [192, 192, 64, 64]


def test_schedule_rounds():
    plain = mmtnc.schedule_rounds(8, "plain")
    coded = mmtnc.schedule_rounds(8, "coded")
    assert plain[0] == 3 and coded[0] == 2
    assert sum(plain) == 38


def test_plain_run_verifies():
    r = mmtnc.run(4)
    assert r["verified"]
    assert r["metrics_csv"].startswith("step,round,transmissions")
    cut = mmtnc.run(4, last_step=9)
    assert not cut["verified"] and cut["incomplete_processors"] > 0


def test_coded_run_with_audit():
    r = mmtnc.run(2, mode="coded", policy="retry", seed=3, audit=True)
    assert r["verified"]
    assert r["audit_violations"] == 0 and r["audit_checks"] > 0
    again = mmtnc.run(2, mode="coded", policy="retry", seed=3, audit=True)
    assert again["metrics_csv"] == r["metrics_csv"]


def test_butterfly():
    t = mmtnc.butterfly_trial(field_u=1, ones=True)
    assert t["merged_coeffs"][0] == [0, 0]
    assert mmtnc.butterfly_trial(seed=5)["rank_violations"] == 0


def test_bad_parameters():
    with pytest.raises(ValueError):
        mmtnc.run(6)
    with pytest.raises(ValueError):
        mmtnc.run(2, mode="fast")


@pytest.mark.skipif("MMTNC_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_exit_codes(tmp_path):
    cli = os.environ["MMTNC_CLI"]
    assert subprocess.run([cli, "run", "--n", "2"], capture_output=True).returncode == 0
    assert subprocess.run([cli, "run", "--n", "6"], capture_output=True).returncode == 1
    bad = tmp_path / "bad.csv"
    bad.write_text("nope\n")
    r = subprocess.run([cli, "report", "--metrics", str(bad), "--out-dir", str(tmp_path)], capture_output=True)
    assert r.returncode == 3 and b"line 1" in r.stderr
