import json
import subprocess
import sys
import numpy as np
import pytest

from tcpsync.cli import cmd_analyze, cmd_simulate_packets, cmd_sweep
from tcpsync.presets import get_preset, preset_names
from tcpsync.units import mbps_to_pkts_per_s


def analyze_config(**over):
    cfg = {
        "kind": "analyze",
        "protocol": {"variant": "compound"},
        "regime": "intermediate",
        "network": {
            "edge_capacity_per_flow_pkts_per_s": 300.0,
            "core_capacity_factor": 1.97,
            "rtt_ms": [100.0, 110.0],
            "edge_buffer_pkts": 50.0,
            "core_buffer_pkts": 100.0,
        },
    }
    cfg.update(over)
    return cfg


def run_cli(args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "tcpsync.cli", *args],
        capture_output=True, text=True, cwd=cwd,
    )


def test_unit_conversion_reference():
    assert mbps_to_pkts_per_s(100.0) == pytest.approx(8333.333333333334, abs=0)
    # exact rational: 100e6 / 12000 = 25000/3
    assert mbps_to_pkts_per_s(100.0) == 25000.0 / 3.0


def test_analyze_report_structure_and_table_row():
    """Symmetric Compound intermediate report carries the closed-form
    coupling K = (alpha w^(k-2) + beta) C~/4."""
    rep = cmd_analyze(analyze_config())
    assert {"config", "per_set", "coupled_equilibrium", "coupling", "sync"} <= set(rep)
    spec_alpha, spec_beta, spec_k = 0.125, 0.5, 0.75
    from tcpsync.equilibrium import solve_single
    from tcpsync.loss_models import INTERMEDIATE, NetworkParams

    net = NetworkParams(c_prime=300.0, tau=0.105, b=50.0,
                        C_tilde=1.97 * 300.0, B=100.0)
    w = solve_single(__import__("tcpsync").ProtocolSpec.compound(), INTERMEDIATE, net).w_star
    expected = (spec_alpha * w ** (spec_k - 2) + spec_beta) * 1.97 * 300.0 / 4.0
    assert rep["coupling"]["K_per_s"] == pytest.approx(expected, rel=1e-12)


def test_analyze_zero_detuning_inphase_root():
    cfg = analyze_config()
    cfg["network"]["rtt_ms"] = [100.0, 100.0]
    rep = cmd_analyze(cfg)
    sel = rep["sync"]["selected_inphase"]
    assert sel is not None
    assert sel["phi0_rad"] == pytest.approx(0.0, abs=1e-12)
    assert sel["order_r"] == pytest.approx(1.0, abs=1e-12)


def test_analyze_report_roundtrip():
    """Re-running on the embedded resolved config reproduces the report."""
    rep1 = cmd_analyze(analyze_config())
    rep2 = cmd_analyze(json.loads(json.dumps(rep1["config"])))
    assert json.dumps(rep1, sort_keys=True) == json.dumps(rep2, sort_keys=True)


def test_sweep_coherence_monotone(tmp_path):
    summary = cmd_sweep(get_preset("fig1-coherence"), tmp_path)
    rows = summary["rows"]
    rs = [r["order_r"] for r in rows]
    assert all(b >= a - 1e-9 for a, b in zip(rs, rs[1:]))
    assert rs[-1] > 0.999
    assert (tmp_path / "sweep.csv").exists()


def test_preset_listing():
    names = preset_names()
    for expected in ("fig4-sync-smallbuf", "fig5-sync-interbuf", "fig6-queues",
                     "fig7-queues", "fig8-queues", "fig9-queues"):
        assert expected in names
    preset = get_preset("fig8-queues")
    assert set(preset["variants"]) == {"buf15", "buf100", "intermediate"}
    inter = preset["variants"]["intermediate"]
    assert inter["topology"]["core_buffer_pkts"] == 153


def test_intermediate_buffer_rule_full_scale():
    """The dimensioning rule at full scale: 197 Mbps, 120 flows, 250 ms."""
    from tcpsync.presets import intermediate_buffer

    assert intermediate_buffer(mbps_to_pkts_per_s(197.0), 120) == 375


def test_cli_exit_codes(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    proc = run_cli(["analyze", "--config", str(bad), "--out", str(tmp_path)])
    assert proc.returncode == 1
    err = json.loads(proc.stderr)
    assert err["error"]["type"] == "config"

    # infeasible radicand: tiny buffer-per-batch ratio -> numerical failure
    cfg = analyze_config()
    cfg["regime"] = "small-buffer"
    cfg["network"]["edge_buffer_pkts"] = 1.0
    path = tmp_path / "infeasible.json"
    path.write_text(json.dumps(cfg))
    proc = run_cli(["analyze", "--config", str(path), "--out", str(tmp_path)])
    assert proc.returncode == 2
    err = json.loads(proc.stderr)
    assert err["error"]["type"] == "numerical"

    proc = run_cli(["preset", "list"])
    assert proc.returncode == 0
    assert "fig8-queues" in proc.stdout


def test_cli_analyze_writes_report(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(analyze_config()))
    proc = run_cli(["analyze", "--config", str(path), "--out", str(tmp_path)])
    assert proc.returncode == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["sync"]["roots"]


def packet_config():
    cfg = json.loads(json.dumps(get_preset("fig6-queues")["variants"]["buf15"]))
    cfg["duration_s"] = 5.0
    return cfg


def test_simulate_packets_outputs(tmp_path):
    summary = cmd_simulate_packets(packet_config(), tmp_path, "csv")
    assert (tmp_path / "core.csv").exists()
    assert (tmp_path / "set1.csv").exists()
    assert (tmp_path / "summary.json").exists()
    assert 0.0 < summary["utilization"]["core"] <= 1.0
    assert "sustained" in summary["core_oscillation"]


def test_sync_presets_runnable(tmp_path):
    """The window-synchronisation presets execute end to end."""
    for preset_name, variant in (("fig4-sync-smallbuf", "buf100"),
                                 ("fig5-sync-interbuf", "cap2x")):
        cfg = json.loads(json.dumps(get_preset(preset_name)["variants"][variant]))
        cfg["duration_s"] = 4.0
        summary = cmd_simulate_packets(cfg, tmp_path / preset_name, "csv")
        assert summary["utilization"]["core"] > 0.3
        assert (tmp_path / preset_name / "set1.csv").exists()


def test_cli_determinism_byte_identical(tmp_path):
    """Identical config + seed must produce byte-identical outputs."""
    cfgp = tmp_path / "pkt.json"
    cfgp.write_text(json.dumps(packet_config()))
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for out in (out1, out2):
        proc = run_cli([
            "simulate-packets", "--config", str(cfgp), "--out", str(out),
            "--seed", "5", "--format", "csv",
        ])
        assert proc.returncode == 0, proc.stderr
    for name in ("core.csv", "edge1.csv", "edge2.csv", "set1.csv", "set2.csv",
                 "summary.json"):
        a = (out1 / name).read_bytes()
        b = (out2 / name).read_bytes()
        assert a == b, f"{name} differs between reruns"


def test_preset_show_and_unknown(tmp_path):
    proc = run_cli(["preset", "show", "fig8-queues"])
    assert proc.returncode == 0
    shown = json.loads(proc.stdout)
    assert "variants" in shown
    proc = run_cli(["preset", "show", "no-such-preset"])
    assert proc.returncode == 1


def test_sweep_parallel_matches_sequential(tmp_path):
    cfg = get_preset("fig1-coherence")
    cfg = json.loads(json.dumps(cfg))
    cfg["values"] = cfg["values"][:6]
    s1 = cmd_sweep(cfg, tmp_path / "seq", workers=1)
    s2 = cmd_sweep(cfg, tmp_path / "par", workers=2)
    assert s1["rows"] == s2["rows"]
    assert (tmp_path / "seq/sweep.csv").read_bytes() == (tmp_path / "par/sweep.csv").read_bytes()


def test_cli_phase_simulation(tmp_path):
    cfg = {
        "model": "intermediate-equal",
        "omega_rad_per_s": [50.0, 51.0],
        "K_per_s": 30.0,
        "tau_s": 0.1,
        "horizon_s": 8.0,
    }
    path = tmp_path / "phase.json"
    path.write_text(json.dumps(cfg))
    proc = run_cli(["simulate-phase", "--config", str(path), "--out", str(tmp_path),
                    "--format", "json"])
    assert proc.returncode == 0, proc.stderr
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["measured"]["locked"]
    assert any(r["stable"] for r in summary["predicted_roots"])


def test_cli_fluid_simulation(tmp_path):
    cfg = {
        "protocol": {"variant": "reno"},
        "regime": "small-buffer",
        "model": "single",
        "network": {
            "edge_capacity_per_flow_pkts_per_s": 107.0,
            "rtt_ms": 100.0,
            "edge_buffer_pkts": 15.0,
        },
        "horizon_s": 40.0,
        "kick": 1.05,
    }
    path = tmp_path / "fluid.json"
    path.write_text(json.dumps(cfg))
    proc = run_cli(["simulate-fluid", "--config", str(path), "--out", str(tmp_path)])
    assert proc.returncode == 0, proc.stderr
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["limit_cycle"]["amplitude"] > 0
    assert (tmp_path / "fluid-single.csv").exists()
