import json
import os
import subprocess
import sys
from pathlib import Path as FsPath

import pytest

FIG2 = FsPath(__file__).parent / "data" / "fig2.json"


def npcode(*args, stdin=None, env_extra=None):
    env = dict(os.environ)
    env.pop("NPC_FIELD_POLY", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "npcode", *args],
        input=stdin,
        capture_output=True,
        text=True,
        env=env,
    )


def test_generate_harary():
    res = npcode("generate", "--harary", "10", "3")
    assert res.returncode == 0
    doc = json.loads(res.stdout)
    assert len(doc["nodes"]) == 10
    assert len(doc["edges"]) == 15


def test_generate_invalid_counts():
    res = npcode("generate", "--harary", "3", "3")
    assert res.returncode == 2
    assert res.stderr


def test_generate_minimal_witness():
    res = npcode("generate", "--minimal-witness", "8", "3", "predetermined")
    assert res.returncode == 0
    doc = json.loads(res.stdout)
    assert len(doc["edges"]) == 8 + 3 - 2
    roles = {n["id"]: n["role"] for n in doc["nodes"]}
    assert sum(1 for r in roles.values() if r == "source") == 3


def test_connectivity_pipeline():
    gen = npcode("generate", "--harary", "10", "3")
    res = npcode("connectivity", stdin=gen.stdout)
    assert res.returncode == 0
    doc = json.loads(res.stdout)
    assert doc["edge_connectivity"]["value"] == 3
    assert doc["node_connectivity"]["value"] == 3


def test_feasibility_exit_codes_and_verify():
    gen = npcode("generate", "--harary", "10", "3")
    ok = npcode(
        "feasibility", "--sources", "v0", "--receivers", "v3,v5,v8", "--verify",
        stdin=gen.stdout,
    )
    assert ok.returncode == 0
    doc = json.loads(ok.stdout)
    assert doc["feasible"] is True
    assert doc["verified"] is True
    assert doc["k_edge_connected"] is True
    bad = npcode("feasibility", "--graph", str(FIG2))
    assert bad.returncode == 1
    doc = json.loads(bad.stdout)
    assert doc["feasible"] is False
    assert doc["failure_reason"] == "receiver-tree"


def test_feasibility_relaxed_flag():
    res = npcode("feasibility", "--graph", str(FIG2), "--relaxed")
    assert res.returncode == 0
    assert json.loads(res.stdout)["relaxed"] is True


def test_feasibility_unknown_ids():
    gen = npcode("generate", "--harary", "6", "2")
    res = npcode("feasibility", "--sources", "zz", "--receivers", "v1", stdin=gen.stdout)
    assert res.returncode == 2


def test_feasibility_needs_terminals():
    gen = npcode("generate", "--harary", "6", "2")
    res = npcode("feasibility", stdin=gen.stdout)
    assert res.returncode == 2


def test_bounds():
    res = npcode("bounds", "--n", "10", "--k", "3")
    assert res.returncode == 0
    doc = json.loads(res.stdout)
    assert doc["single_source"] == 11
    assert doc["predetermined"] == 11
    assert doc["arbitrary"] == 40
    assert doc["harary"] == 15
    res = npcode("bounds", "--n", "5", "--k", "3", "--mode", "predetermined")
    assert res.returncode == 2
    res = npcode("bounds", "--n", "5", "--k", "3")
    assert json.loads(res.stdout)["predetermined"] is None


def test_encode_recover_round_trip():
    enc = npcode("encode", "--k", "6", "--t", "2", "--data", "0102030405060708")
    assert enc.returncode == 0
    doc = json.loads(enc.stdout)
    assert doc["blocks"] == 2
    symbols = doc["symbols"]
    assert len(symbols) == 2 * 6 * 2
    rec = npcode("recover", "--k", "6", "--t", "2", "--symbols", symbols, "--erased", "2,5")
    assert rec.returncode == 0
    out = json.loads(rec.stdout)
    assert out["data"] == "0102030405060708"
    assert out["erased"] == [2, 5]


def test_recover_capacity_exceeded_is_domain_error():
    enc = npcode("encode", "--k", "4", "--t", "1", "--data", "0a0b0c")
    symbols = json.loads(enc.stdout)["symbols"]
    res = npcode("recover", "--k", "4", "--t", "1", "--symbols", symbols, "--erased", "1,2")
    assert res.returncode == 1
    assert "capacity" in res.stderr


def test_encode_bad_hex():
    res = npcode("encode", "--k", "4", "--t", "1", "--data", "0a0b")
    assert res.returncode == 2
    res = npcode("encode", "--k", "4", "--t", "1", "--data", "zz0b0c")
    assert res.returncode == 2


def test_field_poly_env_override():
    enc_a = npcode("encode", "--k", "3", "--t", "1", "--data", "0102")
    enc_b = npcode(
        "encode", "--k", "3", "--t", "1", "--data", "0102",
        env_extra={"NPC_FIELD_POLY": "0x11D"},
    )
    assert enc_a.returncode == enc_b.returncode == 0
    doc_b = json.loads(enc_b.stdout)
    assert doc_b["field"]["reduction_poly"] == "0x11D"
    rec = npcode(
        "recover", "--k", "3", "--t", "1",
        "--symbols", doc_b["symbols"], "--erased", "1",
        env_extra={"NPC_FIELD_POLY": "0x11D"},
    )
    assert json.loads(rec.stdout)["data"] == "0102"
    bad = npcode("encode", "--k", "3", "--t", "1", "--data", "0102",
                 env_extra={"NPC_FIELD_POLY": "0x11C"})
    assert bad.returncode == 2  # reducible polynomial


def test_simulate_from_graph_and_exit_codes():
    gen = npcode("generate", "--harary", "10", "3")
    ok = npcode(
        "simulate", "--k", "3", "--t", "1",
        "--sources", "v0", "--receivers", "v3,v5,v8",
        "--failures", "L2", stdin=gen.stdout,
    )
    assert ok.returncode == 0
    doc = json.loads(ok.stdout)
    assert doc["status"] == "recovered"
    over = npcode(
        "simulate", "--k", "3", "--t", "1",
        "--sources", "v0", "--receivers", "v3,v5,v8",
        "--failures", "L1,L2", stdin=gen.stdout,
    )
    assert over.returncode == 1
    assert json.loads(over.stdout)["status"] == "capacity exceeded"


def test_simulate_consumes_feasibility_report():
    gen = npcode("generate", "--harary", "10", "3")
    feas = npcode(
        "feasibility", "--sources", "v0", "--receivers", "v3,v5,v8", stdin=gen.stdout
    )
    sim = npcode("simulate", "--k", "3", "--t", "1", "--random", "1", stdin=feas.stdout)
    assert sim.returncode == 0
    infeasible = npcode("feasibility", "--graph", str(FIG2))
    sim2 = npcode("simulate", "--k", "3", "--t", "1", "--random", "1",
                  stdin=infeasible.stdout)
    assert sim2.returncode == 1


def test_simulate_deterministic_output():
    gen = npcode("generate", "--harary", "10", "3")
    runs = [
        npcode(
            "simulate", "--k", "3", "--t", "1",
            "--sources", "v0", "--receivers", "v3,v5,v8",
            "--random", "1", "--seed", "9", stdin=gen.stdout,
        )
        for _ in range(2)
    ]
    assert runs[0].returncode == runs[1].returncode == 0
    assert runs[0].stdout == runs[1].stdout


def test_simulate_k_mismatch():
    gen = npcode("generate", "--harary", "10", "3")
    res = npcode(
        "simulate", "--k", "4", "--t", "1",
        "--sources", "v0", "--receivers", "v3,v5,v8",
        "--failures", "L1", stdin=gen.stdout,
    )
    assert res.returncode == 2


def test_schema_error_exit_2():
    res = npcode("connectivity", stdin="{\"nodes\": 5}")
    assert res.returncode == 2
    res = npcode("feasibility", "--graph", "/no/such/file")
    assert res.returncode == 2
