import csv
import json
import subprocess
import sys

import pytest

from tridom import bench
from tridom.cli import main
from tridom.generators import GenSpec


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def octa(tmp_path):
    path = tmp_path / "oct.rot"
    assert run("gen", "--kind", "named", "--name", "octahedron", "-o", path) == 0
    return path


def test_solve_octahedron(octa, capsys):
    assert run("solve", octa) == 0
    assert capsys.readouterr().out.strip().splitlines()[-1] == "n=6 |D|=2 bound=2 ok"


def test_solve_verify_round_trip(octa, tmp_path, capsys):
    cert = tmp_path / "oct.cert"
    assert run("solve", octa, "--cert", cert, "--trace") == 0
    assert run("verify", octa, "--cert", cert) == 0
    assert "ok" in capsys.readouterr().out


def test_verify_tampered_certificate(octa, tmp_path):
    cert = tmp_path / "oct.cert"
    run("solve", octa, "--cert", cert)
    doc = json.loads(cert.read_text())
    doc["D"] = doc["D"][:1]
    cert.write_text(json.dumps(doc))
    assert run("verify", octa, "--cert", cert) == 1


def test_verify_against_other_graph(octa, tmp_path):
    cert = tmp_path / "oct.cert"
    run("solve", octa, "--cert", cert)
    ico = tmp_path / "ico.rot"
    run("gen", "--kind", "named", "--name", "icosahedron", "-o", ico)
    assert run("verify", ico, "--cert", cert) == 1


def test_input_errors(tmp_path, capsys):
    bad = tmp_path / "bad.rot"
    bad.write_text("4 6 simple\n0: 1 2\n")
    assert run("solve", bad) == 2
    assert run("solve", tmp_path / "missing.rot") == 2
    assert run("gen", "--kind", "named", "--name", "nope", "-o", tmp_path / "x.rot") == 2
    assert run("gen", "--kind", "flipmix", "--n", "10", "-o", tmp_path / "x.txt") == 2
    assert "error:" in capsys.readouterr().err


def test_gadget_input_rejected_by_solve(tmp_path):
    path = tmp_path / "gadget.rot"
    assert run("gen", "--kind", "gadget", "--name", "K4", "-o", path) == 0
    assert run("solve", path) == 2


def test_oracle_params(octa, capsys):
    for param, expect in (("iota", "iota=2"), ("gamma", "gamma=2"), ("alpha", "alpha=2"),
                          ("obs1", "obs1=true max=0")):
        assert run("oracle", octa, "--param", param) == 0
        assert capsys.readouterr().out.startswith(expect)


def test_convert_round_trip(octa, tmp_path, capsys):
    plc = tmp_path / "oct.plc"
    back = tmp_path / "back.rot"
    assert run("convert", octa, plc) == 0
    assert plc.read_bytes().startswith(b">>planar_code<<")
    assert run("convert", plc, back) == 0
    assert back.read_text() == octa.read_text()


def test_seed_environment_override(tmp_path, monkeypatch, capsys):
    a, b = tmp_path / "a.rot", tmp_path / "b.rot"
    monkeypatch.setenv("TRIDOM_SEED", "5")
    run("gen", "--kind", "flipmix", "--n", "30", "--seed", "1", "--flips", "50", "-o", a)
    monkeypatch.delenv("TRIDOM_SEED")
    run("gen", "--kind", "flipmix", "--n", "30", "--seed", "5", "--flips", "50", "-o", b)
    assert a.read_text() == b.read_text()


def test_budget_exhausted_exit_code(monkeypatch, octa):
    from tridom import cli
    from tridom.errors import BudgetExhausted

    def boom(*args, **kwargs):
        raise BudgetExhausted("no coloring")

    monkeypatch.setattr(cli, "solve", boom)
    assert run("solve", octa) == 3


def test_bench_csv(tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps([
        {"kind": "flipmix", "n": 60, "seed": 0, "flips": 200, "count": 4},
        {"kind": "named", "name": "octahedron"},
        {"kind": "stacked", "n": 11, "seed": 3},
    ]))
    out = tmp_path / "out.csv"
    assert run("bench", "--spec", spec, "--csv", out, "--jobs", "2") == 0
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert list(rows[0]) == bench.CSV_COLUMNS
    assert [r["id"] for r in rows[:4]] == [f"flipmix-n60-s{i}-f200" for i in range(4)]
    assert len(rows) == 6
    for r in rows:
        assert int(r["dsize"]) <= int(r["bound"])
        if r["iota"]:
            assert int(r["iota"]) <= int(r["dsize"])
    assert rows[4]["iota"] == "2" and rows[4]["dsize"] == "2"


def test_bench_order_and_determinism():
    specs = [GenSpec("flipmix", n=80, seed=s, flips=300) for s in range(6)]
    serial = bench.run_bench(specs, jobs=1)
    parallel = bench.run_bench(specs, jobs=3)
    strip = [(r.id, r.dsize, r.path, r.cover) for r in serial]
    assert strip == [(r.id, r.dsize, r.path, r.cover) for r in parallel]


def test_bench_spec_must_be_list(tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text("{}")
    with pytest.raises(ValueError):
        bench.load_specs(spec)


def test_module_entry_point(octa):
    res = subprocess.run([sys.executable, "-m", "tridom", "solve", str(octa)],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.strip() == "n=6 |D|=2 bound=2 ok"
