import json

import mpmath
import pytest

from closedgraphs.cli import main
from closedgraphs.extremal import airy_density
from closedgraphs.oracle import oracle_counts

from conftest import TABLE2, sig


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_constants(capsys):
    doc = run_json(capsys, "constants", "ex-k4")
    assert doc["schema_version"] == 1 and doc["command"] == "constants" and doc["case"] == "1"
    c = doc["constants"]
    got = (c["rho_inv"], c["R_inv"], c["kappa"], c["kappa2"], c["beta"], c["delta"], c["p"])
    for v, want in zip(got, TABLE2["ex-k4"]):
        assert sig(mpmath.mpf(v), mpmath.mpf(want))
    assert c["missed_var"] is None
    assert "rho_inv" in doc["source"]


def test_unknown_class(capsys):
    code, _, err = run(capsys, "constants", "nosuch")
    assert code == 2 and "unknown class" in err


def test_external_class(capsys):
    code, _, err = run(capsys, "constants", "cubic-planar")
    assert code == 3 and "requires external T" in err


def test_spec_file(capsys, tmp_path):
    path = tmp_path / "wheel.cls"
    path.write_text("name = wheel-only\nT = z^6*x^4/24\n")
    doc = run_json(capsys, "classify", "--spec", str(path))
    assert doc["class"] == "wheel-only" and doc["case"] == "1" and doc["source"] == "branch-point"


def test_counts_match_oracle(capsys):
    doc = run_json(capsys, "counts", "ex-w4", "--n", "6")
    want = oracle_counts("ex-w4", 6)
    assert (doc["g"], doc["c"], doc["b"]) == (want["G"], want["C"], want["B"])


def test_counts_by_edges(capsys):
    doc = run_json(capsys, "counts", "ex-k4", "--n", "4", "--with-edges")
    assert doc["g"][2] == 2
    # graphs on 3 vertices by edges: 1 empty, 3 with one edge, 3 paths, 1 triangle
    assert doc["edges"]["g"][3] == [1, 3, 3, 1]
    assert doc["edges"]["b"][4] == [0, 0, 0, 0, 3, 6, 0]
    assert all(sum(row) == n for row, n in zip(doc["edges"]["g"], doc["g"]))


def test_counts_order_guard(capsys):
    code, _, _ = run(capsys, "counts", "ex-k4", "--n", "8", "--order", "5")
    assert code == 2


def test_identical_runs(capsys):
    first = run(capsys, "counts", "ex-k4", "--n", "12")
    second = run(capsys, "counts", "ex-k4", "--n", "12")
    assert first == second


def test_table_format(capsys):
    code, out, _ = run(capsys, "counts", "ex-k4", "--n", "3", "--format", "tsv")
    assert code == 0
    assert out.splitlines() == ["n\tg\tc\tb", "0\t1\t0\t0", "1\t1\t1\t0", "2\t2\t1\t1", "3\t8\t4\t1"]


def test_scan(capsys):
    code, out, _ = run(capsys, "scan", "ex-k4", "--y", "0.1:10:50", "--format", "tsv")
    rows = out.splitlines()[1:]
    assert code == 0 and len(rows) == 50
    assert all(r.split("\t")[1] == "1" for r in rows)


def test_scan_range_guard(capsys):
    code, _, _ = run(capsys, "scan", "ex-k4", "--y", "5:1:10")
    assert code == 2


def _trapezoid(out):
    pts = [tuple(mpmath.mpf(v) for v in line.split("\t")) for line in out.splitlines()[1:]]
    return sum((b[0] - a[0]) * (a[1] + b[1]) / 2 for a, b in zip(pts, pts[1:])), pts


def test_airy_table(capsys):
    code, out, _ = run(capsys, "airy", "--density", "--from", "-4", "--to", "4", "--step", "0.01",
                       "--format", "tsv")
    total, pts = _trapezoid(out)
    assert code == 0 and len(pts) == 801
    tails = (mpmath.quad(airy_density, [-mpmath.inf, -40, -4])
             + mpmath.quad(airy_density, [4, mpmath.inf]))
    assert abs(total + tails - 1) < 1e-4


@pytest.mark.xfail(strict=True, reason="about 0.0118 of the mass lies left of -4 (polynomial tail)")
def test_airy_table_literal(capsys):
    _, out, _ = run(capsys, "airy", "--density", "--format", "tsv")
    total, _ = _trapezoid(out)
    assert abs(total - 1) < 1e-4


def test_airy_compose(capsys):
    third = str(mpmath.mpf(1) / 3)
    doc = run_json(capsys, "airy", "--compose", third, str(3 / mpmath.cbrt(16)), third,
                   str(mpmath.cbrt(81) / 4))
    assert abs(doc["a"] - 1 / 9) < 1e-12 and abs(doc["c"] - 1.71707) < 1e-4


def test_airy_bad_range(capsys):
    code, _, _ = run(capsys, "airy", "--from", "1", "--to", "0")
    assert code == 2


def test_block_law_subcritical(capsys):
    doc = run_json(capsys, "block-law", "ex-k4")
    assert doc["law"]["kind"] == "discrete" and doc["law"]["tail_exponent"] == -0.5


def test_block_law_planar(capsys):
    doc = run_json(capsys, "block-law", "planar")
    assert abs(doc["law"]["alpha"] - 0.95982) < 1e-5 and abs(doc["law"]["c"] - 128.35169) < 1e-4


def test_oracle_command(capsys):
    doc = run_json(capsys, "oracle", "ex-k4", "--n", "4")
    assert doc["g"] == [1, 1, 2, 8, 63]
    code, _, _ = run(capsys, "oracle", "ex-k4", "--n", "8")
    assert code == 2
    code, _, _ = run(capsys, "oracle", "nosuch")
    assert code == 2


def test_density_map_range(capsys):
    code, _, err = run(capsys, "density-map", "ex-k4", "--mu", "0.9")
    assert code == 2 and "mu" in err
    code, _, _ = run(capsys, "density-map", "ex-k4")
    assert code == 2


def test_precision_floor():
    with pytest.raises(SystemExit):
        main(["constants", "ex-k4", "--precision", "10"])
