import json
import subprocess
import sys

import numpy as np
import pytest

from vkflores.cli import main, render, run
from vkflores.cohomology import ChainComplexGF2, sw_height
from vkflores.deleted_product import QuotientComplex, quotient_of
from vkflores.complex import standard_complex


def test_height_k5():
    code, rep = run(["height", "simplex:4", "--skeleton", "1"])
    assert code == 0 and rep["status"] == "ok"
    assert rep["results"]["height"]["h"] == 2
    assert rep["schema"].startswith("vkflores.report/")


def test_height_antipodal_source():
    code, rep = run(["height", "antipodal:3"])
    assert code == 0 and rep["results"]["height"]["h"] == 2


def test_wk_rp5():
    code, rep = run(["wk", "--model", "rp5", "--k", "0"])
    assert code == 0
    res = rep["results"]
    assert res["nontrivial"] is True
    assert "a^2" in res["total"] and "a^4" in res["total"]


def test_claims_strict_negative_control():
    code, rep = run(["claims", "--model", "rp3", "--dim", "3", "--strict"])
    assert code == 1 and rep["results"]["claims"] == []
    code, _ = run(["claims", "--model", "rp3", "--dim", "3"])
    assert code == 0


def test_claims_rp5():
    code, rep = run(["claims", "--model", "rp5", "--dim", "5", "--strict"])
    assert code == 0
    kinds = {(c["k"], c["kind"]) for c in rep["results"]["claims"]}
    assert (0, "skeleton-non-embeddable") in kinds


def test_certify_and_radon_and_retract():
    code, rep = run(["certify", "rp2_6", "--dim", "2", "--k", "0"])
    assert code == 0 and rep["results"]["status"] == "height-certified"
    code, rep = run(["certify", "boundary_simplex:3", "--dim", "2", "--k", "0", "--strict"])
    assert code == 1 and rep["results"]["status"] == "no claim to certify"
    code, rep = run(["radon", "simplex:3", "--random", "4", "--target", "2", "--bound", "3"])
    assert code == 0 and rep["results"]["coincidence"] is not None
    code, rep = run(["retract-check", "simplex:3", "--samples", "90", "--seed", "2"])
    assert code == 0 and rep["results"]["passed"]


def test_corpus_list():
    code, rep = run(["corpus", "list"])
    assert code == 0
    assert [e["name"] for e in rep["results"]["corpus"]] == ["rp2_6", "torus_7", "cp2_9"]


@pytest.mark.parametrize("argv", [
    [],
    ["height"],
    ["height", "nonsense_complex"],
    ["wk", "--model", "hp3", "--k", "0"],
    ["wk", "--model", "rp3", "--k", "7"],
    ["radon", "simplex:2", "--target", "1", "--bound", "1"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(argv):
    code, rep = run(argv)
    assert code == 2 and rep["status"] == "usage-error"


def test_resource_error_exit_3():
    code, rep = run(["--memory-budget", "64", "height", "rp2_6"])
    assert code == 3 and rep["status"] == "resource-error"
    assert rep["failing_degree"] >= 1


def test_delprod_emit_round_trip(tmp_path):
    out = tmp_path / "q.json"
    code, rep = run(["delprod", "rp2_6", "--emit", str(out), "--betti"])
    assert code == 0 and rep["results"]["betti_quotient"][0] == 1
    q2 = QuotientComplex.from_dict(json.loads(out.read_text()))
    q1 = quotient_of(standard_complex("rp2_6"))
    c1, c2 = ChainComplexGF2(q1), ChainComplexGF2(q2)
    for n in range(1, q1.dim + 1):
        assert c1.boundary(n) == c2.boundary(n)
    assert np.array_equal(q1.z, q2.z)
    code, rep2 = run(["height", str(out)])
    assert code == 0 and rep2["results"]["height"]["h"] == sw_height(q1).h == 3


@pytest.mark.parametrize("argv", [
    ["--no-timings", "height", "torus_7"],
    ["--no-timings", "radon", "rp2_6", "--random", "11", "--target", "2", "--bound", "2"],
    ["--no-timings", "retract-check", "rp2_6", "--samples", "60", "--seed", "5"],
    ["--no-timings", "certify", "rp2_6", "--dim", "2", "--k", "0"],
])
def test_reports_are_byte_identical(argv):
    a = render(run(argv)[1])
    b = render(run(argv)[1])
    assert a == b
    assert "timings" not in json.loads(a)


def test_timings_only_under_timings_key():
    _, rep = run(["height", "torus_7"])
    assert "timings" in rep
    text = json.dumps(rep["results"])
    assert "seconds" not in text


def test_main_writes_output_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["-o", str(out), "wk", "--model", "cp2", "--k", "1"]) == 0
    assert json.loads(out.read_text())["results"]["nontrivial"] is True
    assert capsys.readouterr().out == ""


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "vkflores", "corpus", "list"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["status"] == "ok"


def test_model_file_input(tmp_path):
    from vkflores.char_class import model_to_dict, parse_model_name

    path = tmp_path / "m.json"
    path.write_text(json.dumps(model_to_dict(*parse_model_name("rp5"))))
    code, rep = run(["wk", "--model", str(path), "--k", "0"])
    assert code == 0 and rep["results"]["nontrivial"] is True
