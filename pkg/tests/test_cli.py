import json
import os
import subprocess
import sys

import pytest

from cubulate.cli import main
from cubulate.complexes import is_isomorphic
from cubulate.fileio import parse_complex, read_complex
from cubulate import fixtures as fx

HERE = os.path.dirname(__file__)
DATA = os.path.join(HERE, "data")
GOLDEN = os.path.join(HERE, "golden")
UPDATE = os.environ.get("CUBULATE_UPDATE_GOLDENS") == "1"


def data(name):
    return os.path.join(DATA, name)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def report(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def check_golden(name, text):
    path = os.path.join(GOLDEN, name)
    if UPDATE:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    with open(path, encoding="utf-8") as fh:
        assert fh.read() == text, f"{name} differs from its golden file"


def emitted(tmp_path, name):
    return (tmp_path / name).read_text(encoding="utf-8")


def find(rep, check):
    return next(c for c in rep["children"] if c["check"] == check)


# -- check ------------------------------------------------------------------------------

def test_check_coned_annulus_passes(capsys):
    code, out = run(capsys, "check", data("annulus-coned.cx"))
    assert code == 0
    check_golden("check_annulus_coned.json", out)
    rep = json.loads(out)
    assert find(rep, "cone_points")["status"] == "PASS"


def test_check_triangle_fails_with_edge(capsys):
    code, rep = report(capsys, "check", data("triangle.cx"))
    assert code == 1
    bd = find(rep, "without_boundary")
    assert bd["status"] == "FAIL"
    assert len(bd["witnesses"][0]) == 2


def test_check_malformed_file_reports_position(capsys):
    code, rep = report(capsys, "check", data("malformed.cx"))
    assert code == 2
    assert rep["error"] == "ParseError"
    assert rep["message"].startswith("line 4, column 8:")


def test_missing_file_is_input_error(capsys):
    code, rep = report(capsys, "check", data("nope.cx"))
    assert code == 2


# -- pipeline -----------------------------------------------------------------------------

def test_pipeline_grid(capsys, tmp_path):
    code, out = run(capsys, "pipeline", data("grid2x2.cx"), "--contract", "--emit-dir", tmp_path)
    assert code == 0
    rep = json.loads(out)
    assert find(rep, "dual")["counts"]["f_vector"] == [25, 40, 16]
    assert find(rep, "npc")["status"] == "PASS"
    contraction = find(rep, "contraction")
    perimeter = [c for c in contraction["children"] if c["details"]["kind"] == "boundary"]
    assert perimeter and perimeter[0]["status"] == "PASS"
    assert perimeter[0]["counts"]["length"] == 16
    check_golden("grid2x2_dual.cx", emitted(tmp_path, "dual.cx"))
    check_golden("grid2x2_pipeline.json", out)
    assert json.loads(emitted(tmp_path, "report.json")) == rep
    certs = json.loads(emitted(tmp_path, "certificates.json"))
    assert len(certs) == len(contraction["children"])


def test_pipeline_three_cycle_is_not_foldable(capsys):
    code, rep = report(capsys, "pipeline", data("cycle3.cx"))
    assert code == 1
    fold = find(rep, "folding")
    assert fold["details"]["obstruction"] == "odd_cycle"
    assert fold["witnesses"]


def test_pipeline_odd_torus_is_not_foldable(capsys):
    code, rep = report(capsys, "pipeline", data("torus3x3.cx"), "--contract")
    assert code == 1
    assert find(rep, "folding")["status"] == "FAIL"


def test_pipeline_torus_reports_essential_loops(capsys):
    code, rep = report(capsys, "pipeline", data("torus4x4.cx"), "--contract")
    assert code == 1
    assert find(rep, "npc")["status"] == "PASS"
    failed = [c for c in find(rep, "contraction")["children"] if c["status"] == "FAIL"]
    assert failed
    assert all(c["details"]["reason"].startswith("SearchExhausted") for c in failed)


def test_pipeline_needs_cubical_input(capsys):
    code, rep = report(capsys, "pipeline", data("triangle.cx"))
    assert code == 2


# -- single stages -------------------------------------------------------------------------

def test_fold_and_stratify(capsys, tmp_path):
    code, rep = report(capsys, "fold", data("square.cx"), "--emit-dir", tmp_path)
    assert code == 0
    assert read_complex(tmp_path / "folded.cx").folding is not None
    code, rep = report(capsys, "stratify", data("grid2x2.cx"))
    assert code == 0
    assert rep["counts"]["cells_by_dim"] == [9, 12, 4]
    assert rep["counts"]["mirrors"] == 6


def test_stratify_torus_has_non_separating_mirror(capsys):
    code, rep = report(capsys, "stratify", data("torus4x4.cx"))
    assert code == 1
    assert find(rep, "separation")["status"] == "FAIL"


def test_dual_emits_file(capsys, tmp_path):
    code, rep = report(capsys, "dual", data("strip.cx"), "--emit-dir", tmp_path)
    assert code == 0
    assert rep["counts"]["f_vector"] == [15, 22, 8]
    assert read_complex(tmp_path / "dual.cx").complex.f_vector == (15, 22, 8)


def test_npc_cube_boundary_fails(capsys):
    code, rep = report(capsys, "npc", data("cube-boundary.cx"))
    assert code == 1
    assert len(rep["witnesses"][0]["clique"]) == 3


def test_contract_single_loop(capsys):
    code, rep = report(capsys, "contract", data("grid2x2.cx"), "--loop", "3,10,21,14,21,10,3")
    assert code == 0
    assert rep["children"][0]["details"]["kind"] == "given"
    code, rep = report(capsys, "contract", data("grid2x2.cx"), "--loop", "3,10,21")
    assert code == 2
    code, rep = report(capsys, "contract", data("grid2x2.cx"), "--loop", "3,x")
    assert code == 2


def test_pi1(capsys):
    code, rep = report(capsys, "pi1", data("torus3x3.cx"))
    assert code == 0
    assert rep["details"]["abelianization"] == "Z + Z"
    code, rep = report(capsys, "pi1", data("cone6.cx"), "--punctured")
    assert rep["details"]["abelianization"] == "Z"


# -- covers ------------------------------------------------------------------------------

def test_cover_four_cycle_gives_twelve_cycle(capsys, tmp_path):
    code, rep = report(capsys, "cover", data("cycle4.cx"), data("cycle3.rep"),
                       "--emit-dir", tmp_path)
    assert code == 0
    text = emitted(tmp_path, "cover.cx")
    check_golden("cycle4_cover3.cx", text)
    assert is_isomorphic(parse_complex(text).complex, fx.cycle_graph(12))


def test_branched_cover_of_cone(capsys, tmp_path):
    code, rep = report(capsys, "cover", data("cone6.cx"), data("swap.rep"), "--branched",
                       "--emit-dir", tmp_path)
    assert code == 0
    assert find(rep, "euler")["counts"] == {"euler_total": 1, "expected": 1}
    text = emitted(tmp_path, "cover.cx")
    check_golden("cone6_branched2.cx", text)
    assert is_isomorphic(parse_complex(text).complex, fx.cone_over_cycle(12))


def test_cover_bad_rep_is_rejected(capsys):
    code, rep = report(capsys, "cover", data("torus3x3.cx"), data("torus_bad.rep"))
    assert code == 2
    assert rep["error"] == "RelatorNotKilled"


def test_fixture_files_match_data(capsys):
    for name in ["grid2x2", "cone6", "torus4x4"]:
        code, out = run(capsys, "fixture", name)
        with open(data(f"{name}.cx"), encoding="utf-8") as fh:
            assert out == fh.read()


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "cubulate", "check", data("square.cx")],
                         capture_output=True, text=True)
    assert res.returncode == 1
    assert json.loads(res.stdout)["status"] == "FAIL"


@pytest.mark.parametrize("name", ["grid2x2_dual.cx", "cycle4_cover3.cx", "cone6_branched2.cx"])
def test_golden_files_round_trip(name):
    with open(os.path.join(GOLDEN, name), encoding="utf-8") as fh:
        text = fh.read()
    from cubulate.fileio import format_complex
    cf = parse_complex(text)
    assert format_complex(cf.complex, cone_points=cf.cone_points, folding=cf.folding,
                          branch=cf.branch, kind=cf.kind) == text
