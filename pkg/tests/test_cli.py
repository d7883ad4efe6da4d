"""Command-line behaviour: documents, golden outputs, exit codes."""
import json
import os
from pathlib import Path

import pytest

from contactbetti import cli
from contactbetti.cli import main
from contactbetti.corpus import DOCUMENTS, corpus
from contactbetti.grading import GradedDimensions

GOLDEN_DIR = Path(__file__).parent / "golden"

# argv behind each golden file; regenerate with
#   contactbetti <argv...> > tests/golden/<name>
GOLDEN = [
    ("delta_lens-triangle.json", ["delta", "corpus:lens-triangle"]),
    ("ehrhart_order-three-square.json",
     ["ehrhart", "corpus:order-three-square"]),
    ("cb_lens-triangle.json", ["cb", "corpus:lens-triangle"]),
    ("hc-resolution_lens-triangle.json",
     ["hc", "corpus:lens-triangle", "--pipeline", "resolution",
      "--trivial", "--window", "0:8"]),
    ("quotient_lens-skew.json",
     ["quotient", "corpus:lens-skew", "--window", "0:12"]),
    ("quotient_product-of-spheres.json",
     ["quotient", "corpus:product-of-spheres"]),
    ("crosscheck_unit-simplex.json", ["crosscheck", "corpus:unit-simplex"]),
    ("validate_projective-plane-triple.json",
     ["validate", "corpus:projective-plane-triple"]),
]


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_doc(tmp_path, obj, name="doc.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


# ---------------------------------------------------------------- corpus


def test_corpus_has_at_least_nine_documents():
    docs = corpus()
    assert len(docs) >= 9
    assert len({d["name"] for d in DOCUMENTS}) == len(DOCUMENTS)


def test_corpus_returns_fresh_copies():
    first = corpus()
    first["lens-triangle"]["vertices"].append(["9", "9"])
    assert corpus()["lens-triangle"]["vertices"] == [
        ["1", "0"], ["0", "1"], ["-1", "-1"]]


@pytest.mark.parametrize("name", sorted(d["name"] for d in DOCUMENTS))
def test_every_corpus_document_validates(capsys, name):
    code, out, err = run(capsys, ["validate", "corpus:" + name])
    assert code == 0 and err == ""
    assert json.loads(out)["ok"] is True


@pytest.mark.parametrize("name", sorted(d["name"] for d in DOCUMENTS))
def test_every_corpus_document_crosschecks(capsys, name):
    code, out, _ = run(capsys, ["crosscheck", "corpus:" + name])
    assert code == 0
    assert json.loads(out)["agreement"] is True


# ---------------------------------------------------------------- goldens


@pytest.mark.parametrize("name,argv", GOLDEN,
                         ids=[name for name, _ in GOLDEN])
def test_golden_file_regenerates_bit_identically(capsys, name, argv):
    code, out, err = run(capsys, argv)
    assert code == 0 and err == ""
    assert out == (GOLDEN_DIR / name).read_text()


def test_golden_quotient_schema():
    # the stored sector table for the worked weighted-projective example
    rep = json.loads((GOLDEN_DIR / "quotient_lens-skew.json").read_text())
    assert rep["r"] == 2
    assert [s["T"] for s in rep["sectors"]] == ["1/4", "1/2", "3/4", "1"]
    assert [c["cT"] for s in rep["sectors"] for c in s["components"]] == [
        "1", "2", "3", "0"]
    assert [row["dim"] for row in rep["H_orb"]] == [1, 1, 2, 1, 1]
    totals = {row["degree"]: row["dim"] for row in rep["HC"]}
    assert [totals.get(str(2 * j), 0) for j in range(7)] == [
        1, 2, 3, 3, 3, 3, 3]


def test_golden_smooth_base_totals():
    rep = json.loads(
        (GOLDEN_DIR / "quotient_product-of-spheres.json").read_text())
    assert rep["r"] == 2 and rep["base"]["smooth"] is True
    totals = {row["degree"]: row["dim"] for row in rep["HC"]}
    assert [totals.get(str(2 * j), 0) for j in range(6)] == [
        0, 1, 2, 2, 2, 2]


# ---------------------------------------------------------------- documents


def test_document_from_file_matches_corpus(capsys, tmp_path):
    path = write_doc(tmp_path, corpus()["lens-triangle"])
    from_file = run(capsys, ["delta", path])
    from_corpus = run(capsys, ["delta", "corpus:lens-triangle"])
    assert from_file == from_corpus


def test_labelled_document_lifts_to_its_prequantization(capsys):
    # the double product class prequantizes with delta (1,2,1)
    code, out, _ = run(capsys,
                       ["delta", "corpus:product-of-spheres-double"])
    assert code == 0
    assert json.loads(out)["delta"] == [1, 2, 1]


def test_triangulation_file_input(capsys, tmp_path):
    tri = tmp_path / "star.json"
    tri.write_text(json.dumps({
        "points": [["1", "1"]],
        "cells": [[0, 1, 4], [0, 2, 4], [1, 3, 4], [2, 3, 4]],
    }))
    code, out, _ = run(capsys, ["resolve", "corpus:blowup-quad",
                                "--triangulation", str(tri)])
    assert code == 0
    rep = json.loads(out)
    assert rep["unimodular"] is True and rep["crepant"] is True
    assert rep["stapledon"]["ok"] is True


def test_reeb_point_override(capsys):
    code, out, _ = run(capsys, ["cb", "corpus:lens-triangle",
                                "--reeb", "1/7,1/5", "--pipeline", "both"])
    assert code == 0
    assert json.loads(out)["agreement"] is True


def test_quotient_direction_override(capsys):
    code, out, _ = run(capsys, ["quotient", "corpus:unit-simplex",
                                "--reeb", "1,2,4"])
    assert code == 0
    assert json.loads(out)["r"] == 4


# ---------------------------------------------------------------- defaults


def test_hc_pipeline_defaults(capsys):
    code, out, _ = run(capsys, ["hc", "corpus:lens-triangle"])
    assert code == 0 and json.loads(out)["pipeline"] == "quotient"
    code, out, _ = run(capsys, ["hc", "corpus:order-three-square"])
    assert code == 0 and json.loads(out)["pipeline"] == "resolution"


def test_quotient_on_fractional_diagram_has_no_hc_table(capsys):
    code, out, _ = run(capsys, ["quotient", "corpus:order-three-square"])
    assert code == 0
    rep = json.loads(out)
    assert rep["HC"] is None
    assert [s["T"] for s in rep["sectors"]] == ["1"]


def test_table_format_is_a_rendering_of_the_json(capsys):
    _, as_json, _ = run(capsys, ["cb", "corpus:lens-triangle"])
    _, as_table, _ = run(capsys, ["cb", "corpus:lens-triangle",
                                  "--format", "table"])
    assert as_table == cli.render_table(json.loads(as_json))


def test_output_is_deterministic_across_thread_settings(capsys, monkeypatch):
    _, first, _ = run(capsys, ["crosscheck", "corpus:blowup-quad"])
    _, second, _ = run(capsys, ["crosscheck", "corpus:blowup-quad"])
    monkeypatch.setenv("CONTACTBETTI_THREADS", "7")
    _, third, _ = run(capsys, ["crosscheck", "corpus:blowup-quad"])
    assert first == second == third


# ---------------------------------------------------------------- exit codes


def test_parse_errors_exit_64(capsys, tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{nope")
    assert run(capsys, ["validate", str(broken)])[0] == 64
    assert run(capsys, ["validate", str(tmp_path / "absent.json")])[0] == 64
    assert run(capsys, ["validate", "corpus:no-such-doc"])[0] == 64
    assert run(capsys, ["cb", "corpus:lens-triangle",
                        "--pipeline", "sideways"])[0] == 64
    assert run(capsys, ["cb", "corpus:lens-triangle", "--window", "3"])[0] == 64
    assert run(capsys, ["quotient", "corpus:lens-triangle",
                        "--reeb", "1,2"])[0] == 64


def test_structural_document_errors_exit_64(capsys, tmp_path):
    bad_kind = write_doc(tmp_path, {"kind": "sphere"}, "a.json")
    assert run(capsys, ["validate", bad_kind])[0] == 64
    no_offsets = write_doc(tmp_path, {"kind": "labelled",
                                      "normals": [[1, 0], [0, 1], [-1, -1]]},
                           "b.json")
    assert run(capsys, ["validate", no_offsets])[0] == 64
    mixed = write_doc(tmp_path, {"kind": "diagram",
                                 "vertices": [["0", "0"], ["1"]]}, "c.json")
    assert run(capsys, ["validate", mixed])[0] == 64


def test_bad_thread_environment_exits_64(capsys, monkeypatch):
    monkeypatch.setenv("CONTACTBETTI_THREADS", "zero")
    assert run(capsys, ["validate", "corpus:lens-triangle"])[0] == 64
    monkeypatch.setenv("CONTACTBETTI_THREADS", "0")
    assert run(capsys, ["validate", "corpus:lens-triangle"])[0] == 64


def test_validation_errors_exit_65(capsys, tmp_path):
    doubled = write_doc(tmp_path, {
        "kind": "diagram",
        "vertices": [["0", "0"], ["2", "0"], ["0", "2"]]})
    code, _, err = run(capsys, ["validate", doubled])
    assert code == 65 and "FacetNotUnimodular" in err

    cube = write_doc(tmp_path, {
        "kind": "diagram",
        "vertices": [[str(a), str(b), str(c)]
                     for a in "01" for b in "01" for c in "01"]},
        "cube.json")
    code, _, err = run(capsys, ["validate", cube])
    assert code == 65 and "NotSimplicial" in err

    code, _, err = run(capsys, ["resolve", "corpus:lens-triangle",
                                "--star", "5,5"])
    assert code == 65 and "PointNotInterior" in err

    code, _, err = run(capsys, ["quotient", "corpus:lens-triangle",
                                "--reeb", "0,0,2"])
    assert code == 65 and "NotPrimitive" in err

    code, _, err = run(capsys, ["hc", "corpus:order-three-square",
                                "--pipeline", "quotient"])
    assert code == 65 and "NotGorenstein" in err


def test_noncrepant_star_is_a_validation_error(capsys, tmp_path):
    # half-integral diagram; the origin lifts to a non-primitive ray
    half = write_doc(tmp_path, {
        "kind": "diagram",
        "vertices": [["1/2", "0"], ["0", "1/2"], ["-1/2", "-1/2"]]})
    code, _, err = run(capsys, ["resolve", half, "--star", "0,0"])
    assert code == 65 and "crepant" in err
    assert run(capsys, ["resolve", half])[0] == 0


def test_degenerate_reeb_configuration_exits_66(capsys):
    # diagonal direction on the order-3 square: a coefficient ratio is
    # identically integral, so the very first iterate has no floor
    code, _, err = run(capsys, ["cb", "corpus:order-three-square",
                                "--reeb", "1/2,1/2", "--perturb", "1",
                                "--pipeline", "direct"])
    assert code == 66 and "iterate N=1" in err


def test_crosscheck_mismatch_exits_2(capsys, monkeypatch):
    # force one pipeline to lie; the report must flag it and exit 2
    wrong = GradedDimensions({}, (0, 10))
    monkeypatch.setattr(cli, "hc_from_quotient", lambda Q, window: wrong)
    code, out, _ = run(capsys, ["crosscheck", "corpus:lens-triangle"])
    assert code == 2
    rep = json.loads(out)
    assert rep["agreement"] is False
    flags = {c["name"]: c["agrees"] for c in rep["checks"]}
    assert flags["quotient"] is False
    assert flags["resolution"] is True


def test_help_exits_zero(capsys):
    assert run(capsys, ["--help"])[0] == 0
    assert run(capsys, [])[0] == 64
