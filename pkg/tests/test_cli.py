import io
import json

import pytest

from liecones import catalog, cli


def run(*argv):
    out = io.StringIO()
    code = cli.run(list(argv), out=out)
    text = out.getvalue()
    return code, (json.loads(text) if text else None), text


def checks(report):
    return {c["name"]: c["verdict"] for c in report["checks"]}


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return str(p)


@pytest.mark.parametrize("name", catalog.standard_entries())
def test_catalog_command(name):
    code, rep, _ = run("catalog", name, "--no-timing")
    assert code == 0
    assert rep["schema"] == cli.SCHEMA and rep["status"] == "pass"


def test_cone_span_on_jacobi():
    code, rep, _ = run("cone-span", "--input", "catalog:jacobi(1)", "--no-timing")
    assert code == 0
    v = checks(rep)
    assert v["span_+1"] == v["span_-1"] == "pass"
    assert v["certificate_+1_revalidated"] == v["certificate_-1_revalidated"] == "pass"
    assert [c["side"] for c in rep["certificates"]] == [1, -1]
    assert rep["certificates"][0]["witness_polynomial"] == "1/2*v2^2 + 1"


def test_no_go_on_oscillator():
    code, rep, _ = run("no-go", "--input", "catalog:oscillator", "--functional", "1", "--no-timing")
    assert code == 0
    assert checks(rep)["unique_survivor_is_zero"] == "pass"
    assert rep["data"]["candidates"] == 5 ** rep["data"]["der_dim"]


def test_no_go_rejects_non_solvable():
    code, rep, _ = run("no-go", "--input", "catalog:jacobi(1)", "--no-timing")
    assert code == 1
    assert checks(rep)["hypotheses"] == "fail"


def test_derivations_command():
    code, rep, _ = run("derivations", "--input", "catalog:jacobi(1)", "--no-timing")
    assert code == 0
    assert (rep["data"]["der_dim"], rep["data"]["inner_dim"], rep["data"]["outer_dim"]) == (6, 5, 1)


def test_build_command_from_file(tmp_path):
    doc = {"algebra": {"dim": 3, "structure": [[0, 1, 1, "2"], [0, 2, 2, "-2"], [1, 2, 0, "1"]]}}
    code, rep, _ = run("build", "--input", write(tmp_path, "sl2.json", doc), "--no-timing")
    assert code == 0
    assert rep["data"]["dim"] == 3 and rep["data"]["center"] == [] and not rep["data"]["solvable"]


def test_antisymmetry_violation_is_a_validation_error(tmp_path, capsys):
    doc = {"algebra": {"dim": 2, "structure": [[0, 1, 1, "1"], [1, 0, 1, "1"]]}}
    code, rep, _ = run("build", "--input", write(tmp_path, "bad.json", doc))
    assert code == 2 and rep is None
    err = capsys.readouterr().err
    assert "c[0][1][1]" in err and "validation error" in err


def test_jacobi_violation_names_triple(tmp_path, capsys):
    doc = {"algebra": {"dim": 3, "structure": [[0, 1, 2, "1"], [1, 2, 0, "1"], [0, 2, 0, "1"]]}}
    code, _, _ = run("build", "--input", write(tmp_path, "bad.json", doc))
    assert code == 2
    assert "(0, 1, 2)" in capsys.readouterr().err


@pytest.mark.parametrize(
    "text",
    [
        "{not json",
        json.dumps({"algebra": {"dim": 1, "structure": []}, "extra": 1}),
        json.dumps({"algebra": {"dim": 2, "structure": [[0, 1, 1, 0.5]]}}),
        json.dumps({"algebra": {"dim": 2, "structure": [[0, 1, 1, "1/0"]]}}),
        json.dumps({}),
    ],
)
def test_parse_errors(tmp_path, capsys, text):
    code, _, _ = run("build", "--input", write(tmp_path, "in.json", text))
    assert code == 3
    assert "parse error" in capsys.readouterr().err


def test_unknown_catalog_name_is_a_parse_error():
    assert run("catalog", "nope")[0] == 3


def test_conformal_derivation_rejected(tmp_path):
    diag = ["1", "1", "2", "0", "0", "0"]
    d = {"matrix": [[diag[i] if i == j else "0" for j in range(6)] for i in range(6)]}
    code, rep, _ = run("classify", "--input", "catalog:jacobi(1)", "--derivation", write(tmp_path, "d.json", d),
                       "--no-timing")
    assert code == 1
    assert checks(rep)["three_grading"] == "fail"
    assert rep["data"]["offending_eigenvalues"] == {"2": 1}


def test_classify_with_matrix_file(tmp_path):
    _, d = catalog.get("jacobi(1)").classified()
    doc = cli.entry_to_json(catalog.get("jacobi(1)"))
    del doc["classified"]
    doc["derivation"] = cli.qm(d.matrix)
    code, rep, _ = run("classify", "--input", write(tmp_path, "p.json", doc), "--no-timing")
    assert code == 0
    assert rep["data"]["grading_dims"] == {"-1": 1, "0": 2, "+1": 3}
    assert rep["data"]["classified"]["h"] == ["1/2", "0", "0"]
    assert checks(rep)["round_trip"] == "pass"


def test_condition_three_reported(tmp_path):
    doc = cli.entry_to_json(catalog.get("jacobi(1)"))
    doc["classified"]["h"] = ["0", "0", "0"]
    code, rep, _ = run("classify", "--input", write(tmp_path, "p.json", doc), "--no-timing")
    assert code == 1
    assert rep["data"]["rejected_condition"] == 3
    bad = [c for c in rep["checks"] if c["verdict"] == "fail"]
    assert bad[0]["name"] == "condition_3"
    assert bad[0]["condition"] == "classification condition 3"


def test_boundary_witness_is_inconclusive(tmp_path):
    doc = cli.entry_to_json(catalog.get("jacobi(1)"))
    doc["witnesses"]["central"]["+1"] = None
    code, rep, _ = run("cone-span", "--input", write(tmp_path, "p.json", doc), "--no-timing")
    v = checks(rep)
    assert v["span_+1"] == "inconclusive"
    assert v["span_-1"] == "pass"
    assert code == 0


def test_file_input_matches_catalog(tmp_path):
    path = write(tmp_path, "j.json", cli.entry_to_json(catalog.get("ex318")))
    _, a, _ = run("cone-span", "--input", path, "--no-timing")
    _, b, _ = run("cone-span", "--input", "catalog:ex318", "--no-timing")
    for rep in (a, b):
        rep.pop("input")
        rep["data"].pop("tube_type", None)
    assert a == b


def test_degenerate_functional(capsys):
    code, _, _ = run("cone-span", "--input", "catalog:ex318", "--functional", "1,0")
    assert code == 2


def test_report_file_and_timing(tmp_path):
    target = tmp_path / "r.json"
    code, rep, text = run("catalog", "jacobi(1)", "--report", str(target))
    assert code == 0
    assert "seconds" in rep["timing"]
    assert target.read_text() == text


def test_reports_are_deterministic():
    for argv in (("cone-span", "--input", "catalog:jacobi(2)"), ("catalog", "ex319(2)")):
        _, a, _ = run(*argv)
        _, b, _ = run(*argv)
        a.pop("timing")
        b.pop("timing")
        assert cli.dumps(a) == cli.dumps(b)
