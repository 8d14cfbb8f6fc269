import json
from fractions import Fraction

import pytest

from contracta.cli import (
    ASKEY_NODES, SCHEMA, Flags, askey_graph, catalog_json, main, report_json, dumps, run_suite,
)
from contracta.errors import InvalidFlag, UnknownSuite


def test_lie_suite_all_pass():
    (rep,) = run_suite("lie")
    assert rep.summary == {"pass": 11, "fail": 0, "error": 0, "total": 11}


def test_s9_model_suite_single_case():
    flags = Flags(m=3, B=(Fraction(1, 3), Fraction(1, 5), Fraction(1, 7)))
    (rep,) = run_suite("s9-model", flags)
    cases = {c.case_id.split(" ")[0]: c for c in rep.cases}
    assert cases["structure[corrected]"].status == "pass"
    assert cases["structure[corrected]"].residual == "0"
    assert cases["structure[paper]"].status == "fail"
    assert "corrected" in cases["recurrence"].notes
    assert cases["spectrum"].status == "pass"


def test_quantum_e10():
    (rep,) = run_suite("quantum", Flags(system="E10", samples=1))
    assert rep.ok
    assert "= 0" in rep.cases[0].notes


def test_unknown_suite_and_system():
    with pytest.raises(UnknownSuite):
        run_suite("nope")
    with pytest.raises(InvalidFlag):
        run_suite("quantum", Flags(system="E99"))


def test_status_matches_residual():
    for rep in run_suite("wilson", Flags(seed=3)) + run_suite("potentials", Flags(points=3)):
        for case in rep.cases:
            if rep.suite == "wilson":
                assert (case.status == "pass") == (case.residual == "0")
            assert case.status in ("pass", "fail", "error")


def test_report_is_deterministic():
    flags = Flags(seed=7)
    a = dumps(report_json("wilson", flags, run_suite("wilson", flags)))
    b = dumps(report_json("wilson", flags, run_suite("wilson", flags)))
    assert a == b
    doc = json.loads(a)
    assert doc["schema"] == SCHEMA and doc["seed"] == 7
    c = dumps(report_json("wilson", Flags(seed=8), run_suite("wilson", Flags(seed=8))))
    assert c != a


def test_askey_graph():
    g = askey_graph()
    assert len(g.nodes) == 13 and set(g.nodes) == set(ASKEY_NODES)
    assert g.is_acyclic()
    verified = [e for e in g.edges if e.verified]
    assert [(e.source, e.target) for e in verified] == [("Wilson", "Hahn")]
    assert "S9 -> E1" in verified[0].label
    dot = g.to_dot()
    assert '"Wilson" -> "Hahn" [style=solid' in dot
    assert dot.count("style=dashed") == len(g.edges) - 1
    off = g.with_verification("Wilson", "Hahn", False)
    assert not off.edge("Wilson", "Hahn").verified


def test_contract_suite_verifies_the_edge():
    (rep,) = run_suite("contract-s9-e1")
    core = rep.cases[:4]
    assert [c.case_id for c in core] == ["hahn-convergence", "E1-structure", "H-prime", "L2-x-diagonal"]
    assert all(c.status == "pass" for c in core)
    assert rep.cases[4].case_id == "L3-x-operator" and rep.cases[4].status == "fail"


def test_catalog_json():
    doc = catalog_json()
    assert len(doc["lie_contractions"]) == 11
    assert len(doc["classical_cases"]) == 19
    assert len(doc["structures"]) == 12
    assert len(doc["askey"]["nodes"]) == 13


def test_main_exit_codes(tmp_path, capsys):
    out = tmp_path / "lie.json"
    assert main(["verify", "lie", "--json", str(out)]) == 0
    assert json.loads(out.read_text())["summary"]["pass"] == 11
    assert main(["verify", "s9-model", "--m", "1", "--json", str(tmp_path / "s9.json")]) == 1
    assert main(["verify", "bogus"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify", "lie", "--B", "1/0"])
    assert exc.value.code == 2
    assert main(["verify", "potentials", "--prec", "53"]) == 2


def test_main_askey_and_catalog(tmp_path):
    dot = tmp_path / "askey.dot"
    assert main(["askey", "dot", "-o", str(dot)]) == 0
    assert dot.read_text().startswith("digraph askey {")
    cat = tmp_path / "cat.json"
    assert main(["catalog", "--json", str(cat)]) == 0
    assert json.loads(cat.read_text())["schema"] == SCHEMA


def test_csv_output(tmp_path):
    path = tmp_path / "conv.csv"
    main(["verify", "contract-s9-e1", "--m", "1", "--json", str(tmp_path / "c.json"), "--csv", str(path)])
    lines = path.read_text().splitlines()
    assert lines[0] == "B3,n,x,abs_error"
    assert len(lines) == 1 + 3 * 4
