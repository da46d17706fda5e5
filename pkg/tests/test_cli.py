import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from frobsing import catalog
from frobsing.cli import main
from frobsing.criteria import Verdict, VerdictKind
from frobsing.report import EXIT_BUDGET, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_REFUTED, exit_code, strip_timing

FERMAT = ["--vars", "x,y,z,w", "--ci", "x^4+y^4+z^4+w^4", "--max-e", "2"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


class TestExitCodes:
    def test_fermat(self, capsys):
        code, out, _ = run(capsys, "fpure", "--p", "5", *FERMAT)
        assert code == 0 and out.startswith("HoldsUpToLevel(2)")
        code, out, _ = run(capsys, "fpure", "--p", "3", *FERMAT)
        assert code == 1 and out.startswith("Refuted(level 1)")

    def test_cusp_p7_level3(self, capsys):
        code, rep = run_json(capsys, "fpure", "--p", "7", "--vars", "x,y", "--g", "x^2-y^3",
                             "--t", "5/6", "--max-e", "3")
        assert code == 0
        assert rep["verdict"]["kind"] == "holds_up_to_level" and rep["verdict"]["level"] == 3
        assert [r["r"] for r in rep["verdict"]["transcript"]] == [5, 40, 285]

    def test_usage_errors(self, capsys):
        assert run(capsys, "fpure", "--p", "4", "--vars", "x", "--g", "x")[0] == 2
        assert run(capsys, "fpure", "--p", "5", "--vars", "x", "--g", "x^")[0] == 2
        assert run(capsys, "fpure", "--p", "5", "--vars", "x", "--t", "1/0", "--g", "x")[0] == 2
        with pytest.raises(SystemExit) as info:
            main(["fpure", "--vars", "x"])
        assert info.value.code == 2

    def test_budget(self, capsys, monkeypatch):
        monkeypatch.setenv("FROBSING_BUDGET", "10")
        code, out, _ = run(capsys, "fpure", "--p", "7", "--vars", "x,y,z,w,u",
                           "--ci", "x^3+y^3+z^3+w^3+u^3", "--max-e", "1")
        assert code == EXIT_BUDGET and "truncated" in out
        monkeypatch.setenv("FROBSING_BUDGET", "pairs=1")
        code, _, _ = run(capsys, "fpure", "--p", "5", "--vars", "x,y,z", "--ideal",
                         "--ci", "x*y", "--ci", "x*z", "--ci", "y*z")
        assert code == EXIT_BUDGET

    def test_sfr_and_divfr(self, capsys):
        code, out, _ = run(capsys, "sfr", "--p", "5", "--vars", "x,y,z", "--ci", "x*y-z^2",
                           "--witness", "x", "--max-e", "1")
        assert code == 0 and "x^4*y^3*z^2" in out
        code, _, _ = run(capsys, "sfr", "--p", "7", "--vars", "x,y", "--g", "x^2-y^3", "--t", "5/6")
        assert code == EXIT_INCONCLUSIVE
        code, _, _ = run(capsys, "divfr", "--p", "5", "--vars", "x,y", "--g", "x")
        assert code == 0


@given(st.sampled_from(list(VerdictKind)), st.booleans())
def test_exit_code_contract(kind, truncated):
    v = Verdict(kind, "stub", 2, 1, truncated=truncated)
    expected = {VerdictKind.HOLDS_UP_TO_LEVEL: EXIT_OK, VerdictKind.CERTIFIED_POSITIVE: EXIT_OK,
                VerdictKind.REFUTED: EXIT_REFUTED, VerdictKind.INCONCLUSIVE: EXIT_INCONCLUSIVE}[kind]
    assert exit_code(v) == (EXIT_BUDGET if truncated else expected)


def test_fpt(capsys):
    code, rep = run_json(capsys, "fpt", "--p", "7", "--vars", "x,y", "--f", "x^2-y^3", "--max-e", "2")
    th = rep["threshold"]
    assert code == 0 and [n["j"] for n in th["nu"]] == [5, 40]
    assert th["upper"] == "41/48" and th["estimate"] == "5/6"


def test_graph(capsys):
    g = '{"vertices":[{"b":2},{"b":2},{"b":2}],"edges":[[0,1],[1,2]],"boundary":[1,0,0]}'
    code, rep = run_json(capsys, "graph", "--json", g, "--p", "3")
    assert code == 0 and rep["graph_type"] == "a"
    assert rep["a"] == ["-3/4", "-1/2", "-1/4"]
    assert rep["predicted"] == {"p=3": "divisorially F-regular"}
    assert run(capsys, "graph", "--json", '{"vertices":[{"b":1},{"b":1}],"edges":[[0,1]]}')[0] == 2


def test_graph_file(capsys, tmp_path):
    path = tmp_path / "fork.json"
    path.write_text(json.dumps({"vertices": [{"b": 2}] * 3, "edges": [[0, 1], [0, 2]],
                                "boundary": [1, 0, 0]}))
    code, out, _ = run(capsys, "graph", "--file", str(path))
    assert code == 0 and "graph type (c)" in out and "-1/2" in out


def test_toric(capsys):
    code, out, _ = run(capsys, "toric", "--rays", "1,0;1,2", "--full-delta", "--e", "2")
    assert code == 0 and out.splitlines()[0] == "true"
    code, rep = run_json(capsys, "toric", "--rays", "1,0;0,1", "--e", "1", "--box", "3")
    assert code == 0 and rep["check"]["witnesses"]
    assert run(capsys, "toric", "--rays", "1,0;-1,0")[0] == 2


def test_determinism(capsys):
    argv = ["fpure", "--p", "13", "--vars", "x,y", "--g", "x^2-y^3", "--t", "5/6", "--mode", "strong"]
    _, a = run_json(capsys, *argv)
    _, b = run_json(capsys, *argv)
    assert json.dumps(strip_timing(a)) == json.dumps(strip_timing(b))
    assert a["schema"] == "frobsing/1"


class TestCatalog:
    def test_required_coverage(self):
        ids = set(catalog.CATALOG)
        for p in (5, 7, 13):
            for t in ("5_6", "11_12"):
                assert f"cusp-p{p:02d}-t{t}-weak" in ids and f"cusp-p{p:02d}-t{t}-strong" in ids
        for p in (3, 5, 7, 11, 13):
            assert f"fermat-p{p:02d}-fpure" in ids
        for p in (3, 5, 7):
            for t in ("1_2", "1", "3_2"):
                assert f"cone-p{p:02d}-t{t}-fpure" in ids
        assert any(i.startswith("regular-") for i in ids)
        assert any(i.startswith("graded-") for i in ids)
        assert {i.split("-")[1] for i in ids if i.startswith("graph-")} >= {"a", "b", "c"}
        assert any(i.startswith("toric-a1") for i in ids)
        for e in catalog.CATALOG.values():
            assert e.source in ("claim", "derived") and e.note

    def test_filter(self):
        assert [e.id for e in catalog.select("fermat-p*")] == [f"fermat-p{p:02d}-fpure" for p in (3, 5, 7, 11, 13)]
        assert all(e.id.startswith("graph-c") for e in catalog.select("graph-c*"))

    def test_sweep_flags_p5_cusp(self, capsys):
        code, out, _ = run(capsys, "catalog", "--max-e", "2")
        assert code == 0
        row = next(line for line in out.splitlines() if line.startswith("cusp-p05-t5_6-weak"))
        assert "FLAGGED" in row
        assert "FAIL " not in out

    def test_parallel_matches_serial(self, capsys):
        _, a = run_json(capsys, "catalog", "--filter", "cusp", "--jobs", "1")
        _, b = run_json(capsys, "catalog", "--filter", "cusp", "--jobs", "3")
        assert strip_timing(a)["entries"] == strip_timing(b)["entries"]
        assert a["flagged"] == ["cusp-p05-t5_6-weak"]

    def test_list(self, capsys):
        code, out, _ = run(capsys, "catalog", "--list", "--filter", "toric")
        assert code == 0 and "toric-a1-full-e2" in out
