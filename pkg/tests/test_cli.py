import json

from ordkit import classify, dm_completion, is_isomorphic, load_poset, sec_table
from ordkit.cli import main
from ordkit.poset import parse_poset_text
from ordkit.secpc import classification_to_json, table_to_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCheck:
    def test_fig1_text(self, capsys, corpus_dir):
        code, out, _ = run(capsys, "check", str(corpus_dir / "fig1.poset"))
        assert code == 0
        assert "sectionally pseudocomplemented: yes" in out
        assert "strongly sectionally pseudocomplemented: no (witness: c,a)" in out

    def test_fig3_text(self, capsys, corpus_dir):
        code, out, _ = run(capsys, "check", str(corpus_dir / "fig3.poset"))
        assert code == 0
        assert "strongly sectionally pseudocomplemented: yes" in out
        assert "lattice: no" in out
        assert "relatively pseudocomplemented: no" in out

    def test_singleton_all_yes(self, capsys, corpus_dir):
        code, out, _ = run(capsys, "check", str(corpus_dir / "singleton.poset"))
        assert code == 0
        assert out.count(": yes") == 5

    def test_json_matches_library(self, capsys, corpus_dir, figs):
        code, out, _ = run(capsys, "check", str(corpus_dir / "fig2.poset"), "--format", "json")
        assert code == 0
        payload = json.loads(out)
        want = classification_to_json(classify(figs["fig2"]))
        assert payload == {"name": "fig2", **want}

    def test_parse_error_exit_2(self, capsys, tmp_path):
        bad = tmp_path / "bad.poset"
        bad.write_text("not a poset file\n")
        code, _, err = run(capsys, "check", str(bad))
        assert code == 2 and "parse error" in err

    def test_cycle_exit_3(self, capsys, tmp_path):
        bad = tmp_path / "cycle.poset"
        bad.write_text("poset c\nelements: a b\ncovers: a<b b<a\n")
        code, _, err = run(capsys, "check", str(bad))
        assert code == 3
        assert json.loads(err)["error"] == "CycleError"


class TestTable:
    def test_fig2_grid(self, capsys, corpus_dir):
        code, out, _ = run(capsys, "table", str(corpus_dir / "fig2.poset"))
        assert code == 0
        header = [s.strip() for s in out.splitlines()[0].split("|")]
        assert header == ["*", "0", "a", "b", "c", "1"]

    def test_fig6_undefined_cell(self, capsys, corpus_dir):
        code, out, _ = run(capsys, "table", str(corpus_dir / "fig6.poset"))
        assert code == 0
        row_a = next(l for l in out.splitlines() if l.startswith("a"))
        assert "—" in row_a

    def test_text_equals_json(self, capsys, corpus_dir, figs):
        _, text_out, _ = run(capsys, "table", str(corpus_dir / "fig7.poset"))
        code, json_out, _ = run(
            capsys, "table", str(corpus_dir / "fig7.poset"), "--format", "json"
        )
        assert code == 0
        data = json.loads(json_out)
        assert data == table_to_json(sec_table(figs["fig7"]))
        lines = [l for l in text_out.splitlines() if l]
        body = lines[2:]
        for line, row in zip(body, data["star"]):
            assert line.replace("|", "").split()[1:] == row


class TestComplete:
    def test_fig5_output_isomorphic_to_fig6(self, capsys, corpus_dir, figs):
        code, out, _ = run(capsys, "complete", str(corpus_dir / "fig5.poset"))
        assert code == 0
        _, P = parse_poset_text(out)
        assert is_isomorphic(P, figs["fig6"]) is not None

    def test_sidecar_written(self, capsys, corpus_dir, tmp_path):
        sidecar = tmp_path / "cuts.json"
        code, _, _ = run(
            capsys, "complete", str(corpus_dir / "fig3.poset"), "--sidecar", str(sidecar)
        )
        assert code == 0
        data = json.loads(sidecar.read_text())
        labels = {c["label"] for c in data["cuts"]}
        assert "L_d_e" in labels

    def test_json_structure(self, capsys, corpus_dir, figs):
        code, out, _ = run(
            capsys, "complete", str(corpus_dir / "fig5.poset"), "--format", "json"
        )
        assert code == 0
        data = json.loads(out)
        assert len(data["poset"]["elements"]) == 5
        assert sum(not c["principal"] for c in data["cuts"]) == 1


class TestSum:
    def test_verify_flags_pass(self, capsys, corpus_dir):
        code, out, _ = run(
            capsys,
            "sum",
            str(corpus_dir / "yokedexam.sum"),
            "--verify-dm",
            "--verify-secpc",
        )
        assert code == 0
        assert "overall: pass" in out
        # the completion's operation grid is printed
        assert "L_d_e" in out

    def test_failed_hypothesis_exit_3(self, capsys, tmp_path):
        f = tmp_path / "bad.sum"
        f.write_text(
            "summand lo\nposet p\nelements: x y\ncovers: x<y\n"
            "summand hi\nposet q\nelements: d e t\ncovers: d<t e<t\n"
        )
        code, _, err = run(capsys, "sum", str(f), "--verify-secpc")
        assert code == 3
        assert json.loads(err)["error"] == "HypothesisViolated"


class TestQuotient:
    def test_quotient_poset_output(self, capsys, corpus_dir, tmp_path):
        part = tmp_path / "part.json"
        part.write_text(json.dumps({"classes": [["0"], ["a"], ["b"], ["c"], ["d", "1"], ["e"]]}))
        code, out, _ = run(
            capsys, "quotient", str(corpus_dir / "fig3.poset"), str(part)
        )
        assert code == 0
        assert "{d,1}" in out

    def test_non_congruence_exit_3(self, capsys, corpus_dir, tmp_path):
        part = tmp_path / "part.json"
        part.write_text(json.dumps({"classes": [["0", "a"], ["b"], ["c"], ["1"]]}))
        code, _, err = run(
            capsys, "quotient", str(corpus_dir / "fig2.poset"), str(part)
        )
        assert code == 3
        assert json.loads(err)["error"] == "NotCongruence"


class TestCongruences:
    def test_fig2_listing(self, capsys, corpus_dir):
        code, out, _ = run(capsys, "congruences", str(corpus_dir / "fig2.poset"))
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 3
        assert all("convex=yes" in l for l in lines)

    def test_json_flags(self, capsys, corpus_dir):
        code, out, _ = run(
            capsys, "congruences", str(corpus_dir / "fig2.poset"), "--format", "json"
        )
        data = json.loads(out)
        assert code == 0 and len(data) == 3
        assert all(set(d) == {"classes", "convex", "strong"} for d in data)


class TestEnumerate:
    def test_summary(self, capsys):
        code, out, _ = run(capsys, "enumerate", "3")
        assert code == 0
        assert "n=3: 5 classes" in out

    def test_predicate_witness(self, capsys):
        code, out, _ = run(capsys, "enumerate", "4", "--predicate", "secpc-lost-under-DM")
        assert code == 0
        _, P = parse_poset_text(out)
        assert classify(P).is_sec_pc
        assert not classify(dm_completion(P).lattice).is_sec_pc

    def test_predicate_absent(self, capsys):
        code, out, _ = run(
            capsys, "enumerate", "4", "--predicate", "lattice-identity-violation"
        )
        assert code == 0 and out.strip() == "absent"

    def test_report_dir(self, capsys, tmp_path):
        code, out, _ = run(
            capsys, "enumerate", "3", "--report-dir", str(tmp_path / "rep")
        )
        assert code == 0
        assert (tmp_path / "rep" / "census.csv").exists()
        assert (tmp_path / "rep" / "census.png").exists()
        assert (tmp_path / "rep" / "census.json").exists()


class TestExportDot:
    def test_stdout(self, capsys, corpus_dir):
        code, out, _ = run(capsys, "export-dot", str(corpus_dir / "fig2.poset"))
        assert code == 0
        assert out.startswith("digraph fig2 {") and '"0" -> "a";' in out

    def test_file_output(self, capsys, corpus_dir, tmp_path):
        target = tmp_path / "fig2.dot"
        code, _, _ = run(
            capsys, "export-dot", str(corpus_dir / "fig2.poset"), "-o", str(target)
        )
        assert code == 0 and '"c" -> "1";' in target.read_text()


class TestRoundTripHarness:
    def test_cli_json_equals_library(self, capsys, corpus_dir):
        # identical inputs through CLI and library must agree structurally
        for fig in ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7"):
            path = corpus_dir / f"{fig}.poset"
            _, P = load_poset(path)
            _, out, _ = run(capsys, "table", str(path), "--format", "json")
            assert json.loads(out) == table_to_json(sec_table(P))
            _, out, _ = run(capsys, "check", str(path), "--format", "json")
            got = json.loads(out)
            got.pop("name")
            assert got == classification_to_json(classify(P))
