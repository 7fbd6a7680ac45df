import json

import pytest

from maschke_kit.cli import main
from maschke_kit.examples import (
    cyclic_group,
    group_algebra,
    mutate,
    pair_groupoid,
    pair_hopf_algebroid,
    split_pair_algebra,
)
from maschke_kit.exactlin import FieldSpec
from maschke_kit.structfile import (
    StructureFileError,
    parse_structure_file,
    parse_structure_text,
    serialize_structure,
)
from maschke_kit.weakhopf import WeakHopfPresentation, integral_system

QQ = FieldSpec.rationals()


def run(tmp_path, *argv, expect=0):
    out = tmp_path / "report.json"
    code = main([*argv, "--out", str(out)])
    assert code == expect, (argv, code)
    return out.read_text() if out.exists() else ""


def gen(tmp_path, name, *argv):
    path = tmp_path / name
    assert main(["generate", *argv, "--out", str(path)]) == 0
    return path


class TestRoundTrip:
    @pytest.mark.parametrize("argv", [
        ("group-algebra", "--group", "C4", "--field", "Fp:2"),
        ("dual-group-algebra", "--group", "S3", "--field", "Q"),
        ("groupoid-algebra", "--groupoid", "pair:2", "--field", "Fp:3"),
        ("hopf-category", "--groupoid", "conn:C2:2", "--field", "Q"),
        ("pair-algebroid", "--base", "dual", "--field", "Q"),
        ("group", "--group", "K4"),
        ("groupoid", "--groupoid", "sum:C2,C3"),
        ("commalgebra", "--base", "kxk", "--field", "Fp:5"),
    ])
    def test_generate_parse_serialize_is_byte_stable(self, tmp_path, argv):
        path = gen(tmp_path, "s.json", *argv)
        text = path.read_text()
        presentation = parse_structure_file(path)
        assert serialize_structure(presentation) == text

    def test_parse_matches_generator_output(self, tmp_path):
        path = gen(tmp_path, "c2.json", "group-algebra", "--group", "C2",
                   "--field", "Q")
        parsed = parse_structure_file(path)
        assert isinstance(parsed, WeakHopfPresentation)
        assert parsed == group_algebra(cyclic_group(2), QQ)


class TestParsingErrors:
    def test_nonprime_field_rejected(self):
        text = json.dumps({
            "format_version": "maschke-kit/1",
            "field": {"kind": "Fp", "p": 4},
            "kind": "weakhopf",
            "payload": {},
        })
        with pytest.raises(StructureFileError, match="not prime"):
            parse_structure_text(text)

    def test_mutated_structure_names_witness(self, tmp_path):
        w = group_algebra(cyclic_group(2), QQ)
        bad = mutate(w, 3)
        while True:
            from maschke_kit.weakhopf import check_weak_bialgebra
            if not check_weak_bialgebra(bad).ok():
                break
            bad = mutate(bad, 1)
        path = tmp_path / "bad.json"
        path.write_text(serialize_structure(bad))
        with pytest.raises(StructureFileError, match="axiom failure"):
            parse_structure_file(path)

    def test_missing_key_paths(self):
        with pytest.raises(StructureFileError, match=r"\$\.payload"):
            parse_structure_text(json.dumps({
                "format_version": "maschke-kit/1",
                "field": {"kind": "Q"},
                "kind": "weakhopf",
                "payload": {"dim": 1},
            }))

    def test_wrong_version(self):
        with pytest.raises(StructureFileError, match="version"):
            parse_structure_text(json.dumps({
                "format_version": "maschke-kit/0",
                "field": {"kind": "Q"},
                "kind": "weakhopf",
                "payload": {},
            }))


class TestCommands:
    def test_maschke_pass_and_exit_zero(self, tmp_path):
        path = gen(tmp_path, "c3.json", "group-algebra", "--group", "C3",
                   "--field", "Q")
        text = run(tmp_path, "maschke", "--structure", str(path))
        doc = json.loads(text)
        assert doc["verdict"] == "pass"
        assert all(doc["integrals"].values())
        assert doc["basis_convention"] == "left-major"

    def test_integrals_assert_exit_codes(self, tmp_path):
        path = gen(tmp_path, "c3f3.json", "group-algebra", "--group", "C3",
                   "--field", "Fp:3")
        run(tmp_path, "integrals", "--structure", str(path), "--side", "left",
            "--normalized", "--assert", "infeasible", expect=0)
        run(tmp_path, "integrals", "--structure", str(path), "--side", "left",
            "--normalized", "--assert", "feasible", expect=2)

    def test_invalid_structure_exit_three(self, tmp_path):
        w = group_algebra(cyclic_group(2), QQ)
        from maschke_kit.finalg import CoalgebraPresentation
        bad = WeakHopfPresentation(
            w.algebra,
            CoalgebraPresentation(QQ, 2, w.coalgebra.comult, (1, 0)),
            w.antipode)
        path = tmp_path / "bad.json"
        path.write_text(serialize_structure(bad))
        assert main(["integrals", "--structure", str(path),
                     "--side", "left"]) == 3
        assert main(["validate", "--structure", str(path),
                     "--out", str(tmp_path / "v.json")]) == 3
        doc = json.loads((tmp_path / "v.json").read_text())
        assert doc["valid"] is False and doc["failures"]

    def test_validate_ok(self, tmp_path):
        path = gen(tmp_path, "pg.json", "groupoid-algebra", "--groupoid",
                   "pair:2", "--field", "Q")
        text = run(tmp_path, "validate", "--structure", str(path))
        doc = json.loads(text)
        assert doc["valid"] is True and doc["failures"] == []

    def test_usage_errors_exit_four(self, tmp_path):
        assert main(["integrals"]) == 4
        assert main(["generate", "group-algebra", "--field", "Q"]) == 4
        assert main(["generate", "group-algebra", "--group", "C3"]) == 4
        assert main(["generate", "group-algebra", "--group", "E8",
                     "--field", "Q"]) == 4

    def test_reports_deterministic_modulo_timing(self, tmp_path):
        path = gen(tmp_path, "k4.json", "group-algebra", "--group", "K4",
                   "--field", "Fp:2")
        docs = []
        for name in ("a", "b"):
            out = tmp_path / f"{name}.json"
            assert main(["separability", "--structure", str(path),
                         "--out", str(out)]) == 0
            doc = json.loads(out.read_text())
            doc.pop("timing_ms")
            docs.append(doc)
        assert docs[0] == docs[1]

    def test_hopfcat_commands(self, tmp_path):
        path = gen(tmp_path, "hc.json", "hopf-category", "--groupoid", "pair:2",
                   "--field", "Fp:3")
        doc = json.loads(run(tmp_path, "cointegrals", "--structure", str(path),
                             "--side", "left"))
        assert doc["feasible"] is True and doc["family"]
        doc = json.loads(run(tmp_path, "coseparability", "--structure", str(path)))
        assert doc["feasible"] is True
        assert all(e["coseparable"] for e in doc["per_hom"])

    def test_algebroid_commands(self, tmp_path):
        path = gen(tmp_path, "pa.json", "pair-algebroid", "--base", "kxk",
                   "--field", "Q")
        doc = json.loads(run(tmp_path, "integrals", "--structure", str(path),
                             "--side", "left", "--normalized"))
        assert doc["feasible"] is True
        assert doc["solution"]["labels"] == ["p(x)p", "p(x)q", "q(x)p", "q(x)q"]

    def test_maschke_refuses_missing_antipode(self, tmp_path):
        w = group_algebra(cyclic_group(2), QQ)
        path = tmp_path / "noanti.json"
        path.write_text(serialize_structure(
            WeakHopfPresentation(w.algebra, w.coalgebra, None)))
        assert main(["maschke", "--structure", str(path)]) == 3

    def test_text_format(self, tmp_path):
        path = gen(tmp_path, "c2.json", "group-algebra", "--group", "C2",
                   "--field", "Q")
        out = tmp_path / "r.txt"
        assert main(["separability", "--structure", str(path), "--format",
                     "text", "--out", str(out)]) == 0
        assert "feasible: True" in out.read_text()


class TestReportReverification:
    def test_integral_solutions_reverify(self, tmp_path):
        for family, name, flag, value, field in (
                ("group-algebra", "g.json", "--group", "C4", "Q"),
                ("groupoid-algebra", "gd.json", "--groupoid", "pair:2", "Fp:5")):
            path = gen(tmp_path, name, family, flag, value, "--field", field)
            out = tmp_path / "rep.json"
            assert main(["integrals", "--structure", str(path), "--side", "left",
                         "--variant", "duoidal", "--normalized",
                         "--out", str(out)]) == 0
            doc = json.loads(out.read_text())
            assert doc["feasible"]
            presentation = parse_structure_file(path)
            f = presentation.field
            sol = tuple(f.parse_scalar(x) for x in doc["solution"]["coefficients"])
            system = integral_system(presentation, "left", "duoidal", True)
            assert system.satisfied_by(sol)
            for row in doc["homogeneous_basis"]:
                vec = tuple(f.parse_scalar(x) for x in row)
                hom_system = integral_system(presentation, "left", "duoidal", False)
                assert hom_system.satisfied_by(vec)

    def test_maschke_witnesses_reverify(self, tmp_path):
        from maschke_kit.weakhopf import cointegral_system
        path = gen(tmp_path, "s3.json", "group-algebra", "--group", "S3",
                   "--field", "Q")
        out = tmp_path / "rep.json"
        assert main(["maschke", "--structure", str(path), "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        presentation = parse_structure_file(path)
        f = presentation.field
        for side in ("left", "right"):
            for variant in ("primed", "duoidal"):
                w = doc["witnesses"][f"integral {side}/{variant}"]
                vec = tuple(f.parse_scalar(x) for x in w)
                assert integral_system(presentation, side, variant,
                                       True).satisfied_by(vec)
                w = doc["witnesses"][f"cointegral {side}/{variant}"]
                vec = tuple(f.parse_scalar(x) for x in w)
                assert cointegral_system(presentation, side, variant,
                                         True).satisfied_by(vec)
