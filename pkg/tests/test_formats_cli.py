import json
import subprocess
import sys
from fractions import Fraction

import pytest

from delone_forge import formats
from delone_forge.cli import main
from delone_forge.delone import certify_delone
from delone_forge.errors import DeloneForgeError
from delone_forge.hadamard import hadamard_simplex_instance
from delone_forge.lattice import EmbeddedLattice, LatticeSimplex, QuadraticForm
from delone_forge.verify import recheck

F = Fraction


def write(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    f = {
        "ident2": write(tmp_path / "ident2.json", {"dim": 2, "gram": [["1", "0"], ["0", "1"]]}),
        "hex": write(tmp_path / "hex.json", {"dim": 2, "gram": [["2", "1"], ["1", "2"]]}),
        "tri": write(tmp_path / "tri.json", {"points": [["0", "0"], ["1", "0"], ["0", "1"]]}),
        "line": write(tmp_path / "line.json", {"points": [["0", "0"], ["1", "1"], ["2", "2"]]}),
        "simplex": write(tmp_path / "simplex.json",
                         {"vertices": [["1", "1", "0"], ["0", "1", "1"], ["1", "0", "1"], ["0", "0", "0"]]}),
        "indef": write(tmp_path / "indef.json", {"dim": 2, "gram": [["1", "2"], ["2", "1"]]}),
        "asym": write(tmp_path / "asym.json", {"dim": 2, "gram": [["1", "0"], ["1", "1"]]}),
        "deplat": write(tmp_path / "deplat.json", {"ambient_dim": 2, "basis": [["1", "1"], ["2", "2"]]}),
        "broken": str(tmp_path / "broken.json"),
    }
    (tmp_path / "broken.json").write_text("{not json")
    return f


class TestRoundTrip:
    def test_rational_form(self):
        q = QuadraticForm([[F(3, 2), F(-1, 3)], [F(-1, 3), 2]])
        doc = formats.form_to_doc(q)
        assert doc["gram"][0] == ["3/2", "-1/3"]
        assert formats.doc_to_form(json.loads(formats.dumps(doc))) == q

    def test_lattice(self):
        lat = EmbeddedLattice([(1, 1, 0), (0, 1, 1), (0, 0, 2)])
        assert formats.doc_to_lattice(json.loads(formats.dumps(formats.lattice_to_doc(lat)))) == lat

    def test_simplex_and_points(self):
        s = LatticeSimplex([(1, 0), (0, 0), (0, 1)])
        assert formats.doc_to_simplex(formats.simplex_to_doc(s)) == s
        pts = [(3, -4), (0, 7)]
        assert formats.doc_to_points(formats.points_to_doc(pts)) == pts

    @pytest.mark.parametrize("pts", [[(0, 0), (1, 0), (0, 1)], [(0, 0), (2, 0), (1, 3)]])
    def test_certificates(self, pts):
        cert = certify_delone(pts, QuadraticForm([[2, 1], [1, 2]]))
        doc = json.loads(formats.dumps(formats.certificate_to_doc(cert)))
        assert formats.doc_to_certificate(doc) == cert

    def test_degenerate_certificate(self):
        doc = formats.certificate_to_doc(formats.degenerate_certificate())
        assert doc["verdict"] == "degenerate" and doc["center"] is None
        assert formats.doc_to_certificate(doc) == formats.degenerate_certificate()

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_instance(self, n):
        inst = hadamard_simplex_instance(n)
        back = formats.doc_to_instance(json.loads(formats.dumps(formats.instance_to_doc(inst))))
        assert back == inst

    def test_dumps_canonical(self):
        assert formats.dumps({"b": 1, "a": [1]}) == '{\n  "a": [\n    1\n  ],\n  "b": 1\n}\n'


class TestValidation:
    def test_loads_form(self, files):
        assert formats.validate_and_load(files["hex"], "form") == QuadraticForm([[2, 1], [1, 2]])

    @pytest.mark.parametrize("key,kind,msg", [
        ("indef", "form", "not positive definite"),
        ("asym", "form", "not symmetric"),
        ("deplat", "lattice", "rank deficient"),
        ("broken", "form", "invalid JSON"),
    ])
    def test_pointed_messages(self, files, key, kind, msg):
        with pytest.raises(DeloneForgeError, match=msg):
            formats.validate_and_load(files[key], kind)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DeloneForgeError, match="cannot read"):
            formats.validate_and_load(tmp_path / "nope.json", "form")

    def test_float_entries_rejected(self, tmp_path):
        p = write(tmp_path / "f.json", {"dim": 1, "gram": [[0.5]]})
        with pytest.raises(DeloneForgeError):
            formats.validate_and_load(p, "form")

    def test_unknown_kind(self, files):
        with pytest.raises(ValueError):
            formats.validate_and_load(files["hex"], "banana")


class TestCommands:
    def test_hadamard_certify(self, capsys):
        code, out, _ = run(["hadamard", "--n", "3", "--certify"], capsys)
        doc = json.loads(out)
        assert code == 0
        assert doc["expected_relvol"] == 2 and doc["certificate"]["verdict"] == "delone"
        assert recheck(doc["certificate"], doc["form"], doc["simplex"]["vertices"]) == "delone"

    def test_hadamard_plain(self, capsys):
        code, out, _ = run(["hadamard", "--n", "2"], capsys)
        assert code == 0 and "certificate" not in json.loads(out)

    def test_hadamard_bad_n(self, capsys):
        code, _, err = run(["hadamard", "--n", "0"], capsys)
        assert code == 1 and "error" in err

    def test_certify_not_delone(self, files, capsys):
        code, out, err = run(["certify", "--form", files["ident2"], "--points", files["tri"]], capsys)
        assert code == 2
        assert json.loads(out)["witness"] == ["1", "1"]
        assert "[1, 1]" in err

    def test_certify_delone(self, files, capsys):
        code, out, _ = run(["certify", "--form", files["hex"], "--points", files["tri"]], capsys)
        assert code == 0 and json.loads(out)["verdict"] == "delone"

    def test_certify_degenerate(self, files, capsys):
        code, out, _ = run(["certify", "--form", files["hex"], "--points", files["line"]], capsys)
        assert code == 1 and json.loads(out)["verdict"] == "degenerate"

    @pytest.mark.parametrize("key,msg", [("indef", "not positive definite"), ("asym", "not symmetric")])
    def test_certify_bad_form(self, files, capsys, key, msg):
        code, out, err = run(["certify", "--form", files[key], "--points", files["tri"]], capsys)
        assert code == 1 and msg in err and out == ""

    def test_relvol(self, files, capsys):
        assert run(["relvol", "--simplex", files["simplex"]], capsys)[:2] == (0, "2\n")

    def test_product_rank_deficient_instance(self, tmp_path, capsys):
        bad = write(tmp_path / "bad.json", {
            "dim": 2, "expected_relvol": 1,
            "lattice": {"ambient_dim": 2, "basis": [["1", "1"], ["2", "2"]]},
            "form": {"dim": 2, "gram": [["1", "0"], ["0", "1"]]},
            "simplex": {"vertices": [["0", "0"], ["1", "0"], ["0", "1"]]},
        })
        code, out, err = run(["product", "--left", bad, "--right", "interval"], capsys)
        assert code == 1 and "rank deficient" in err and out == ""

    def test_enumerate(self, files, capsys):
        code, out, _ = run(["enumerate", "--form", files["ident2"], "--center", "1/2,1/2", "--r2", "1/2"],
                           capsys)
        assert code == 0
        assert json.loads(out)["points"] == [["0", "0"], ["0", "1"], ["1", "0"], ["1", "1"]]

    def test_enumerate_bad_center(self, files, capsys):
        code, _, err = run(["enumerate", "--form", files["ident2"], "--center", "1/2", "--r2", "1"], capsys)
        assert code == 1 and "center" in err
        code, _, err = run(["enumerate", "--form", files["ident2"], "--center", "0,x", "--r2", "1"], capsys)
        assert code == 1

    def test_bounds_csv(self, capsys):
        code, out, _ = run(["bounds", "--dmax", "8", "--format", "csv"], capsys)
        lines = out.splitlines()
        assert code == 0 and len(lines) == 9
        row = dict(zip(lines[0].split(","), lines[7].split(",")))
        assert row["d"] == "7" and row["mv_lower"] == "4" and row["mv_upper"] == "187"

    def test_bounds_json(self, capsys):
        code, out, _ = run(["bounds", "--dmax", "6", "--format", "json"], capsys)
        doc = json.loads(out)
        assert code == 0 and len(doc["rows"]) == 6
        assert doc["constants"]["mv5_product_rate"] == "1.1487"

    def test_product_builtin(self, capsys):
        code, out, _ = run(["product", "--left", "hadamard:3", "--right", "interval"], capsys)
        doc = json.loads(out)
        assert code == 0
        assert doc["count"] == 8 and doc["relvol_each"] == 2 and doc["mode"] == "exhaustive"
        for s in doc["simplices"]:
            assert recheck(s["certificate"], doc["form"]) == "delone"
        assert recheck(doc["polytope_certificate"], doc["base_form"]) == "delone"

    def test_product_from_files_fixed_eps_fails(self, tmp_path, capsys):
        left = tmp_path / "h3.json"
        left.write_text(formats.dumps(formats.instance_to_doc(hadamard_simplex_instance(2))))
        right = write(tmp_path / "weak.json", {
            "dim": 1, "expected_relvol": 1,
            "lattice": {"ambient_dim": 1, "basis": [["1"]]},
            "form": {"dim": 1, "gram": [["1/4"]]},
            "simplex": {"vertices": [["0"], ["1"]]},
        })
        code, out, err = run(["product", "--left", str(left), "--right", right, "--eps", "1/8"], capsys)
        doc = json.loads(out)
        assert code == 2 and doc["verdict"] == "not_delone" and doc["certificate"]["witness"]
        assert "witness" in err
        code, out, _ = run(["product", "--left", str(left), "--right", right, "--eps", "1/16"], capsys)
        assert code == 0 and json.loads(out)["epsilon"] == "1/16"

    def test_product_bad_eps(self, capsys):
        assert run(["product", "--left", "interval", "--right", "interval", "--eps", "0"], capsys)[0] == 1
        assert run(["product", "--left", "interval", "--right", "interval", "--eps", "1"], capsys)[0] == 1
        assert run(["product", "--left", "hadamard:x", "--right", "interval"], capsys)[0] == 1

    def test_output_file(self, tmp_path, capsys):
        out = tmp_path / "t.csv"
        code, stdout, _ = run(["bounds", "--dmax", "3", "-o", str(out)], capsys)
        assert code == 0 and stdout == "" and out.read_text().startswith("d,mv_lower")


class TestRecheckCommand:
    def test_roundtrip(self, files, tmp_path, capsys):
        cert = tmp_path / "c.json"
        assert run(["certify", "--form", files["hex"], "--points", files["tri"], "-o", str(cert)], capsys)[0] == 0
        code, out, _ = run(["recheck", "--certificate", str(cert), "--form", files["hex"],
                            "--points", files["tri"]], capsys)
        assert (code, out) == (0, "valid delone\n")

    def test_tampered(self, files, tmp_path, capsys):
        cert = tmp_path / "c.json"
        run(["certify", "--form", files["hex"], "--points", files["tri"], "-o", str(cert)], capsys)
        doc = json.loads(cert.read_text())
        doc["radius_sq"] = "1"
        cert.write_text(json.dumps(doc))
        code, _, err = run(["recheck", "--certificate", str(cert), "--form", files["hex"]], capsys)
        assert code == 1 and "invalid" in err


CORPUS = [
    # (argv builder, expected exit code)
    (lambda f: ["certify", "--form", f["ident2"], "--points", f["tri"]], 2),
    (lambda f: ["certify", "--form", f["hex"], "--points", f["tri"]], 0),
    (lambda f: ["certify", "--form", f["hex"], "--points", f["line"]], 1),
    (lambda f: ["certify", "--form", f["indef"], "--points", f["tri"]], 1),
    (lambda f: ["certify", "--form", f["broken"], "--points", f["tri"]], 1),
    (lambda f: ["relvol", "--simplex", f["simplex"]], 0),
    (lambda f: ["relvol", "--simplex", f["line"]], 1),
    (lambda f: ["enumerate", "--form", f["hex"], "--center", "0,0", "--r2", "2"], 0),
    (lambda f: ["enumerate", "--form", f["asym"], "--center", "0,0", "--r2", "2"], 1),
    (lambda f: ["hadamard", "--n", "2", "--certify"], 0),
    (lambda f: ["bounds", "--dmax", "4"], 0),
    (lambda f: ["bounds", "--dmax", "0"], 1),
    (lambda f: ["product", "--left", "interval", "--right", "interval"], 0),
]


@pytest.mark.parametrize("case", range(len(CORPUS)))
def test_exit_codes_and_determinism(case, files, capsys):
    build, want = CORPUS[case]
    first = run(build(files), capsys)
    second = run(build(files), capsys)
    assert first[0] == want
    assert first == second


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "delone_forge", "bounds", "--dmax", "8"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[7].split(",")[:4] == ["7", "4", "seed-erdahl-rybnikov", "187"]
