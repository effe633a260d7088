import json
import subprocess
import sys

import pytest

from matroidlab.cli import RunConfig, main, run
from matroidlab.conjectures import DiscretePolymatroid, TEReport, te_check
from matroidlab.core import DualMatroid, UniformMatroid, fingerprint_of, uniform
from matroidlab.errors import InvalidParameter, ParseError, ValidationError
from matroidlab.io import emit_report, parse_definition

U24 = {"type": "uniform", "r": 2, "n": 4}
K4 = {"type": "graphic", "vertices": 4, "edges": [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]}


@pytest.fixture
def defs(tmp_path):
    def write(doc, name="m.json"):
        p = tmp_path / name
        p.write_text(json.dumps(doc))
        return str(p)
    return write


def cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, json.loads(out) if out else None


class TestParse:
    def test_uniform(self):
        m = parse_definition(json.dumps(U24))
        assert isinstance(m, UniformMatroid) and (m.rank, m.size) == (2, 4)

    def test_dual(self):
        m = parse_definition({"type": "dual", "inner": U24})
        assert isinstance(m, DualMatroid) and len(m.bases()) == 6

    def test_explicit_witness(self):
        with pytest.raises(ValidationError) as info:
            parse_definition({"type": "explicit", "bases": [[0, 1], [2, 3]]})
        assert info.value.witness == {"B1": [0, 1], "B2": [2, 3], "e": 0}

    @pytest.mark.parametrize("doc,path", [
        ({"type": "nope"}, "$.type"),
        ({"type": "uniform", "r": 2}, "$"),
        ({"type": "uniform", "r": "2", "n": 4}, "$.r"),
        ({"type": "dual", "inner": {"type": "uniform", "r": 5, "n": 4}}, "$.inner"),
        ({"type": "direct_sum", "left": U24, "right": {"type": "graphic", "vertices": 2, "edges": [[0, "x"]]}},
         "$.right.edges[0]"),
        ({"type": "minor", "inner": U24, "deleted": "0"}, "$.deleted"),
    ])
    def test_error_paths(self, doc, path):
        with pytest.raises(ParseError) as info:
            parse_definition(doc)
        assert info.value.path == path

    def test_bad_json(self):
        with pytest.raises(ParseError):
            parse_definition("{not json")

    def test_every_type(self):
        docs = [
            U24, K4,
            {"type": "linear", "p": 2, "matrix": [[1, 0, 1], [0, 1, 1]]},
            {"type": "transversal", "sets": [[0, 1], [2, 3]]},
            {"type": "dual", "inner": K4},
            {"type": "direct_sum", "left": U24, "right": U24},
            {"type": "minor", "inner": K4, "deleted": [0], "contracted": [1]},
            {"type": "explicit", "bases": [[0, 1], [0, 2], [1, 2]]},
        ]
        for doc in docs:
            m = parse_definition(doc)
            # the fingerprint is a function of the definition alone
            assert parse_definition(json.dumps(doc)).fingerprint == m.fingerprint

    def test_labels_not_fingerprinted(self):
        a = parse_definition(U24)
        b = parse_definition(dict(U24, labels=["a", "b", "c", "d"]))
        assert a.fingerprint == b.fingerprint and b.ground.label(2) == "c"
        with pytest.raises(ParseError):
            parse_definition(dict(U24, labels=["a"]))

    def test_polymatroid(self):
        p = parse_definition({"n": 2, "bases": [[2, 0], [1, 1], [0, 2]]})
        assert isinstance(p, DiscretePolymatroid) and p.rank == 2
        with pytest.raises(ValidationError):
            parse_definition({"type": "polymatroid", "n": 2, "bases": [[2, 0], [0, 2]]})


class TestEmit:
    def test_empty_certificate(self):
        from matroidlab.certificate import Certificate

        cert = Certificate((3,), (3,), (), "x")
        doc = json.loads(emit_report(cert.to_json()))
        assert doc["moves"] == [] and doc["start"] == [[0, 1]] and doc["end"] == [[0, 1]]

    def test_te_report_roundtrip(self):
        rep = te_check(uniform(2, 4), 2, 2)
        again = TEReport.from_json(json.loads(emit_report(rep.to_json())))
        assert again.to_json() == rep.to_json()

    def test_fingerprint(self):
        m = uniform(2, 4)
        doc = json.loads(emit_report({"x": 1}, m.fingerprint))
        assert doc["matroid_sha"] == fingerprint_of(U24) == m.fingerprint
        assert doc["schema_version"] == 1


class TestRun:
    def test_rewrite_then_verify_in_subprocess(self, defs, tmp_path, capsys):
        path = defs(U24)
        cert = str(tmp_path / "cert.json")
        code = main(["rewrite", path, "--from", "[[0,1],[2,3]]", "--to", "[[0,2],[1,3]]",
                     "--deterministic", "-o", cert])
        assert code == 0
        proc = subprocess.run(
            [sys.executable, "-m", "matroidlab.cli", "verify", path, "--certificate", cert, "--deterministic"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0, proc.stdout + proc.stderr
        assert json.loads(proc.stdout)["valid"] is True

    def test_tampered_certificate(self, defs, tmp_path, capsys):
        path = defs(U24)
        cert = tmp_path / "cert.json"
        main(["jm", path, "--m1", "[[0,1],[2,3]]", "--m2", "[[0,2],[1,3]]", "--deterministic", "-o", str(cert)])
        doc = json.loads(cert.read_text())
        mv = doc["moves"][0]
        mv["e"], mv["f"] = mv["f"], mv["e"]
        cert.write_text(json.dumps(doc))
        code, out = cli(["verify", path, "--certificate", str(cert), "--deterministic"], capsys)
        assert code == 2 and out["valid"] is False and out["failed_at"] == 0

    def test_te(self, defs, capsys):
        code, out = cli(["te", defs(U24), "--variant", "2", "--n", "2", "--deterministic"], capsys)
        assert code == 0 and out["verdict"] == "holds-up-to-2"

    def test_fiber_infeasible(self, defs, capsys):
        code, out = cli(["fiber", defs(U24), "--multidegree", "[2,0,0,0]", "--deterministic"], capsys)
        assert code == 0 and out["node_count"] == 0

    def test_invalid_definition(self, defs, capsys):
        code, out = cli(["bases", defs({"type": "explicit", "bases": [[0, 1], [2, 3]]}), "--deterministic"], capsys)
        assert code == 2 and out["result"]["witness"]["e"] == 0

    def test_axioms_reports_failure(self, defs, capsys):
        code, out = cli(["axioms", defs({"type": "explicit", "bases": [[0, 1], [2, 3]]}), "--deterministic"], capsys)
        assert code == 0 and out["holds"] is False

    def test_missing_file(self, capsys):
        code, out = cli(["bases", "/nonexistent.json"], capsys)
        assert code == 2

    def test_cap_exit(self, defs, capsys):
        code, out = cli(["bases", defs({"type": "uniform", "r": 3, "n": 7}), "--max-bases", "5"], capsys)
        assert code == 3 and out["result"]["cap"] == 5

    def test_env_cap(self, defs, capsys, monkeypatch):
        monkeypatch.setenv("MATROIDLAB_MAX_BASES", "5")
        code, _ = cli(["bases", defs({"type": "uniform", "r": 3, "n": 7})], capsys)
        assert code == 3

    def test_non_sbo_rewrite(self, defs, capsys):
        code, out = cli(["rewrite", defs(K4), "--from", "[[0,1,4],[2,3,5]]", "--to", "[[0,1,5],[2,3,4]]"], capsys)
        assert code == 2

    def test_sbo(self, defs, capsys):
        code, out = cli(["sbo", defs(K4), "--deterministic"], capsys)
        assert code == 0 and out["strongly_base_orderable"] is False and out["witness_pair"]

    def test_saturate_and_cyclic(self, defs, tmp_path, capsys):
        path = defs(K4)
        code, out = cli(["saturate", path, "--m1", "[[0,1,4],[2,3,5]]", "--m2", "[[0,2,4],[1,3,5]]",
                         "--reference", "[0,1,2]", "--minimum", "--deterministic"], capsys)
        assert code == 0 and out["min_exponent"] <= out["exponent"]
        code, out = cli(["cyclic", path, "--deterministic"], capsys)
        assert code == 0 and out["found"]

    def test_polymatroid(self, defs, capsys):
        code, out = cli(["polymatroid", defs({"n": 2, "bases": [[2, 0], [1, 1], [0, 2]]}), "--deterministic"], capsys)
        assert code == 0 and out["matroid"]["basis_count"] == 6 and out["max_p_swaps"] <= 2

    def test_polymatroid_verb_needs_polymatroid(self, defs, capsys):
        code, _ = cli(["polymatroid", defs(U24)], capsys)
        assert code == 2

    def test_run_config_validation(self):
        with pytest.raises(InvalidParameter):
            RunConfig(command="frobnicate", definition="x")
        with pytest.raises(InvalidParameter):
            RunConfig(command="bases", definition="x", jobs=0)

    def test_run_writes_output(self, defs, tmp_path):
        out = tmp_path / "o.json"
        assert run(RunConfig(command="bases", definition=defs(U24), output=str(out), deterministic=True)) == 0
        assert json.loads(out.read_text())["count"] == 6

    def test_deterministic_bytes(self, defs, tmp_path):
        path = defs(K4)
        outputs = []
        for k in range(3):
            out = tmp_path / f"{k}.json"
            main(["te", path, "--variant", "3", "--n", "2", "--deterministic", "-o", str(out)])
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1] == outputs[2]
        assert b"elapsed" not in outputs[0]

    def test_argparse_errors_exit_two(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["te", "x.json", "--variant", "7", "--n", "2"])
        assert info.value.code == 2
