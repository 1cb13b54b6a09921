"""CLI: parsing, reports, determinism, exit codes."""
import json

import pytest

from strathom.cli import main


def write(tmp_path, name, payload):
    p = tmp_path / name
    p.write_text(json.dumps(payload))
    return str(p)


@pytest.fixture
def susp_rp3(tmp_path):
    return write(tmp_path, "s.json", {
        "space": {"type": "suspension", "of": {"type": "atom", "name": "RP3"}},
        "perversity": 1, "ring": "Z"})


@pytest.fixture
def cone_rp2(tmp_path):
    return write(tmp_path, "c.json", {
        "space": {"type": "cone", "of": {"type": "atom", "name": "RP2"}},
        "perversity": 1})


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestProfile:
    def test_text_report(self, susp_rp3, capsys):
        code, out, _ = run(capsys, "profile", susp_rp3)
        assert code == 0
        assert "torsion-free pairing: non-singular" in out
        assert "torsion pairing:      degenerate" in out
        assert "locally torsion free: False" in out

    def test_json_report_schema(self, susp_rp3, capsys):
        code, out, _ = run(capsys, "profile", susp_rp3, "--json")
        assert code == 0
        data = json.loads(out)
        assert data["space"] == "susp(RP3)"
        assert data["coefficients"] == "Z"
        assert data["verdicts"]["torsion_free_pairing"] == "non-singular"
        assert data["verdicts"]["torsion_pairing"] == "degenerate"
        assert data["verdicts"]["poincare_duality"] is False
        assert data["components"]["T_K"] == {"3": {"rank": 0, "torsion": [2]}}
        assert data["components"]["T_C"] == {"2": {"rank": 0, "torsion": [2]}}
        assert data["peripheral"]["2"]["order"] == 4
        assert {c["name"] for c in data["checks"]} >= {
            "peripheral order bookkeeping", "verdict coherence"}
        assert "version" in data and "input_digest" in data

    def test_json_deterministic(self, susp_rp3, capsys):
        _, out1, _ = run(capsys, "profile", susp_rp3, "--json")
        _, out2, _ = run(capsys, "profile", susp_rp3, "--json")
        assert out1 == out2

    def test_sphere_trivial_profile(self, tmp_path, capsys):
        f = write(tmp_path, "sp.json", {
            "space": {"type": "suspension", "of": {"type": "atom", "name": "S3"}},
            "perversity": 1})
        code, out, _ = run(capsys, "profile", f, "--json")
        data = json.loads(out)
        assert data["peripheral"] == {}
        assert data["verdicts"]["poincare_duality"] is True

    def test_engine_both_merges(self, cone_rp2, capsys):
        code, out, _ = run(capsys, "profile", cone_rp2, "--engine", "both")
        assert code == 0
        assert "engine: symbolic" in out and "engine: simplicial" in out

    def test_unknown_atom_is_validation_error(self, tmp_path, capsys):
        f = write(tmp_path, "bad.json", {
            "space": {"type": "atom", "name": "K3"}})
        code, _, err = run(capsys, "profile", f)
        assert code == 2 and "K3" in err

    def test_parse_error_reported_with_position(self, tmp_path, capsys):
        p = tmp_path / "broken.json"
        p.write_text("{ not json")
        code, _, err = run(capsys, "profile", str(p))
        assert code == 2 and ":" in err

    def test_ring_override(self, susp_rp3, capsys):
        code, out, _ = run(capsys, "profile", susp_rp3, "--ring", "F2", "--json")
        data = json.loads(out)
        assert data["coefficients"] == "F2"
        assert data["peripheral"] == {}

    def test_mapping_torus_input(self, tmp_path, capsys):
        f = write(tmp_path, "mt.json", {
            "space": {
                "type": "mapping_torus",
                "of": {"type": "suspension",
                       "of": {"type": "product",
                              "factors": ["S1", "S1", "RP3"]}},
                "action": {"3": [[1, -1, 0, 0], [1, 0, 0, 0],
                                 [0, 0, 1, -1], [0, 0, 1, 0]]},
            },
            "perversity": 2})
        code, out, _ = run(capsys, "profile", f, "--json")
        assert code == 0
        data = json.loads(out)
        assert data["verdicts"]["poincare_duality"] is True
        assert data["verdicts"]["locally_torsion_free"] is False


class TestValidate:
    def test_valid_complex_file(self, tmp_path, capsys):
        f = write(tmp_path, "x.json", {
            "type": "complex", "dimension": 2,
            "vertices": [{"id": 0, "level": 0}, {"id": 1, "level": 2},
                         {"id": 2, "level": 2}, {"id": 3, "level": 2}],
            "simplices": [[0, 1, 2], [0, 2, 3], [0, 1, 3]]})
        code, out, _ = run(capsys, "validate", f)
        assert code == 0 and "valid" in out

    def test_invalid_complex(self, tmp_path, capsys):
        f = write(tmp_path, "bad.json", {
            "type": "complex", "dimension": 2,
            "vertices": [{"id": 0, "level": 2}, {"id": 1, "level": 2},
                         {"id": 2, "level": 2}, {"id": 9, "level": 2}],
            "simplices": [[0, 1, 2], [9]]})
        code, _, err = run(capsys, "validate", f)
        assert code == 2 and "maximal simplex" in err

    def test_constructor_input(self, cone_rp2, capsys):
        code, out, _ = run(capsys, "validate", cone_rp2)
        assert code == 0 and "codim 3" in out

    def test_symbolic_only(self, tmp_path, capsys):
        f = write(tmp_path, "t.json", {
            "space": {"type": "thom_circle",
                      "base": {"type": "atom", "name": "S2"},
                      "euler": {"s2": 2}}})
        code, out, _ = run(capsys, "validate", f)
        assert code == 0 and "symbolic-only" in out


class TestCrosscheck:
    def test_cone_rp2(self, cone_rp2, capsys):
        code, out, _ = run(capsys, "crosscheck", cone_rp2)
        assert code == 0
        assert "crosscheck: pass" in out
        assert "fail" not in out

    def test_symbolic_only_status(self, tmp_path, capsys):
        f = write(tmp_path, "mt.json", {
            "space": {"type": "thom_circle",
                      "base": {"type": "atom", "name": "S2"},
                      "euler": {"s2": 2}}})
        code, out, _ = run(capsys, "crosscheck", f)
        assert code == 0 and "symbolic-only" in out


class TestBenchSnf:
    def test_random(self, capsys):
        code, out, _ = run(capsys, "bench-snf", "--random", "30", "40", "0.1")
        assert code == 0 and "random 30x40" in out

    def test_identity_file(self, tmp_path, capsys):
        p = tmp_path / "id.mtx"
        p.write_text("3 3\n0 0 1\n1 1 1\n2 2 1\n")
        code, out, _ = run(capsys, "bench-snf", str(p))
        assert code == 0
        line = [l for l in out.splitlines() if "id.mtx" in l][0]
        assert " 3 " in line        # rank 3

    def test_unreadable_input(self, capsys):
        code, _, err = run(capsys, "bench-snf", "/nonexistent/file.mtx")
        assert code == 2

    def test_builtin_suspension_boundaries(self, capsys):
        import time
        t0 = time.perf_counter()
        code, out, _ = run(capsys, "bench-snf", "--builtin", "susp-rp3")
        assert code == 0
        assert time.perf_counter() - t0 < 60.0
        lines = [l for l in out.splitlines() if "susp(RP3)" in l]
        assert len(lines) == 4
        # the degree-3 boundary carries the 2-torsion of the suspension
        assert any("[2]" in l for l in lines)
