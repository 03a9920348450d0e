import json
import subprocess
import sys


from cartanhunt.cartan import CartanMatrix
from cartanhunt.cli import main

PARTITION_LABELS = "chi_(3),chi_(2,1),chi_(1^3)"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, "--format", "json", *argv)
    return code, json.loads(out)


class TestChartab:
    def test_s3(self, capsys):
        code, out, _ = run(capsys, "chartab", "--group", "S3")
        assert code == 0
        assert "labels (canonical order): chi_(1^3), chi_(3), chi_(2,1)" in out
        assert "[size 3]" in out

    def test_trivial(self, capsys):
        code, data = run_json(capsys, "chartab", "--group", "trivial")
        assert code == 0 and [r["values"] for r in data["rows"]] == [[1]]

    def test_c3_renders_roots(self, capsys):
        code, out, _ = run(capsys, "chartab", "--group", "C3")
        assert "z3^2" in out and " z3 " in out + " "

    def test_bad_table_file(self, capsys, tmp_path, s3_table):
        from cartanhunt.chartab import table_to_dict
        data = table_to_dict(s3_table)
        data["rows"][0]["values"][1] = 1
        p = tmp_path / "bad.json"
        p.write_text(json.dumps(data))
        code, out, err = run(capsys, "chartab", "--group", "S3", "--table", str(p))
        assert code == 2 and out == "" and "error" in err


class TestDelta:
    def test_lb_file(self, capsys, data_dir):
        code, data = run_json(capsys, "delta", "--group", "S3", "--subgroup",
                              str(data_dir / "Lb.json"), "--label-order", PARTITION_LABELS)
        assert code == 0 and data["rows"] == [[1, 1, 0], [2, 2, 0], [1, 1, 0]]

    def test_diagonal_identity(self, capsys):
        code, data = run_json(capsys, "delta", "--group", "S3", "--subgroup", "diag")
        assert data["rows"] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]

    def test_trivial_subgroup_degree_products(self, capsys):
        code, data = run_json(capsys, "delta", "--group", "S3", "--subgroup", "trivial",
                              "--label-order", PARTITION_LABELS)
        assert data["rows"] == [[1, 2, 1], [2, 4, 2], [1, 2, 1]]

    def test_unknown_label(self, capsys):
        code, _, err = run(capsys, "delta", "--group", "S3", "--subgroup", "Lb",
                           "--label-order", "a,b,c")
        assert code == 2 and err


class TestCartan:
    def test_reference_configuration(self, capsys):
        code, out, _ = run(capsys, "cartan", "--builtin", "paper-s3", "--label-order", PARTITION_LABELS)
        assert code == 0
        assert "det = 6050  -> non-singular" in out
        assert "det = 0 (mod 3: 0)  -> singular" in out
        assert "172          2        165" in out

    def test_json_round_trip(self, capsys):
        code, data = run_json(capsys, "cartan", "--builtin", "paper-s3", "--label-order", PARTITION_LABELS)
        C, M = (CartanMatrix.from_dict(m) for m in data["matrices"])
        assert C.tolist() == [[172, 2, 165], [4, 9, 0], [2, 2, 5]]
        assert M.tolist() == [[187, 176], [17, 16]] and M.prime == 3
        assert CartanMatrix.from_dict(C.to_dict()) == C
        assert data["matrices"][0]["det"] == 6050 and data["matrices"][1]["singular"]

    def test_zero_multiplicities(self, capsys):
        code, data = run_json(capsys, "cartan", "--group", "S3", "--subgroups",
                              "diag,Lb,Lc", "--z", "0,0,0")
        assert data["matrices"][0]["rows"] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        assert data["matrices"][0]["det"] == 1

    def test_small_configuration(self, capsys):
        code, data = run_json(capsys, "cartan", "--group", "S3", "--subgroups", "diag,Lb,Lc",
                              "--z", "0,1,6", "--decomp", "S3-p3")
        assert [m["det"] for m in data["matrices"]] == [16, 0]

    def test_uncontracted(self, capsys):
        code, data = run_json(capsys, "cartan", "--builtin", "paper-s3", "--uncontracted")
        assert all(m["labels"][-1] == "z" for m in data["matrices"])
        assert data["matrices"][1]["rows"][-1] == [0, 0, 1]

    def test_multiplicity_mismatch(self, capsys):
        code, _, err = run(capsys, "cartan", "--group", "S3", "--subgroups", "Lb,Lc", "--z", "1")
        assert code == 2 and "multiplicities" in err

    def test_negative_multiplicity(self, capsys):
        code, _, _ = run(capsys, "cartan", "--group", "S3", "--subgroups", "Lb", "--z", "-1")
        assert code == 2


class TestVerifySearch:
    def test_verify_reference(self, capsys, tmp_path):
        report = tmp_path / "r.json"
        code, out, _ = run(capsys, "verify", "--builtin", "paper-s3", "--oracle",
                           "--report", str(report))
        assert code == 0 and "verdict: PASS" in out
        data = json.loads(report.read_text())
        assert data["status"] == "PASS" and data["oracle_points"] == 390
        assert data["modular_cartan"]["rows"] == [[187, 176], [17, 16]]

    def test_verify_failure_exit_code(self, capsys):
        code, out, _ = run(capsys, "verify", "--group", "S3", "--subgroups", "diag,Lb,Lc",
                           "--z", "0,0,0", "--decomp", "S3-p3")
        assert code == 4 and "verdict: FAIL" in out

    def test_search_box(self, capsys, tmp_path):
        report = tmp_path / "s.json"
        code, out, _ = run(capsys, "search", "--group", "S3", "--decomp", "S3-p3",
                           "--strategy", "box", "--bound", "10", "--report", str(report))
        assert code == 0 and "found z = [0, 1, 6]" in out
        data = json.loads(report.read_text())
        assert data["hits"][0]["z"] == [0, 1, 6]

    def test_search_kernel_all(self, capsys):
        code, data = run_json(capsys, "search", "--group", "S3", "--decomp", "S3-p3",
                              "--strategy", "kernel", "--all")
        assert code == 0
        assert [4, 2, 165] in [h["z"] for h in data["hits"]]

    def test_search_exhausted(self, capsys):
        code, out, _ = run(capsys, "search", "--group", "S3", "--decomp", "identity:5")
        assert code == 3 and "exhausted" in out

    def test_search_enumerated_pool(self, capsys):
        code, data = run_json(capsys, "search", "--group", "C2", "--decomp", "identity:3",
                              "--pool", "enumerate", "--bound", "2")
        assert code == 3 and len(data["pool"]) == 5

    def test_unknown_active_name(self, capsys):
        code, _, err = run(capsys, "search", "--group", "S3", "--decomp", "S3-p3",
                           "--active", "nope")
        assert code == 2


class TestMonoidCheck:
    def test_lb(self, capsys, tmp_path):
        out_file = tmp_path / "m.txt"
        code, data = run_json(capsys, "monoid-check", "--group", "S3", "--subgroups", "Lb",
                              "--export", str(out_file))
        assert code == 0 and data["size"] == 25 and data["non_regular_j_classes"] == 1
        assert all(data["checks"].values())
        assert len(out_file.read_text().splitlines()) == 25

    def test_seed_flag_accepted(self, capsys):
        code, _, _ = run(capsys, "--seed", "7", "monoid-check", "--builtin", "paper-s3")
        assert code == 0


def test_entry_point_streams():
    proc = subprocess.run([sys.executable, "-m", "cartanhunt.cli", "delta", "--group", "S3",
                           "--subgroup", "missing_file.json"], capture_output=True, text=True)
    assert proc.returncode == 2
    assert proc.stdout == "" and "error" in proc.stderr


def test_oversized_search_is_an_input_error(capsys):
    code, out, err = run(capsys, "search", "--group", "D4", "--decomp", "identity:3",
                         "--pool", "enumerate", "--bound", "2")
    assert code == 2 and "exceeds" in err and out == ""
