import json
import os

from collatz_abc.cli import main

TABLE1 = """\
1 57121 57122
2 6436341 6436343
1 7 9
"""


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestEnumerate:
    def test_stdout_listing(self, capsys):
        code, out, _ = run(capsys, "enumerate", "--j", "10")
        assert code == 0
        values = [int(line.split(",")[0]) for line in out.splitlines()[2:]]
        assert values == [159, 239, 447, 511, 639, 681, 767, 795, 871, 1022]

    def test_csv_out(self, capsys, tmp_path):
        path = str(tmp_path / "n10.csv")
        code, _, err = run(capsys, "enumerate", "--j", "10", "--out", path)
        assert code == 0
        lines = open(path).read().splitlines()
        assert lines[0].startswith("# schema=collatz-abc/enumerate/")
        assert len(lines) == 12

    def test_bad_j(self, capsys):
        code, _, err = run(capsys, "enumerate", "--j", "1")
        assert code == 1


class TestTrace:
    def test_parities(self, capsys):
        code, out, _ = run(capsys, "trace", "--n", "159", "--j", "10")
        assert code == 0
        assert "q=9" in out
        assert "parities=1111101111" in out


class TestLbhMisses:
    def test_single_c(self, capsys, tmp_path):
        path = str(tmp_path / "m.csv")
        code, out, _ = run(
            capsys, "lbh-misses", "--jmax", "80", "--C", "1.0", "--out", path
        )
        assert code == 0
        assert "total_misses=0" in out
        assert open(path).readline().startswith("# schema=collatz-abc/lbh-misses/")

    def test_parallel_byte_identical(self, capsys, tmp_path):
        p1 = str(tmp_path / "a.csv")
        p8 = str(tmp_path / "b.csv")
        run(capsys, "--jobs", "1", "lbh-misses", "--jmax", "100",
            "--c-grid", "0,0.5,1.0", "--out", p1)
        run(capsys, "--jobs", "4", "lbh-misses", "--jmax", "100",
            "--c-grid", "0,0.5,1.0", "--out", p8)
        assert open(p1, "rb").read() == open(p8, "rb").read()

    def test_scatter_out(self, capsys, tmp_path):
        path = str(tmp_path / "s.csv")
        code, _, _ = run(
            capsys, "lbh-misses", "--jmax", "12", "--scatter-out", path
        )
        assert code == 0
        lines = open(path).read().splitlines()
        assert lines[1] == "j,k,n_digits,c_equal"
        assert len(lines) == 2 + sum(range(2, 13))


class TestScan:
    def test_report(self, capsys, tmp_path):
        csv = str(tmp_path / "scan.csv")
        txt = str(tmp_path / "scan.txt")
        code, out, err = run(
            capsys, "scan", "--jlo", "2", "--jhi", "25",
            "--out", csv, "--text-out", txt,
        )
        assert code == 0
        assert "j=19 k=16" in out
        body = open(csv).read()
        assert body.startswith("# schema=collatz-abc/scan/")
        assert "19,16,9,-,53^3" in body
        assert "53^3" in open(txt).read()

    def test_parallel_byte_identical(self, capsys, tmp_path):
        a = str(tmp_path / "a.csv")
        b = str(tmp_path / "b.csv")
        run(capsys, "--jobs", "1", "scan", "--jlo", "2", "--jhi", "30", "--out", a)
        run(capsys, "--jobs", "4", "scan", "--jlo", "2", "--jhi", "30", "--out", b)
        assert open(a, "rb").read() == open(b, "rb").read()

    def test_corrupted_checkpoint_exits_2(self, capsys, tmp_path):
        ck = str(tmp_path / "ck.jsonl")
        code, _, _ = run(capsys, "scan", "--jlo", "2", "--jhi", "12",
                         "--checkpoint", ck)
        assert code == 0
        text = open(ck).read()
        with open(ck, "w") as fh:
            fh.write(text.replace('"statement1":true', '"statement1":false', 1))
        code, _, err = run(capsys, "scan", "--jlo", "2", "--jhi", "12",
                           "--checkpoint", ck)
        assert code == 2
        assert "invariant violation" in err


class TestMuCheck:
    def test_json_record(self, capsys):
        code, out, _ = run(capsys, "mu-check", "--a", "1", "--b", "57121",
                           "--c", "57122")
        assert code == 0
        rec = json.loads(out)
        assert rec["is_mu_hit"] == "yes"
        assert rec["m_lo"] == "49712"

    def test_input_error(self, capsys):
        code, _, err = run(capsys, "mu-check", "--a", "1", "--b", "7", "--c", "9")
        assert code == 1
        assert "error" in err


class TestBruteOracle:
    def test_small_empty(self, capsys):
        code, out, _ = run(capsys, "brute-oracle", "--cmax", "2000")
        assert code == 0
        assert out == ""

    def test_resource_guard_exit_3(self, capsys):
        code, _, err = run(capsys, "brute-oracle", "--cmax", "99999999")
        assert code == 3
        assert "resource guard" in err


class TestIngest:
    def test_records_and_summary(self, capsys, tmp_path):
        src = tmp_path / "triples.txt"
        src.write_text(TABLE1)
        recs = str(tmp_path / "r.jsonl")
        summ = str(tmp_path / "s.csv")
        code, out, err = run(
            capsys, "ingest", "--in", str(src), "--thresholds", "1e5,1e7",
            "--records-out", recs, "--summary-out", summ,
        )
        assert code == 0
        assert "rejected line 3" in err
        assert "total=2" in out and "mu_hits=2" in out
        lines = open(recs).read().splitlines()
        assert len(lines) == 2
        assert json.loads(lines[0])["c"] == 57122
        body = open(summ).read().splitlines()
        assert body[0].startswith("# schema=collatz-abc/fig2/")
        assert body[2] == "100000,1,1,0"

    def test_missing_file(self, capsys):
        code, _, _ = run(capsys, "ingest", "--in", "/nonexistent/x.txt")
        assert code == 1


class TestWieferich:
    def test_search(self, capsys):
        code, out, _ = run(capsys, "wieferich", "--limit", "10000")
        assert code == 0
        assert out.split() == ["1093", "3511"]


class TestFamily:
    def test_first_family(self, capsys):
        code, out, _ = run(capsys, "family", "--p", "1093", "--m", "1")
        assert code == 0
        assert "E=1092 k=2 j=1094" in out
        assert "mu_hit=yes" in out

    def test_csv_report(self, capsys, tmp_path):
        path = str(tmp_path / "fam.csv")
        code, _, _ = run(capsys, "family", "--p", "1093", "--m", "1", "--out", path)
        assert code == 0
        lines = open(path).read().splitlines()
        assert lines[0] == "# schema=collatz-abc/family/1"
        assert lines[2].startswith("1093,1,1092,2,1094,")
        assert lines[2].endswith(",yes")


class TestFitAndFigures:
    def test_fit_roundtrip(self, capsys, tmp_path):
        src = tmp_path / "pts.csv"
        src.write_text("x,N\n1000,1\n1000000,3.522\n1000000000,12.4\n")
        code, out, _ = run(capsys, "fit", "--in", str(src))
        assert code == 0
        assert out.startswith("alpha=")

    def test_emit_fig1(self, capsys, tmp_path):
        misses = str(tmp_path / "m.csv")
        fig = str(tmp_path / "fig1.csv")
        run(capsys, "lbh-misses", "--jmax", "40", "--c-grid", "0,1.0",
            "--out", misses)
        code, _, _ = run(capsys, "emit-fig", "--which", "fig1",
                         "--from-misses", misses, "--out", fig)
        assert code == 0
        lines = open(fig).read().splitlines()
        assert lines[0].startswith("# schema=collatz-abc/fig1/")
        assert lines[1] == "C,jmax,count"
        assert lines[2].startswith("0,40,")

    def test_emit_fig2_with_overlay(self, capsys, tmp_path):
        src = tmp_path / "summary.csv"
        src.write_text("# schema=collatz-abc/fig2/1\nx,N_mu,N_abc,N_good\n1000,1,2,0\n")
        fig = str(tmp_path / "fig2.csv")
        code, _, _ = run(capsys, "emit-fig", "--which", "fig2",
                         "--from-summary", str(src), "--alpha", "0.1818",
                         "--x0", "1000", "--out", fig)
        assert code == 0
        lines = open(fig).read().splitlines()
        assert lines[1] == "# overlay alpha=0.1818 x0=1000"

    def test_emit_fig_schema_mismatch(self, capsys, tmp_path):
        src = tmp_path / "bad.csv"
        src.write_text("x,N\n1,2\n")
        code, _, err = run(capsys, "emit-fig", "--which", "fig2",
                           "--from-summary", str(src), "--out",
                           str(tmp_path / "o.csv"))
        assert code == 1
        assert "schema mismatch" in err


class TestPlumbing:
    def test_unknown_command_is_input_error(self, capsys):
        code, _, _ = run(capsys, "definitely-not-a-command")
        assert code == 1

    def test_config_file_defaults(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text('{"j": 10}')
        code, out, _ = run(capsys, "--config", str(cfg), "enumerate")
        assert code == 0
        assert out.splitlines()[2].startswith("159,")

    def test_config_flag_overrides(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text('{"j": 10}')
        code, out, _ = run(capsys, "--config", str(cfg), "enumerate", "--j", "2")
        assert code == 0
        assert len(out.splitlines()) == 4  # schema + header + 2 elements

    def test_config_bad_json(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text("{nope")
        code, _, err = run(capsys, "--config", str(cfg), "enumerate", "--j", "5")
        assert code == 1
        assert "config" in err

    def test_bad_jobs(self, capsys):
        code, _, _ = run(capsys, "--jobs", "0", "enumerate", "--j", "5")
        assert code == 1

    def test_data_dir_env(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("COLLATZ_ABC_DATA", str(tmp_path))
        code, _, _ = run(capsys, "enumerate", "--j", "5", "--out", "rel.csv")
        assert code == 0
        assert (tmp_path / "rel.csv").exists()

    def test_atomic_write_leaves_no_temp(self, capsys, tmp_path):
        out = str(tmp_path / "x.csv")
        run(capsys, "enumerate", "--j", "6", "--out", out)
        assert os.listdir(tmp_path) == ["x.csv"]
