import math

import pytest

from circletransport.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def parse_kv(text):
    pairs = dict(line.split("=", 1) for line in text.strip().splitlines())
    return {k: float(v) for k, v in pairs.items()}


class TestDist:
    def test_both_metrics(self, capsys):
        code, out, _ = run_cli(capsys, "dist", "--base", "2", "--n", "2")
        assert code == 0
        kv = parse_kv(out)
        assert kv["base"] == 2 and kv["N"] == 2 and kv["n"] == 2
        assert kv["d_line"] == pytest.approx(2 - 1 / math.log(2), abs=1e-15)
        assert kv["d_circle"] == pytest.approx((3 - 2 * math.sqrt(2)) / math.log(2), abs=1e-12)

    def test_line_only_omits_circle_keys(self, capsys):
        code, out, _ = run_cli(capsys, "dist", "--base", "10", "--n", "100",
                               "--metric", "line")
        assert code == 0
        kv = parse_kv(out)
        assert "d_line" in kv and "d_circle" not in kv

    def test_domain_error_exits_2(self, capsys):
        code, _, err = run_cli(capsys, "dist", "--base", "10", "--n", "5")
        assert code == 2
        assert "error" in err


class TestSweep:
    def test_writes_csv(self, capsys, tmp_path):
        out_file = tmp_path / "rows.csv"
        code, out, _ = run_cli(capsys, "sweep", "--base", "10",
                               "--n-min", "100", "--n-max", "1000",
                               "--points-per-decade", "2", "--out", str(out_file))
        assert code == 0
        lines = out_file.read_text().splitlines()
        assert lines[0].startswith("base,N,n,")
        assert len(lines) == 4  # header + {100, 316, 1000}
        assert "wrote 3 rows" in out

    def test_unwritable_path_exits_2(self, capsys, tmp_path):
        missing_dir = tmp_path / "no" / "such" / "dir" / "x.csv"
        code, _, err = run_cli(capsys, "sweep", "--base", "10",
                               "--n-min", "100", "--n-max", "1000",
                               "--out", str(missing_dir))
        assert code == 2
        assert "error" in err


class TestVerify:
    def test_insufficient_range_exits_2(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--base", "10",
                               "--n-min", "100", "--n-max", "500")
        assert code == 2
        assert "insufficient range" in out

    def test_small_grid_passes(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--base", "10",
                               "--n-min", "1000", "--n-max", "100000",
                               "--threads", "2")
        assert code == 0
        assert "verification PASSED" in out
        assert "line-sharp-rate" in out


class TestOracleCheck:
    def test_small_run_passes(self, capsys):
        code, out, _ = run_cli(capsys, "oracle-check", "--trials", "20",
                               "--max-atoms", "12", "--seed", "7")
        assert code == 0
        assert "PASS" in out


class TestUsage:
    def test_unknown_command_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_missing_required_flag_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["dist", "--base", "10"])
        assert exc.value.code == 2
