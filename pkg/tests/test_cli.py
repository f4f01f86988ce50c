import numpy as np
import pytest

from prcldpc.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_k13(capsys):
    code, out, _ = run(capsys, "analyze", "--h", "0,1,5,11,13", "--n", "19")
    assert code == 0
    assert "d=2 A(2)=3" in out
    assert "Z0=8 Z1=2" in out
    assert "(i) d=1 iff r < s_max" in out


def test_analyze_descriptor_csv_and_families(capsys, tmp_path):
    desc = tmp_path / "k13.txt"
    desc.write_text("h=0,1,5,11,13\nn=21\n")
    csv_path = tmp_path / "s.csv"
    code, out, _ = run(capsys, "analyze", "--code", str(desc), "--csv", str(csv_path), "--families")
    assert code == 0 and "d=3 A(3)=8" in out
    assert csv_path.read_text() == "n,d,A(d),method\n21,3,8,exact\n"
    assert "core_start,L,Z_l,Z_r,w" in out


def test_analyze_k75_estimate(capsys):
    code, out, _ = run(capsys, "analyze", "--h", "0,2,21,29,60,72,75", "--n", "150")
    assert code == 0 and "d_est=11 (estimate)" in out


def test_analyze_parse_error(capsys):
    code, _, err = run(capsys, "analyze", "--h", "0,1,1", "--n", "19")
    assert code == 1 and "duplicate exponent" in err and "column 5" in err


def test_profile_k15(capsys):
    code, out, _ = run(capsys, "profile", "--h", "0,2,8,12,15", "--d-max", "7")
    assert code == 0
    assert out.splitlines() == ["d,n,method"] + [f"{d},{n},exact" for d, n in
                                                 [(1, 16), (2, 21), (3, 23), (4, 28), (5, 30), (6, 31), (7, 34)]]


def test_profile_single_row_and_gnuplot(capsys, tmp_path):
    out_path = tmp_path / "prof.csv"
    code, _, _ = run(capsys, "profile", "--h", "0,1,5,11,13", "--d-max", "1", "--out", str(out_path), "--gnuplot")
    assert code == 0
    assert out_path.read_text().splitlines() == ["d,n,method", "1,14,exact"]
    assert str(out_path) in (tmp_path / "prof.gp").read_text()


def test_profile_gnuplot_needs_out(capsys):
    with pytest.raises(SystemExit):
        main(["profile", "--h", "0,1,5,11,13", "--d-max", "1", "--gnuplot"])


def test_encode(capsys, tmp_path):
    code, out, _ = run(capsys, "encode", "--h", "0,2,3", "--n", "7", "--info", "111")
    assert code == 0 and out == "1110100\n"
    infos = tmp_path / "info.txt"
    infos.write_text("100\n011\n")
    _, out, _ = run(capsys, "encode", "--h", "0,2,3", "--n", "7", "--info-file", str(infos))
    assert out.splitlines() == ["1001110", "0111010"]


def test_decode_csv_and_f32(capsys, tmp_path):
    llr = np.array([[10, -10, -10, 10, -10, 10, 10]], dtype=np.float64)  # 1110100 with bit 0 flipped
    csv_path = tmp_path / "llr.csv"
    np.savetxt(csv_path, llr, delimiter=",")
    code, out, _ = run(capsys, "decode", "--h", "0,2,3", "--n", "7", "--llr", str(csv_path))
    assert code == 0 and out.startswith("1110100 ") and "converged=yes" in out
    f32 = tmp_path / "llr.f32"
    np.loadtxt(csv_path, delimiter=",").astype(np.float32).tofile(f32)
    _, out2, _ = run(capsys, "decode", "--h", "0,2,3", "--n", "7", "--llr", str(f32), "--llr-format", "f32")
    assert out2 == out


def test_simulate(capsys, tmp_path):
    meta = tmp_path / "meta.json"
    code, out, _ = run(capsys, "simulate", "--h", "0,1,5,11,13", "--ebn0", "0:2:1", "--max-trials", "1000",
                       "--block-size", "500", "--meta", str(meta))
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("ebn0_db,trials") and len(lines) == 4
    assert '"seed": 0' in meta.read_text()


def test_simulate_invalid_grid(capsys):
    code, _, err = run(capsys, "simulate", "--h", "0,1,5,11,13", "--ebn0", "2,1", "--max-trials", "10")
    assert code == 1 and "ascending" in err


def test_validate(capsys):
    code, out, _ = run(capsys, "validate", "--h", "0,2,21,29,60,72,75")
    assert code == 0 and "primitive=yes" in out and "s=[2, 19, 8, 31, 12, 3]" in out
    code, out, _ = run(capsys, "validate", "--h", "0,1,3,4,5")
    assert code == 3 and "golomb=no" in out


def test_design(capsys):
    code, out, err = run(capsys, "design", "--k", "34", "--wh", "5", "--first")
    assert code == 0 and out.splitlines()[0] == "0,9,22,32,34" and "1 hit(s)" in err


def test_design_empty(capsys):
    code, _, err = run(capsys, "design", "--k", "5", "--wh", "5")
    assert code == 1 and err.startswith("error:")


def test_pn_dump(capsys):
    code, out, _ = run(capsys, "pn-dump", "--h", "0,2,3", "--length", "10")
    assert code == 0 and out == "1110100111\n"
