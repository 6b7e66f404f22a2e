"""Command line: parameter plumbing, packed bit files, exit codes."""

import numpy as np
import pytest

from bwpbch.cli import main
from bwpbch.codec import make_codec


def _pack(bits):
    return np.packbits(np.asarray(bits, dtype=np.uint8), bitorder="little").tobytes()


def _unpack(data, nbits):
    return np.unpackbits(np.frombuffer(data, np.uint8), count=nbits, bitorder="little")


@pytest.fixture(scope="module")
def small_codec():
    return make_codec(601, 500, 8, 4)


def test_plan_prints_construction(capsys):
    assert main(["plan", "--K", "32768", "--R", "3640", "--b", "32", "--f", "4"]) == 0
    out = capsys.readouterr().out
    for token in ("K=32768", "N=36404", "32 rows", "t=5", "[8, 8, 8, 8]"):
        assert token in out


def test_plan_rejects_infeasible(capsys):
    assert main(["plan", "--K", "1000", "--R", "30", "--b", "8", "--f", "1"]) == 2
    err = capsys.readouterr().err
    assert err.startswith("error:")


def test_plan_missing_parameter(capsys):
    assert main(["plan", "--K", "1000", "--R", "300", "--b", "8"]) == 2
    assert "missing parameter f" in capsys.readouterr().err


def test_config_file_with_overrides(tmp_path, capsys):
    cfg = tmp_path / "code.cfg"
    cfg.write_text("# golden setup\nK = 32768\nR = 3640\nb = 32\nf = 4\n")
    assert main(["plan", "--config", str(cfg), "--b", "15"]) == 0
    assert "N=36402" in capsys.readouterr().out  # the b=15 shape, not b=32


def test_config_rejects_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("K=100\nR=50\nb=8\nf=1\nturbo=yes\n")
    assert main(["plan", "--config", str(cfg)]) == 2
    assert "unknown key 'turbo'" in capsys.readouterr().err


def test_config_layout_options(tmp_path, capsys):
    cfg = tmp_path / "alt.cfg"
    cfg.write_text("K=601\nR=500\nb=8\nf=4\nrs_width=8\nprim_poly_7=0x89\n")
    assert main(["plan", "--config", str(cfg)]) == 0
    assert "N=1099" in capsys.readouterr().out


def test_encode_decode_roundtrip(tmp_path, small_codec, capsys):
    rng = np.random.default_rng(19)
    bits = rng.integers(0, 2, 601, dtype=np.uint8)
    args = ["--K", "601", "--R", "500", "--b", "8", "--f", "4"]
    msg_file = tmp_path / "msg.bin"
    frame_file = tmp_path / "frame.bin"
    out_file = tmp_path / "decoded.bin"
    msg_file.write_bytes(_pack(bits))

    assert main(["encode", *args, str(msg_file), "--out", str(frame_file)]) == 0
    frame = _unpack(frame_file.read_bytes(), 1099)
    assert np.array_equal(frame, small_codec.encode(bits))

    assert main(["decode", *args, str(frame_file), "--out", str(out_file)]) == 0
    assert np.array_equal(_unpack(out_file.read_bytes(), 601), bits)
    out = capsys.readouterr().out
    assert "outcome ok" in out and "iterations 0.0" in out


def test_decode_with_errors_and_exit_codes(tmp_path, small_codec, capsys):
    rng = np.random.default_rng(29)
    bits = rng.integers(0, 2, 601, dtype=np.uint8)
    frame = small_codec.encode(bits)
    args = ["--K", "601", "--R", "500", "--b", "8", "--f", "4"]

    # a few scattered errors decode fine
    noisy = frame.copy()
    noisy[rng.choice(1099, size=6, replace=False)] ^= 1
    frame_file = tmp_path / "noisy.bin"
    frame_file.write_bytes(_pack(noisy))
    out_file = tmp_path / "out.bin"
    assert main(["decode", *args, str(frame_file), "--out", str(out_file)]) == 0
    assert np.array_equal(_unpack(out_file.read_bytes(), 601), bits)
    capsys.readouterr()

    # garbage fails with exit 1, stats still printed, no output required
    frame_file.write_bytes(_pack(rng.integers(0, 2, 1099, dtype=np.uint8)))
    assert main(["decode", *args, str(frame_file), "--max-iters", "4"]) == 1
    out = capsys.readouterr().out
    assert "outcome failure" in out and "phase" in out


def test_bit_file_validation(tmp_path, capsys):
    args = ["--K", "601", "--R", "500", "--b", "8", "--f", "4"]
    short = tmp_path / "short.bin"
    short.write_bytes(b"\x00" * 10)
    assert main(["encode", *args, str(short), "--out", str(tmp_path / "x")]) == 2
    assert "expected 76 bytes" in capsys.readouterr().err

    # 601 = 75*8 + 1, so the last byte may only use its lowest bit
    padded = tmp_path / "padded.bin"
    padded.write_bytes(b"\x00" * 75 + b"\x02")
    assert main(["encode", *args, str(padded), "--out", str(tmp_path / "x")]) == 2
    assert "padding bits" in capsys.readouterr().err

    assert main(["encode", *args, str(tmp_path / "absent.bin"),
                 "--out", str(tmp_path / "x")]) == 2


def test_simulate_streams_csv(capsys):
    argv = ["simulate", "--K", "601", "--R", "500", "--b", "8", "--f", "4",
            "--rber-list", "0.0,0.25", "--decoder", "unique", "--decoder", "plus2",
            "--target-failures", "3", "--frame-cap", "8", "--max-iters", "4",
            "--seed", "5", "--label", "smoke"]
    assert main(argv) == 0
    cap = capsys.readouterr()
    lines = cap.out.splitlines()
    assert lines[0].startswith("label,K,R,b,f,decoder,rber,snr_db,")
    assert len(lines) == 5  # header + 2 points x 2 decoders
    assert all(ln.startswith("smoke,601,500,8,4,") for ln in lines[1:])
    assert "records" in cap.err and "frames" in cap.err


def test_simulate_deterministic_output(tmp_path):
    argv = ["simulate", "--K", "601", "--R", "500", "--b", "8", "--f", "4",
            "--rber-list", "0.02", "--decoder", "plus2", "--target-failures", "2",
            "--frame-cap", "25", "--seed", "9"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_simulate_floor_guard(capsys):
    argv = ["simulate", "--K", "601", "--R", "500", "--b", "8", "--f", "4",
            "--rber-list", "0.3", "--target-failures", "1",
            "--frame-cap", "200000", "--max-iters", "2"]
    assert main(argv) == 2
    assert "allow_deep" in capsys.readouterr().err
    # the override runs; the saturated channel fails the first frame
    assert main(argv + ["--allow-deep-fer"]) == 0
    assert ",1,1,1.0," in capsys.readouterr().out


def test_selftest_passes(capsys):
    assert main(["selftest"]) == 0
    out = capsys.readouterr().out
    assert out.count("ok ") == 7 and "FAIL" not in out
