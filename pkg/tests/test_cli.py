"""Tests for the command-line interface and its exit codes"""

import json

import numpy as np
import pytest

import subchirp.codes.bssc as bssc
from subchirp.cli.decode import read_vector
from subchirp.codes.bssc import Codebook
from subchirp.errors import InputError
from subchirp.main import main


def write_vector(path, samples) -> str:
    samples = np.asarray(samples, dtype=complex)
    lines = ["k,re,im"] + [f"{k},{float(v.real)!r},{float(v.imag)!r}" for k, v in enumerate(samples)]
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def test_codebook_export(capsys):
    assert main(["codebook", "--m", "2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 61
    assert lines[0].startswith("id,m,r,leading")
    assert main(["codebook", "--m", "2", "--kind", "bc"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 33


def test_encode(capsys):
    assert main(["encode", "--m", "1", "--id", "2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines == ["0,0.70710678118654757,0", "1,0.70710678118654757,0"]


def test_encode_decode_round_trip(tmp_path, capsys):
    signal = tmp_path / "signal.csv"
    assert main(["encode", "--m", "2", "--id", "17", "--out", str(signal)]) == 0
    assert main(["decode", "--m", "2", "--in", str(signal)]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["id"] == 17
    assert record["user"] == 0
    assert record["m"] == 2
    assert "coefficient" not in record


def test_decode_two_users(tmp_path, capsys):
    codebook = Codebook(2)
    assert codebook.params(20).r == 1
    first = codebook.vector(20)
    second = codebook.vector(21)
    path = write_vector(tmp_path / "mix.csv", first + 0.3j * second)
    assert main(["decode", "--m", "2", "--in", path, "--users", "2"]) == 0
    records = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert sorted(r["id"] for r in records) == [20, 21]
    assert all(len(r["coefficient"]) == 2 for r in records)


def test_decode_exit_codes(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("0,1\n")
    assert main(["decode", "--m", "1", "--in", str(bad)]) == 4
    assert main(["decode", "--m", "1", "--in", str(tmp_path / "missing.csv")]) == 4
    noise = write_vector(tmp_path / "noise.csv", [1, 0.5, 0, 0])
    assert main(["decode", "--m", "2", "--in", noise]) == 3
    short = write_vector(tmp_path / "short.csv", [1, 0])
    assert main(["decode", "--m", "2", "--in", short]) == 4


def test_vector_files_hold_plain_floats(tmp_path):
    samples = np.array([0.5, complex(0, -0.25)])
    write_vector(tmp_path / "v.csv", samples)
    text = (tmp_path / "v.csv").read_text()
    assert text.splitlines() == ["k,re,im", "0,0.5,0.0", "1,0.0,-0.25"]
    assert np.array_equal(read_vector(text, 1), samples)


def test_read_vector_rejects_repeats():
    with pytest.raises(InputError):
        read_vector("0,1,0\n0,1,0\n", 1)
    with pytest.raises(InputError):
        read_vector("0,1,0\n2,1,0\n", 1)
    assert np.allclose(read_vector("k,re,im\n1,0,1\n0,2,0\n", 1), [2, 1j])


def test_simulate_is_thread_independent(tmp_path, capsys):
    assert main(["simulate", "--m", "2", "--users", "1", "--trials", "5"]) == 0
    header, row = capsys.readouterr().out.splitlines()
    assert dict(zip(header.split(","), row.split(",")))["per_user_p"] == "0"

    outputs = []
    for threads in ("1", "3"):
        out = tmp_path / f"t{threads}.csv"
        args = ["simulate", "--m", "2", "--users", "2", "--trials", "30", "--noise", "0.05", "--seed", "4"]
        assert main(args + ["--threads", threads, "--out", str(out)]) == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]


def test_simulate_exit_codes(tmp_path):
    base = ["simulate", "--m", "2", "--users", "1", "--trials", "2"]
    assert main(base + ["--codebook", "random"]) == 2
    assert main(base + ["--threads", "0"]) == 2
    assert main(base + ["--format", "svg"]) == 2
    assert main(["simulate", "--m", "0", "--users", "1", "--trials", "2"]) == 2
    assert main(base + ["--out", str(tmp_path / "no" / "such" / "dir.csv")]) == 5


def test_simulate_svg(tmp_path):
    out = tmp_path / "point.csv"
    assert main(["simulate", "--m", "2", "--users", "1", "--trials", "3", "--out", str(out), "--format", "svg"]) == 0
    assert out.read_text().startswith("m,L,codebook")
    assert (tmp_path / "point.svg").read_text().startswith("<svg")


def test_sweep(tmp_path):
    grid = tmp_path / "grid.ini"
    grid.write_text("[sweep]\nm = 2\nusers = 1, 2\ntrials = 4\n")
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--spec", str(grid), "--no-progress", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 3
    assert main(["sweep", "--spec", str(tmp_path / "missing.ini"), "--no-progress"]) == 4
    failing = tmp_path / "failing.ini"
    failing.write_text("m = 1\nL = 7\ncodebook = bc\ntrials = 2\n")
    assert main(["sweep", "--spec", str(failing), "--no-progress"]) == 2


def test_selftest_passes(capsys):
    assert main(["selftest", "--max-m", "2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert [line.split(":")[0] for line in lines] == ["stabilizer", "phi", "coherence", "roundtrip"]
    assert all(": PASS (" in line for line in lines)


def test_selftest_detects_corrupted_phases(monkeypatch, capsys):
    original = bssc._chirp_exponents

    def corrupted(s_r, b_r, xs):
        return (original(s_r, b_r, xs) + (xs == 1)) % 4

    monkeypatch.setattr(bssc, "_chirp_exponents", corrupted)
    assert main(["selftest", "--max-m", "1"]) == 1
    out = capsys.readouterr().out
    assert "stabilizer: FAIL" in out


def test_usage_errors():
    with pytest.raises(SystemExit) as exc:
        main(["encode", "--id", "0"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
