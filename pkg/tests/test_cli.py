"""CLI subcommands, exit codes, file outputs."""

import os

import numpy as np
import pytest

from irbeacon.cli import EXIT_DATA, EXIT_IO, EXIT_OK, EXIT_USAGE, main
from irbeacon.codebook import CODEBOOK_HEADER
from irbeacon.imaging import write_pgm
from irbeacon.symbols import render_symbol


@pytest.fixture()
def tiny_config(tmp_path):
    path = tmp_path / "tiny.cfg"
    path.write_text(
        "\n".join(
            [
                "profile = standstill",
                "duration_s = 1.5",
                "image_width = 400",
                "image_height = 300",
                "exposure_noise_floor = 0.5",
                "clutter_rate = 0.0",
                "beacon = 000100110010 0.1 2.0 30.0 97",
            ]
        )
        + "\n"
    )
    return str(path)


def test_codebook_command(tmp_path, capsys):
    out = tmp_path / "book.txt"
    assert main(["codebook", "--out", str(out)]) == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == CODEBOOK_HEADER
    assert len(lines) == 336
    assert "335" in capsys.readouterr().out


def test_codebook_rerun_identical(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    main(["codebook", "--out", str(a)])
    main(["codebook", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_codebook_bad_path(tmp_path, capsys):
    target = tmp_path / "nosuchdir" / "book.txt"
    assert main(["codebook", "--out", str(target)]) == EXIT_IO
    assert "error" in capsys.readouterr().err


def test_usage_error_exit_code(capsys):
    assert main(["run"]) == EXIT_USAGE
    assert main(["frobnicate"]) == EXIT_USAGE


def test_simulate_run_eval_chain(tmp_path, tiny_config, capsys):
    seq = tmp_path / "seq"
    book = tmp_path / "book.txt"
    records = tmp_path / "records.txt"
    assert main(["codebook", "--out", str(book)]) == EXIT_OK
    assert main(["simulate", "--config", tiny_config, "--out", str(seq), "--seed", "3"]) == EXIT_OK
    assert (seq / "sequence.jsonl").exists()
    assert (seq / "frame_000000.pgm").exists()
    assert len(list(seq.glob("*.pgm"))) == 150

    capsys.readouterr()
    rc = main(["run", "--sequence", str(seq), "--codebook", str(book), "--records", str(records)])
    assert rc == EXIT_OK
    out = capsys.readouterr().out
    assert "Frames" in out and "150" in out
    assert "000100110010" in out

    rc = main(["eval", "--records", str(records), "--sequence", str(seq)])
    assert rc == EXIT_OK
    out = capsys.readouterr().out
    assert "beacon 000100110010" in out
    assert "error_bits 0" in out


def test_simulate_duration_override(tmp_path, tiny_config):
    seq = tmp_path / "seq"
    assert main(["simulate", "--config", tiny_config, "--out", str(seq), "--duration", "0.2"]) == EXIT_OK
    assert len(list(seq.glob("*.pgm"))) == 20


def test_simulate_deterministic(tmp_path, tiny_config):
    a, b = tmp_path / "a", tmp_path / "b"
    main(["simulate", "--config", tiny_config, "--out", str(a), "--seed", "5", "--duration", "0.3"])
    main(["simulate", "--config", tiny_config, "--out", str(b), "--seed", "5", "--duration", "0.3"])
    for name in sorted(os.listdir(a)):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_simulate_unknown_config(tmp_path, capsys):
    rc = main(["simulate", "--config", "no_such_scene", "--out", str(tmp_path / "x")])
    assert rc == EXIT_IO


def test_simulate_bad_config_data(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("profile = standstill\nbeacon = 0101 0 0 0 0\n")
    rc = main(["simulate", "--config", str(bad), "--out", str(tmp_path / "x")])
    assert rc == EXIT_DATA


def test_run_missing_frame_is_data_error(tmp_path, tiny_config, capsys):
    seq = tmp_path / "seq"
    book = tmp_path / "book.txt"
    main(["codebook", "--out", str(book)])
    main(["simulate", "--config", tiny_config, "--out", str(seq), "--duration", "0.3"])
    os.remove(seq / "frame_000010.pgm")
    rc = main(["run", "--sequence", str(seq), "--codebook", str(book)])
    assert rc == EXIT_DATA
    assert "10" in capsys.readouterr().err


def test_eval_empty_records(tmp_path, tiny_config, capsys):
    seq = tmp_path / "seq"
    main(["simulate", "--config", tiny_config, "--out", str(seq), "--duration", "0.1"])
    records = tmp_path / "empty.txt"
    records.write_text("frames 10\ndetections 0\ntracks 0\n")
    capsys.readouterr()
    assert main(["eval", "--records", str(records), "--sequence", str(seq)]) == EXIT_OK
    assert capsys.readouterr().out == ""


def test_detect_command(tmp_path, capsys):
    img = np.zeros((300, 400), dtype=np.uint8)
    patch = render_symbol(1, 4.0, (15, 15), (7.0, 7.0), bloom_sigma=1.0, peak=220.0)
    img[100:115, 200:215] = np.rint(patch).astype(np.uint8)
    path = tmp_path / "frame.pgm"
    write_pgm(path, img)
    assert main(["detect", "--image", str(path)]) == EXIT_OK
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 1
    fields = out[0].split()
    assert len(fields) == 6
    assert fields[0] == "0"
    assert float(fields[5]) < 0.2


def test_detect_rejects_bad_pgm(tmp_path, capsys):
    path = tmp_path / "bad.pgm"
    path.write_bytes(b"P6\n1 1\n255\n\x00\x00\x00")
    assert main(["detect", "--image", str(path)]) == EXIT_DATA


def test_bench_command(capsys):
    rc = main(["bench", "--frames", "20", "--scene", "standstill_60m"])
    assert rc == EXIT_OK
    out = capsys.readouterr().out
    assert "fps" in out
