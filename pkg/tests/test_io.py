import json

import numpy as np
import pytest

from rotor_bss.autocorr import AutocorrConfig, LagSignal, denoise
from rotor_bss.errors import ValidationError
from rotor_bss.io import read_csv, read_signal_file, write_csv, write_report
from rotor_bss.signals import MultichannelSignal

from conftest import two_sines


def test_round_trip_exact(tmp_path, rng):
    sig = MultichannelSignal(rng.standard_normal((2, 1000)) * 10.0 ** rng.integers(-8, 8, (2, 1000)), 1000)
    path = tmp_path / "x.csv"
    write_csv(sig, path)
    back = read_csv(path)
    assert back.data.shape == (2, 1000)
    assert np.array_equal(back.data, sig.data)
    assert back.sample_rate == 1000


def test_layout(tmp_path):
    path = tmp_path / "one.csv"
    write_csv(MultichannelSignal([[0.5, 1.0, -2.0]], 1000), path)
    lines = path.read_text().splitlines()
    assert lines == ["# sample_rate=1000", "0.5", "1", "-2"]
    write_csv(two_sines(n=4), path)
    lines = path.read_text().splitlines()
    assert lines[0] == "# sample_rate=1000"
    assert all(len(line.split(",")) == 2 for line in lines[1:]) and len(lines) == 5


def test_deterministic_bytes(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_csv(two_sines(), a)
    write_csv(two_sines(), b)
    assert a.read_bytes() == b.read_bytes()


def test_lag_signal_metadata(tmp_path):
    lagged = denoise(two_sines(), AutocorrConfig(500, 10))
    path = tmp_path / "lag.csv"
    write_csv(lagged, path)
    f = read_signal_file(path)
    assert f.metadata["start_lag"] == "10"
    assert f.columns == 2
    back = f.as_lag_signal()
    assert isinstance(back, LagSignal) and back.start_lag == 10
    assert np.array_equal(back.data, lagged.data)


def test_reads_paper_sized_file(tmp_path):
    path = tmp_path / "m.csv"
    body = "\n".join(f"{k},{-k}" for k in range(1000))
    path.write_text("# sample_rate=1000\n" + body + "\n")
    sig = read_csv(path)
    assert sig.channels == 2 and sig.samples == 1000


@pytest.mark.parametrize(
    "text, message",
    [
        ("1,2\n3,4\n", "sample_rate"),
        ("# sample_rate=1000\n", "no samples"),
        ("# sample_rate=1000\n1,2\n3\n", "row 3"),
        ("# sample_rate=1000\n1,2\n3,abc\n", "row 3, column 2"),
        ("# sample_rate=-5\n1,2\n3,4\n", "positive"),
    ],
)
def test_malformed_files(tmp_path, text, message):
    path = tmp_path / "bad.csv"
    path.write_text(text)
    with pytest.raises(ValidationError, match=message):
        read_csv(path)


def test_missing_file(tmp_path):
    with pytest.raises(OSError, match="nope.csv"):
        read_csv(tmp_path / "nope.csv")


def test_write_failure_has_path(tmp_path):
    with pytest.raises(OSError, match="missing"):
        write_csv(two_sines(n=4), tmp_path / "missing" / "x.csv")


def test_report_round_trip(tmp_path):
    values = {"matched_coeffs": np.array([0.12345678901234567, 0.9987]), "snr": [np.inf, -5.0], "n": np.int64(3)}
    path = tmp_path / "r.json"
    write_report(values, path)
    doc = json.loads(path.read_text())
    assert doc["matched_coeffs"] == [0.12345678901234567, 0.9987]
    assert doc["snr"] == [None, -5.0]
    assert doc["n"] == 3
    write_report(values, tmp_path / "r2.json")
    assert path.read_bytes() == (tmp_path / "r2.json").read_bytes()
