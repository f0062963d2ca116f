import os

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lct.csvio import format_csv, format_number, read_csv, write_csv


def test_format():
    assert format_number(0.1) == "0.10000000000000001"
    assert format_number(2) == "2"
    assert format_csv(["a", "b"], [[1, 2], [0.5, -3]]) == "a,b\n1,0.5\n2,-3\n"
    with pytest.raises(ValueError):
        format_csv(["a"], [[1], [2]])
    with pytest.raises(ValueError):
        format_csv(["a", "b"], [[1], [2, 3]])


@given(st.lists(st.floats(allow_nan=False, allow_infinity=False), min_size=1, max_size=20))
def test_roundtrip_exact(values):
    text = format_csv(["x"], [values])
    back = [float(r) for r in text.splitlines()[1:]]
    assert back == [float(v) for v in values]


def test_write_read(tmp_path):
    p = tmp_path / "out.csv"
    x = np.linspace(0, 1, 7)
    write_csv(p, ["x", "re"], [x, x**2])
    raw = p.read_bytes()
    assert b"\r" not in raw and raw.endswith(b"\n")
    d = read_csv(p, ["x", "re", "im"])
    assert np.array_equal(d["x"], x) and np.array_equal(d["re"], x**2)
    assert np.array_equal(d["im"], np.zeros(7))
    write_csv(p, ["x", "re"], [x, x**2])
    assert p.read_bytes() == raw
    assert [f for f in os.listdir(tmp_path) if f.startswith(".tmp-")] == []


def test_failed_write_leaves_old_file(tmp_path):
    p = tmp_path / "out.csv"
    write_csv(p, ["x"], [[1.0]])
    with pytest.raises(ValueError):
        write_csv(p, ["x", "y"], [[1.0]])
    assert p.read_text() == "x\n1\n"
    assert len(os.listdir(tmp_path)) == 1


def test_read_errors(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("")
    with pytest.raises(ValueError, match="empty"):
        read_csv(p, ["x"])
    p.write_text("x,y\n1,2\n")
    with pytest.raises(ValueError, match="missing column"):
        read_csv(p, ["z"])
    p.write_text("x\nabc\n")
    with pytest.raises(ValueError, match="bad value"):
        read_csv(p, ["x"])
