import numpy as np
import pytest

from conftest import J2, crandn
from structcanon.matrix_io import (
    MatrixFormatError,
    dumps_mm,
    loads_json,
    loads_mm,
    read_matrix,
    write_matrix,
)


@pytest.mark.parametrize("name", ["j2.mtx", "j2.json"])
def test_round_trip_j2(tmp_path, name):
    path = write_matrix(tmp_path / name, J2)
    back = read_matrix(path)
    assert back.dtype == np.complex128 and np.array_equal(back, J2)


@pytest.mark.parametrize("fmt", ["mm", "json"])
def test_round_trip_bit_exact(tmp_path, rng, fmt):
    a = crandn(rng, 4, 7) * 1e-7 + np.pi
    a[0, 0] = -0.0 + 1e-310j
    path = write_matrix(tmp_path / "a.dat", a, fmt)
    back = read_matrix(path, fmt)
    assert back.shape == a.shape
    assert back.tobytes() == a.tobytes()


def test_mm_body_column_major():
    text = dumps_mm(np.eye(2))
    lines = text.splitlines()
    assert lines[0] == "%%MatrixMarket matrix array complex general"
    assert lines[1] == "2 2"
    body = [tuple(map(float, ln.split())) for ln in lines[2:]]
    assert body == [(1, 0), (0, 0), (0, 0), (1, 0)]
    a = np.array([[1, 2], [3, 4]])
    assert np.array_equal(loads_mm(dumps_mm(a)), a)


def test_mm_comments_allowed():
    text = "%%MatrixMarket matrix array complex general\n% note\n1 1\n2.5 -1\n"
    assert loads_mm(text)[0, 0] == 2.5 - 1j


@pytest.mark.parametrize("text,line", [
    ("%%MatrixMarket matrix coordinate real general\n1 1\n1 0\n", 1),
    ("%%MatrixMarket matrix array complex general\n2 x\n", 2),
    ("%%MatrixMarket matrix array complex general\n1 2\n1 0\n", 3),
    ("%%MatrixMarket matrix array complex general\n1 2\n1 0\n1 zz\n", 4),
    ("%%MatrixMarket matrix array complex general\n1 1\n1\n", 3),
])
def test_mm_errors_name_line(text, line):
    with pytest.raises(MatrixFormatError) as info:
        loads_mm(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_json_errors():
    with pytest.raises(MatrixFormatError):
        loads_json('{"rows": 2, "cols": 2, "re": [1], "im": [0]}')
    with pytest.raises(MatrixFormatError) as info:
        loads_json('{"rows": 1,\n "cols": }')
    assert info.value.line == 2
    with pytest.raises(MatrixFormatError):
        loads_json("[1, 2]")


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        read_matrix(tmp_path / "missing.mtx")
