import numpy as np
import pytest

from pcpursuit import ParseError, RngState, SupportMask, gen_gaussian
from pcpursuit.matio import read_mask, read_matrix, write_mask, write_matrix


def test_matrix_round_trip_exact(tmp_path):
    m = gen_gaussian(RngState(31), 5, 7, 1.0)
    path = tmp_path / "m.pcpmat"
    write_matrix(path, m)
    back = read_matrix(path)
    assert np.array_equal(back, m)


def test_matrix_round_trip_awkward_values(tmp_path):
    m = np.array([[1.0 / 3.0, 1e-300, -1e300], [0.1 + 0.2, -0.0, 7.0]])
    path = tmp_path / "m.pcpmat"
    write_matrix(path, m)
    assert np.array_equal(read_matrix(path), m)


def test_matrix_reader_tolerates_arbitrary_whitespace(tmp_path):
    path = tmp_path / "m.pcpmat"
    path.write_text("pcpmat 1\n2 2\n1 2\n\n  3\t4\n")
    assert np.array_equal(read_matrix(path), [[1.0, 2.0], [3.0, 4.0]])


def test_matrix_header_mismatch_errors(tmp_path):
    path = tmp_path / "m.pcpmat"
    path.write_text("pcpmat 1\n2 3\n1 2 3 4\n")
    with pytest.raises(ParseError, match="expected 6 values, found 4"):
        read_matrix(path)


def test_matrix_too_many_values(tmp_path):
    path = tmp_path / "m.pcpmat"
    path.write_text("pcpmat 1\n1 2\n1 2 3\n")
    with pytest.raises(ParseError, match="line|3"):
        read_matrix(path)


def test_matrix_non_numeric_token_names_line(tmp_path):
    path = tmp_path / "m.pcpmat"
    path.write_text("pcpmat 1\n2 2\n1 2\nthree 4\n")
    with pytest.raises(ParseError, match=":4:"):
        read_matrix(path)


def test_matrix_bad_magic(tmp_path):
    path = tmp_path / "m.pcpmat"
    path.write_text("matrix 1\n2 2\n1 2 3 4\n")
    with pytest.raises(ParseError, match=":1:"):
        read_matrix(path)


def test_matrix_rejects_nonfinite_value(tmp_path):
    path = tmp_path / "m.pcpmat"
    path.write_text("pcpmat 1\n1 2\nnan 1\n")
    with pytest.raises(ParseError, match="non-finite"):
        read_matrix(path)


def test_mask_round_trip(tmp_path):
    mask = SupportMask(6, 4, [(0, 1), (5, 3), (2, 2)])
    path = tmp_path / "om.pcpmask"
    write_mask(path, mask)
    assert read_mask(path) == mask


def test_mask_duplicate_pair_errors(tmp_path):
    path = tmp_path / "om.pcpmask"
    path.write_text("pcpmask 1\n3 3 2\n1 1\n1 1\n")
    with pytest.raises(ParseError, match="duplicate"):
        read_mask(path)


def test_mask_wrong_count_errors(tmp_path):
    path = tmp_path / "om.pcpmask"
    path.write_text("pcpmask 1\n3 3 3\n1 1\n2 2\n")
    with pytest.raises(ParseError, match="expected 3 pairs, found 2"):
        read_mask(path)


def test_mask_out_of_range_errors(tmp_path):
    path = tmp_path / "om.pcpmask"
    path.write_text("pcpmask 1\n3 3 1\n3 0\n")
    with pytest.raises(ParseError, match="out of range"):
        read_mask(path)
