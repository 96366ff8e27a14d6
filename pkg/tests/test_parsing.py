from fractions import Fraction

import pytest

from chanmetric.errors import ParseError
from chanmetric.orders import Channel, DistanceMatrix
from chanmetric.parsing import (
    load_input,
    parse_channel,
    parse_distance,
    parse_embedding,
    parse_grid,
    parse_matrix,
    parse_vector,
    parse_weight,
)


def test_parse_grid_skips_comments_and_blank_lines():
    grid, lines = parse_grid("# header\n2\n\n1 2  # first row\n3 4/6\n")
    assert grid == ((1, 2), (3, Fraction(2, 3)))
    assert lines == [4, 5]


def test_row_sum_error_points_at_the_row():
    with pytest.raises(ParseError) as excinfo:
        parse_channel("2\n1/2 1/3\n1/2 1/2")
    assert excinfo.value.line == 2
    assert excinfo.value.column == 1
    assert "sums to 5/6" in str(excinfo.value)


def test_malformed_tokens_are_located():
    with pytest.raises(ParseError) as excinfo:
        parse_grid("2\n1 0.5\n0 1", source="m.txt")
    assert (excinfo.value.line, excinfo.value.column) == (2, 3)
    assert str(excinfo.value).startswith("m.txt:2:3:")
    with pytest.raises(ParseError):
        parse_grid("2\n1 2 3\n4 5")
    with pytest.raises(ParseError):
        parse_grid("3\n1 2 3\n4 5 6")
    with pytest.raises(ParseError):
        parse_grid("")


def test_parse_distance_checks_shape():
    assert parse_distance("2\n0 3\n3 0") == DistanceMatrix.from_rows([[0, 3], [3, 0]])
    with pytest.raises(ParseError) as excinfo:
        parse_distance("2\n0 3\n2 0")
    assert "not symmetric" in str(excinfo.value)
    with pytest.raises(ParseError):
        parse_distance("2\n1 3\n3 0")


def test_parse_matrix_dispatch():
    channel = parse_matrix("1\n1", "channel")
    assert isinstance(channel, Channel)
    with pytest.raises(ValueError):
        parse_matrix("1\n1", "weight")


def test_parse_vector_orders():
    text = "3\n3 2 1 3 3 2 3"
    graded = parse_vector(text, graded=True)
    plain = parse_vector(text)
    assert graded[0b100] == 1
    assert plain[0b100] == 3
    with pytest.raises(ParseError):
        parse_vector("2\n1 2")


def test_parse_weight_rejects_negative_values():
    with pytest.raises(ParseError):
        parse_weight("2\n1 -1 2")


def test_parse_embedding():
    parsed = parse_embedding("3 4 - 1/2\n1100\n0110\n0011\n")
    assert parsed.m is None and parsed.k == Fraction(1, 2)
    assert [word.to_string() for word in parsed.words] == ["1100", "0110", "0011"]
    assert parsed.as_linear().image(0b011).to_string() == "1010"
    assert parsed.as_points().images == parsed.words
    empty = parse_embedding("2 0 1 0")
    assert empty.length == 0 and len(empty.words) == 2
    with pytest.raises(ParseError):
        parse_embedding("2 3 1 0\n101\n10")
    with pytest.raises(ParseError):
        parse_embedding("2 3 1\n101\n100")


def test_load_input(data_file):
    parsed = load_input(data_file("channel_metrizable.txt"), "channel")
    assert parsed.kind == "channel"
    assert parsed.payload.n == 3
    weight = load_input(data_file("weight_f23.txt"), "weight").payload
    assert weight.to_graded() == (3, 2, 1, 3, 3, 2, 3)
    with pytest.raises(ParseError):
        load_input(data_file("missing.txt"), "channel")
