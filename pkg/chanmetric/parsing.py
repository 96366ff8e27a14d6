"""Readers for the plain-text input formats.

Matrix files: ``n`` on the first line, then ``n`` rows of ``n`` rationals.
Vector files: ``n``, then ``2^n - 1`` rationals in mask order (or graded
order when asked). Embedding files: a header ``n N m k`` (``-`` for an absent
``m``/``k``), then ``n`` bit strings of length ``N``. Blank lines and ``#``
comments are ignored everywhere.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterator, List, Literal, Optional, Tuple, Union

from .embedding import CubeWord, LinearEmbedding, PointEmbedding
from .errors import ChanmetricError, ParseError
from .orders import Channel, DistanceMatrix, WeightVector
from .patterns import SubsetVector
from .utils import format_rat, parse_rat

InputKind = Literal["grid", "channel", "distance", "weight", "subsetvector", "embedding"]
Grid = Tuple[Tuple[Fraction, ...], ...]
Token = Tuple[str, int, int]

_TOKEN = re.compile(r"\S+")


def _lines(text: str) -> Iterator[Tuple[int, List[Token]]]:
    for line_no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        tokens = [(m.group(), line_no, m.start() + 1) for m in _TOKEN.finditer(body)]
        if tokens:
            yield line_no, tokens


def _rat(token: Token, source: Optional[str]) -> Fraction:
    text, line, column = token
    try:
        return parse_rat(text)
    except ValueError as exc:
        raise ParseError(str(exc), line=line, column=column, source=source) from exc


def _size(token: Token, source: Optional[str], low: int = 1) -> int:
    text, line, column = token
    if not text.isdigit() or int(text) < low:
        raise ParseError(f"expected an integer >= {low}, got {text!r}", line=line, column=column, source=source)
    return int(text)


def _header(text: str, source: Optional[str]) -> Tuple[List[Tuple[int, List[Token]]], int]:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty input", line=1, column=1, source=source)
    line_no, tokens = lines[0]
    if len(tokens) != 1:
        raise ParseError("first line must hold only n", line=line_no, column=tokens[1][2], source=source)
    return lines[1:], _size(tokens[0], source)


def parse_grid(text: str, source: Optional[str] = None) -> Tuple[Tuple[Tuple[Fraction, ...], ...], List[int]]:
    """Square grid of rationals plus the file line of each row."""

    rows, n = _header(text, source)
    if len(rows) != n:
        where = rows[n][0] if len(rows) > n else (rows[-1][0] + 1 if rows else 2)
        raise ParseError(f"expected {n} rows, found {len(rows)}", line=where, column=1, source=source)
    grid = []
    row_lines = []
    for line_no, tokens in rows:
        if len(tokens) != n:
            column = tokens[n][2] if len(tokens) > n else tokens[-1][2]
            raise ParseError(f"expected {n} entries, found {len(tokens)}", line=line_no, column=column, source=source)
        grid.append(tuple(_rat(token, source) for token in tokens))
        row_lines.append(line_no)
    return tuple(grid), row_lines


def parse_channel(text: str, source: Optional[str] = None) -> Channel:
    grid, row_lines = parse_grid(text, source)
    for row, line in zip(grid, row_lines):
        for col, value in enumerate(row):
            if not 0 <= value <= 1:
                raise ParseError(f"probability {format_rat(value)} outside [0, 1]", line=line, column=col + 1, source=source)
        total = sum(row, Fraction(0))
        if total != 1:
            raise ParseError(f"row sums to {format_rat(total)}, not 1", line=line, column=1, source=source)
    return Channel(grid)


def parse_distance(text: str, source: Optional[str] = None) -> DistanceMatrix:
    grid, row_lines = parse_grid(text, source)
    for i, (row, line) in enumerate(zip(grid, row_lines)):
        if row[i] != 0:
            raise ParseError(f"diagonal entry is {format_rat(row[i])}, not 0", line=line, column=i + 1, source=source)
        for j, value in enumerate(row):
            if value < 0:
                raise ParseError("negative distance", line=line, column=j + 1, source=source)
            if value != grid[j][i]:
                raise ParseError(
                    f"not symmetric: d({i + 1},{j + 1}) = {format_rat(value)}, d({j + 1},{i + 1}) = {format_rat(grid[j][i])}",
                    line=line,
                    column=j + 1,
                    source=source,
                )
    return DistanceMatrix(grid)


def parse_matrix(
    text: str, kind: Literal["channel", "distance"] = "channel", source: Optional[str] = None
) -> Union[Channel, DistanceMatrix]:
    if kind == "channel":
        return parse_channel(text, source)
    if kind == "distance":
        return parse_distance(text, source)
    raise ValueError(f"unknown matrix kind {kind!r}")


def parse_vector(text: str, *, graded: bool = False, source: Optional[str] = None) -> SubsetVector:
    rows, n = _header(text, source)
    tokens = [token for _, line_tokens in rows for token in line_tokens]
    expected = (1 << n) - 1
    if len(tokens) != expected:
        line = tokens[expected][1] if len(tokens) > expected else (rows[-1][0] if rows else 1)
        raise ParseError(f"expected {expected} values for n={n}, found {len(tokens)}", line=line, column=1, source=source)
    values = [_rat(token, source) for token in tokens]
    if graded:
        return SubsetVector.from_graded(n, values)
    return SubsetVector.of(n, values)


def parse_weight(text: str, *, graded: bool = False, source: Optional[str] = None) -> WeightVector:
    vector = parse_vector(text, graded=graded, source=source)
    try:
        return WeightVector.from_vector(vector)
    except ChanmetricError as exc:
        raise ParseError(str(exc), line=1, column=1, source=source) from exc


@dataclass(frozen=True)
class EmbeddingFile:
    n: int
    length: int
    words: Tuple[CubeWord, ...]
    m: Optional[Fraction]
    k: Optional[Fraction]

    def as_linear(self) -> LinearEmbedding:
        return LinearEmbedding(self.n, self.length, self.words, self.m, self.k)

    def as_points(self) -> PointEmbedding:
        return PointEmbedding(self.n, self.length, self.words, self.m, self.k)


def _optional_rat(token: Token, source: Optional[str]) -> Optional[Fraction]:
    return None if token[0] == "-" else _rat(token, source)


def parse_embedding(text: str, source: Optional[str] = None) -> EmbeddingFile:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty input", line=1, column=1, source=source)
    line_no, header = lines[0]
    if len(header) != 4:
        raise ParseError("header must be 'n N m k'", line=line_no, column=1, source=source)
    n = _size(header[0], source)
    length = _size(header[1], source, low=0)
    m, k = _optional_rat(header[2], source), _optional_rat(header[3], source)
    body = lines[1:]
    if length == 0 and not body:
        return EmbeddingFile(n, 0, tuple(CubeWord(0) for _ in range(n)), m, k)
    if len(body) != n:
        raise ParseError(f"expected {n} words, found {len(body)}", line=line_no, column=1, source=source)
    words = []
    for word_line, tokens in body:
        text_word, _, column = tokens[0]
        if len(tokens) != 1 or len(text_word) != length or set(text_word) - {"0", "1"}:
            raise ParseError(f"expected one {length}-bit word", line=word_line, column=column, source=source)
        words.append(CubeWord.from_string(text_word))
    return EmbeddingFile(n, length, tuple(words), m, k)


Payload = Union[Grid, Channel, DistanceMatrix, SubsetVector, EmbeddingFile]


@dataclass(frozen=True)
class ParsedInput:
    kind: InputKind
    payload: Payload
    source: str


def load_input(path: Union[str, Path], kind: InputKind, *, graded: bool = False) -> ParsedInput:
    source = str(path)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", source=source) from exc
    payload: Payload
    if kind == "grid":
        payload, _ = parse_grid(text, source)
    elif kind == "channel":
        payload = parse_channel(text, source)
    elif kind == "distance":
        payload = parse_distance(text, source)
    elif kind == "weight":
        payload = parse_weight(text, graded=graded, source=source)
    elif kind == "subsetvector":
        payload = parse_vector(text, graded=graded, source=source)
    elif kind == "embedding":
        payload = parse_embedding(text, source)
    else:
        raise ValueError(f"unknown input kind {kind!r}")
    return ParsedInput(kind, payload, source)



__all__ = [
    "EmbeddingFile",
    "Grid",
    "InputKind",
    "ParsedInput",
    "load_input",
    "parse_channel",
    "parse_distance",
    "parse_embedding",
    "parse_grid",
    "parse_matrix",
    "parse_vector",
    "parse_weight",
]
