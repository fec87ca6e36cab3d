import re
from pathlib import Path
from typing import Iterable, Iterator, List, Tuple, Union

from ..common import ParseError

_PAIR = re.compile(r"^(\d+):(\d+)$")

ConfigValue = Union[int, float, bool, str, List[int], List[float], List[Tuple[int, int]]]


def read_lines(path: Union[str, Path]) -> Iterator[str]:
    """Yield the lines of a UTF-8 text file, decoding one line at a time.

    Raises:
        ParseError: A line is not valid UTF-8; the error names the line.
    """
    with open(path, "rb") as handle:
        for number, raw in enumerate(handle, start=1):
            try:
                yield raw.decode("utf-8")
            except UnicodeDecodeError as e:
                raise ParseError(f"invalid UTF-8 ({e.reason})", line=number, details={"path": str(path)})


def iter_records(lines: Iterable[str]) -> Iterator[Tuple[int, List[str]]]:
    """Yield (line_number, tokens) for every non-empty line, comments stripped."""
    for number, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if text:
            yield number, text.split()


def parse_int(token: str, line: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {token!r}", line=line)


def _parse_scalar(text: str) -> Union[int, float, bool, str]:
    lowered = text.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    for cast in (int, float):
        try:
            return cast(text)  # type: ignore[operator]
        except ValueError:
            continue
    return text


def parse_value(text: str, line: int) -> ConfigValue:
    """Parse a config value: scalar, comma list of numbers, or comma list of n:m pairs."""
    if "," not in text and not _PAIR.match(text):
        return _parse_scalar(text)

    parts = [part.strip() for part in text.split(",") if part.strip()]
    pairs = [_PAIR.match(part) for part in parts]
    if all(pairs):
        return [(int(p.group(1)), int(p.group(2))) for p in pairs if p]

    values = [_parse_scalar(part) for part in parts]
    if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in values):
        raise ParseError(f"mixed or non-numeric list {text!r}", line=line)
    if all(isinstance(v, int) for v in values):
        return [int(v) for v in values]
    return [float(v) for v in values]


def parse_key_values(lines: Iterable[str]) -> dict:
    """Parse ``key = value`` lines; duplicates and lines without '=' are errors."""
    result: dict = {}
    for number, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ParseError(f"expected 'key = value', got {text!r}", line=number)
        key, value = (part.strip() for part in text.split("=", 1))
        if not key:
            raise ParseError("empty key", line=number)
        if key in result:
            raise ParseError(f"duplicate key {key!r}", line=number)
        result[key] = parse_value(value, number)
    return result
