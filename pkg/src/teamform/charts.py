"""SVG line charts of experiment CSVs."""

import csv
import io
import logging
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .common import ParseError  # noqa: E402
from .utils.textformat import read_lines  # noqa: E402

logger = logging.getLogger(__name__)

ChartKind = Literal["lines", "log_lines"]
Series = Dict[str, List[Tuple[float, float]]]


def _rows(text: str) -> Tuple[List[str], List[Dict[str, str]]]:
    lines = [line for line in text.splitlines() if line.strip() and not line.startswith("#")]
    if len(lines) < 2:
        raise ParseError("experiment CSV has no data rows")
    reader = csv.DictReader(lines)
    header = list(reader.fieldnames or [])
    rows = list(reader)
    for number, row in enumerate(rows, start=2):
        if None in row or any(value is None for value in row.values()):
            raise ParseError("row length differs from the header", line=number)
    return header, rows


def _series(header: List[str], rows: List[Dict[str, str]]) -> Tuple[Series, str]:
    series: Series = {}
    try:
        if "metric" in header:
            for row in rows:
                series.setdefault(row["metric"], []).append((float(row["n"]), float(row["mean_rounds"])))
            return series, "n"
        if "eps" in header:
            for row in rows:
                key = f"n={row['n']}, m={row['m']}"
                series.setdefault(key, []).append((float(row["eps"]), float(row["mean_rounds"])))
            return series, "eps"
    except (KeyError, ValueError) as e:
        raise ParseError(f"malformed experiment CSV: {e}")
    raise ParseError(f"unrecognised experiment CSV columns {header}", details={"columns": header})


def emit_chart(source: Union[str, Path], kind: ChartKind = "lines", out: Optional[Union[str, Path]] = None) -> str:
    """Render a fig4 or fig5 CSV (path or CSV text) as an SVG document.

    Args:
        source: CSV path, or CSV text when it contains a newline.
        kind: ``lines`` or ``log_lines`` (logarithmic y axis).
        out: Optional path to write the SVG to.

    Raises:
        ParseError: The CSV is empty, has unknown columns or non-numeric values.
    """
    if kind not in ("lines", "log_lines"):
        raise ParseError(f"unknown chart kind {kind!r}")
    if isinstance(source, Path) or "\n" not in source:
        text = "".join(read_lines(source))
    else:
        text = source
    header, rows = _rows(text)
    series, x_label = _series(header, rows)

    figure, axes = plt.subplots(figsize=(6, 4))
    try:
        for name, points in series.items():
            points.sort()
            axes.plot([x for x, _ in points], [y for _, y in points], marker="o", label=name)
        if kind == "log_lines":
            axes.set_yscale("log")
        axes.set_xlabel(x_label)
        axes.set_ylabel("mean rounds")
        axes.legend()
        buffer = io.StringIO()
        figure.savefig(buffer, format="svg")
    finally:
        plt.close(figure)

    svg = buffer.getvalue()
    if out is not None:
        Path(out).write_text(svg, encoding="utf-8")
        logger.info("chart written path=%s series=%d", out, len(series))
    return svg
