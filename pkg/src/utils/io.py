"""
File ingestion and export.

Input CSVs are comma-separated UTF-8 with an optional single header row. Parse
problems raise `FileFormatError` with the path and 1-based line number.
"""

from __future__ import annotations

import csv
import io
import logging
from pathlib import Path
from typing import IO, Any, Iterable, Optional, Sequence

import numpy as np

from ..errors import FileFormatError, InvalidInputError
from ..models.graph import SimilarityGraph, WeightedGraph

logger = logging.getLogger(__name__)


def _read_text(path: str | Path) -> str:
    p = Path(path)
    try:
        raw = p.read_bytes()
    except OSError as exc:
        raise FileFormatError(f"cannot read file ({exc.strerror or exc})", path=str(p)) from exc
    try:
        return raw.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise FileFormatError("file is not valid UTF-8", path=str(p)) from exc


def _numeric_rows(path: str | Path, *, header: bool) -> list[tuple[int, list[float]]]:
    """(line number, values) for every non-blank data row."""
    text = _read_text(path)
    rows: list[tuple[int, list[float]]] = []
    reader = csv.reader(io.StringIO(text))
    skipped_header = not header
    for line_no, row in enumerate(reader, start=1):
        cells = [c.strip() for c in row]
        if not any(cells):
            continue
        if not skipped_header:
            skipped_header = True
            continue
        values: list[float] = []
        for col, cell in enumerate(cells, start=1):
            try:
                value = float(cell)
            except ValueError:
                raise FileFormatError(
                    f"column {col}: '{cell}' is not a number", path=str(path), line=line_no
                ) from None
            if not np.isfinite(value):
                raise FileFormatError(
                    f"column {col}: non-finite value '{cell}'", path=str(path), line=line_no
                )
            values.append(value)
        rows.append((line_no, values))
    return rows


def read_matrix_csv(path: str | Path, *, header: bool = False) -> np.ndarray:
    """Rectangular numeric CSV (observations as rows)."""
    rows = _numeric_rows(path, header=header)
    if not rows:
        raise FileFormatError("no data rows", path=str(path))
    width = len(rows[0][1])
    for line_no, values in rows:
        if len(values) != width:
            raise FileFormatError(
                f"expected {width} columns, found {len(values)}", path=str(path), line=line_no
            )
    logger.debug("Read %d x %d matrix from %s", len(rows), width, path)
    return np.array([values for _, values in rows], dtype=float)


def read_labels_csv(path: str | Path, *, header: bool = False) -> np.ndarray:
    """One 0/1 label per row."""
    rows = _numeric_rows(path, header=header)
    if not rows:
        raise FileFormatError("no label rows", path=str(path))
    labels: list[int] = []
    for line_no, values in rows:
        if len(values) != 1:
            raise FileFormatError("expected exactly one label per row", path=str(path), line=line_no)
        if values[0] not in (0.0, 1.0):
            raise FileFormatError(
                f"label must be 0 or 1, got {values[0]:g}", path=str(path), line=line_no
            )
        labels.append(int(values[0]))
    return np.array(labels, dtype=np.int8)


def read_edge_list(
    path: str | Path, *, node_count: Optional[int] = None
) -> tuple[SimilarityGraph, Optional[np.ndarray]]:
    """
    Whitespace-separated "i j" or "i j w" per line (0-based, i < j).

    Returns the graph and the weight column when every line has one. Lines
    starting with '#' are comments.
    """
    text = _read_text(path)
    pairs: list[tuple[int, int]] = []
    weights: list[float] = []
    widths: set[int] = set()
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) not in (2, 3):
            raise FileFormatError("expected 'i j' or 'i j w'", path=str(path), line=line_no)
        widths.add(len(parts))
        if len(widths) > 1:
            raise FileFormatError("mixed weighted and unweighted lines", path=str(path), line=line_no)
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise FileFormatError("node indices must be integers", path=str(path), line=line_no) from None
        if i < 0 or j < 0:
            raise FileFormatError("node indices must be nonnegative", path=str(path), line=line_no)
        if i >= j:
            raise FileFormatError(f"expected i < j, got {i} {j}", path=str(path), line=line_no)
        if len(parts) == 3:
            try:
                weights.append(float(parts[2]))
            except ValueError:
                raise FileFormatError(f"weight '{parts[2]}' is not a number", path=str(path), line=line_no) from None
        pairs.append((i, j))

    if not pairs:
        raise FileFormatError("no edges", path=str(path))
    inferred = max(j for _, j in pairs) + 1
    n = inferred if node_count is None else node_count
    if n < inferred:
        raise InvalidInputError(
            f"Edge list references node {inferred - 1} but only {n} observations were given."
        )
    try:
        graph = SimilarityGraph.from_edges(n, pairs, kind="edgelist")
    except InvalidInputError as exc:
        raise FileFormatError(exc.message, path=str(path)) from exc
    return graph, (np.array(weights) if weights else None)


def write_edge_list(target: str | Path | IO[str], Gw: WeightedGraph | SimilarityGraph) -> None:
    """Write "i j" lines, or "i j w" with 17 significant digits for weighted graphs."""
    lines: list[str] = []
    if isinstance(Gw, WeightedGraph):
        for (i, j), w in zip(Gw.edges, Gw.weights):
            lines.append(f"{int(i)} {int(j)} {float(w):.17g}")
    else:
        lines = [f"{int(i)} {int(j)}" for i, j in Gw.edges]
    _write_text(target, "\n".join(lines) + "\n")


def write_csv(target: str | Path | IO[str], header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    _write_text(target, buffer.getvalue())


def _write_text(target: str | Path | IO[str], text: str) -> None:
    if isinstance(target, (str, Path)):
        Path(target).write_text(text, encoding="utf-8")
    else:
        target.write(text)
