"""Reader and writer for the plain-text ``.pcm`` parity-check matrix format.

Layout: optional ``#`` comment lines, a ``<rows> <cols>`` header, then one line
of exactly ``cols`` characters from ``{0, 1}`` per row.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .gf2 import BitMatrix


class PcmParseError(ValueError):
    """Malformed matrix text; ``line`` and ``column`` are 1-based."""

    def __init__(self, message: str, line: int, column: int = 1) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def parse_pcm(text: str) -> BitMatrix:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    idx = 0
    while idx < len(lines) and lines[idx].lstrip().startswith("#"):
        idx += 1
    if idx == len(lines):
        raise PcmParseError("missing '<rows> <cols>' header", idx + 1)

    header = lines[idx].rstrip("\r").split()
    if len(header) != 2 or not all(h.isdigit() for h in header):
        raise PcmParseError("header must be two non-negative integers", idx + 1)
    n_rows, n_cols = int(header[0]), int(header[1])

    body = lines[idx + 1 :]
    if len(body) != n_rows:
        raise PcmParseError(
            f"expected {n_rows} matrix rows, found {len(body)}", idx + 2 + min(len(body), n_rows)
        )
    data = []
    for i, raw in enumerate(body):
        lineno = idx + 2 + i
        row = raw.rstrip("\r")
        for col, ch in enumerate(row):
            if ch not in "01":
                raise PcmParseError(f"unexpected character {ch!r}", lineno, col + 1)
        if len(row) != n_cols:
            raise PcmParseError(
                f"row has {len(row)} entries, expected {n_cols}", lineno, min(len(row), n_cols) + 1
            )
        data.append(sum(1 << j for j, ch in enumerate(row) if ch == "1"))
    return BitMatrix(n_rows, n_cols, tuple(data))


def format_pcm(M: BitMatrix, comment: str | None = None) -> str:
    out = []
    if comment:
        out.extend(f"# {c}" for c in comment.splitlines())
    out.append(f"{M.rows} {M.cols}")
    out.extend("".join("1" if (row >> j) & 1 else "0" for j in range(M.cols)) for row in M.data)
    return "\n".join(out) + "\n"


def read_pcm(path: str | Path) -> BitMatrix:
    return parse_pcm(Path(path).read_text(encoding="utf-8"))


def write_pcm(path: str | Path, M: BitMatrix, comment: str | None = None) -> None:
    Path(path).write_text(format_pcm(M, comment), encoding="utf-8", newline="\n")


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("qlrc") / "data" / name))


def hamming7() -> BitMatrix:
    """The bundled self-orthogonal 7x7 Hamming parity-check matrix."""
    return read_pcm(bundled_path("hamming7.pcm"))
