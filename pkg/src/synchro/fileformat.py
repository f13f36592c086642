"""The automaton text format: header "n k", then one line per letter holding
its name and the 1-indexed image of every state."""

from __future__ import annotations

from .automaton import Automaton
from .errors import ParseError


def parse_automaton(text: str) -> Automaton:
    lines = text.split("\n")
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ParseError("empty input")
    header = lines[0].split()
    if len(header) != 2:
        raise ParseError("header must be two integers 'n k'", line=1)
    try:
        n, k = int(header[0]), int(header[1])
    except ValueError:
        raise ParseError("header must be two integers 'n k'", line=1) from None
    if n < 1:
        raise ParseError("need at least one state", line=1)
    if k < 1:
        raise ParseError("need at least one letter", line=1)
    if len(lines) - 1 != k:
        raise ParseError(
            f"expected {k} letter lines, found {len(lines) - 1}",
            line=min(len(lines) + 1, k + 2),
        )
    names: list[str] = []
    rows: list[tuple[int, ...]] = []
    for offset, raw in enumerate(lines[1:], start=2):
        fields = raw.split()
        if len(fields) != n + 1:
            raise ParseError(
                f"expected a name and {n} images, found {len(fields)} fields",
                line=offset,
            )
        name = fields[0]
        if name in names:
            raise ParseError(f"duplicate letter name {name!r}", line=offset)
        images = []
        for value in fields[1:]:
            try:
                img = int(value)
            except ValueError:
                raise ParseError(f"image {value!r} is not an integer", line=offset) from None
            if not 1 <= img <= n:
                raise ParseError(f"image {img} out of range 1..{n}", line=offset)
            images.append(img)
        names.append(name)
        rows.append(tuple(images))
    return Automaton.from_rows(names, rows)


def emit_automaton(aut: Automaton) -> str:
    """Canonical emission: ASCII, LF newlines, single-space separation."""
    lines = [f"{aut.n} {len(aut.letters)}"]
    for name, row in zip(aut.letters, aut.rows()):
        lines.append(name + " " + " ".join(str(img) for img in row))
    return "\n".join(lines) + "\n"
