"""
Formato Burmeister (.cxt):

    B
    <linha vazia>
    <nº de objetos>
    <nº de atributos>
    <linha vazia>
    objetos, um por linha
    atributos, um por linha
    uma linha de '.'/'X' por objeto
"""
from pathlib import Path

from src.fca.formal_context import FormalContext
from src.utils.errors import CxtFormatError, InputError
from src.utils.file_output import write_text_atomic


def render_cxt(ctx: FormalContext) -> str:
    lines = ["B", "", str(len(ctx.objects)), str(len(ctx.attributes)), ""]
    lines.extend(ctx.objects)
    lines.extend(ctx.attributes)
    for row in ctx.incidence():
        lines.append("".join("X" if cell else "." for cell in row))
    return "\n".join(lines) + "\n"


def parse_cxt(text: str) -> FormalContext:
    lines = text.replace("\r\n", "\n").split("\n")
    if len(lines) < 5 or lines[0] != "B" or lines[1] != "":
        raise CxtFormatError("cxt: expected 'B' followed by a blank line")
    try:
        n_objects, n_attributes = int(lines[2]), int(lines[3])
    except ValueError:
        raise CxtFormatError("cxt: object and attribute counts must be integers") from None
    if n_objects < 0 or n_attributes < 0:
        raise CxtFormatError("cxt: counts must be non-negative")
    if lines[4] != "":
        raise CxtFormatError("cxt: expected a blank line after the counts")

    body = lines[5:]
    expected = 2 * n_objects + n_attributes
    if len(body) < expected:
        raise CxtFormatError(f"cxt: expected {expected} lines after the header, found {len(body)}")
    if any(line.strip() for line in body[expected:]):
        raise CxtFormatError("cxt: unexpected content after the incidence rows")

    objects = body[:n_objects]
    attributes = body[n_objects:n_objects + n_attributes]
    incidence = []
    for offset, row in enumerate(body[n_objects + n_attributes:expected]):
        if len(row) != n_attributes or set(row) - {".", "X"}:
            raise CxtFormatError(
                f"cxt: row {offset + 1} must have {n_attributes} characters among '.' and 'X', got '{row}'"
            )
        incidence.append([cell == "X" for cell in row])
    try:
        return FormalContext.from_incidence(objects, attributes, incidence)
    except InputError as e:
        raise CxtFormatError(f"cxt: {e}") from e


def read_cxt(path: str | Path) -> FormalContext:
    source = Path(path)
    if not source.is_file():
        raise CxtFormatError(f"cxt file not found: {source}")
    return parse_cxt(source.read_text(encoding="utf-8"))


def write_cxt(ctx: FormalContext, path: str | Path) -> Path:
    return write_text_atomic(path, render_cxt(ctx))
